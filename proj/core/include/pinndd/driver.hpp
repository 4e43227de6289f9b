#pragma once

#include <optional>
#include <vector>

#include "pinndd/config.hpp"
#include "pinndd/geometry.hpp"
#include "pinndd/net.hpp"
#include "pinndd/optimizer.hpp"
#include "pinndd/problems.hpp"
#include "pinndd/report.hpp"

namespace pinndd {

/// Inner (per-subproblem) and outer (Schwarz) stopping rules.
struct StopCriteria {
    double tol_loss = 5e-3;   // inner loss-plateau tolerance
    int eta = 100;            // plateau lookback, in epochs
    int max_epochs = 10000;
    double tol_gamma = 1e-2;  // outer interface tolerance
    double tol_omega = 1e-2;  // outer interior tolerance
    int max_outer = 30;
};

/// One subproblem: geometry, data, operators, current interface targets W_s
/// and the trained surrogate.
struct SubdomainProblem {
    int index = 0;
    Region region;
    std::vector<Interface> interfaces;
    CollocationSet colloc;
    std::vector<double> forcing_values;                 // f at interior points
    std::vector<double> boundary_values;                // g at boundary points
    OperatorSpec op;
    std::vector<std::vector<double>> interface_targets; // W_s per interface
    MlpNetwork net;
    LrSchedule schedule;
    int batch_size = 64;
    Rng train_rng{0};
};

struct TrainResult {
    int epochs = 0;
    double final_loss = 0.0;
    std::vector<double> loss_history;  // [0] = loss before the first epoch
};

/// Trains one subproblem from its current (warm-started) network to a loss
/// plateau: per epoch, reshuffled minibatches with one Adam step each, then
/// a full-data loss; stop when the relative change over the last `eta`
/// epochs falls below tol_loss, or at max_epochs. A fresh Adam state and
/// learning-rate step count are used for each call.
TrainResult train_subproblem(SubdomainProblem& sub, const StopCriteria& stop);

enum class OuterStatus { Continue, StopInterface, StopInterior, StopMaxIter };

/// Jacobi-style interface exchange: targets for every subdomain evaluated
/// from the neighbor networks of the same completed outer iteration.
std::vector<std::vector<std::vector<double>>> exchange_interfaces(
    const std::vector<SubdomainProblem>& problems);

/// Applies the two outer stopping rules to precomputed per-subdomain
/// relative changes (interface first, then interior).
OuterStatus check_outer_stop(const std::vector<double>& interface_changes,
                             const std::vector<double>& interior_changes,
                             const StopCriteria& stop);

/// Discrete 2-norm relative change with the zero-norm guard (absolute
/// change when the reference norm vanishes).
double relative_change(const std::vector<double>& current,
                       const std::vector<double>& previous);

struct DdmResult {
    std::vector<IterationRecord> rows;
    std::vector<double> error_history;  // relative L2 error per outer iteration
    OuterStatus status = OuterStatus::StopMaxIter;
    int outer_iterations = 0;
    double final_error = 0.0;
    std::vector<MlpNetwork> networks;
    Decomposition decomposition;
    ProblemInstance problem;
};

/// Runs the full outer iteration: build decomposition, sample collocation
/// sets, train subproblems (optionally one worker per subdomain), exchange
/// interface data at a barrier, and stop on the interface/interior rules.
DdmResult solve_ddm(const ExperimentConfig& config);

/// Single-network physics-informed solve of the undecomposed problem;
/// matches solve_ddm with subdomains = 1 trajectory-for-trajectory.
DdmResult solve_single(const ExperimentConfig& config);

/// Piecewise evaluation of the stitched numerical solution: the owning
/// subdomain is the non-overlapping core cell containing x, ties going to
/// the lower index.
double stitch_solution(const std::vector<MlpNetwork>& networks,
                       const Decomposition& decomposition, const Eigen::Vector2d& x);

/// Batched stitching over many points.
std::vector<double> stitch_solution_batch(const std::vector<MlpNetwork>& networks,
                                          const Decomposition& decomposition,
                                          const PointList& points);

}  // namespace pinndd
