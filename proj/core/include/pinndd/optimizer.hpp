#pragma once

#include <cstdint>
#include <vector>

#include "pinndd/net.hpp"
#include "pinndd/rng.hpp"

namespace pinndd {

/// Bias-corrected Adam accumulators, one per trained network.
struct AdamState {
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState zeros_like(const MlpNetwork& net);
};

/// One Adam update in place; increments state.t. Throws TrainingError on
/// non-finite gradient entries.
void adam_step(AdamState& state, MlpNetwork& params, const ParamGradient& grad,
               double lr);

/// Stepwise-decayed learning rate: lr(t) = lr0 * base^floor(t / every).
struct LrSchedule {
    double lr0 = 1e-3;
    double decay_base = 0.999;
    std::uint64_t decay_every = 10;
};

double lr_at(const LrSchedule& schedule, std::uint64_t t);

/// Epoch plan: the interior set is shuffled and chunked; the full boundary
/// and interface sets ride along with every batch.
struct MinibatchPlan {
    std::vector<std::vector<std::size_t>> interior_parts;  // indices into X_f
};

MinibatchPlan make_minibatches(std::size_t n_interior, std::size_t batch_size,
                               Rng& rng);

}  // namespace pinndd
