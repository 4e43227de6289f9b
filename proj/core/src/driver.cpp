#include "pinndd/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <thread>

#include "pinndd/checkpoint.hpp"
#include "pinndd/errors.hpp"

namespace pinndd {

namespace {

Eigen::MatrixXd to_matrix(const PointList& pts) {
    Eigen::MatrixXd x(2, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) x.col(i) = pts[i];
    return x;
}

std::vector<int> network_dims(const ExperimentConfig& cfg) {
    std::vector<int> dims{2};
    for (int l = 0; l < cfg.layers; ++l) dims.push_back(cfg.units);
    dims.push_back(1);
    return dims;
}

ProblemInstance build_problem(const ExperimentConfig& cfg) {
    return cfg.problem == ProblemKind::Model ? model_problem()
                                             : interface_problem(cfg.alpha);
}

Decomposition build_decomposition(const ExperimentConfig& cfg, const ProblemInstance& prob) {
    if (prob.is_interface)
        return decompose_interface(prob.domain, Disc{1.0, 1.0, 0.5});
    return decompose_strips(prob.domain, cfg.subdomains, cfg.subdomains == 1 ? 0.0 : cfg.overlap);
}

// RNG stream purposes (per subdomain unless noted).
constexpr std::uint64_t kStreamSampling = 0;
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamTraining = 2;
constexpr std::uint64_t kStreamShared = 1000;  // decomposition-wide (shared circle points)

std::vector<SubdomainProblem> build_subdomains(const ExperimentConfig& cfg,
                                               const ProblemInstance& prob,
                                               const Decomposition& decomp) {
    const int s_count = decomp.count();
    std::vector<SubdomainProblem> subs(s_count);

    // Interface-problem circle points are sampled once and shared by both
    // sides, so transmission residuals compare the networks at identical
    // locations. Normals point outward from the disc on both sides.
    PointList shared_pts, shared_normals;
    if (prob.is_interface) {
        Rng rng = Rng::for_stream(cfg.seed, kStreamShared, kStreamSampling);
        std::tie(shared_pts, shared_normals) =
            sample_interface(decomp.interfaces[0][0], 4 * static_cast<std::size_t>(cfg.n_gamma), rng);
    }

    // Interior budget: equal split for the model problem, area-ratio split
    // for the interface problem.
    std::vector<std::size_t> n_f(s_count);
    if (prob.is_interface) {
        const double area_disc = std::numbers::pi * 0.25 * 0.25 * 4.0;  // pi r^2, r = 0.5
        const double area_total = prob.domain.width() * prob.domain.height();
        const auto n0 = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(cfg.n_f * area_disc / area_total)));
        n_f[0] = n0;
        n_f[1] = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.n_f) - n0);
    } else {
        for (int s = 0; s < s_count; ++s)
            n_f[s] = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.n_f) / s_count);
    }

    for (int s = 0; s < s_count; ++s) {
        SubdomainProblem& sub = subs[s];
        sub.index = s;
        sub.region = decomp.subdomains[s];
        sub.interfaces = decomp.interfaces[s];
        sub.op = prob.spec_for(s);
        sub.schedule = LrSchedule{cfg.lr0, cfg.decay_base,
                                  static_cast<std::uint64_t>(cfg.decay_every)};
        sub.batch_size = cfg.batch_size;
        sub.train_rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(s), kStreamTraining);

        Rng sample_rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(s), kStreamSampling);
        sub.colloc.interior = sample_interior(sub.region, n_f[s], sample_rng);
        sub.colloc.boundary = sample_boundary(decomp, s, static_cast<std::size_t>(cfg.n_g_per_edge),
                                              sample_rng);
        for (const auto& iface : sub.interfaces) {
            if (iface.kind == Interface::Kind::Circle) {
                sub.colloc.interface_points.push_back(shared_pts);
                sub.colloc.interface_normals.push_back(shared_normals);
            } else {
                auto [pts, normals] =
                    sample_interface(iface, static_cast<std::size_t>(cfg.n_gamma), sample_rng);
                sub.colloc.interface_points.push_back(std::move(pts));
                sub.colloc.interface_normals.push_back(std::move(normals));
            }
        }

        sub.forcing_values.reserve(sub.colloc.interior.size());
        for (const auto& p : sub.colloc.interior) sub.forcing_values.push_back(prob.forcing(p));
        sub.boundary_values.reserve(sub.colloc.boundary.size());
        for (const auto& p : sub.colloc.boundary) sub.boundary_values.push_back(prob.boundary(p));

        sub.interface_targets.resize(sub.interfaces.size());
        for (std::size_t k = 0; k < sub.interfaces.size(); ++k)
            sub.interface_targets[k].assign(sub.colloc.interface_points[k].size(), 0.0);

        sub.net = init_network(network_dims(cfg),
                               Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(s), kStreamInit)
                                   .next_u64());
    }
    return subs;
}

// Boundary and interface groups of a loss batch; shared by every minibatch
// of an epoch and by the full-data evaluation.
void fill_shared_groups(const SubdomainProblem& sub, LossBatch& batch) {
    batch.diffusion = sub.op.diffusion;
    batch.boundary.clear();
    batch.interface_dirichlet.clear();
    batch.interface_neumann.clear();
    for (std::size_t i = 0; i < sub.colloc.boundary.size(); ++i)
        batch.boundary.push_back({sub.colloc.boundary[i], sub.boundary_values[i]});
    for (std::size_t k = 0; k < sub.interfaces.size(); ++k) {
        const auto& pts = sub.colloc.interface_points[k];
        const auto& normals = sub.colloc.interface_normals[k];
        const auto& targets = sub.interface_targets[k];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (sub.op.transmission == TransmissionKind::Dirichlet)
                batch.interface_dirichlet.push_back({pts[i], targets[i]});
            else
                batch.interface_neumann.push_back({pts[i], targets[i],
                                                   Eigen::Vector2d(normals[i])});
        }
    }
}

}  // namespace

double relative_change(const std::vector<double>& current,
                       const std::vector<double>& previous) {
    if (current.size() != previous.size())
        throw std::invalid_argument("relative_change: size mismatch");
    double diff2 = 0.0, cur2 = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
        const double d = current[i] - previous[i];
        diff2 += d * d;
        cur2 += current[i] * current[i];
    }
    const double diff = std::sqrt(diff2);
    const double cur = std::sqrt(cur2);
    return cur > 0.0 ? diff / cur : diff;  // degenerate-norm guard
}

TrainResult train_subproblem(SubdomainProblem& sub, const StopCriteria& stop) {
    AdamState adam = AdamState::zeros_like(sub.net);

    LossBatch full;
    fill_shared_groups(sub, full);
    full.domain.reserve(sub.colloc.interior.size());
    for (std::size_t i = 0; i < sub.colloc.interior.size(); ++i)
        full.domain.push_back({sub.colloc.interior[i], sub.forcing_values[i]});

    LossBatch batch;
    fill_shared_groups(sub, batch);

    TrainResult result;
    result.loss_history.push_back(loss_value(sub.net, full));

    for (int epoch = 1; epoch <= stop.max_epochs; ++epoch) {
        const MinibatchPlan plan = make_minibatches(
            sub.colloc.interior.size(), static_cast<std::size_t>(sub.batch_size), sub.train_rng);
        for (const auto& part : plan.interior_parts) {
            batch.domain.clear();
            for (std::size_t idx : part)
                batch.domain.push_back({sub.colloc.interior[idx], sub.forcing_values[idx]});
            auto [loss, grad] = loss_value_and_grad(sub.net, batch);
            if (!std::isfinite(loss))
                throw TrainingError("train_subproblem: non-finite minibatch loss");
            adam_step(adam, sub.net, grad, lr_at(sub.schedule, adam.t));
        }

        const double m = loss_value(sub.net, full);
        if (!std::isfinite(m))
            throw TrainingError("train_subproblem: non-finite full-data loss (diverged)");
        result.loss_history.push_back(m);
        result.epochs = epoch;
        result.final_loss = m;

        if (epoch >= stop.eta) {
            const double m_ref = result.loss_history[epoch - stop.eta];
            const double rel = std::abs(m) > 0.0 ? std::abs(m - m_ref) / std::abs(m) : 0.0;
            if (rel < stop.tol_loss) break;
        }
    }
    if (result.epochs == 0) result.final_loss = result.loss_history.back();
    return result;
}

std::vector<std::vector<std::vector<double>>> exchange_interfaces(
    const std::vector<SubdomainProblem>& problems) {
    std::vector<std::vector<std::vector<double>>> targets(problems.size());
    for (std::size_t s = 0; s < problems.size(); ++s) {
        const SubdomainProblem& sub = problems[s];
        targets[s].resize(sub.interfaces.size());
        for (std::size_t k = 0; k < sub.interfaces.size(); ++k) {
            const SubdomainProblem& nb = problems[sub.interfaces[k].neighbor];
            // D applied to the neighbor: the owner's transmission kind with
            // the neighbor's coefficient.
            OperatorSpec d_spec{nb.op.diffusion, sub.op.transmission};
            const auto& pts = sub.colloc.interface_points[k];
            const auto& normals = sub.colloc.interface_normals[k];
            auto& w = targets[s][k];
            w.reserve(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const NetJet2 jet = input_jet2(nb.net, pts[i]);
                w.push_back(transmission_value(d_spec, jet, normals[i]));
            }
        }
    }
    return targets;
}

OuterStatus check_outer_stop(const std::vector<double>& interface_changes,
                             const std::vector<double>& interior_changes,
                             const StopCriteria& stop) {
    const bool iface_ok = std::all_of(interface_changes.begin(), interface_changes.end(),
                                      [&](double c) { return c < stop.tol_gamma; });
    if (iface_ok) return OuterStatus::StopInterface;
    const bool interior_ok = std::all_of(interior_changes.begin(), interior_changes.end(),
                                         [&](double c) { return c < stop.tol_omega; });
    if (interior_ok) return OuterStatus::StopInterior;
    return OuterStatus::Continue;
}

double stitch_solution(const std::vector<MlpNetwork>& networks,
                       const Decomposition& decomposition, const Eigen::Vector2d& x) {
    const int s = [&] {
        const int count = decomposition.count();
        if (count == 1) return 0;
        if (decomposition.subdomains[0].kind == Region::Kind::Disc) {
            const Disc& d = decomposition.subdomains[0].circle;
            return d.dist2(x) <= d.r * d.r ? 0 : 1;  // circle itself goes to the disc
        }
        const double w = decomposition.domain.width() / count;
        const double rel = (x.x() - decomposition.domain.x0) / w;
        int idx = std::min(count - 1, static_cast<int>(std::floor(rel)));
        // Points exactly on a cut line belong to the lower-index strip.
        if (idx > 0 && x.x() == decomposition.domain.x0 + idx * w) --idx;
        return std::max(0, idx);
    }();
    return forward(networks[s], x);
}

std::vector<double> stitch_solution_batch(const std::vector<MlpNetwork>& networks,
                                          const Decomposition& decomposition,
                                          const PointList& points) {
    // Group points per owning network, evaluate batched, scatter back.
    std::vector<std::vector<std::size_t>> owned(networks.size());
    const int count = decomposition.count();
    for (std::size_t i = 0; i < points.size(); ++i) {
        int s = 0;
        if (count > 1) {
            if (decomposition.subdomains[0].kind == Region::Kind::Disc) {
                const Disc& d = decomposition.subdomains[0].circle;
                s = d.dist2(points[i]) <= d.r * d.r ? 0 : 1;
            } else {
                const double w = decomposition.domain.width() / count;
                const double rel = (points[i].x() - decomposition.domain.x0) / w;
                s = std::min(count - 1, static_cast<int>(std::floor(rel)));
                if (s > 0 && points[i].x() == decomposition.domain.x0 + s * w) --s;
                s = std::max(0, s);
            }
        }
        owned[s].push_back(i);
    }
    std::vector<double> values(points.size(), 0.0);
    for (std::size_t s = 0; s < networks.size(); ++s) {
        if (owned[s].empty()) continue;
        PointList pts;
        pts.reserve(owned[s].size());
        for (std::size_t i : owned[s]) pts.push_back(points[i]);
        const Eigen::VectorXd v = forward_batch(networks[s], to_matrix(pts));
        for (std::size_t j = 0; j < owned[s].size(); ++j) values[owned[s][j]] = v(j);
    }
    return values;
}

namespace {

std::vector<double> flatten(const std::vector<std::vector<double>>& nested) {
    std::vector<double> flat;
    for (const auto& v : nested) flat.insert(flat.end(), v.begin(), v.end());
    return flat;
}

DdmResult run_outer_loop(const ExperimentConfig& cfg) {
    cfg.validate();
    const ProblemInstance prob = build_problem(cfg);
    const Decomposition decomp = build_decomposition(cfg, prob);
    std::vector<SubdomainProblem> subs = build_subdomains(cfg, prob, decomp);
    const int s_count = decomp.count();

    if (!cfg.dump_points_path.empty())
        for (int s = 0; s < s_count; ++s)
            write_collocation_csv(subs[s].colloc,
                                  cfg.dump_points_path + "_s" + std::to_string(s) + ".csv");

    StopCriteria stop;
    stop.tol_loss = s_count == 1 ? cfg.tol_loss_single : cfg.tol_loss;
    stop.eta = cfg.eta;
    stop.max_epochs = s_count == 1 ? cfg.max_epochs_single : cfg.max_epochs;
    stop.tol_gamma = cfg.tol_gamma;
    stop.tol_omega = cfg.tol_omega;
    stop.max_outer = cfg.max_outer;

    const PointList grid = test_grid(prob.domain, 200);  // 40,000 test points
    std::vector<double> u_star;
    u_star.reserve(grid.size());
    for (const auto& p : grid) u_star.push_back(prob.exact(p));

    // Initial interface guess W^0 from the freshly initialized neighbors.
    {
        auto w0 = exchange_interfaces(subs);
        for (int s = 0; s < s_count; ++s) subs[s].interface_targets = w0[s];
    }
    std::vector<std::vector<double>> prev_interior(s_count);
    for (int s = 0; s < s_count; ++s) {
        const Eigen::VectorXd v = forward_batch(subs[s].net, to_matrix(subs[s].colloc.interior));
        prev_interior[s].assign(v.data(), v.data() + v.size());
    }

    DdmResult result;
    result.decomposition = decomp;
    result.problem = prob;
    result.status = OuterStatus::StopMaxIter;

    for (int iter = 1; iter <= stop.max_outer; ++iter) {
        std::vector<TrainResult> trained(s_count);
        std::vector<double> wall_ms(s_count, 0.0);

        auto train_one = [&](int s) {
            const auto t0 = std::chrono::steady_clock::now();
            trained[s] = train_subproblem(subs[s], stop);
            wall_ms[s] = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        };

        if (cfg.parallel() && s_count > 1) {
            std::vector<std::thread> workers;
            std::vector<std::exception_ptr> errors(s_count);
            for (int s = 0; s < s_count; ++s)
                workers.emplace_back([&, s] {
                    try {
                        train_one(s);
                    } catch (...) {
                        errors[s] = std::current_exception();
                    }
                });
            for (auto& w : workers) w.join();  // barrier before exchange
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        } else {
            for (int s = 0; s < s_count; ++s) train_one(s);
        }

        // Jacobi exchange: all targets come from this iteration's networks.
        auto w_new = exchange_interfaces(subs);

        std::vector<double> iface_change(s_count, 0.0), interior_change(s_count, 0.0);
        for (int s = 0; s < s_count; ++s) {
            iface_change[s] = relative_change(flatten(w_new[s]), flatten(subs[s].interface_targets));
            const Eigen::VectorXd v =
                forward_batch(subs[s].net, to_matrix(subs[s].colloc.interior));
            std::vector<double> cur(v.data(), v.data() + v.size());
            interior_change[s] = relative_change(cur, prev_interior[s]);
            prev_interior[s] = std::move(cur);
        }

        std::vector<MlpNetwork> nets;
        for (const auto& sub : subs) nets.push_back(sub.net);
        const std::vector<double> u_h = stitch_solution_batch(nets, decomp, grid);
        const double err = relative_l2_error(u_h, u_star);
        result.error_history.push_back(err);
        result.final_error = err;
        result.outer_iterations = iter;

        for (int s = 0; s < s_count; ++s) {
            IterationRecord row;
            row.outer_iter = iter;
            row.subdomain = s;
            row.epochs = trained[s].epochs;
            row.final_loss = trained[s].final_loss;
            row.interface_rel_change = iface_change[s];
            row.interior_rel_change = interior_change[s];
            row.rel_l2_error = err;
            row.lr = lr_at(subs[s].schedule,
                           static_cast<std::uint64_t>(trained[s].epochs) *
                               ((subs[s].colloc.interior.size() + cfg.batch_size - 1) /
                                cfg.batch_size));
            row.wall_ms = wall_ms[s];
            result.rows.push_back(row);
        }

        if (!cfg.checkpoint_dir.empty()) {
            std::filesystem::create_directories(cfg.checkpoint_dir);
            char name[32];
            std::snprintf(name, sizeof(name), "iter_%04d.bin", iter);
            save_checkpoint(nets, cfg.checkpoint_dir + "/" + name);
        }

        for (int s = 0; s < s_count; ++s) subs[s].interface_targets = w_new[s];

        const OuterStatus status = check_outer_stop(iface_change, interior_change, stop);
        if (status != OuterStatus::Continue) {
            result.status = status;
            break;
        }
    }

    result.networks.clear();
    for (auto& sub : subs) result.networks.push_back(std::move(sub.net));
    return result;
}

}  // namespace

DdmResult solve_ddm(const ExperimentConfig& config) { return run_outer_loop(config); }

DdmResult solve_single(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    cfg.subdomains = 1;
    cfg.overlap = 0.0;
    cfg.validate();
    const ProblemInstance prob = build_problem(cfg);
    const Decomposition decomp = build_decomposition(cfg, prob);
    std::vector<SubdomainProblem> subs = build_subdomains(cfg, prob, decomp);

    StopCriteria stop;
    stop.tol_loss = cfg.tol_loss_single;
    stop.eta = cfg.eta;
    stop.max_epochs = cfg.max_epochs_single;

    const PointList grid = test_grid(prob.domain, 200);
    std::vector<double> u_star;
    u_star.reserve(grid.size());
    for (const auto& p : grid) u_star.push_back(prob.exact(p));

    // Mirror the initial bookkeeping of the outer loop so trajectories are
    // bit-identical with solve_ddm at S = 1.
    auto w0 = exchange_interfaces(subs);
    subs[0].interface_targets = w0[0];
    const Eigen::VectorXd v0 = forward_batch(subs[0].net, to_matrix(subs[0].colloc.interior));
    std::vector<double> prev_interior(v0.data(), v0.data() + v0.size());

    const auto t0 = std::chrono::steady_clock::now();
    const TrainResult trained = train_subproblem(subs[0], stop);
    const double wall = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();

    const Eigen::VectorXd v1 = forward_batch(subs[0].net, to_matrix(subs[0].colloc.interior));
    std::vector<double> cur(v1.data(), v1.data() + v1.size());

    DdmResult result;
    result.decomposition = decomp;
    result.problem = prob;
    result.status = OuterStatus::StopInterface;  // vacuous interface criterion
    result.outer_iterations = 1;

    const std::vector<double> u_h =
        stitch_solution_batch({subs[0].net}, decomp, grid);
    result.final_error = relative_l2_error(u_h, u_star);
    result.error_history.push_back(result.final_error);

    IterationRecord row;
    row.outer_iter = 1;
    row.subdomain = 0;
    row.epochs = trained.epochs;
    row.final_loss = trained.final_loss;
    row.interface_rel_change = 0.0;
    row.interior_rel_change = relative_change(cur, prev_interior);
    row.rel_l2_error = result.final_error;
    row.lr = lr_at(subs[0].schedule,
                   static_cast<std::uint64_t>(trained.epochs) *
                       ((subs[0].colloc.interior.size() + cfg.batch_size - 1) / cfg.batch_size));
    row.wall_ms = wall;
    result.rows.push_back(row);

    result.networks.push_back(std::move(subs[0].net));
    return result;
}

}  // namespace pinndd
