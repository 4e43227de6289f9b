#include "pinndd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pinndd/errors.hpp"

namespace pinndd {

AdamState AdamState::zeros_like(const MlpNetwork& net) {
    AdamState s;
    for (const auto& w : net.weights) {
        s.m_w.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        s.v_w.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : net.biases) {
        s.m_b.push_back(Eigen::VectorXd::Zero(b.size()));
        s.v_b.push_back(Eigen::VectorXd::Zero(b.size()));
    }
    return s;
}

void adam_step(AdamState& state, MlpNetwork& params, const ParamGradient& grad,
               double lr) {
    if (!grad.all_finite())
        throw TrainingError("adam_step: non-finite gradient (training diverged)");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        auto update = [&](auto& m, auto& v, auto& p, const auto& g) {
            m = state.beta1 * m + (1.0 - state.beta1) * g;
            v.array() = state.beta2 * v.array() + (1.0 - state.beta2) * g.array().square();
            p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.eps);
        };
        update(state.m_w[l], state.v_w[l], params.weights[l], grad.weights[l]);
        update(state.m_b[l], state.v_b[l], params.biases[l], grad.biases[l]);
    }
}

double lr_at(const LrSchedule& schedule, std::uint64_t t) {
    const double decays = static_cast<double>(t / schedule.decay_every);
    return schedule.lr0 * std::pow(schedule.decay_base, decays);
}

MinibatchPlan make_minibatches(std::size_t n_interior, std::size_t batch_size,
                               Rng& rng) {
    if (n_interior == 0)
        throw TrainingError("make_minibatches: interior set is empty");
    if (batch_size == 0)
        throw TrainingError("make_minibatches: batch_size must be >= 1");

    std::vector<std::size_t> perm(n_interior);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng.engine());

    MinibatchPlan plan;
    const std::size_t m = (n_interior + batch_size - 1) / batch_size;
    plan.interior_parts.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t lo = k * batch_size;
        const std::size_t hi = std::min(lo + batch_size, n_interior);
        plan.interior_parts.emplace_back(perm.begin() + lo, perm.begin() + hi);
    }
    return plan;
}

}  // namespace pinndd
