// Micro-benchmarks for the hot paths: plain forward evaluation, the
// second-order jet forward pass, the full loss + parameter gradient, and
// one Adam update.

#include <benchmark/benchmark.h>

#include "pinndd/geometry.hpp"
#include "pinndd/net.hpp"
#include "pinndd/optimizer.hpp"
#include "pinndd/rng.hpp"

namespace {

using namespace pinndd;

MlpNetwork make_net() { return init_network({2, 20, 20, 20, 1}, 7); }

Eigen::MatrixXd make_points(std::size_t n) {
    Rng rng(11);
    Eigen::MatrixXd pts(2, static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
        pts(0, j) = rng.uniform(0.0, 3.14);
        pts(1, j) = rng.uniform(0.0, 1.0);
    }
    return pts;
}

LossBatch make_batch(std::size_t n_domain) {
    Rng rng(13);
    LossBatch batch;
    batch.diffusion = 1.0;
    for (std::size_t i = 0; i < n_domain; ++i)
        batch.domain.push_back({{rng.uniform(0.0, 3.14), rng.uniform(0.0, 1.0)}, 0.3, {}});
    for (std::size_t i = 0; i < 50; ++i)
        batch.boundary.push_back({{rng.uniform(0.0, 3.14), 0.0}, 0.1, {}});
    for (std::size_t i = 0; i < 50; ++i)
        batch.interface_dirichlet.push_back({{1.5, rng.uniform(0.0, 1.0)}, 0.2, {1.0, 0.0}});
    return batch;
}

void bm_forward_batch(benchmark::State& state) {
    const auto net = make_net();
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_batch(net, pts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_forward_batch)->Arg(64)->Arg(1024);

void bm_jet_forward(benchmark::State& state) {
    const auto net = make_net();
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        for (Eigen::Index j = 0; j < pts.cols(); ++j)
            benchmark::DoNotOptimize(input_jet2(net, pts.col(j)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_jet_forward)->Arg(64)->Arg(1024);

void bm_loss_value_and_grad(benchmark::State& state) {
    const auto net = make_net();
    const auto batch = make_batch(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(loss_value_and_grad(net, batch));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_loss_value_and_grad)->Arg(64)->Arg(1024);

void bm_adam_step(benchmark::State& state) {
    auto net = make_net();
    const auto batch = make_batch(64);
    auto [loss, grad] = loss_value_and_grad(net, batch);
    benchmark::DoNotOptimize(loss);
    AdamState adam = AdamState::zeros_like(net);
    LrSchedule sched;
    for (auto _ : state) {
        adam_step(adam, net, grad, lr_at(sched, adam.t));
        benchmark::ClobberMemory();
    }
}
BENCHMARK(bm_adam_step);

}  // namespace

BENCHMARK_MAIN();
