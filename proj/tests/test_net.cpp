#include <doctest.h>

#include <cmath>

#include "pinndd/errors.hpp"
#include "pinndd/net.hpp"

using namespace pinndd;

namespace {

MlpNetwork linear_net(double w0, double w1, double b) {
    MlpNetwork net;
    net.layer_dims = {2, 1};
    net.weights.push_back((Eigen::MatrixXd(1, 2) << w0, w1).finished());
    net.biases.push_back(Eigen::VectorXd::Constant(1, b));
    return net;
}

// [2,1,1] chain: h(x) = w1 * tanh(w00*x0 + w01*x1 + b0) + b1.
MlpNetwork tanh_chain(double w00, double w01, double b0, double w1, double b1) {
    MlpNetwork net;
    net.layer_dims = {2, 1, 1};
    net.weights.push_back((Eigen::MatrixXd(1, 2) << w00, w01).finished());
    net.biases.push_back(Eigen::VectorXd::Constant(1, b0));
    net.weights.push_back(Eigen::MatrixXd::Constant(1, 1, w1));
    net.biases.push_back(Eigen::VectorXd::Constant(1, b1));
    return net;
}

}  // namespace

TEST_CASE("parameter count follows the layer dims") {
    CHECK(init_network({2, 20, 20, 20, 1}, 1).parameter_count() == 921);
    CHECK(init_network({2, 1}, 1).parameter_count() == 3);
}

TEST_CASE("initialization is deterministic in the seed") {
    const MlpNetwork a = init_network({2, 20, 20, 1}, 42);
    const MlpNetwork b = init_network({2, 20, 20, 1}, 42);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        CHECK(a.weights[l] == b.weights[l]);
        CHECK(a.biases[l] == b.biases[l]);
    }
    const MlpNetwork c = init_network({2, 20, 20, 1}, 43);
    CHECK(a.weights[0] != c.weights[0]);
}

TEST_CASE("initialization stays within the Xavier-uniform bounds") {
    const MlpNetwork net = init_network({2, 20, 1}, 7);
    REQUIRE(net.all_finite());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const double bound =
            std::sqrt(6.0 / (net.layer_dims[l] + net.layer_dims[l + 1]));
        CHECK(net.weights[l].cwiseAbs().maxCoeff() <= bound);
        CHECK(net.biases[l].cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("invalid layer dims are rejected") {
    CHECK_THROWS_AS(init_network({2}, 1), ConfigError);
    CHECK_THROWS_AS(init_network({2, 0, 1}, 1), ConfigError);
}

TEST_CASE("zero-weight network is the constant output bias") {
    MlpNetwork net = init_network({2, 5, 1}, 1);
    for (auto& w : net.weights) w.setZero();
    net.biases.back()(0) = 0.75;
    const Eigen::Vector2d x{0.3, -1.2};
    CHECK(forward(net, x) == 0.75);
    const NetJet2 jet = input_jet2(net, x);
    CHECK(jet.value == 0.75);
    CHECK(jet.grad_x.isZero(0.0));
    CHECK(jet.hess_diag.isZero(0.0));
}

TEST_CASE("affine [2,1] network") {
    const MlpNetwork net = linear_net(1.0, 2.0, 0.5);
    CHECK(forward(net, Eigen::Vector2d{1.0, 1.0}) == doctest::Approx(3.5).epsilon(1e-15));
    const NetJet2 jet = input_jet2(net, Eigen::Vector2d{0.2, 0.9});
    CHECK(jet.grad_x(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(jet.grad_x(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(jet.hess_diag.isZero(0.0));
}

TEST_CASE("a [2,1] network has zero hess_diag everywhere") {
    const MlpNetwork net = linear_net(-0.7, 3.1, 0.2);
    for (double x : {-2.0, 0.0, 1.5})
        for (double y : {-1.0, 0.5})
            CHECK(input_jet2(net, Eigen::Vector2d{x, y}).hess_diag.isZero(0.0));
}

TEST_CASE("tanh chain matches the closed-form derivatives") {
    // h(x) = tanh(x0), so at x0 = 0.5 the value and the first two x0
    // derivatives are known in closed form.
    const MlpNetwork net = tanh_chain(1.0, 0.0, 0.0, 1.0, 0.0);
    const Eigen::Vector2d x{0.5, 0.33};
    const double t = std::tanh(0.5);
    CHECK(forward(net, x) == doctest::Approx(0.46211715726000974).epsilon(1e-12));
    const NetJet2 jet = input_jet2(net, x);
    CHECK(jet.value == doctest::Approx(t).epsilon(1e-15));
    CHECK(jet.grad_x(0) == doctest::Approx(1 - t * t).epsilon(1e-12));
    CHECK(jet.grad_x(0) == doctest::Approx(0.78644773296).epsilon(1e-10));
    CHECK(jet.hess_diag(0) == doctest::Approx(-2 * t * (1 - t * t)).epsilon(1e-12));
    CHECK(jet.hess_diag(0) == doctest::Approx(-0.7268619814).epsilon(1e-9));
    CHECK(jet.grad_x(1) == 0.0);
    CHECK(jet.hess_diag(1) == 0.0);
}

TEST_CASE("forward_batch agrees with pointwise forward") {
    const MlpNetwork net = init_network({2, 10, 10, 1}, 5);
    Eigen::MatrixXd pts(2, 7);
    pts.setRandom();
    const Eigen::VectorXd out = forward_batch(net, pts);
    for (Eigen::Index j = 0; j < pts.cols(); ++j)
        CHECK(out(j) == doctest::Approx(forward(net, pts.col(j))).epsilon(1e-14));
}

TEST_CASE("input derivatives match central finite differences") {
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const MlpNetwork net = init_network({2, 20, 20, 1}, 300 + trial);
        const Eigen::Vector2d x{0.1 + 0.05 * trial, -0.9 + 0.07 * trial};
        const NetJet2 jet = input_jet2(net, x);
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2d xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            const double fd_grad = (forward(net, xp) - forward(net, xm)) / (2 * h);
            const double fd_hess =
                (input_jet2(net, xp).grad_x(k) - input_jet2(net, xm).grad_x(k)) / (2 * h);
            worst = std::max(worst, std::abs(jet.grad_x(k) - fd_grad) / (std::abs(fd_grad) + 1e-12));
            worst = std::max(worst,
                             std::abs(jet.hess_diag(k) - fd_hess) / (std::abs(fd_hess) + 1e-12));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("single domain point, linear net: loss c^2, zero gradient") {
    // A linear network is harmonic, so the domain residual is -f = -c no
    // matter the parameters: the loss is flat and its gradient vanishes.
    const MlpNetwork net = linear_net(1.3, -0.4, 0.9);
    LossBatch batch;
    const double c = 2.5;
    batch.domain.push_back({{0.4, 0.6}, c, {}});
    const auto [loss, grad] = loss_value_and_grad(net, batch);
    CHECK(loss == doctest::Approx(c * c).epsilon(1e-14));
    for (const auto& g : grad.weights) CHECK(g.isZero(1e-14));
    for (const auto& g : grad.biases) CHECK(g.isZero(1e-14));
}

TEST_CASE("interface Dirichlet and Neumann points share one mean") {
    // Linear net: value w.x + b, gradient w. One point of each interface
    // kind gives the term (r_d^2 + r_n^2) / 2.
    const MlpNetwork net = linear_net(2.0, 1.0, 0.25);
    LossBatch batch;
    batch.diffusion = 3.0;
    batch.domain.push_back({{0.1, 0.1}, 0.0, {}});  // residual 0 (harmonic, f=0)
    batch.interface_dirichlet.push_back({{1.0, 2.0}, 4.0, {}});  // h = 4.25, r = 0.25
    batch.interface_neumann.push_back({{0.0, 0.0}, 5.0, {1.0, 0.0}});  // 3*2 - 5 = 1
    const double expected = (0.25 * 0.25 + 1.0 * 1.0) / 2.0;
    CHECK(loss_value(net, batch) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("boundary term is averaged over its own count") {
    const MlpNetwork net = linear_net(0.0, 0.0, 1.0);  // constant h = 1
    LossBatch batch;
    batch.domain.push_back({{0.5, 0.5}, 0.0, {}});
    batch.boundary.push_back({{0.0, 0.0}, 0.0, {}});  // r = 1
    batch.boundary.push_back({{1.0, 0.0}, 2.0, {}});  // r = -1
    CHECK(loss_value(net, batch) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("empty interior group is an error") {
    const MlpNetwork net = init_network({2, 4, 1}, 1);
    LossBatch batch;
    batch.boundary.push_back({{0.0, 0.0}, 0.0, {}});
    CHECK_THROWS_AS(loss_value_and_grad(net, batch), TrainingError);
}

TEST_CASE("parameter gradient matches finite differences of the loss") {
    MlpNetwork net = init_network({2, 8, 8, 1}, 77);
    LossBatch batch;
    batch.diffusion = 2.0;
    for (int i = 0; i < 6; ++i)
        batch.domain.push_back({{0.1 * i, 0.05 + 0.1 * i}, 0.4 * i - 1.0, {}});
    batch.boundary.push_back({{0.0, 0.3}, 0.2, {}});
    batch.interface_dirichlet.push_back({{0.9, 0.4}, -0.3, {}});
    batch.interface_neumann.push_back({{0.5, 0.8}, 0.6, {0.6, 0.8}});
    const auto [loss, grad] = loss_value_and_grad(net, batch);
    CHECK(loss > 0);
    const double h = 1e-6;
    double worst = 0.0;
    for (int probe = 0; probe < 40; ++probe) {
        const std::size_t l = probe % net.weights.size();
        auto& w = net.weights[l];
        const Eigen::Index i = (probe * 5) % w.rows();
        const Eigen::Index j = (probe * 11) % w.cols();
        const double saved = w(i, j);
        w(i, j) = saved + h;
        const double lp = loss_value(net, batch);
        w(i, j) = saved - h;
        const double lm = loss_value(net, batch);
        w(i, j) = saved;
        const double fd = (lp - lm) / (2 * h);
        worst = std::max(worst, std::abs(grad.weights[l](i, j) - fd) / (std::abs(fd) + 1e-12));
    }
    CHECK(worst < 1e-5);
}
