#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pinndd/errors.hpp"
#include "pinndd/problems.hpp"
#include "pinndd/rng.hpp"

using namespace pinndd;

TEST_CASE("model problem exact solution and data") {
    const ProblemInstance p = model_problem();
    CHECK_FALSE(p.is_interface);
    CHECK(p.domain.x1 == doctest::Approx(std::numbers::pi));
    CHECK(p.exact({std::numbers::pi / 4, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.forcing({std::numbers::pi / 4, 0.0}) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p.boundary({std::numbers::pi / 4, 1.0}) ==
          doctest::Approx(std::numbers::e).epsilon(1e-12));
    CHECK(p.spec_for(0).diffusion == 1.0);
    CHECK(p.spec_for(3).transmission == TransmissionKind::Dirichlet);
}

TEST_CASE("model problem: forcing is -Laplacian of the exact solution") {
    const ProblemInstance p = model_problem();
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Vector2d x{rng.uniform(0.0, std::numbers::pi), rng.uniform(0.0, 1.0)};
        // -Lap(sin(2x) e^y) = (4 - 1) sin(2x) e^y.
        const double lap = (-4.0 + 1.0) * std::sin(2 * x.x()) * std::exp(x.y());
        CHECK(std::abs(-lap - p.forcing(x)) < 1e-10);
    }
}

TEST_CASE("interface problem: exact branches meet at the circle") {
    for (double alpha : {2.0, 20.0}) {
        const ProblemInstance p = interface_problem(alpha);
        CHECK(p.is_interface);
        // r = 0.5: both branches give 0.25.
        CHECK(p.exact({1.5, 1.0}) == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(p.exact({1.0, 1.5 - 1e-12}) == doctest::Approx(0.25).epsilon(1e-9));
        // center: alpha*0 - 0.25(alpha-1).
        CHECK(p.exact({1.0, 1.0}) == doctest::Approx(-0.25 * (alpha - 1)).epsilon(1e-14));
        // forcing constant -4 alpha on both subdomains.
        CHECK(p.forcing({1.0, 1.0}) == doctest::Approx(-4.0 * alpha));
        CHECK(p.forcing({0.2, 0.2}) == doctest::Approx(-4.0 * alpha));
        CHECK(p.spec_for(0).diffusion == 1.0);
        CHECK(p.spec_for(1).diffusion == alpha);
        CHECK(p.spec_for(0).transmission == TransmissionKind::Dirichlet);
        CHECK(p.spec_for(1).transmission == TransmissionKind::NeumannFlux);
    }
}

TEST_CASE("interface problem rejects nonpositive alpha") {
    CHECK_THROWS_AS(interface_problem(0.0), ConfigError);
    CHECK_THROWS_AS(interface_problem(-2.0), ConfigError);
}

TEST_CASE("alpha = 1 degenerates to a smooth problem") {
    const ProblemInstance p = interface_problem(1.0);
    CHECK(p.spec_for(0).diffusion == 1.0);
    CHECK(p.spec_for(1).diffusion == 1.0);
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Vector2d x{rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
        const double r2 = (x.x() - 1) * (x.x() - 1) + (x.y() - 1) * (x.y() - 1);
        CHECK(p.exact(x) == doctest::Approx(r2).epsilon(1e-13));
    }
}

TEST_CASE("boundary data restricts the exact solution") {
    const ProblemInstance p = interface_problem(5.0);
    Rng rng(31);
    for (int i = 0; i < 1000; ++i) {
        // A random point of the outer boundary.
        const double t = rng.uniform(0.0, 2.0);
        const Eigen::Vector2d candidates[4] = {{t, 0.0}, {t, 2.0}, {0.0, t}, {2.0, t}};
        const Eigen::Vector2d x = candidates[i % 4];
        CHECK(p.boundary(x) == p.exact(x));
    }
}

TEST_CASE("domain residual formula") {
    const OperatorSpec unit{1.0, TransmissionKind::Dirichlet};
    NetJet2 jet;
    jet.grad_x = Eigen::VectorXd::Zero(2);
    jet.hess_diag = Eigen::VectorXd::Zero(2);
    CHECK(domain_residual(unit, jet, 0.0) == 0.0);
    jet.hess_diag << 1.0, 1.0;
    CHECK(domain_residual(unit, jet, 0.0) == doctest::Approx(-2.0));
    const OperatorSpec scaled{3.0, TransmissionKind::Dirichlet};
    CHECK(domain_residual(scaled, jet, 1.0) == doctest::Approx(-7.0));
}

TEST_CASE("transmission values") {
    NetJet2 jet;
    jet.value = 0.25;
    jet.grad_x = Eigen::VectorXd(2);
    jet.hess_diag = Eigen::VectorXd::Zero(2);

    const OperatorSpec dir{1.0, TransmissionKind::Dirichlet};
    jet.grad_x << 9.0, 9.0;  // ignored by the trace operator
    CHECK(transmission_value(dir, jet, {1.0, 0.0}) == 0.25);

    // Exact-solution flux of the interface problem at circle angle 0:
    // inside branch gradient (2 alpha r, 0), a = 1, normal (1, 0) -> alpha.
    const double alpha = 20.0;
    const OperatorSpec neu{1.0, TransmissionKind::NeumannFlux};
    jet.grad_x << 2 * alpha * 0.5, 0.0;
    CHECK(transmission_value(neu, jet, {1.0, 0.0}) == doctest::Approx(alpha));

    // Gradient orthogonal to the normal -> zero flux.
    jet.grad_x << 0.0, 3.0;
    CHECK(transmission_value(neu, jet, {1.0, 0.0}) == 0.0);
}
