#include "pinndd/problems.hpp"

#include <cmath>
#include <numbers>

#include "pinndd/errors.hpp"

namespace pinndd {

ProblemInstance model_problem() {
    ProblemInstance p;
    p.name = "model-poisson";
    p.domain = Rect{0.0, std::numbers::pi, 0.0, 1.0};
    auto u = [](const Eigen::Vector2d& x) { return std::sin(2.0 * x.x()) * std::exp(x.y()); };
    p.exact = u;
    // -Laplace(sin(2x) e^y) = (4 - 1) sin(2x) e^y
    p.forcing = [](const Eigen::Vector2d& x) { return 3.0 * std::sin(2.0 * x.x()) * std::exp(x.y()); };
    p.boundary = u;
    p.specs = {OperatorSpec{1.0, TransmissionKind::Dirichlet}};
    return p;
}

ProblemInstance interface_problem(double alpha) {
    if (!(alpha > 0)) throw ConfigError("interface_problem: alpha must be > 0");
    ProblemInstance p;
    p.name = "interface-diffusion";
    p.domain = Rect{0.0, 2.0, 0.0, 2.0};
    p.alpha = alpha;
    p.is_interface = true;
    constexpr double r2_gamma = 0.25;  // interface radius squared
    auto rad2 = [](const Eigen::Vector2d& x) {
        const double dx = x.x() - 1.0, dy = x.y() - 1.0;
        return dx * dx + dy * dy;
    };
    p.exact = [=](const Eigen::Vector2d& x) {
        const double r2 = rad2(x);
        return r2 < r2_gamma ? alpha * r2 - r2_gamma * (alpha - 1.0) : r2;
    };
    // Both branches are quadratic in r: -a * Laplace(branch) = -4*alpha.
    p.forcing = [=](const Eigen::Vector2d&) { return -4.0 * alpha; };
    p.boundary = rad2;  // exact solution restricted to the outer boundary
    p.specs = {OperatorSpec{1.0, TransmissionKind::Dirichlet},
               OperatorSpec{alpha, TransmissionKind::NeumannFlux}};
    return p;
}

double domain_residual(const OperatorSpec& spec, const NetJet2& jet, double f_val) {
    return -spec.diffusion * (jet.hess_diag(0) + jet.hess_diag(1)) - f_val;
}

double transmission_value(const OperatorSpec& spec, const NetJet2& jet,
                          const Eigen::Vector2d& normal) {
    if (spec.transmission == TransmissionKind::Dirichlet) return jet.value;
    return spec.diffusion * jet.grad_x.head<2>().dot(normal);
}

}  // namespace pinndd
