#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pinndd/geometry.hpp"
#include "pinndd/net.hpp"

namespace pinndd {

enum class TransmissionKind { Dirichlet, NeumannFlux };

/// Per-subdomain operators: L = -a*Laplacian, B = identity trace, and the
/// interface transmission D (identity or coefficient-weighted normal flux).
struct OperatorSpec {
    double diffusion = 1.0;  // a > 0
    TransmissionKind transmission = TransmissionKind::Dirichlet;
};

/// A benchmark with a manufactured exact solution; forcing and boundary
/// data are derived from it so the numerical error is exactly measurable.
struct ProblemInstance {
    std::string name;
    Rect domain;
    double alpha = 1.0;        // coefficient contrast (interface problem)
    bool is_interface = false;

    std::function<double(const Eigen::Vector2d&)> exact;
    std::function<double(const Eigen::Vector2d&)> forcing;
    std::function<double(const Eigen::Vector2d&)> boundary;

    std::vector<OperatorSpec> specs;  // size 1: uniform; else per subdomain

    const OperatorSpec& spec_for(int subdomain) const {
        return specs.size() == 1 ? specs[0] : specs.at(subdomain);
    }
};

/// -Laplacian u = f on [0,pi]x[0,1] with u_* = sin(2x) e^y; Dirichlet
/// transmission on all strip interfaces.
ProblemInstance model_problem();

/// Piecewise-coefficient diffusion on [0,2]^2 with a circular material
/// interface at radius 0.5 around (1,1): a = 1 inside, alpha outside, and
/// u_* continuous with continuous flux across the circle. The disc side
/// receives Dirichlet data, the outer side Neumann flux data.
ProblemInstance interface_problem(double alpha);

/// (-a * (h_xx + h_yy)) - f at one collocation point.
double domain_residual(const OperatorSpec& spec, const NetJet2& jet, double f_val);

/// D(h): the trace for Dirichlet, a * (grad h . n) for Neumann flux.
double transmission_value(const OperatorSpec& spec, const NetJet2& jet,
                          const Eigen::Vector2d& normal);

}  // namespace pinndd
