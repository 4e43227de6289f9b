#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace pinndd {

enum class Activation { Tanh };

/// Fully connected feedforward network h(.; theta) with layer widths
/// (d_0, ..., d_L). Hidden layers are followed by the activation; the
/// output layer is affine.
struct MlpNetwork {
    std::vector<int> layer_dims;
    std::vector<Eigen::MatrixXd> weights;  // W_l: d_{l+1} x d_l
    std::vector<Eigen::VectorXd> biases;   // b_l: d_{l+1}
    Activation activation = Activation::Tanh;

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
    int num_layers() const { return static_cast<int>(weights.size()); }

    std::size_t parameter_count() const;
    bool all_finite() const;
};

/// Value, input gradient and diagonal of the input Hessian at one point.
struct NetJet2 {
    double value = 0.0;
    Eigen::VectorXd grad_x;    // dh/dx_k
    Eigen::VectorXd hess_diag; // d2h/dx_k2
};

/// Gradient of a scalar loss with respect to every network parameter.
/// Shape-congruent with the network it was computed for.
struct ParamGradient {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    static ParamGradient zeros_like(const MlpNetwork& net);
    bool all_finite() const;
};

/// Xavier-uniform weights, zero biases. Deterministic given the seed.
MlpNetwork init_network(const std::vector<int>& layer_dims, std::uint64_t seed);

double forward(const MlpNetwork& net, const Eigen::VectorXd& x);

/// Batched scalar-output evaluation; x columns are points. Requires
/// output_dim() == 1.
Eigen::VectorXd forward_batch(const MlpNetwork& net, const Eigen::MatrixXd& x);

/// Exact dh/dx_k and d2h/dx_k2 by layer-wise jet propagation.
NetJet2 input_jet2(const MlpNetwork& net, const Eigen::VectorXd& x);

/// One collocation point of a physics-informed squared-residual loss.
enum class ResidualKind { Domain, Boundary, InterfaceDirichlet, InterfaceNeumann };

struct LossPoint {
    Eigen::Vector2d x;
    double target = 0.0;             // f for domain, g for boundary, W for interface
    Eigen::Vector2d normal{0.0, 0.0}; // Neumann interface points only
};

/// Collocation data for one loss evaluation: mean squared residual of each
/// nonempty group, summed. The interface group may mix Dirichlet and
/// Neumann points; its mean runs over the whole group.
struct LossBatch {
    std::vector<LossPoint> domain;               // residual: -a (h_xx + h_yy) - f
    std::vector<LossPoint> boundary;             // residual: h - g
    std::vector<LossPoint> interface_dirichlet;  // residual: h - W
    std::vector<LossPoint> interface_neumann;    // residual: a (grad h . n) - W
    double diffusion = 1.0;                      // a in -a*Laplacian and a*dh/dn

    std::size_t interface_count() const {
        return interface_dirichlet.size() + interface_neumann.size();
    }
};

double loss_value(const MlpNetwork& net, const LossBatch& batch);

/// Loss and its exact parameter gradient, including parameters reached only
/// through the input-derivative terms (reverse mode over the jet forward
/// pass). Throws on an empty domain group.
std::pair<double, ParamGradient> loss_value_and_grad(const MlpNetwork& net,
                                                     const LossBatch& batch);

}  // namespace pinndd
