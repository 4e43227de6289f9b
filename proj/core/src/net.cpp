#include "pinndd/net.hpp"

#include <cmath>
#include <stdexcept>

#include "pinndd/errors.hpp"
#include "pinndd/rng.hpp"

namespace pinndd {

std::size_t MlpNetwork::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        n += static_cast<std::size_t>(weights[l].size()) + biases[l].size();
    return n;
}

bool MlpNetwork::all_finite() const {
    for (const auto& w : weights)
        if (!w.allFinite()) return false;
    for (const auto& b : biases)
        if (!b.allFinite()) return false;
    return true;
}

ParamGradient ParamGradient::zeros_like(const MlpNetwork& net) {
    ParamGradient g;
    g.weights.reserve(net.weights.size());
    g.biases.reserve(net.biases.size());
    for (const auto& w : net.weights) g.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    for (const auto& b : net.biases) g.biases.push_back(Eigen::VectorXd::Zero(b.size()));
    return g;
}

bool ParamGradient::all_finite() const {
    for (const auto& w : weights)
        if (!w.allFinite()) return false;
    for (const auto& b : biases)
        if (!b.allFinite()) return false;
    return true;
}

MlpNetwork init_network(const std::vector<int>& layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2) throw ConfigError("init_network: need at least two layer dims");
    for (int d : layer_dims)
        if (d < 1) throw ConfigError("init_network: layer dims must be >= 1");

    MlpNetwork net;
    net.layer_dims = layer_dims;
    Rng rng(Rng::mix(seed));
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const int din = layer_dims[l], dout = layer_dims[l + 1];
        const double bound = std::sqrt(6.0 / (din + dout));
        Eigen::MatrixXd w(dout, din);
        for (int i = 0; i < dout; ++i)
            for (int j = 0; j < din; ++j) w(i, j) = rng.uniform(-bound, bound);
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::VectorXd::Zero(dout));
    }
    return net;
}

namespace {

// Batched forward pass with optional first/second input-derivative channels
// for the two coordinate axes. Keeps enough per-layer state for an exact
// reverse sweep (parameter gradients of any linear functional of
// value/grad/hess seeds).
struct JetTrace {
    bool grad = false, hess = false;
    // Inputs of each linear layer, per channel.
    std::vector<Eigen::MatrixXd> a, ax, ay, axx, ayy;
    // Hidden-layer tanh values and pre-activation derivative channels.
    std::vector<Eigen::MatrixXd> t, zx, zy, zxx, zyy;
    // Output channels (d_L x N).
    Eigen::MatrixXd out_v, out_gx, out_gy, out_hx, out_hy;
};

JetTrace jet_forward(const MlpNetwork& net, const Eigen::MatrixXd& x,
                     bool want_grad, bool want_hess, bool keep_trace) {
    const auto L = net.weights.size();
    const auto n = x.cols();
    JetTrace tr;
    tr.grad = want_grad || want_hess;
    tr.hess = want_hess;

    Eigen::MatrixXd a = x;
    Eigen::MatrixXd ax, ay, axx, ayy;
    if (tr.grad) {
        ax = Eigen::MatrixXd::Zero(x.rows(), n);
        ay = Eigen::MatrixXd::Zero(x.rows(), n);
        ax.row(0).setOnes();
        ay.row(1).setOnes();
    }
    if (tr.hess) {
        axx = Eigen::MatrixXd::Zero(x.rows(), n);
        ayy = Eigen::MatrixXd::Zero(x.rows(), n);
    }

    for (std::size_t l = 0; l < L; ++l) {
        if (keep_trace) {
            tr.a.push_back(a);
            if (tr.grad) { tr.ax.push_back(ax); tr.ay.push_back(ay); }
            if (tr.hess) { tr.axx.push_back(axx); tr.ayy.push_back(ayy); }
        }
        Eigen::MatrixXd z = (net.weights[l] * a).colwise() + net.biases[l];
        Eigen::MatrixXd zx, zy, zxx, zyy;
        if (tr.grad) { zx = net.weights[l] * ax; zy = net.weights[l] * ay; }
        if (tr.hess) { zxx = net.weights[l] * axx; zyy = net.weights[l] * ayy; }

        if (l + 1 < L) {
            // tanh jet: a = t, a' = s1 z', a'' = s2 z'^2 + s1 z''
            const Eigen::ArrayXXd t = z.array().tanh();
            const Eigen::ArrayXXd s1 = 1.0 - t.square();
            if (tr.hess) {
                const Eigen::ArrayXXd s2 = -2.0 * t * s1;
                axx = (s2 * zx.array().square() + s1 * zxx.array()).matrix();
                ayy = (s2 * zy.array().square() + s1 * zyy.array()).matrix();
            }
            if (tr.grad) {
                ax = (s1 * zx.array()).matrix();
                ay = (s1 * zy.array()).matrix();
            }
            a = t.matrix();
            if (keep_trace) {
                tr.t.push_back(a);
                if (tr.grad) { tr.zx.push_back(std::move(zx)); tr.zy.push_back(std::move(zy)); }
                if (tr.hess) { tr.zxx.push_back(std::move(zxx)); tr.zyy.push_back(std::move(zyy)); }
            }
        } else {
            tr.out_v = std::move(z);
            if (tr.grad) { tr.out_gx = std::move(zx); tr.out_gy = std::move(zy); }
            if (tr.hess) { tr.out_hx = std::move(zxx); tr.out_hy = std::move(zyy); }
        }
    }
    return tr;
}

// Reverse sweep. Seeds are adjoints of the output channels (d_L x N, here
// d_L = 1); accumulates into grad.
void jet_backward(const MlpNetwork& net, const JetTrace& tr,
                  const Eigen::MatrixXd& vbar,
                  const Eigen::MatrixXd* gxbar, const Eigen::MatrixXd* gybar,
                  const Eigen::MatrixXd* hxbar, const Eigen::MatrixXd* hybar,
                  ParamGradient& grad) {
    const auto L = net.weights.size();
    Eigen::MatrixXd zbar = vbar;
    Eigen::MatrixXd zxbar, zybar, zxxbar, zyybar;
    if (tr.grad) {
        zxbar = gxbar ? *gxbar : Eigen::MatrixXd::Zero(vbar.rows(), vbar.cols());
        zybar = gybar ? *gybar : Eigen::MatrixXd::Zero(vbar.rows(), vbar.cols());
    }
    if (tr.hess) {
        zxxbar = *hxbar;
        zyybar = *hybar;
    }

    for (std::size_t li = L; li-- > 0;) {
        // Adjoints of the linear layer z = W a + b (and its jet channels).
        grad.weights[li].noalias() += zbar * tr.a[li].transpose();
        grad.biases[li].noalias() += zbar.rowwise().sum();
        if (tr.grad) {
            grad.weights[li].noalias() += zxbar * tr.ax[li].transpose();
            grad.weights[li].noalias() += zybar * tr.ay[li].transpose();
        }
        if (tr.hess) {
            grad.weights[li].noalias() += zxxbar * tr.axx[li].transpose();
            grad.weights[li].noalias() += zyybar * tr.ayy[li].transpose();
        }
        if (li == 0) break;

        Eigen::MatrixXd abar = net.weights[li].transpose() * zbar;
        Eigen::MatrixXd axbar, aybar, axxbar, ayybar;
        if (tr.grad) {
            axbar = net.weights[li].transpose() * zxbar;
            aybar = net.weights[li].transpose() * zybar;
        }
        if (tr.hess) {
            axxbar = net.weights[li].transpose() * zxxbar;
            ayybar = net.weights[li].transpose() * zyybar;
        }

        // Through the tanh jet of hidden layer li-1.
        const std::size_t h = li - 1;
        const Eigen::ArrayXXd t = tr.t[h].array();
        const Eigen::ArrayXXd s1 = 1.0 - t.square();
        Eigen::ArrayXXd zb = s1 * abar.array();
        if (tr.hess) {
            const Eigen::ArrayXXd s2 = -2.0 * t * s1;
            const Eigen::ArrayXXd s3 = -2.0 * s1 * (1.0 - 3.0 * t.square());
            const Eigen::ArrayXXd zxh = tr.zx[h].array(), zyh = tr.zy[h].array();
            zb += s2 * zxh * axbar.array() + s2 * zyh * aybar.array();
            zb += (s3 * zxh.square() + s2 * tr.zxx[h].array()) * axxbar.array();
            zb += (s3 * zyh.square() + s2 * tr.zyy[h].array()) * ayybar.array();
            zxbar = (s1 * axbar.array() + 2.0 * s2 * zxh * axxbar.array()).matrix();
            zybar = (s1 * aybar.array() + 2.0 * s2 * zyh * ayybar.array()).matrix();
            zxxbar = (s1 * axxbar.array()).matrix();
            zyybar = (s1 * ayybar.array()).matrix();
        } else if (tr.grad) {
            const Eigen::ArrayXXd s2 = -2.0 * t * s1;
            zb += s2 * tr.zx[h].array() * axbar.array() + s2 * tr.zy[h].array() * aybar.array();
            zxbar = (s1 * axbar.array()).matrix();
            zybar = (s1 * aybar.array()).matrix();
        }
        zbar = zb.matrix();
    }
}

Eigen::MatrixXd points_matrix(const std::vector<LossPoint>& pts) {
    Eigen::MatrixXd x(2, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) x.col(i) = pts[i].x;
    return x;
}

}  // namespace

double forward(const MlpNetwork& net, const Eigen::VectorXd& x) {
    Eigen::VectorXd a = x;
    const auto L = net.weights.size();
    for (std::size_t l = 0; l < L; ++l) {
        Eigen::VectorXd z = net.weights[l] * a + net.biases[l];
        a = (l + 1 < L) ? z.array().tanh().matrix() : z;
    }
    return a(0);
}

Eigen::VectorXd forward_batch(const MlpNetwork& net, const Eigen::MatrixXd& x) {
    auto tr = jet_forward(net, x, false, false, false);
    return tr.out_v.row(0).transpose();
}

NetJet2 input_jet2(const MlpNetwork& net, const Eigen::VectorXd& x) {
    auto tr = jet_forward(net, x, true, true, false);
    NetJet2 jet;
    jet.value = tr.out_v(0, 0);
    jet.grad_x = Eigen::Vector2d(tr.out_gx(0, 0), tr.out_gy(0, 0));
    jet.hess_diag = Eigen::Vector2d(tr.out_hx(0, 0), tr.out_hy(0, 0));
    return jet;
}

namespace {

// Each group helper returns the raw sum of squared residuals; the caller
// divides by its group count. inv_n is the mean denominator baked into the
// adjoint seeds (the interface groups share one denominator).
double group_domain(const MlpNetwork& net, const std::vector<LossPoint>& pts,
                    double a_coef, double inv_n, ParamGradient* grad) {
    if (pts.empty()) return 0.0;
    const auto x = points_matrix(pts);
    auto tr = jet_forward(net, x, true, true, grad != nullptr);
    double acc = 0.0;
    Eigen::MatrixXd hbar(1, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = -a_coef * (tr.out_hx(0, i) + tr.out_hy(0, i)) - pts[i].target;
        acc += r * r;
        hbar(0, i) = 2.0 * r * inv_n * (-a_coef);
    }
    if (grad) {
        const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, pts.size());
        jet_backward(net, tr, zero, &zero, &zero, &hbar, &hbar, *grad);
    }
    return acc;
}

double group_value(const MlpNetwork& net, const std::vector<LossPoint>& pts,
                   double inv_n, ParamGradient* grad) {
    if (pts.empty()) return 0.0;
    const auto x = points_matrix(pts);
    auto tr = jet_forward(net, x, false, false, grad != nullptr);
    double acc = 0.0;
    Eigen::MatrixXd vbar(1, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = tr.out_v(0, i) - pts[i].target;
        acc += r * r;
        vbar(0, i) = 2.0 * r * inv_n;
    }
    if (grad) jet_backward(net, tr, vbar, nullptr, nullptr, nullptr, nullptr, *grad);
    return acc;
}

double group_neumann(const MlpNetwork& net, const std::vector<LossPoint>& pts,
                     double a_coef, double inv_n, ParamGradient* grad) {
    if (pts.empty()) return 0.0;
    const auto x = points_matrix(pts);
    auto tr = jet_forward(net, x, true, false, grad != nullptr);
    double acc = 0.0;
    Eigen::MatrixXd vbar = Eigen::MatrixXd::Zero(1, pts.size());
    Eigen::MatrixXd gxbar(1, pts.size()), gybar(1, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double flux = a_coef * (tr.out_gx(0, i) * pts[i].normal(0) +
                                      tr.out_gy(0, i) * pts[i].normal(1));
        const double r = flux - pts[i].target;
        acc += r * r;
        gxbar(0, i) = 2.0 * r * inv_n * a_coef * pts[i].normal(0);
        gybar(0, i) = 2.0 * r * inv_n * a_coef * pts[i].normal(1);
    }
    if (grad) jet_backward(net, tr, vbar, &gxbar, &gybar, nullptr, nullptr, *grad);
    return acc;
}

double loss_impl(const MlpNetwork& net, const LossBatch& batch, ParamGradient* grad) {
    if (batch.domain.empty())
        throw TrainingError("loss: batch has no interior (domain) points");
    const double inv_nf = 1.0 / static_cast<double>(batch.domain.size());
    double loss = inv_nf * group_domain(net, batch.domain, batch.diffusion, inv_nf, grad);
    if (!batch.boundary.empty()) {
        const double inv_ng = 1.0 / static_cast<double>(batch.boundary.size());
        loss += inv_ng * group_value(net, batch.boundary, inv_ng, grad);
    }
    if (batch.interface_count() > 0) {
        const double inv_ni = 1.0 / static_cast<double>(batch.interface_count());
        loss += inv_ni * group_value(net, batch.interface_dirichlet, inv_ni, grad);
        loss += inv_ni * group_neumann(net, batch.interface_neumann, batch.diffusion, inv_ni, grad);
    }
    return loss;
}

}  // namespace

double loss_value(const MlpNetwork& net, const LossBatch& batch) {
    return loss_impl(net, batch, nullptr);
}

std::pair<double, ParamGradient> loss_value_and_grad(const MlpNetwork& net,
                                                     const LossBatch& batch) {
    ParamGradient grad = ParamGradient::zeros_like(net);
    const double loss = loss_impl(net, batch, &grad);
    return {loss, std::move(grad)};
}

}  // namespace pinndd
