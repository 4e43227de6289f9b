#include "pinndd/checkpoint.hpp"

#include <cstdint>
#include <fstream>

#include "pinndd/errors.hpp"

namespace pinndd {

namespace {

constexpr std::uint32_t kMagic = 0x50444431;  // "PDD1"

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void save_checkpoint(const std::vector<MlpNetwork>& networks, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("save_checkpoint: cannot open " + path);
    write_u32(out, kMagic);
    write_u32(out, static_cast<std::uint32_t>(networks.size()));
    for (const auto& net : networks) {
        write_u32(out, static_cast<std::uint32_t>(net.layer_dims.size()));
        for (int d : net.layer_dims) write_u32(out, static_cast<std::uint32_t>(d));
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            const auto& w = net.weights[l];
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                for (Eigen::Index j = 0; j < w.cols(); ++j) {
                    const double v = w(i, j);
                    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
                }
            const auto& b = net.biases[l];
            out.write(reinterpret_cast<const char*>(b.data()),
                      static_cast<std::streamsize>(b.size() * sizeof(double)));
        }
    }
    if (!out) throw ConfigError("save_checkpoint: write failed for " + path);
}

std::vector<MlpNetwork> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("load_checkpoint: cannot open " + path);
    if (read_u32(in) != kMagic) throw ConfigError("load_checkpoint: bad magic in " + path);
    const std::uint32_t count = read_u32(in);
    std::vector<MlpNetwork> nets;
    nets.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        const std::uint32_t ndims = read_u32(in);
        std::vector<int> dims(ndims);
        for (auto& d : dims) d = static_cast<int>(read_u32(in));
        MlpNetwork net;
        net.layer_dims = dims;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
            Eigen::MatrixXd w(dims[l + 1], dims[l]);
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                for (Eigen::Index j = 0; j < w.cols(); ++j)
                    in.read(reinterpret_cast<char*>(&w(i, j)), sizeof(double));
            Eigen::VectorXd b(dims[l + 1]);
            in.read(reinterpret_cast<char*>(b.data()),
                    static_cast<std::streamsize>(b.size() * sizeof(double)));
            net.weights.push_back(std::move(w));
            net.biases.push_back(std::move(b));
        }
        if (!in) throw ConfigError("load_checkpoint: truncated file " + path);
        nets.push_back(std::move(net));
    }
    return nets;
}

}  // namespace pinndd
