#include "pinndd/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pinndd/errors.hpp"

namespace pinndd {

double relative_l2_error(std::span<const double> u_h, std::span<const double> u_star) {
    if (u_h.size() != u_star.size() || u_h.empty())
        throw std::invalid_argument("relative_l2_error: size mismatch or empty input");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u_h.size(); ++i) {
        const double d = u_star[i] - u_h[i];
        num += d * d;
        den += u_star[i] * u_star[i];
    }
    if (den <= 0.0)
        throw std::invalid_argument("relative_l2_error: exact solution is identically zero");
    return std::sqrt(num / den);
}

double analytic_factor(double overlap, double k_min) {
    if (overlap < 0 || !(k_min > 0))
        throw std::invalid_argument("analytic_factor: need overlap >= 0 and k_min > 0");
    return std::exp(-k_min * overlap);
}

double observed_rate(const std::vector<double>& error_history) {
    if (error_history.size() < 3)
        throw std::invalid_argument("observed_rate: need at least 3 history entries");
    for (double e : error_history)
        if (!(e > 0)) throw std::invalid_argument("observed_rate: entries must be > 0");
    double log_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 2; i < error_history.size(); ++i) {
        log_sum += std::log(error_history[i] / error_history[i - 1]);
        ++count;
    }
    return std::exp(log_sum / static_cast<double>(count));
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_report(const RunReport& report, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ConfigError("write_report: cannot open " + tmp);
        for (const auto& line : report.config_echo) out << "# " << line << "\n";
        out << "outer_iter,subdomain,epochs,final_loss,interface_rel_change,"
               "interior_rel_change,rel_l2_error,lr,wall_ms\n";
        for (const auto& r : report.rows)
            out << r.outer_iter << ',' << r.subdomain << ',' << r.epochs << ','
                << fmt(r.final_loss) << ',' << fmt(r.interface_rel_change) << ','
                << fmt(r.interior_rel_change) << ',' << fmt(r.rel_l2_error) << ','
                << fmt(r.lr) << ',' << fmt(r.wall_ms) << "\n";
        out << "summary," << report.status << ',' << fmt(report.observed_rate) << ','
            << fmt(report.analytic_rho) << "\n";
        if (!out) throw ConfigError("write_report: write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ConfigError("write_report: rename to " + path + " failed: " + ec.message());
}

RunReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_report: cannot open " + path);
    RunReport rep;
    rep.status.clear();
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            rep.config_echo.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.at(0) == "summary") {
            rep.status = cells.at(1);
            rep.observed_rate = std::stod(cells.at(2));
            rep.analytic_rho = std::stod(cells.at(3));
            continue;
        }
        IterationRecord r;
        r.outer_iter = std::stoi(cells.at(0));
        r.subdomain = std::stoi(cells.at(1));
        r.epochs = std::stoi(cells.at(2));
        r.final_loss = std::stod(cells.at(3));
        r.interface_rel_change = std::stod(cells.at(4));
        r.interior_rel_change = std::stod(cells.at(5));
        r.rel_l2_error = std::stod(cells.at(6));
        r.lr = std::stod(cells.at(7));
        r.wall_ms = std::stod(cells.at(8));
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace pinndd
