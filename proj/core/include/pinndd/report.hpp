#pragma once

#include <span>
#include <string>
#include <vector>

namespace pinndd {

/// One per-subdomain row of a run's progress history.
struct IterationRecord {
    int outer_iter = 0;
    int subdomain = 0;
    int epochs = 0;
    double final_loss = 0.0;
    double interface_rel_change = 0.0;
    double interior_rel_change = 0.0;
    double rel_l2_error = 0.0;  // shared across subdomains of one iteration
    double lr = 0.0;
    double wall_ms = 0.0;
};

struct RunReport {
    std::vector<std::string> config_echo;  // header comment lines
    std::vector<IterationRecord> rows;
    std::string status = "not-run";
    double observed_rate = 0.0;
    double analytic_rho = 0.0;
};

/// E = (sum |u_* - u_h|^2 / sum |u_*|^2)^(1/2).
double relative_l2_error(std::span<const double> u_h, std::span<const double> u_star);

/// Schwarz contraction factor rho = exp(-k_min * overlap).
double analytic_factor(double overlap, double k_min);

/// Geometric mean of successive error ratios, skipping the first ratio
/// (which mixes in the initialization transient).
double observed_rate(const std::vector<double>& error_history);

/// '#'-prefixed config echo, CSV rows, then a summary footer. Numbers are
/// printed with 17 significant digits so re-reading is bit-exact. The file
/// is written to a temp path and renamed, so failures leave no partial CSV.
void write_report(const RunReport& report, const std::string& path);

/// Reads back a file produced by write_report.
RunReport read_report(const std::string& path);

}  // namespace pinndd
