#pragma once

#include <cstdint>
#include <string>

namespace pinndd {

enum class ProblemKind { Model, Interface };

/// Every experiment tunable, parsed from a flat key = value file.
/// Defaults follow the benchmark settings: batch 64, tol_gamma = tol_omega
/// = 1e-2, tol_loss = 5e-3, eta = 100, max_epochs = 10000.
struct ExperimentConfig {
    ProblemKind problem = ProblemKind::Model;
    double alpha = 2.0;  // interface problem only
    int subdomains = 2;
    double overlap = 0.2;
    int layers = 3;  // hidden layers
    int units = 20;  // units per hidden layer
    int n_f = 2500;
    int n_g_per_edge = 50;
    int n_gamma = 50;
    int batch_size = 64;
    double lr0 = 1e-3;
    double decay_base = 0.999;
    int decay_every = 10;
    double tol_loss = 5e-3;
    double tol_loss_single = 1e-3;  // single-domain (S = 1) inner stop
    int eta = 100;
    int max_epochs = 10000;
    int max_epochs_single = 50000;
    double tol_gamma = 1e-2;
    double tol_omega = 1e-2;
    int max_outer = 30;
    std::uint64_t seed = 1;
    std::string output = "run_report.csv";
    int threads = 1;  // 1 = sequential; anything else = one worker per subdomain

    // Not part of the config-file surface (set from CLI flags).
    std::string checkpoint_dir;
    std::string dump_points_path;

    bool parallel() const { return threads != 1; }
    void validate() const;  // throws ConfigError
};

/// Parses a flat key = value file ('#' comments). Unknown keys, unparsable
/// values and violated invariants raise ConfigError naming key and line.
ExperimentConfig parse_config(const std::string& path);

/// Same parser over an in-memory string (origin is used in messages).
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<string>");

/// key = value text that reparses to an equal config.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace pinndd
