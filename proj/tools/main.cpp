// Command-line front end: solve one experiment, sweep a grid of them, or
// run the analytic verification checks.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "pinndd/checks.hpp"
#include "pinndd/config.hpp"
#include "pinndd/driver.hpp"
#include "pinndd/errors.hpp"
#include "pinndd/report.hpp"

namespace {

using namespace pinndd;

std::string status_string(OuterStatus s) {
    switch (s) {
        case OuterStatus::StopInterface: return "converged-interface";
        case OuterStatus::StopInterior: return "converged-interior";
        case OuterStatus::StopMaxIter: return "max-outer";
        default: return "running";
    }
}

RunReport make_run_report(const DdmResult& result, const ExperimentConfig& cfg) {
    RunReport rep;
    std::istringstream echo(serialize_config(cfg));
    std::string line;
    while (std::getline(echo, line)) rep.config_echo.push_back(line);
    rep.rows = result.rows;
    rep.status = status_string(result.status);
    bool rate_ok = result.error_history.size() >= 3;
    for (double e : result.error_history) rate_ok = rate_ok && e > 0;
    rep.observed_rate = rate_ok ? observed_rate(result.error_history) : 0.0;
    rep.analytic_rho = result.problem.is_interface
                           ? 0.0  // no analytic reference for the interface problem
                           : analytic_factor(cfg.subdomains > 1 ? cfg.overlap : 0.0,
                                             std::numbers::pi);
    return rep;
}

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

void apply_axis_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "layers") cfg.layers = std::stoi(value);
    else if (key == "units") cfg.units = std::stoi(value);
    else if (key == "overlap") cfg.overlap = std::stod(value);
    else if (key == "subdomains") cfg.subdomains = std::stoi(value);
    else if (key == "n_f") cfg.n_f = std::stoi(value);
    else if (key == "n_g_per_edge") cfg.n_g_per_edge = std::stoi(value);
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else throw ConfigError("sweep: unsupported axis '" + key + "'");
}

std::vector<SweepAxis> parse_axes(const std::vector<std::string>& specs) {
    std::vector<SweepAxis> axes;
    for (const auto& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ConfigError("sweep: axis must look like key=v1,v2,...: " + spec);
        SweepAxis axis;
        axis.key = spec.substr(0, eq);
        std::stringstream ss(spec.substr(eq + 1));
        std::string v;
        while (std::getline(ss, v, ',')) axis.values.push_back(v);
        if (axis.values.empty())
            throw ConfigError("sweep: axis '" + axis.key + "' has no values");
        axes.push_back(std::move(axis));
    }
    return axes;
}

std::string error_iter_cell(double err, int iters) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1e(%d)", err, iters);
    return buf;
}

int cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir) {
    DdmResult result = solve_ddm(cfg);
    std::filesystem::create_directories(out_dir);
    const std::string path = out_dir + "/" + cfg.output;
    write_report(make_run_report(result, cfg), path);
    std::printf("%s: status=%s outer=%d rel_l2_error=%.6e -> %s\n",
                cfg.problem == ProblemKind::Model ? "model" : "interface",
                status_string(result.status).c_str(), result.outer_iterations,
                result.final_error, path.c_str());
    return result.status == OuterStatus::StopMaxIter ? 2 : 0;
}

int cmd_sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes,
              const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.values.size();

    struct Cell {
        std::vector<std::string> coords;
        double error = 0;
        int iters = 0;
        std::string status;
    };
    std::vector<Cell> cells;

    for (std::size_t idx = 0; idx < total; ++idx) {
        ExperimentConfig cfg = base;
        Cell cell;
        std::size_t rem = idx;
        for (const auto& axis : axes) {
            const std::string& v = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
            apply_axis_value(cfg, axis.key, v);
            cell.coords.push_back(v);
        }
        cfg.seed = base.seed + idx;  // independent but reproducible cells
        cfg.output = "cell_" + std::to_string(idx) + ".csv";
        cfg.validate();

        std::printf("[%zu/%zu]", idx + 1, total);
        for (std::size_t a = 0; a < axes.size(); ++a)
            std::printf(" %s=%s", axes[a].key.c_str(), cell.coords[a].c_str());
        std::printf(" ...\n");
        std::fflush(stdout);

        DdmResult result = solve_ddm(cfg);
        write_report(make_run_report(result, cfg), out_dir + "/" + cfg.output);
        cell.error = result.final_error;
        cell.iters = result.outer_iterations;
        cell.status = status_string(result.status);
        std::printf("    -> %s outer=%d rel_l2_error=%.3e\n", cell.status.c_str(),
                    cell.iters, cell.error);
        cells.push_back(std::move(cell));
    }

    // Aggregate CSV: one row per cell.
    {
        const std::string path = out_dir + "/sweep_summary.csv";
        std::ofstream out(path + ".tmp");
        for (const auto& axis : axes) out << axis.key << ',';
        out << "rel_l2_error,outer_iterations,status\n";
        out.precision(17);
        for (const auto& cell : cells) {
            for (const auto& c : cell.coords) out << c << ',';
            out << cell.error << ',' << cell.iters << ',' << cell.status << "\n";
        }
        out.close();
        std::filesystem::rename(path + ".tmp", path);
    }

    // Companion "error(iterations)" table for two-axis sweeps.
    {
        std::ofstream out(out_dir + "/sweep_table.txt");
        if (axes.size() == 2) {
            out << axes[0].key << " \\ " << axes[1].key << "\n\t";
            for (const auto& v : axes[1].values) out << v << "\t";
            out << "\n";
            for (std::size_t i = 0; i < axes[0].values.size(); ++i) {
                out << axes[0].values[i] << "\t";
                for (std::size_t j = 0; j < axes[1].values.size(); ++j) {
                    const Cell& cell = cells[i + j * axes[0].values.size()];
                    out << error_iter_cell(cell.error, cell.iters) << "\t";
                }
                out << "\n";
            }
        } else {
            for (const auto& cell : cells) {
                for (std::size_t a = 0; a < axes.size(); ++a)
                    out << axes[a].key << "=" << cell.coords[a] << " ";
                out << error_iter_cell(cell.error, cell.iters) << "\n";
            }
        }
    }
    return 0;
}

int cmd_verify() {
    const auto checks = run_verification_checks();
    bool all_ok = true;
    for (const auto& c : checks) {
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all_ok = all_ok && c.passed;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schwarz domain decomposition solver with physics-informed networks"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
    std::string checkpoint_dir, dump_points;
    std::vector<std::string> axis_specs;

    auto* solve = app.add_subcommand("solve", "Run one experiment from a config file");
    solve->add_option("config", config_path, "key = value config file")->required();
    solve->add_option("--output", out_dir, "output directory");
    solve->add_option("--seed", seed_override, "override the config seed");
    solve->add_option("--threads", threads_override, "1 = sequential, else one worker per subdomain");
    solve->add_option("--checkpoints", checkpoint_dir, "write per-iteration network checkpoints here");
    solve->add_option("--dump-points", dump_points, "dump collocation sets to CSV (path prefix)");

    auto* sweep = app.add_subcommand("sweep", "Cartesian sweep over config values");
    sweep->add_option("config", config_path, "key = value config file")->required();
    sweep->add_option("--axis", axis_specs, "sweep axis, e.g. --axis units=10,20,50")
        ->required()
        ->take_all();
    sweep->add_option("--output", out_dir, "output directory");
    sweep->add_option("--seed", seed_override, "override the config seed");
    sweep->add_option("--threads", threads_override, "1 = sequential, else one worker per subdomain");

    auto* verify = app.add_subcommand("verify", "Run the analytic self-checks");
    (void)verify;

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("verify")) return cmd_verify();

        ExperimentConfig cfg = parse_config(config_path);
        if (seed_override) cfg.seed = *seed_override;
        if (threads_override) cfg.threads = *threads_override;
        cfg.checkpoint_dir = checkpoint_dir;
        cfg.dump_points_path = dump_points;
        cfg.validate();

        if (app.got_subcommand("solve")) return cmd_solve(cfg, out_dir);
        return cmd_sweep(cfg, parse_axes(axis_specs), out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
