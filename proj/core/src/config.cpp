#include "pinndd/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "pinndd/errors.hpp"

namespace pinndd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawEntry {
    std::string value;
    int line = 0;
};

[[noreturn]] void fail(const std::string& origin, const std::string& key, int line,
                       const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": key '" + key + "': " + what);
}

class Assigner {
public:
    Assigner(std::map<std::string, RawEntry> raw, std::string origin)
        : raw_(std::move(raw)), origin_(std::move(origin)) {}

    template <typename T, typename Parser>
    void set(const std::string& key, T& field, Parser parse) {
        auto it = raw_.find(key);
        if (it == raw_.end()) return;
        try {
            field = parse(it->second.value);
        } catch (const std::exception&) {
            fail(origin_, key, it->second.line, "unparsable value '" + it->second.value + "'");
        }
        raw_.erase(it);
    }

    void check_exhausted() const {
        if (!raw_.empty()) {
            const auto& [key, entry] = *raw_.begin();
            fail(origin_, key, entry.line, "unknown key");
        }
    }

private:
    std::map<std::string, RawEntry> raw_;
    std::string origin_;
};

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

long long parse_int(const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
}

}  // namespace

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError("config: " + msg);
    };
    require(subdomains >= 1, "subdomains must be >= 1");
    require(overlap >= 0, "overlap must be >= 0");
    require(layers >= 1, "layers must be >= 1");
    require(units >= 1, "units must be >= 1");
    require(n_f >= 1, "n_f must be >= 1");
    require(n_g_per_edge >= 1, "n_g_per_edge must be >= 1");
    require(n_gamma >= 1, "n_gamma must be >= 1");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(lr0 > 0, "lr0 must be > 0");
    require(decay_base > 0 && decay_base <= 1, "decay_base must be in (0, 1]");
    require(decay_every >= 1, "decay_every must be >= 1");
    require(tol_loss > 0, "tol_loss must be > 0");
    require(tol_loss_single > 0, "tol_loss_single must be > 0");
    require(eta >= 1, "eta must be >= 1");
    require(max_epochs >= 1, "max_epochs must be >= 1");
    require(max_epochs_single >= 1, "max_epochs_single must be >= 1");
    require(tol_gamma > 0, "tol_gamma must be > 0");
    require(tol_omega > 0, "tol_omega must be > 0");
    require(max_outer >= 1, "max_outer must be >= 1");
    require(threads >= 0, "threads must be >= 0");
    if (problem == ProblemKind::Interface) {
        require(subdomains == 2, "interface problem requires subdomains = 2");
        require(overlap == 0.0, "interface problem requires overlap = 0");
        require(alpha > 0, "alpha must be > 0");
    }
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::map<std::string, RawEntry> raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (raw.count(key))
            fail(origin, key, lineno, "duplicate key");
        raw[key] = RawEntry{value, lineno};
    }

    ExperimentConfig cfg;
    const bool overlap_given = raw.count("overlap") > 0;
    const bool subdomains_given = raw.count("subdomains") > 0;

    Assigner a(std::move(raw), origin);
    a.set("problem", cfg.problem, [&](const std::string& v) {
        if (v == "model") return ProblemKind::Model;
        if (v == "interface") return ProblemKind::Interface;
        throw std::invalid_argument(v);
    });
    a.set("alpha", cfg.alpha, parse_double);
    a.set("subdomains", cfg.subdomains, [](const std::string& v) { return static_cast<int>(parse_int(v)); });
    a.set("overlap", cfg.overlap, parse_double);
    auto as_int = [](const std::string& v) { return static_cast<int>(parse_int(v)); };
    a.set("layers", cfg.layers, as_int);
    a.set("units", cfg.units, as_int);
    a.set("n_f", cfg.n_f, as_int);
    a.set("n_g_per_edge", cfg.n_g_per_edge, as_int);
    a.set("n_gamma", cfg.n_gamma, as_int);
    a.set("batch_size", cfg.batch_size, as_int);
    a.set("lr0", cfg.lr0, parse_double);
    a.set("decay_base", cfg.decay_base, parse_double);
    a.set("decay_every", cfg.decay_every, as_int);
    a.set("tol_loss", cfg.tol_loss, parse_double);
    a.set("tol_loss_single", cfg.tol_loss_single, parse_double);
    a.set("eta", cfg.eta, as_int);
    a.set("max_epochs", cfg.max_epochs, as_int);
    a.set("max_epochs_single", cfg.max_epochs_single, as_int);
    a.set("tol_gamma", cfg.tol_gamma, parse_double);
    a.set("tol_omega", cfg.tol_omega, parse_double);
    a.set("max_outer", cfg.max_outer, as_int);
    a.set("seed", cfg.seed, [](const std::string& v) { return static_cast<std::uint64_t>(std::stoull(v)); });
    a.set("output", cfg.output, [](const std::string& v) { return v; });
    a.set("threads", cfg.threads, as_int);
    a.check_exhausted();

    // The interface problem is a fixed two-subdomain, zero-overlap split;
    // only fill those in when the file did not set them explicitly.
    if (cfg.problem == ProblemKind::Interface) {
        if (!subdomains_given) cfg.subdomains = 2;
        if (!overlap_given) cfg.overlap = 0.0;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("parse_config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "problem = " << (c.problem == ProblemKind::Model ? "model" : "interface") << "\n";
    out << "alpha = " << c.alpha << "\n";
    out << "subdomains = " << c.subdomains << "\n";
    out << "overlap = " << c.overlap << "\n";
    out << "layers = " << c.layers << "\n";
    out << "units = " << c.units << "\n";
    out << "n_f = " << c.n_f << "\n";
    out << "n_g_per_edge = " << c.n_g_per_edge << "\n";
    out << "n_gamma = " << c.n_gamma << "\n";
    out << "batch_size = " << c.batch_size << "\n";
    out << "lr0 = " << c.lr0 << "\n";
    out << "decay_base = " << c.decay_base << "\n";
    out << "decay_every = " << c.decay_every << "\n";
    out << "tol_loss = " << c.tol_loss << "\n";
    out << "tol_loss_single = " << c.tol_loss_single << "\n";
    out << "eta = " << c.eta << "\n";
    out << "max_epochs = " << c.max_epochs << "\n";
    out << "max_epochs_single = " << c.max_epochs_single << "\n";
    out << "tol_gamma = " << c.tol_gamma << "\n";
    out << "tol_omega = " << c.tol_omega << "\n";
    out << "max_outer = " << c.max_outer << "\n";
    out << "seed = " << c.seed << "\n";
    out << "output = " << c.output << "\n";
    out << "threads = " << c.threads << "\n";
    return out.str();
}

}  // namespace pinndd
