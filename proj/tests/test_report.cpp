#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pinndd/report.hpp"

using namespace pinndd;

TEST_CASE("relative L2 error basic values") {
    const std::vector<double> u_star{1.0, 2.0, -3.0};
    CHECK(relative_l2_error(u_star, u_star) == 0.0);

    const std::vector<double> zeros(u_star.size(), 0.0);
    CHECK(relative_l2_error(zeros, u_star) == doctest::Approx(1.0).epsilon(1e-15));

    std::vector<double> scaled = u_star;
    for (auto& v : scaled) v *= 1.1;
    CHECK(relative_l2_error(scaled, u_star) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("relative L2 error is scale-covariant in the perturbation") {
    const std::vector<double> u_star{0.4, -1.2, 2.2, 0.9};
    const std::vector<double> delta{0.01, -0.03, 0.02, 0.005};
    for (double c : {1.0, 2.5, 10.0}) {
        std::vector<double> u_h(u_star.size());
        for (std::size_t i = 0; i < u_star.size(); ++i) u_h[i] = u_star[i] + c * delta[i];
        std::vector<double> u_1(u_star.size());
        for (std::size_t i = 0; i < u_star.size(); ++i) u_1[i] = u_star[i] + delta[i];
        CHECK(relative_l2_error(u_h, u_star) ==
              doctest::Approx(c * relative_l2_error(u_1, u_star)).epsilon(1e-12));
    }
}

TEST_CASE("relative L2 error rejects degenerate input") {
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0};
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS(relative_l2_error(a, b));
    CHECK_THROWS(relative_l2_error(a, zeros));
}

TEST_CASE("analytic factor") {
    CHECK(analytic_factor(0.0, std::numbers::pi) == 1.0);
    CHECK(analytic_factor(0.2, std::numbers::pi) == doctest::Approx(0.5335).epsilon(1e-4));
    CHECK(analytic_factor(0.4, std::numbers::pi) == doctest::Approx(0.2846).epsilon(1e-3));
    CHECK(analytic_factor(0.8, std::numbers::pi) == doctest::Approx(0.0810).epsilon(1e-3));
    double prev = analytic_factor(0.0, std::numbers::pi);
    for (double d = 0.05; d < 1.0; d += 0.05) {
        const double cur = analytic_factor(d, std::numbers::pi);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("observed rate on exact sequences") {
    CHECK(observed_rate({1.0, 0.5, 0.25, 0.125}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(observed_rate({0.3, 0.3, 0.3, 0.3}) == doctest::Approx(1.0).epsilon(1e-12));
    // First ratio (0.9) is an initialization transient and is skipped.
    CHECK(observed_rate({1.0, 0.9, 0.45, 0.225}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("observed rate preconditions") {
    CHECK_THROWS(observed_rate({1.0, 0.5}));
    CHECK_THROWS(observed_rate({1.0, 0.5, -0.25, 0.1}));
    CHECK_THROWS(observed_rate({1.0, 0.0, 0.25, 0.1}));
}

TEST_CASE("report round-trip is bit-exact") {
    RunReport rep;
    rep.config_echo = {"problem = model", "subdomains = 2"};
    rep.status = "converged-interface";
    rep.observed_rate = 0.51234567890123456;
    rep.analytic_rho = analytic_factor(0.2, std::numbers::pi);
    for (int i = 1; i <= 3; ++i)
        for (int s = 0; s < 2; ++s)
            rep.rows.push_back({i, s, 100 * i + s, 1e-3 / i, 0.1 / i, 0.2 / i,
                                std::pow(0.5, i) / 3.0, 1e-3 * std::pow(0.999, i),
                                123.456 * i});
    const std::string path = (std::filesystem::temp_directory_path() / "report_rt.csv").string();
    write_report(rep, path);
    const RunReport back = read_report(path);
    CHECK(back.config_echo == rep.config_echo);
    CHECK(back.status == rep.status);
    CHECK(back.observed_rate == rep.observed_rate);
    CHECK(back.analytic_rho == rep.analytic_rho);
    REQUIRE(back.rows.size() == rep.rows.size());
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        CHECK(back.rows[k].outer_iter == rep.rows[k].outer_iter);
        CHECK(back.rows[k].subdomain == rep.rows[k].subdomain);
        CHECK(back.rows[k].epochs == rep.rows[k].epochs);
        CHECK(back.rows[k].final_loss == rep.rows[k].final_loss);
        CHECK(back.rows[k].interface_rel_change == rep.rows[k].interface_rel_change);
        CHECK(back.rows[k].interior_rel_change == rep.rows[k].interior_rel_change);
        CHECK(back.rows[k].rel_l2_error == rep.rows[k].rel_l2_error);
        CHECK(back.rows[k].lr == rep.rows[k].lr);
        CHECK(back.rows[k].wall_ms == rep.rows[k].wall_ms);
    }
    std::filesystem::remove(path);
}

TEST_CASE("empty report writes header and footer only") {
    RunReport rep;
    rep.config_echo = {"problem = model"};
    const std::string path = (std::filesystem::temp_directory_path() / "report_empty.csv").string();
    write_report(rep, path);
    const RunReport back = read_report(path);
    CHECK(back.status == "not-run");
    CHECK(back.rows.empty());
    std::filesystem::remove(path);
}
