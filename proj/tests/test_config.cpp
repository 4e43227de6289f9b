#include <doctest.h>

#include <string>

#include "pinndd/config.hpp"
#include "pinndd/errors.hpp"

using namespace pinndd;

TEST_CASE("defaults are filled for omitted keys") {
    const ExperimentConfig cfg =
        parse_config_text("problem = model\nsubdomains = 2\noverlap = 0.2\n");
    CHECK(cfg.problem == ProblemKind::Model);
    CHECK(cfg.subdomains == 2);
    CHECK(cfg.overlap == 0.2);
    CHECK(cfg.batch_size == 64);
    CHECK(cfg.tol_gamma == 0.01);
    CHECK(cfg.tol_omega == 0.01);
    CHECK(cfg.tol_loss == 5e-3);
    CHECK(cfg.eta == 100);
    CHECK(cfg.max_epochs == 10000);
    CHECK(cfg.max_epochs_single == 50000);
    CHECK(cfg.threads == 1);
    CHECK_FALSE(cfg.parallel());
}

TEST_CASE("scientific notation and comments parse") {
    const ExperimentConfig cfg =
        parse_config_text("tol_gamma = 1e-2  # the outer interface tolerance\n");
    CHECK(cfg.tol_gamma == 0.01);
}

TEST_CASE("validation errors name the offending key") {
    CHECK_THROWS_WITH_AS(parse_config_text("overlap = -0.1\n"),
                         doctest::Contains("overlap"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("lr0 = 0\n"), doctest::Contains("lr0"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("batch_size = 0\n"),
                         doctest::Contains("batch_size"), ConfigError);
}

TEST_CASE("unknown keys are rejected with the line number") {
    CHECK_THROWS_WITH_AS(parse_config_text("problem = model\nbananas = 7\n"),
                         doctest::Contains("bananas"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("problem = model\nbananas = 7\n"),
                         doctest::Contains(":2"), ConfigError);
}

TEST_CASE("unparsable values are rejected") {
    CHECK_THROWS_WITH_AS(parse_config_text("overlap = wide\n"),
                         doctest::Contains("overlap"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("problem = heat\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("seed = 1\nseed = 2\n"), ConfigError);
}

TEST_CASE("interface problem fills its fixed decomposition") {
    const ExperimentConfig cfg = parse_config_text("problem = interface\nalpha = 20\n");
    CHECK(cfg.subdomains == 2);
    CHECK(cfg.overlap == 0.0);
    CHECK(cfg.alpha == 20.0);
    // Explicitly contradicting the fixed split is an error, not ignored.
    CHECK_THROWS_AS(parse_config_text("problem = interface\nsubdomains = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("problem = interface\noverlap = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("problem = interface\nalpha = -1\n"), ConfigError);
}

TEST_CASE("config round-trip") {
    ExperimentConfig cfg = parse_config_text(
        "problem = model\nsubdomains = 4\noverlap = 0.05\nlayers = 2\nunits = 33\n"
        "n_f = 1234\nlr0 = 0.002\ndecay_base = 0.995\ndecay_every = 7\nseed = 99\n"
        "output = out.csv\nthreads = 4\n");
    const ExperimentConfig back = parse_config_text(serialize_config(cfg));
    CHECK(serialize_config(back) == serialize_config(cfg));
    CHECK(back.subdomains == 4);
    CHECK(back.overlap == 0.05);
    CHECK(back.units == 33);
    CHECK(back.lr0 == 0.002);
    CHECK(back.seed == 99);
    CHECK(back.output == "out.csv");
    CHECK(back.parallel());
}
