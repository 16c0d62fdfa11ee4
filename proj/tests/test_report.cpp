#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "bsp/errors.hpp"
#include "bsp/experiments.hpp"

using namespace bsp;

TEST_CASE("experiment tags round trip") {
    const auto& tags = experiment_tags();
    CHECK(tags.size() == 9);
    for (const auto& t : tags) {
        CHECK(experiment_tag(parse_experiment(t)) == t);
    }
    CHECK(experiment_tag(Experiment::entry_law) == "entry-law");
    try {
        parse_experiment("bogus");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        // The message lists every valid tag.
        const std::string msg = e.what();
        for (const auto& t : tags) CHECK(msg.find(t) != std::string::npos);
    }
}

TEST_CASE("defaults per experiment") {
    const auto circ = ExperimentConfig::defaults(Experiment::circular);
    CHECK(circ.n == 200);
    CHECK(circ.samples == 10);
    const auto tx = ExperimentConfig::defaults(Experiment::transference_xcheck);
    CHECK(tx.n == 3);
    const auto sing = ExperimentConfig::defaults(Experiment::singularity);
    CHECK(sing.n == 100);
}

TEST_CASE("config json round trip") {
    ExperimentConfig cfg = ExperimentConfig::defaults(Experiment::potential);
    cfg.seed = 777;
    cfg.z0 = {1.5, -0.25};
    cfg.chain.burn_in = 123;
    cfg.chain.thin = 45;
    cfg.out_dir = "/tmp/somewhere";
    const auto back = ExperimentConfig::from_json_string(cfg.to_json());
    CHECK(back.experiment == cfg.experiment);
    CHECK(back.n == cfg.n);
    CHECK(back.samples == cfg.samples);
    CHECK(back.seed == cfg.seed);
    CHECK(back.z0 == cfg.z0);
    CHECK(back.chain.burn_in == cfg.chain.burn_in);
    CHECK(back.chain.thin == cfg.chain.thin);
    CHECK(back.out_dir == cfg.out_dir);
}

TEST_CASE("config parse errors name the problem") {
    try {
        ExperimentConfig::from_json_string(R"({"experiment":"circular"})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("n") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::from_json_string(R"({"experiment":"warp","n":3})"),
                    ParseError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_string("["), ParseError);
}

TEST_CASE("small experiment runs and reports") {
    ExperimentConfig cfg = ExperimentConfig::defaults(Experiment::transference_xcheck);
    cfg.seed = 31;
    const auto report = run_experiment(cfg);
    CHECK(report.schema == "1");
    CHECK(report.wall_seconds >= 0.0);
    CHECK_FALSE(report.seeds.empty());
    for (const auto& s : report.seeds) CHECK_FALSE(s.path.empty());
    CHECK_FALSE(report.aggregate.empty());
    CHECK_FALSE(report.verdicts.empty());
    CHECK(report.all_pass());

    const std::string json = report.to_json();
    CHECK(json.find("\"schema\"") != std::string::npos);
    CHECK(json.find("\"aggregate\"") != std::string::npos);

    // Same config and seed reproduce the statistics exactly.
    const auto again = run_experiment(cfg);
    CHECK(again.aggregate == report.aggregate);
    CHECK(again.verdicts == report.verdicts);
}

TEST_CASE("invalid config rejected") {
    ExperimentConfig cfg = ExperimentConfig::defaults(Experiment::transference_xcheck);
    cfg.n = 9;  // rejection sampling infeasible
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("report and config files") {
    ExperimentConfig cfg = ExperimentConfig::defaults(Experiment::transference_xcheck);
    cfg.samples = 200;
    const auto report = run_experiment(cfg);

    const std::string dir = "/tmp/bsp_report_test";
    std::remove((dir + "/report.json").c_str());
    const std::string path = write_report(report, dir);
    std::ifstream in(path);
    REQUIRE(in.good());

    // Round trip the config through a file.
    const std::string cfg_path = dir + "/config.json";
    {
        std::ofstream out(cfg_path);
        out << cfg.to_json();
    }
    const auto back = read_config(cfg_path);
    CHECK(back.n == cfg.n);
    CHECK(back.samples == cfg.samples);

    CHECK_THROWS_AS(read_config("/tmp/definitely_missing_bsp_config.json"), IoError);
    CHECK_THROWS_AS(write_report(report, "/proc/no_such_place/x"), IoError);
}
