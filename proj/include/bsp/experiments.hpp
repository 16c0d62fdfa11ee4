#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bsp/samplers.hpp"
#include "bsp/spectral.hpp"

namespace bsp {

enum class Experiment {
    circular,
    quarter,
    potential,
    entry_law,
    singularity,
    hs_bound,
    smallball,
    concentration,
    transference_xcheck,
};

const std::vector<std::string>& experiment_tags();
std::string experiment_tag(Experiment e);
// Throws ParseError listing the valid tags.
Experiment parse_experiment(const std::string& tag);

struct ExperimentConfig {
    Experiment experiment = Experiment::circular;
    std::size_t n = 0;
    std::size_t samples = 0;
    std::complex<double> z0{0.0, 0.0};
    std::uint64_t seed = 42;
    ChainConfig chain;
    TruncationConfig truncation;
    std::string out_dir;

    // Fills n/samples/z0/chain defaults appropriate to the experiment.
    static ExperimentConfig defaults(Experiment e);

    std::string to_json() const;
    // Throws ParseError naming the missing field or bad tag.
    static ExperimentConfig from_json_string(const std::string& text);

    void validate() const;  // throws ConfigError
};

struct SeedRecord {
    std::string path;
    std::uint64_t seed = 0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SeedRecord> seeds;
    std::vector<std::map<std::string, double>> per_sample;
    std::map<std::string, double> aggregate;
    std::map<std::string, bool> verdicts;
    double wall_seconds = 0.0;
    std::string schema = "1";

    bool all_pass() const;
    std::string to_json() const;
};

// Runs the configured experiment; deterministic for a fixed seed. When
// cfg.out_dir is nonempty, writes report.json and the raw spectra CSVs
// there (IoError on failure).
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Returns the report path. Throws IoError when out_dir is unwritable.
std::string write_report(const ExperimentReport& report, const std::string& out_dir);
ExperimentConfig read_config(const std::string& path);

}  // namespace bsp
