#include "bsp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "bsp/birkhoff.hpp"
#include "bsp/concentration.hpp"
#include "bsp/errors.hpp"
#include "bsp/littlewood_offord.hpp"
#include "bsp/stats.hpp"

namespace bsp {
namespace {

const std::vector<std::pair<Experiment, std::string>>& tag_table() {
    static const std::vector<std::pair<Experiment, std::string>> table = {
        {Experiment::circular, "circular"},
        {Experiment::quarter, "quarter"},
        {Experiment::potential, "potential"},
        {Experiment::entry_law, "entry-law"},
        {Experiment::singularity, "singularity"},
        {Experiment::hs_bound, "hs-bound"},
        {Experiment::smallball, "smallball"},
        {Experiment::concentration, "concentration"},
        {Experiment::transference_xcheck, "transference-xcheck"},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& experiment_tags() {
    static const std::vector<std::string> tags = [] {
        std::vector<std::string> t;
        for (const auto& [e, tag] : tag_table()) t.push_back(tag);
        return t;
    }();
    return tags;
}

std::string experiment_tag(Experiment e) {
    for (const auto& [exp, tag] : tag_table()) {
        if (exp == e) return tag;
    }
    throw ConfigError("experiment_tag: unknown experiment value");
}

Experiment parse_experiment(const std::string& tag) {
    for (const auto& [exp, t] : tag_table()) {
        if (t == tag) return exp;
    }
    std::string msg = "unknown experiment tag '" + tag + "'; valid tags:";
    for (const auto& t : experiment_tags()) msg += " " + t;
    throw ParseError(msg);
}

ExperimentConfig ExperimentConfig::defaults(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    switch (e) {
        case Experiment::circular:
        case Experiment::quarter:
            cfg.n = 200;
            cfg.samples = 10;
            break;
        case Experiment::potential:
            cfg.n = 200;
            cfg.samples = 5;
            cfg.z0 = {2.0, 0.0};
            break;
        case Experiment::entry_law:
            cfg.n = 100;
            cfg.samples = 500;
            break;
        case Experiment::singularity:
            cfg.n = 100;
            cfg.samples = 200;
            cfg.z0 = {0.0, 0.0};
            break;
        case Experiment::hs_bound:
            cfg.n = 100;
            cfg.samples = 200;
            break;
        case Experiment::smallball:
            cfg.n = 24;
            cfg.samples = 1;
            break;
        case Experiment::concentration:
            cfg.n = 200;
            cfg.samples = 20;
            cfg.z0 = {2.0, 0.0};
            break;
        case Experiment::transference_xcheck:
            cfg.n = 3;
            cfg.samples = 5000;
            break;
    }
    cfg.chain = ChainConfig(cfg.n);
    cfg.truncation = TruncationConfig::for_n(cfg.n);
    return cfg;
}

void ExperimentConfig::validate() const {
    if (n < 2) throw ConfigError("config: n must be >= 2");
    if (samples < 1) throw ConfigError("config: samples must be >= 1");
    if (!std::isfinite(z0.real()) || !std::isfinite(z0.imag())) {
        throw ConfigError("config: z0 must be finite");
    }
    if (chain.n != n) throw ConfigError("config: chain.n must equal n");
    if (truncation.epsilon <= 0.0 || truncation.delta <= 0.0) {
        throw ConfigError("config: truncation epsilon/delta must be positive");
    }
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment_tag(experiment);
    j["n"] = n;
    j["samples"] = samples;
    j["z0"] = {z0.real(), z0.imag()};
    j["seed"] = seed;
    j["burn_in"] = chain.burn_in;
    j["thin"] = chain.thin;
    j["chord_tol"] = chain.chord_tol;
    j["epsilon"] = truncation.epsilon;
    j["delta"] = truncation.delta;
    j["c_exponent"] = truncation.c_exponent;
    j["out_dir"] = out_dir;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: bad JSON: ") + e.what());
    }
    auto require = [&](const char* field) -> const nlohmann::json& {
        if (!j.contains(field)) {
            throw ParseError(std::string("config: missing field \"") + field + "\"");
        }
        return j[field];
    };
    ExperimentConfig cfg = defaults(parse_experiment(require("experiment").get<std::string>()));
    try {
        cfg.n = require("n").get<std::size_t>();
        cfg.samples = require("samples").get<std::size_t>();
        cfg.seed = require("seed").get<std::uint64_t>();
        if (j.contains("z0")) {
            cfg.z0 = {j["z0"].at(0).get<double>(), j["z0"].at(1).get<double>()};
        }
        cfg.chain = ChainConfig(cfg.n);
        if (j.contains("burn_in")) cfg.chain.burn_in = j["burn_in"].get<std::size_t>();
        if (j.contains("thin")) cfg.chain.thin = j["thin"].get<std::size_t>();
        if (j.contains("chord_tol")) cfg.chain.chord_tol = j["chord_tol"].get<double>();
        cfg.truncation = TruncationConfig::for_n(cfg.n);
        if (j.contains("epsilon")) cfg.truncation.epsilon = j["epsilon"].get<double>();
        if (j.contains("delta")) cfg.truncation.delta = j["delta"].get<double>();
        if (j.contains("c_exponent")) cfg.truncation.c_exponent = j["c_exponent"].get<double>();
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: malformed field: ") + e.what());
    }
    return cfg;
}

bool ExperimentReport::all_pass() const {
    if (verdicts.empty()) return false;
    for (const auto& [name, ok] : verdicts) {
        if (!ok) return false;
    }
    return true;
}

std::string ExperimentReport::to_json() const {
    nlohmann::json j;
    j["schema"] = schema;
    j["config"] = nlohmann::json::parse(config.to_json());
    nlohmann::json seeds_j = nlohmann::json::array();
    for (const auto& s : seeds) seeds_j.push_back({{"path", s.path}, {"seed", s.seed}});
    j["seeds"] = seeds_j;
    nlohmann::json per = nlohmann::json::array();
    for (const auto& row : per_sample) per.push_back(row);
    j["per_sample"] = per;
    j["aggregate"] = aggregate;
    j["verdicts"] = verdicts;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

namespace {

void persist_matrix(const std::string& out_dir, const std::string& name, const DenseMatrix& m) {
    if (out_dir.empty()) return;
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << m.to_csv();
    if (!out) throw IoError("write failed for " + path);
}

std::vector<DoublyStochasticMatrix> draw_chain(const ExperimentConfig& cfg, std::size_t count,
                                               ExperimentReport& report) {
    RngStream root(cfg.seed);
    RngStream chain_rng = root.split("chain");
    report.seeds.push_back({chain_rng.path(), chain_rng.seed()});
    return hit_and_run_chain(cfg.chain, count, chain_rng);
}

DenseMatrix scaled_bar(const DoublyStochasticMatrix& x) {
    const double root = std::sqrt(static_cast<double>(x.n));
    DenseMatrix m = reduce_bar(x).m;
    for (double& v : m.entries) v *= root;
    return m;
}

ComplexMatrix shifted_bar(const DoublyStochasticMatrix& x, std::complex<double> z0) {
    ComplexMatrix m(scaled_bar(x));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m.re(i, i) -= z0.real();
        m.im(i, i) -= z0.imag();
    }
    return m;
}

void run_circular(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    std::vector<std::complex<double>> pooled;
    for (const auto& x : draws) {
        const ComplexSpectrum spec = eigenvalues(scaled_bar(x));
        pooled.insert(pooled.end(), spec.values.begin(), spec.values.end());
    }
    ComplexSpectrum all;
    all.values = pooled;
    const DistanceReport dist = esd_circular_distance(all);
    report.aggregate["radial_ks"] = dist.radial_ks;
    report.aggregate["angular_ks"] = dist.angular_ks;
    report.aggregate["marginal_ks"] = dist.marginal_ks;
    report.aggregate["pooled_eigenvalues"] = static_cast<double>(dist.sample_size);
    report.verdicts["radial_ks_below_0.08"] = dist.radial_ks < 0.08;
    report.verdicts["angular_ks_below_0.08"] = dist.angular_ks < 0.08;
    report.verdicts["marginal_ks_below_0.08"] = dist.marginal_ks < 0.08;
    DenseMatrix dump(pooled.size(), 2);
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        dump(i, 0) = pooled[i].real();
        dump(i, 1) = pooled[i].imag();
    }
    persist_matrix(cfg.out_dir, "eigenvalues.csv", dump);
}

void run_quarter(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    std::vector<double> pooled;
    for (const auto& x : draws) {
        const SingularSpectrum sv = singular_values(center_and_scale(x));
        pooled.insert(pooled.end(), sv.values.begin(), sv.values.end());
    }
    std::sort(pooled.begin(), pooled.end(), std::greater<double>());
    SingularSpectrum all;
    all.values = pooled;
    const double ks = quarter_circle_distance(all);
    report.aggregate["quarter_ks"] = ks;
    report.aggregate["pooled_values"] = static_cast<double>(pooled.size());
    report.verdicts["quarter_ks_below_0.08"] = ks < 0.08;
    DenseMatrix dump(pooled.size(), 1);
    for (std::size_t i = 0; i < pooled.size(); ++i) dump(i, 0) = pooled[i];
    persist_matrix(cfg.out_dir, "singular_values.csv", dump);
}

void run_potential(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    const double target = circular_potential(cfg.z0);
    double worst = 0.0;
    bool all_finite = true;
    for (const auto& x : draws) {
        const LogAbsDet ld = log_abs_det(shifted_bar(x, cfg.z0));
        std::map<std::string, double> row;
        if (ld.is_singular) {
            all_finite = false;
            row["singular"] = 1.0;
        } else {
            const double val = ld.value / static_cast<double>(cfg.n);
            row["log_potential"] = val;
            row["deviation"] = std::fabs(val - target);
            worst = std::max(worst, row["deviation"]);
        }
        report.per_sample.push_back(std::move(row));
    }
    report.aggregate["target_f_z0"] = target;
    report.aggregate["max_deviation"] = worst;
    report.verdicts["all_samples_finite"] = all_finite;
    report.verdicts["max_deviation_below_0.1"] = all_finite && worst < 0.1;
}

void run_entry_law(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    std::vector<double> scaled;
    scaled.reserve(draws.size());
    for (const auto& x : draws) {
        scaled.push_back(static_cast<double>(cfg.n) * x.m(0, 0));
    }
    const double ks = entry_law_test(scaled);
    report.aggregate["entry_ks"] = ks;
    report.verdicts["entry_ks_below_0.1"] = ks < 0.1;
    DenseMatrix dump(scaled.size(), 1);
    for (std::size_t i = 0; i < scaled.size(); ++i) dump(i, 0) = scaled[i];
    persist_matrix(cfg.out_dir, "entry_samples.csv", dump);
}

void run_singularity(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    const double floor = std::pow(static_cast<double>(cfg.n), -10.0);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : draws) {
        const SingularSpectrum sv = singular_values(shifted_bar(x, cfg.z0));
        worst = std::min(worst, sv.sigma_min());
        report.per_sample.push_back({{"sigma_min", sv.sigma_min()}});
    }
    report.aggregate["min_sigma_min"] = worst;
    report.aggregate["floor_n_pow_minus_10"] = floor;
    report.verdicts["sigma_min_above_floor"] = worst > floor;
}

void run_hs_bound(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    std::vector<double> vals;
    vals.reserve(draws.size());
    for (const auto& x : draws) vals.push_back(hs_norm_sq_bar(x));
    const double m = mean(vals);
    const double worst = *std::max_element(vals.begin(), vals.end());
    report.aggregate["mean"] = m;
    report.aggregate["max"] = worst;
    report.verdicts["mean_in_band"] = m >= 1.5 && m <= 2.5;
    report.verdicts["max_below_4"] = worst < 4.0;
}

void run_smallball(const ExperimentConfig&, ExperimentReport& report) {
    bool ok = true;
    for (std::size_t m = 10; m <= 24; m += 2) {
        const std::vector<double> b(m, 1.0);
        const SmallBallResult r = small_ball_exact(b, 0.0, Atom::bernoulli_pm1);
        const double scaled = r.rho * std::sqrt(static_cast<double>(m));
        report.per_sample.push_back(
            {{"n", static_cast<double>(m)}, {"rho", r.rho}, {"rho_sqrt_n", scaled}});
        if (scaled < 0.75 || scaled > 0.85) ok = false;
    }
    report.verdicts["erdos_band"] = ok;
}

void run_concentration(const ExperimentConfig& cfg, ExperimentReport& report) {
    const auto draws = draw_chain(cfg, cfg.samples, report);
    const double root = std::sqrt(static_cast<double>(cfg.n));
    std::vector<double> vals;
    std::size_t nj_pass = 0;
    const double j_lo = 1.0;
    const double j_hi = 1.2;
    const double nj_bound = 10.0 * static_cast<double>(cfg.n) * (j_hi - j_lo);
    for (const auto& x : draws) {
        const AugmentedMatrix aug = augment_minus_F(x, cfg.z0, root);
        const SingularSpectrum sv = singular_values(aug.m);
        vals.push_back(truncated_log_sum(sv, cfg.truncation));
        std::vector<double> lambda(sv.values.size());
        for (std::size_t i = 0; i < sv.values.size(); ++i) lambda[i] = sv.values[i] * sv.values[i];
        const std::size_t nj = count_in_interval(lambda, j_lo, j_hi);
        if (static_cast<double>(nj) <= nj_bound) ++nj_pass;
        report.per_sample.push_back(
            {{"truncated_log_sum", vals.back()}, {"N_J", static_cast<double>(nj)}});
    }
    const double m = mean(vals);
    const double sd = stddev(vals);
    const double target = circular_potential(cfg.z0);
    report.aggregate["mean"] = m;
    report.aggregate["stddev"] = sd;
    report.aggregate["target_f_z0"] = target;
    report.aggregate["deviation"] = std::fabs(m - target);
    report.verdicts["stddev_below_0.05"] = sd < 0.05;
    report.verdicts["mean_near_f_z0"] = std::fabs(m - target) < 0.1;
    report.verdicts["N_J_bound"] = nj_pass == draws.size();
}

void run_transference(const ExperimentConfig& cfg, ExperimentReport& report) {
    if (cfg.n > 4) throw ConfigError("transference-xcheck: n must be <= 4");
    RngStream root(cfg.seed);
    RngStream rej_rng = root.split("rejection");
    RngStream chain_rng = root.split("chain");
    report.seeds.push_back({rej_rng.path(), rej_rng.seed()});
    report.seeds.push_back({chain_rng.path(), chain_rng.seed()});
    const std::size_t d = cfg.n - 1;
    std::vector<std::vector<double>> rej(d * d), har(d * d);
    for (std::size_t k = 0; k < cfg.samples; ++k) {
        const auto x = rejection_sample_ds(cfg.n, 1000000, rej_rng);
        if (!x) throw NoConvergence("transference-xcheck: rejection sampler exhausted");
        const CornerBlock block = phi_project(*x);
        for (std::size_t c = 0; c < d * d; ++c) rej[c].push_back(block.block.entries[c]);
    }
    const auto draws = hit_and_run_chain(cfg.chain, cfg.samples, chain_rng);
    for (const auto& x : draws) {
        const CornerBlock block = phi_project(x);
        for (std::size_t c = 0; c < d * d; ++c) har[c].push_back(block.block.entries[c]);
    }
    double worst = 0.0;
    for (std::size_t c = 0; c < d * d; ++c) {
        const double ks = ks_two_sample(rej[c], har[c]);
        report.per_sample.push_back({{"coordinate", static_cast<double>(c)}, {"ks", ks}});
        worst = std::max(worst, ks);
    }
    report.aggregate["max_coordinate_ks"] = worst;
    report.verdicts["two_sampler_ks_below_0.05"] = worst < 0.05;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    const auto start = std::chrono::steady_clock::now();
    switch (cfg.experiment) {
        case Experiment::circular:
            run_circular(cfg, report);
            break;
        case Experiment::quarter:
            run_quarter(cfg, report);
            break;
        case Experiment::potential:
            run_potential(cfg, report);
            break;
        case Experiment::entry_law:
            run_entry_law(cfg, report);
            break;
        case Experiment::singularity:
            run_singularity(cfg, report);
            break;
        case Experiment::hs_bound:
            run_hs_bound(cfg, report);
            break;
        case Experiment::smallball:
            run_smallball(cfg, report);
            break;
        case Experiment::concentration:
            run_concentration(cfg, report);
            break;
        case Experiment::transference_xcheck:
            run_transference(cfg, report);
            break;
    }
    const auto end = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(end - start).count();
    if (!cfg.out_dir.empty()) write_report(report, cfg.out_dir);
    return report;
}

std::string write_report(const ExperimentReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    const std::string path = (fs::path(out_dir) / "report.json").string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << report.to_json() << "\n";
    if (!out) throw IoError("write failed for " + path);
    return path;
}

ExperimentConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return ExperimentConfig::from_json_string(text);
}

}  // namespace bsp
