#include "bsp/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "bsp/errors.hpp"
#include "bsp/stats.hpp"

namespace bsp {

std::string TailReport::to_json() const {
    nlohmann::json j;
    j["threshold"] = threshold;
    j["empirical_prob"] = empirical_prob;
    j["bound_claimed"] = bound_claimed;
    j["pass"] = pass;
    return j.dump();
}

double g_apply(GTag tag, double eps, double x) {
    switch (tag) {
        case GTag::square:
            return x * x;
        case GTag::abs:
            return std::fabs(x);
        case GTag::log_max_eps:
            return std::log(std::max(eps, x * x));
        case GTag::huber:
            return std::fabs(x) <= 1.0 ? 0.5 * x * x : std::fabs(x) - 0.5;
    }
    return 0.0;
}

double g_lipschitz(GTag tag, double eps) {
    switch (tag) {
        case GTag::square:
            throw ConstraintError("g_lipschitz: square has no global Lipschitz constant");
        case GTag::abs:
            return 1.0;
        case GTag::log_max_eps:
            // d/dx log(max(eps,x^2)) = 2/x for |x| >= sqrt(eps).
            return 2.0 / std::sqrt(eps);
        case GTag::huber:
            return 1.0;
    }
    return 0.0;
}

bool g_convex(GTag tag) { return tag != GTag::log_max_eps; }

TailReport simplex_norm_tail(const ProbeConfig& cfg) {
    if (cfg.n < 4) throw ConstraintError("simplex_norm_tail: n must be >= 4");
    if (cfg.trials < 1) throw ConstraintError("simplex_norm_tail: trials must be >= 1");
    const double c = cfg.constant("C", 3.0);
    const double root_n = std::sqrt(static_cast<double>(cfg.n));
    const double threshold = c / root_n;
    RngStream rng(cfg.seed, "simplex_norm_tail");
    std::size_t hits = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::vector<double> x = sample_simplex(cfg.n, rng);
        double nsq = 0.0;
        for (const double v : x) nsq += v * v;
        if (std::sqrt(nsq) >= threshold) ++hits;
    }
    TailReport out;
    out.threshold = threshold;
    out.empirical_prob = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    out.bound_claimed =
        std::max(std::exp(-0.1 * root_n), 5.0 / static_cast<double>(cfg.trials));
    out.pass = out.empirical_prob <= out.bound_claimed;
    return out;
}

double beta_interval_prob_interval(std::size_t n, double a, double b) {
    if (n < 2) throw ConstraintError("beta_interval_prob: n must be >= 2");
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (a > b) return 0.0;
    const double e = static_cast<double>(n) - 1.0;
    return std::pow(1.0 - a, e) - std::pow(1.0 - b, e);
}

double beta_interval_prob(std::size_t n, double B) {
    if (B <= 0.0) throw ConstraintError("beta_interval_prob: B must be > 0");
    const double nn = static_cast<double>(n);
    const double a = std::pow(nn, -B);
    const double b = std::min(B * std::log(nn), 1.0);
    return beta_interval_prob_interval(n, a, b);
}

double entry_law_test(const std::vector<double>& samples) {
    if (samples.size() < 100) throw ConstraintError("entry_law_test: need >= 100 samples");
    return ks_statistic(samples, exp1_cdf);
}

double density_ratio_probe(const std::vector<double>& samples_ds_row,
                           const std::vector<double>& samples_simplex, std::size_t bins) {
    if (samples_ds_row.size() < 1000 || samples_simplex.size() < 1000) {
        throw ConstraintError("density_ratio_probe: need >= 1000 samples on each side");
    }
    if (bins < 2) throw ConstraintError("density_ratio_probe: need >= 2 bins");
    // Equal-mass bin edges from the simplex sample quantiles.
    std::vector<double> ref = samples_simplex;
    std::sort(ref.begin(), ref.end());
    std::vector<double> edges(bins + 1);
    edges[0] = -std::numeric_limits<double>::infinity();
    edges[bins] = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < bins; ++k) {
        edges[k] = ref[(k * ref.size()) / bins];
    }
    auto bin_of = [&](double x) {
        const auto it = std::upper_bound(edges.begin() + 1, edges.end(), x);
        return static_cast<std::size_t>(it - edges.begin()) - 1;
    };
    std::vector<std::size_t> cnt_ds(bins, 0), cnt_ref(bins, 0);
    for (const double x : samples_ds_row) ++cnt_ds[std::min(bin_of(x), bins - 1)];
    for (const double x : ref) ++cnt_ref[std::min(bin_of(x), bins - 1)];
    double worst = 0.0;
    const double scale = static_cast<double>(ref.size()) /
                         static_cast<double>(samples_ds_row.size());
    for (std::size_t k = 0; k < bins; ++k) {
        if (cnt_ref[k] == 0) throw EmptyBin("density_ratio_probe: empty reference bin");
        const double ratio =
            scale * static_cast<double>(cnt_ds[k]) / static_cast<double>(cnt_ref[k]);
        worst = std::max(worst, ratio);
    }
    return worst;
}

namespace {

// Mean and stddev of the truncated exponential on [0, c] with density
// e^{-x}/(1-e^{-c}).
void truncated_exp_moments(double c, double* mu, double* sigma) {
    const double z = 1.0 - std::exp(-c);
    const double m1 = (1.0 - (1.0 + c) * std::exp(-c)) / z;
    const double m2 = (2.0 - (c * c + 2.0 * c + 2.0) * std::exp(-c)) / z;
    *mu = m1;
    *sigma = std::sqrt(m2 - m1 * m1);
}

}  // namespace

ProjectionReport projection_distance_probe(std::size_t d, std::size_t n,
                                           const std::vector<double>& f,
                                           const ProbeConfig& cfg) {
    if (d + 10 > n) throw ConstraintError("projection_distance_probe: need d <= n-10");
    if (!f.empty() && f.size() != n) {
        throw DimensionError("projection_distance_probe: f has wrong length");
    }
    const TruncatedExponentialSpec spec = TruncatedExponentialSpec::for_n(n);
    double mu = 0.0;
    double sigma = 0.0;
    truncated_exp_moments(spec.cutoff, &mu, &sigma);
    const double k_bound = spec.cutoff;
    const double t = cfg.constant("t", 2.0 * k_bound);

    RngStream rng(cfg.seed, "projection_distance_probe");
    // Orthonormal frame for V: d Gaussian columns, Gram-Schmidt, fixed once.
    std::vector<std::vector<double>> frame(d, std::vector<double>(n));
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < n; ++i) frame[k][i] = rng.normal();
        for (std::size_t p = 0; p < k; ++p) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += frame[k][i] * frame[p][i];
            for (std::size_t i = 0; i < n; ++i) frame[k][i] -= dot * frame[p][i];
        }
        double nsq = 0.0;
        for (const double v : frame[k]) nsq += v * v;
        const double inv = 1.0 / std::sqrt(nsq);
        for (double& v : frame[k]) v *= inv;
    }

    const double threshold = std::sqrt(2.0) * sigma * std::sqrt(static_cast<double>(d)) / 2.0 -
                             k_bound - t;
    std::size_t hits = 0;
    double mean_norm = 0.0;
    std::vector<double> w(n);
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (spec.sample(rng) - 1.0) + (f.empty() ? 0.0 : f[i]);
        }
        double nsq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += frame[k][i] * w[i];
            nsq += dot * dot;
        }
        const double norm = std::sqrt(nsq);
        mean_norm += norm;
        if (norm < threshold) ++hits;
    }
    ProjectionReport out;
    out.sigma = sigma;
    out.mean_norm = mean_norm / static_cast<double>(cfg.trials);
    out.tail.threshold = threshold;
    out.tail.empirical_prob = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    out.tail.bound_claimed = std::exp(-t * t / (16.0 * k_bound * k_bound)) +
                             5.0 / static_cast<double>(cfg.trials);
    out.tail.pass = out.tail.empirical_prob <= out.tail.bound_claimed;
    return out;
}

namespace {

double trace_g(GTag tag, double eps, const ComplexMatrix& m) {
    const std::vector<double> ev = hermitian_eigenvalues(m);
    double acc = 0.0;
    for (const double lam : ev) acc += g_apply(tag, eps, lam);
    return acc;
}

ComplexMatrix lincomb(double a, const ComplexMatrix& x, double b, const ComplexMatrix& y) {
    ComplexMatrix out(x.rows(), x.cols());
    for (std::size_t k = 0; k < out.re.entries.size(); ++k) {
        out.re.entries[k] = a * x.re.entries[k] + b * y.re.entries[k];
        out.im.entries[k] = a * x.im.entries[k] + b * y.im.entries[k];
    }
    return out;
}

}  // namespace

double trace_convexity_check(GTag tag, double eps, const ComplexMatrix& u,
                             const ComplexMatrix& v, const ComplexMatrix& f) {
    if (u.rows() != v.rows() || u.rows() != f.rows()) {
        throw DimensionError("trace_convexity_check: size mismatch");
    }
    const double lhs = trace_g(tag, eps, lincomb(1.0, u, 1.0, f)) +
                       trace_g(tag, eps, lincomb(1.0, v, 1.0, f));
    const ComplexMatrix mid = lincomb(0.5, u, 0.5, v);
    const double rhs = 2.0 * trace_g(tag, eps, lincomb(1.0, mid, 1.0, f));
    return lhs - rhs;
}

double trace_lipschitz_check(GTag tag, double eps, const ComplexMatrix& m1,
                             const ComplexMatrix& m2, const ComplexMatrix& f,
                             std::size_t n_scale) {
    if (m1.rows() != m2.rows() || m1.rows() != f.rows()) {
        throw DimensionError("trace_lipschitz_check: size mismatch");
    }
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(n_scale));
    const double t1 = trace_g(tag, eps, lincomb(inv_root, m1, 1.0, f));
    const double t2 = trace_g(tag, eps, lincomb(inv_root, m2, 1.0, f));
    double hs = 0.0;
    for (std::size_t k = 0; k < m1.re.entries.size(); ++k) {
        const double dr = m1.re.entries[k] - m2.re.entries[k];
        const double di = m1.im.entries[k] - m2.im.entries[k];
        hs += dr * dr + di * di;
    }
    if (hs == 0.0) return 0.0;
    return std::fabs(t1 - t2) / std::sqrt(hs);
}

LogDetSummary logdet_concentration_probe(const std::vector<DoublyStochasticMatrix>& samples,
                                         std::complex<double> z0, const TruncationConfig& cfg) {
    if (samples.size() < 10) throw ConstraintError("logdet_concentration_probe: need >= 10 samples");
    LogDetSummary out;
    std::vector<double> vals;
    vals.reserve(samples.size());
    for (const auto& x : samples) {
        const double scale = std::sqrt(static_cast<double>(x.n));
        const AugmentedMatrix aug = augment_minus_F(x, z0, scale);
        const SingularSpectrum sv = singular_values(aug.m);
        if (sv.sigma_min() <= 0.0) {
            ++out.excluded;
            continue;
        }
        vals.push_back(truncated_log_sum(sv, cfg));
    }
    if (vals.size() < 2) throw ConstraintError("logdet_concentration_probe: too few usable samples");
    out.used = vals.size();
    out.mean = mean(vals);
    out.stddev = stddev(vals);
    out.deviation = std::fabs(out.mean - circular_potential(z0));
    return out;
}

LogDetSummary logdet_concentration_probe(std::size_t n, std::complex<double> z0,
                                         std::size_t samples, const TruncationConfig& cfg,
                                         RngStream& rng) {
    ChainConfig chain(n);
    const std::vector<DoublyStochasticMatrix> draws = hit_and_run_chain(chain, samples, rng);
    return logdet_concentration_probe(draws, z0, cfg);
}

}  // namespace bsp
