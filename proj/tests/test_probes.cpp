#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "bsp/concentration.hpp"
#include "bsp/errors.hpp"
#include "bsp/samplers.hpp"
#include "bsp/spectral.hpp"
#include "bsp/stats.hpp"

using namespace bsp;
using cplx = std::complex<double>;

namespace {

ComplexMatrix random_hermitian(std::size_t n, RngStream& rng, double scale) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, {scale * rng.normal(), 0.0});
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v(scale * rng.normal(), scale * rng.normal());
            m.set(i, j, v);
            m.set(j, i, std::conj(v));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("g function library") {
    CHECK(g_apply(GTag::square, 0.0, 3.0) == doctest::Approx(9.0));
    CHECK(g_apply(GTag::abs, 0.0, -2.0) == doctest::Approx(2.0));
    CHECK(g_apply(GTag::log_max_eps, 0.01, 0.0) == doctest::Approx(std::log(0.01)));
    CHECK(g_apply(GTag::log_max_eps, 0.01, 2.0) == doctest::Approx(std::log(4.0)));
    CHECK(g_apply(GTag::huber, 0.0, 0.5) == doctest::Approx(0.125));
    CHECK(g_apply(GTag::huber, 0.0, -3.0) == doctest::Approx(2.5));

    CHECK(g_lipschitz(GTag::abs, 0.0) == doctest::Approx(1.0));
    CHECK(g_lipschitz(GTag::huber, 0.0) == doctest::Approx(1.0));
    CHECK(g_lipschitz(GTag::log_max_eps, 0.01) == doctest::Approx(20.0));
    CHECK_THROWS_AS(g_lipschitz(GTag::square, 0.0), ConstraintError);

    CHECK(g_convex(GTag::square));
    CHECK(g_convex(GTag::abs));
    CHECK(g_convex(GTag::huber));
    CHECK_FALSE(g_convex(GTag::log_max_eps));
}

TEST_CASE("simplex norm tail") {
    ProbeConfig cfg;
    cfg.n = 400;
    cfg.trials = 10000;
    cfg.seed = 1;
    const TailReport rep = simplex_norm_tail(cfg);
    CHECK(rep.pass);
    CHECK(rep.empirical_prob <= 1e-3);

    // C = 0 puts the threshold at zero: every draw is a hit.
    ProbeConfig zero = cfg;
    zero.trials = 100;
    zero.constants["C"] = 0.0;
    const TailReport all = simplex_norm_tail(zero);
    CHECK(all.empirical_prob == doctest::Approx(1.0));
    CHECK_FALSE(all.pass);

    const std::string json = rep.to_json();
    CHECK(json.find("empirical_prob") != std::string::npos);
}

TEST_CASE("simplex cross moment") {
    // E x_1 x_2 = 1/(n(n+1)) = 1/12 at n = 3.
    RngStream rng(2);
    double acc = 0.0;
    const int trials = 200000;
    for (int i = 0; i < trials; ++i) {
        const auto x = sample_simplex(3, rng);
        acc += x[0] * x[1];
    }
    CHECK(acc / trials == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("beta interval probabilities") {
    // n=2 means x_1 ~ U(0,1).
    CHECK(beta_interval_prob_interval(2, 0.3, 0.8) == doctest::Approx(0.5));
    // Closed form (1-a)^{n-1} - (1-b)^{n-1}.
    CHECK(beta_interval_prob_interval(10, 0.1, 0.5) ==
          doctest::Approx(std::pow(0.9, 9.0) - std::pow(0.5, 9.0)));
    // The probe instance at n=10, B=5 has b clamped to 1.
    CHECK(beta_interval_prob(10, 5.0) == doctest::Approx(std::pow(1.0 - 1e-5, 9.0)));

    // Monte Carlo agreement within 3 standard errors at n=10.
    RngStream rng(3);
    const int trials = 100000;
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
        const double x1 = sample_simplex(10, rng)[0];
        if (x1 >= 0.05 && x1 <= 0.2) ++hits;
    }
    const double p = beta_interval_prob_interval(10, 0.05, 0.2);
    const double se = std::sqrt(p * (1.0 - p) / trials);
    CHECK(std::fabs(static_cast<double>(hits) / trials - p) < 3.0 * se);
}

TEST_CASE("entry law test statistic") {
    RngStream rng(4);
    std::vector<double> good(10000);
    for (auto& v : good) v = rng.exponential();
    CHECK(entry_law_test(good) < 0.0163);  // 1% KS critical value at 10^4

    std::vector<double> flat(10000, 0.7);
    CHECK(entry_law_test(flat) > 0.4);
    CHECK_THROWS_AS(entry_law_test(std::vector<double>(10, 1.0)), ConstraintError);
}

TEST_CASE("density ratio probe") {
    RngStream rng(5);
    std::vector<double> a(20000), b(20000);
    for (auto& v : a) v = sample_simplex(50, rng)[0];
    for (auto& v : b) v = sample_simplex(50, rng)[0];
    const double same = density_ratio_probe(a, b, 10);
    CHECK(same > 0.8);
    CHECK(same < 1.25);

    // Shifted distribution concentrates in the top bin.
    std::vector<double> shifted = b;
    for (auto& v : shifted) v += 0.05;
    CHECK(density_ratio_probe(shifted, b, 10) > 2.0);
}

TEST_CASE("projection distance probe") {
    ProbeConfig cfg;
    cfg.n = 400;
    cfg.trials = 400;
    cfg.seed = 6;
    const auto r16 = projection_distance_probe(16, cfg.n, {}, cfg);
    CHECK(r16.mean_norm ==
          doctest::Approx(r16.sigma * 4.0).epsilon(0.05));
    CHECK(r16.tail.pass);

    const auto r32 = projection_distance_probe(32, cfg.n, {}, cfg);
    CHECK(r32.mean_norm / r16.mean_norm == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));

    CHECK_THROWS_AS(projection_distance_probe(395, 400, {}, cfg), ConstraintError);
}

TEST_CASE("trace convexity for the convex tags") {
    RngStream rng(7);
    for (GTag tag : {GTag::square, GTag::abs, GTag::huber}) {
        for (int rep = 0; rep < 500; ++rep) {
            const auto u = random_hermitian(6, rng, 1.0);
            const auto v = random_hermitian(6, rng, 1.0);
            const auto f = random_hermitian(6, rng, 0.5);
            CHECK(trace_convexity_check(tag, 0.01, u, v, f) >= -1e-9);
        }
    }
}

TEST_CASE("trace lipschitz bound") {
    RngStream rng(8);
    const double eps = 0.01;
    for (GTag tag : {GTag::abs, GTag::huber, GTag::log_max_eps}) {
        const double bound = 2.0 * g_lipschitz(tag, eps) + 1e-9;
        for (int rep = 0; rep < 500; ++rep) {
            const auto m1 = random_hermitian(6, rng, 1.0);
            const auto m2 = random_hermitian(6, rng, 1.0);
            const auto f = random_hermitian(6, rng, 0.5);
            CHECK(trace_lipschitz_check(tag, eps, m1, m2, f, 6) <= bound);
        }
    }
}

TEST_CASE("logdet concentration probe") {
    RngStream rng(9);
    const std::size_t n = 50;
    const cplx z0(2.0, 0.0);
    const auto cfg = TruncationConfig::for_n(n);
    const auto summary = logdet_concentration_probe(n, z0, 12, cfg, rng);
    CHECK(summary.used + summary.excluded == 12);
    CHECK(summary.used >= 10);
    CHECK(summary.deviation ==
          doctest::Approx(std::fabs(summary.mean - circular_potential(z0))).epsilon(1e-12));
    CHECK(summary.deviation < 0.5);
    CHECK(summary.stddev < 0.5);
}
