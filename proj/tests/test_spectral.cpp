#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bsp/errors.hpp"
#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"
#include "bsp/spectral.hpp"
#include "bsp/stats.hpp"

using namespace bsp;
using cplx = std::complex<double>;

namespace {

DenseMatrix random_real(std::size_t n, RngStream& rng) {
    DenseMatrix m(n, n);
    for (auto& v : m.entries) v = rng.normal();
    return m;
}

ComplexMatrix random_complex(std::size_t n, RngStream& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, {rng.normal(), rng.normal()});
    }
    return m;
}

double match_distance(std::vector<cplx> a, std::vector<cplx> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (const auto& x : a) {
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(x - b[j]);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        worst = std::max(worst, bd);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

// Independent oracle for the disk log-potential: polar coordinates
// centered at z0 make the radial integral exact, leaving a smooth (or
// mildly kinked) 1-D integral over the angle.
double potential_quadrature(cplx z0) {
    const double c0 = std::norm(z0) - 1.0;
    auto prim = [](double s) { return s <= 0.0 ? 0.0 : s * s * (2.0 * std::log(s) - 1.0) / 4.0; };
    const std::size_t steps = 400000;
    const double h = 2.0 * M_PI / static_cast<double>(steps);
    auto value = [&](double phi) {
        const double b = 2.0 * (z0.real() * std::cos(phi) + z0.imag() * std::sin(phi));
        const double disc = b * b - 4.0 * c0;
        if (disc <= 0.0) return 0.0;
        const double root = std::sqrt(disc);
        const double s2 = (-b + root) / 2.0;
        if (s2 <= 0.0) return 0.0;
        const double s1 = std::max(0.0, (-b - root) / 2.0);
        return prim(s2) - prim(s1);
    };
    double acc = value(0.0) + value(2.0 * M_PI);
    for (std::size_t k = 1; k < steps; ++k) acc += (k % 2 ? 4.0 : 2.0) * value(h * k);
    return acc * h / 3.0 / M_PI;
}

}  // namespace

TEST_CASE("rotation matrix has eigenvalues i and -i") {
    DenseMatrix m(2, 2);
    m(0, 1) = -1.0;
    m(1, 0) = 1.0;
    const auto spec = eigenvalues(m);
    REQUIRE(spec.values.size() == 2);
    CHECK(match_distance(spec.values, {{0.0, 1.0}, {0.0, -1.0}}) < 1e-10);
}

TEST_CASE("triangular matrix eigenvalues are the diagonal") {
    DenseMatrix m(4, 4);
    m(0, 0) = 3.0; m(1, 1) = -1.0; m(2, 2) = 0.5; m(3, 3) = 2.0;
    m(0, 1) = 5.0; m(0, 3) = -2.0; m(1, 2) = 1.0; m(2, 3) = 7.0;
    const auto spec = eigenvalues(m);
    CHECK(match_distance(spec.values, {{3, 0}, {-1, 0}, {0.5, 0}, {2, 0}}) < 1e-9);
}

TEST_CASE("companion matrix of z^3 - 1") {
    DenseMatrix m(3, 3);
    m(0, 2) = 1.0;
    m(1, 0) = 1.0;
    m(2, 1) = 1.0;
    const auto spec = eigenvalues(m);
    const double s3 = std::sqrt(3.0) / 2.0;
    CHECK(match_distance(spec.values, {{1, 0}, {-0.5, s3}, {-0.5, -s3}}) < 1e-10);
}

TEST_CASE("real input spectrum closed under conjugation") {
    RngStream rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const auto spec = eigenvalues(random_real(12, rng));
        std::vector<cplx> conj;
        for (const auto& z : spec.values) conj.push_back(std::conj(z));
        CHECK(match_distance(spec.values, conj) < 1e-7);
    }
}

TEST_CASE("trace, determinant and similarity invariants") {
    RngStream rng(6);
    for (std::size_t n : {5u, 17u, 50u}) {
        const DenseMatrix m = random_real(n, rng);
        const auto spec = eigenvalues(m);
        cplx sum(0.0, 0.0);
        double tr = 0.0;
        for (const auto& z : spec.values) sum += z;
        for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
        CHECK(std::abs(sum - cplx(tr, 0.0)) < 1e-7 * std::max(1.0, frobenius_norm(m)));

        const auto sv = singular_values(m);
        double logdet = 0.0;
        for (double s : sv.values) logdet += std::log(s);
        const cplx det = complex_det(ComplexMatrix(m));
        CHECK(logdet == doctest::Approx(std::log(std::abs(det))).epsilon(1e-8));

        // Similarity by a well conditioned random perturbation of I.
        DenseMatrix p = DenseMatrix::identity(n);
        for (auto& v : p.entries) v += 0.1 * rng.uniform(-1.0, 1.0);
        const ComplexMatrix pinv = complex_inverse(ComplexMatrix(p));
        ComplexMatrix pm(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) acc += pinv.at(i, k) * m(k, j);
                pm.set(i, j, acc);
            }
        }
        ComplexMatrix sim(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) acc += pm.at(i, k) * p(k, j);
                sim.set(i, j, acc);
            }
        }
        CHECK(match_distance(spec.values, eigenvalues(sim).values) < 1e-6);
    }
}

TEST_CASE("symmetric and hermitian eigenvalues") {
    DenseMatrix s(2, 2);
    s(0, 0) = 2.0; s(0, 1) = 1.0; s(1, 0) = 1.0; s(1, 1) = 2.0;
    const auto ev = symmetric_eigenvalues(s);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));

    ComplexMatrix h(2, 2);
    h.set(0, 0, {1.0, 0.0});
    h.set(1, 1, {1.0, 0.0});
    h.set(0, 1, {0.0, 1.0});
    h.set(1, 0, {0.0, -1.0});
    const auto hv = hermitian_eigenvalues(h);
    REQUIRE(hv.size() == 2);
    CHECK(hv[0] == doctest::Approx(0.0));
    CHECK(hv[1] == doctest::Approx(2.0));

    // Cross-check against the general solver on a random Hermitian matrix.
    RngStream rng(7);
    ComplexMatrix r = random_complex(20, rng);
    ComplexMatrix herm(20, 20);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            herm.set(i, j, 0.5 * (r.at(i, j) + std::conj(r.at(j, i))));
        }
    }
    auto a = hermitian_eigenvalues(herm);
    auto b = eigenvalues(herm).values;
    std::vector<cplx> ac;
    for (double v : a) ac.push_back({v, 0.0});
    CHECK(match_distance(ac, b) < 1e-7);
}

TEST_CASE("singular values against a planted spectrum") {
    RngStream rng(8);
    for (std::size_t d : {40u, 99u}) {
        // A = U diag(s) V^T with U, V orthonormal from Gram-Schmidt.
        auto ortho = [&]() {
            std::vector<double> q(d * d);
            for (auto& v : q) v = rng.normal();
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t k = 0; k < j; ++k) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < d; ++i) dot += q[i * d + j] * q[i * d + k];
                    for (std::size_t i = 0; i < d; ++i) q[i * d + j] -= dot * q[i * d + k];
                }
                double nn = 0.0;
                for (std::size_t i = 0; i < d; ++i) nn += q[i * d + j] * q[i * d + j];
                nn = std::sqrt(nn);
                for (std::size_t i = 0; i < d; ++i) q[i * d + j] /= nn;
            }
            return q;
        };
        const auto u = ortho();
        const auto v = ortho();
        std::vector<double> s(d);
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = 5.0 * static_cast<double>(d - i) / static_cast<double>(d);
        }
        s[d - 1] = 1e-7;  // far below the Gram floor; refinement must recover it
        DenseMatrix a(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < d; ++k) acc += u[i * d + k] * s[k] * v[j * d + k];
                a(i, j) = acc;
            }
        }
        const auto sv = singular_values(a);
        REQUIRE(sv.values.size() == d);
        CHECK(sv.sigma_min() == doctest::Approx(1e-7).epsilon(1e-5));
        CHECK(sv.sigma_max() == doctest::Approx(5.0).epsilon(1e-9));
        std::vector<double> expect = s;
        std::sort(expect.begin(), expect.end(), std::greater<double>());
        for (std::size_t i = 0; i + 1 < d; ++i) {
            CHECK(sv.values[i] == doctest::Approx(expect[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("complex inverse residual") {
    RngStream rng(9);
    for (std::size_t n : {3u, 30u}) {
        const ComplexMatrix m = random_complex(n, rng);
        const ComplexMatrix inv = complex_inverse(m);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < n; ++k) acc += m.at(i, k) * inv.at(k, j);
                if (i == j) acc -= 1.0;
                worst = std::max(worst, std::abs(acc));
            }
        }
        CHECK(worst < 1e-10);
    }
    ComplexMatrix sing(2, 2);
    sing.set(0, 0, {1.0, 0.0});
    sing.set(1, 0, {1.0, 0.0});
    CHECK_THROWS_AS(complex_inverse(sing), SingularInput);
}

TEST_CASE("log_abs_det flags singular input") {
    DenseMatrix m(3, 3);
    m(0, 0) = 1.0; m(1, 1) = 2.0;  // last row zero
    const auto ld = log_abs_det(m);
    CHECK(ld.is_singular);
    const auto ok = log_abs_det(DenseMatrix::identity(3));
    CHECK_FALSE(ok.is_singular);
    CHECK(ok.value == doctest::Approx(0.0));
}

TEST_CASE("circular potential against polar quadrature") {
    for (double re : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double im : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            const cplx z0(re, im);
            CHECK(std::fabs(circular_potential(z0) - potential_quadrature(z0)) < 1e-6);
        }
    }
    // Closed forms at the grid anchors.
    CHECK(circular_potential({0.0, 0.0}) == doctest::Approx(-0.5));
    CHECK(circular_potential({2.0, 0.0}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("esd distance on exact disk samples") {
    RngStream rng(10);
    ComplexSpectrum spec;
    for (int i = 0; i < 20000; ++i) {
        const double r = std::sqrt(rng.uniform01());
        const double th = 2.0 * M_PI * rng.uniform01();
        spec.values.push_back({r * std::cos(th), r * std::sin(th)});
    }
    const auto rep = esd_circular_distance(spec);
    CHECK(rep.sample_size == 20000);
    CHECK(rep.radial_ks < 0.03);
    CHECK(rep.angular_ks < 0.03);
    CHECK(rep.marginal_ks < 0.03);
}

TEST_CASE("quarter circle cdf and distance") {
    CHECK(quarter_circle_cdf(0.0) == doctest::Approx(0.0));
    CHECK(quarter_circle_cdf(2.0) == doctest::Approx(1.0));
    // Derivative matches the density by central differences.
    const double h = 1e-5;
    for (double x = 0.1; x < 1.95; x += 0.1) {
        const double der = (quarter_circle_cdf(x + h) - quarter_circle_cdf(x - h)) / (2.0 * h);
        CHECK(std::fabs(der - std::sqrt(4.0 - x * x) / M_PI) < 1e-6);
    }
    // Inverse-CDF grid should sit extremely close to the law.
    SingularSpectrum sv;
    const std::size_t n = 1000;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        double lo = 0.0, hi = 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (quarter_circle_cdf(mid) < target ? lo : hi) = mid;
        }
        sv.values.push_back(0.5 * (lo + hi));
    }
    CHECK(quarter_circle_distance(sv) < 0.001);
}

TEST_CASE("truncated log sum") {
    TruncationConfig cfg;
    cfg.epsilon = 1e-4;
    SingularSpectrum sv;
    sv.values = {2.0, 1.0, 1e-9};
    CHECK(truncated_log_sum(sv, cfg) == doctest::Approx(std::log(2.0) / 3.0));
    // Epsilon below min sigma^2 reduces to log|det|/n.
    cfg.epsilon = 1e-20;
    const double all = truncated_log_sum(sv, cfg);
    CHECK(all == doctest::Approx((std::log(2.0) + std::log(1e-9)) / 3.0));
    const auto forn = TruncationConfig::for_n(256);
    CHECK(forn.epsilon == doctest::Approx(0.25));
    CHECK(forn.delta == doctest::Approx(0.25));
}

TEST_CASE("count in interval") {
    const std::vector<double> v = {0.1, 0.2, 0.5};
    CHECK(count_in_interval(v, 0.0, 0.3) == 2);
    CHECK(count_in_interval(v, 0.2, 0.2) == 1);
    CHECK(count_in_interval(v, 0.6, 0.9) == 0);
}

TEST_CASE("stieltjes transform values and lower bound") {
    CHECK(std::abs(stieltjes_transform({1.0}, {0.0, 1.0}) - cplx(0.5, 0.5)) < 1e-14);
    CHECK(std::abs(stieltjes_transform({-1.0, 1.0}, {0.0, 0.0})) < 1e-14);
    CHECK_THROWS_AS(stieltjes_transform({1.0}, {1.0, 0.0}), PoleTooClose);

    // Im s(x + i*eta) >= (4/5) N_J / (eta n) with J centered at x and
    // eta = |J|.
    RngStream rng(11);
    const std::size_t n = 300;
    std::vector<double> spec(n);
    for (auto& v : spec) v = rng.uniform(0.0, 2.0);
    const double x = 1.0;
    const double eta = 0.3;
    const double nj = static_cast<double>(count_in_interval(spec, x - eta / 2.0, x + eta / 2.0));
    const cplx s = stieltjes_transform(spec, {x, eta});
    CHECK(s.imag() >= 0.8 * nj / (eta * static_cast<double>(n)));
}
