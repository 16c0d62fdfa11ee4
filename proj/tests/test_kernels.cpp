#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "bsp/kernels.hpp"
#include "bsp/rng.hpp"

using namespace bsp;

namespace {

std::vector<double> random_vec(std::size_t n, RngStream& rng, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

}  // namespace

TEST_CASE("scalar table basics") {
    const auto& ops = kernels::scalar();
    std::vector<double> x = {1.0, 2.0, 3.0};
    std::vector<double> y = {4.0, -1.0, 0.5};
    CHECK(ops.dot(x.data(), y.data(), 3) == doctest::Approx(1.0 * 4.0 - 2.0 + 1.5));
    CHECK(ops.sum(x.data(), 3) == doctest::Approx(6.0));
    CHECK(ops.sumsq(x.data(), 3) == doctest::Approx(14.0));
    ops.axpy(2.0, x.data(), y.data(), 3);
    CHECK(y[0] == doctest::Approx(6.0));
    CHECK(y[1] == doctest::Approx(3.0));
    CHECK(y[2] == doctest::Approx(6.5));
}

TEST_CASE("scalar chord intersects box constraints") {
    const auto& ops = kernels::scalar();
    // v + t*c in [0,1] per coordinate.
    std::vector<double> v = {0.5, 0.25};
    std::vector<double> c = {1.0, -0.5};
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    ops.chord(v.data(), c.data(), 2, 0.0, 1.0, 1e-14, &tmin, &tmax);
    // coord 0: t in [-0.5, 0.5]; coord 1: t in [-1.5, 0.5].
    CHECK(tmin == doctest::Approx(-0.5));
    CHECK(tmax == doctest::Approx(0.5));

    // Near-parallel coefficient is skipped entirely.
    std::vector<double> c2 = {1e-16, -0.5};
    tmin = -10.0;
    tmax = 10.0;
    ops.chord(v.data(), c2.data(), 2, 0.0, 1.0, 1e-14, &tmin, &tmax);
    CHECK(tmin == doctest::Approx(-1.5));
    CHECK(tmax == doctest::Approx(0.5));
}

TEST_CASE("avx2 matches scalar on random inputs") {
    if (!kernels::have_avx2()) return;
    const auto& sc = kernels::scalar();
    const auto& vx = kernels::avx2();
    RngStream rng(123);
    for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 15u, 64u, 257u}) {
        auto x = random_vec(n, rng);
        auto y = random_vec(n, rng);
        CHECK(vx.dot(x.data(), y.data(), n) ==
              doctest::Approx(sc.dot(x.data(), y.data(), n)).epsilon(1e-12));
        CHECK(vx.sum(x.data(), n) == doctest::Approx(sc.sum(x.data(), n)).epsilon(1e-12));
        CHECK(vx.sumsq(x.data(), n) == doctest::Approx(sc.sumsq(x.data(), n)).epsilon(1e-12));

        auto y1 = y;
        auto y2 = y;
        sc.axpy(0.37, x.data(), y1.data(), n);
        vx.axpy(0.37, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));

        auto v = random_vec(n, rng, 0.1, 0.9);
        auto c = random_vec(n, rng, -1.0, 1.0);
        if (n > 2) c[n / 2] = 0.0;  // exercise the parallel skip
        double a1 = -100.0, b1 = 100.0, a2 = -100.0, b2 = 100.0;
        sc.chord(v.data(), c.data(), n, 0.0, 1.0, 1e-14, &a1, &b1);
        vx.chord(v.data(), c.data(), n, 0.0, 1.0, 1e-14, &a2, &b2);
        CHECK(a1 == doctest::Approx(a2).epsilon(1e-12));
        CHECK(b1 == doctest::Approx(b2).epsilon(1e-12));
    }
}

TEST_CASE("active table is one of the two implementations") {
    const auto& act = kernels::active();
    const bool is_scalar = act.dot == kernels::scalar().dot;
    const bool is_avx2 = kernels::have_avx2() && act.dot == kernels::avx2().dot;
    CHECK((is_scalar || is_avx2));
    CHECK(act.name != nullptr);
}
