#include "bsp/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define BSP_X86 1
#else
#define BSP_X86 0
#endif

#if BSP_X86
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bsp::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_min_sd(lo, sh));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double sumsq_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d a = _mm256_loadu_pd(x + i);
        __m256d b = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void chord_avx2(const double* v, const double* c, std::size_t n, double lo, double hi,
                double eps, double* tmin, double* tmax) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vneps = _mm256_set1_pd(-eps);
    const __m256d pinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d upper = pinf;
    __m256d lower = ninf;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vc = _mm256_loadu_pd(c + i);
        const __m256d vv = _mm256_loadu_pd(v + i);
        const __m256d pos = _mm256_cmp_pd(vc, veps, _CMP_GT_OQ);
        const __m256d neg = _mm256_cmp_pd(vc, vneps, _CMP_LT_OQ);
        const __m256d act = _mm256_or_pd(pos, neg);
        // For c > 0 the upper bound is (hi-v)/c; for c < 0 it is (lo-v)/c.
        const __m256d num_hi = _mm256_sub_pd(_mm256_blendv_pd(vlo, vhi, pos), vv);
        const __m256d num_lo = _mm256_sub_pd(_mm256_blendv_pd(vhi, vlo, pos), vv);
        const __m256d up = _mm256_div_pd(num_hi, vc);
        const __m256d dn = _mm256_div_pd(num_lo, vc);
        upper = _mm256_min_pd(upper, _mm256_blendv_pd(pinf, up, act));
        lower = _mm256_max_pd(lower, _mm256_blendv_pd(ninf, dn, act));
    }
    double t0 = std::max(*tmin, hmax(lower));
    double t1 = std::min(*tmax, hmin(upper));
    for (; i < n; ++i) {
        const double ci = c[i];
        if (ci > eps) {
            t1 = std::min(t1, (hi - v[i]) / ci);
            t0 = std::max(t0, (lo - v[i]) / ci);
        } else if (ci < -eps) {
            t1 = std::min(t1, (lo - v[i]) / ci);
            t0 = std::max(t0, (hi - v[i]) / ci);
        }
    }
    *tmin = t0;
    *tmax = t1;
}

}  // namespace

const Ops& avx2() {
    static const Ops ops{"avx2", dot_avx2, sum_avx2, sumsq_avx2, axpy_avx2, chord_avx2};
    return ops;
}

bool have_avx2() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

}  // namespace bsp::kernels

#else

namespace bsp::kernels {
const Ops& avx2() { return scalar(); }
bool have_avx2() { return false; }
}  // namespace bsp::kernels

#endif
