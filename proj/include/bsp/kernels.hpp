#pragma once

#include <cstddef>

// Data-parallel inner loops used by the samplers and statistics code.
// Every kernel has a scalar reference implementation and (on x86-64)
// an AVX2 variant; the active table is picked once at startup from
// cpuid, overridable with BSP_SIMD=scalar|avx2.

namespace bsp::kernels {

struct Ops {
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*sumsq)(const double* x, std::size_t n);
    // y += a*x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // Intersect [tmin,tmax] with {t : lo <= v[i] + t*c[i] <= hi for all i}.
    // |c[i]| < eps is treated as parallel to the constraint and skipped.
    void (*chord)(const double* v, const double* c, std::size_t n, double lo, double hi,
                  double eps, double* tmin, double* tmax);
};

const Ops& scalar();
bool have_avx2();
const Ops& avx2();  // valid only when have_avx2()

// Runtime-selected table (env BSP_SIMD overrides autodetection).
const Ops& active();

}  // namespace bsp::kernels
