#include "bsp/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace bsp::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sumsq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void chord_scalar(const double* v, const double* c, std::size_t n, double lo, double hi,
                  double eps, double* tmin, double* tmax) {
    double t0 = *tmin;
    double t1 = *tmax;
    for (std::size_t i = 0; i < n; ++i) {
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

const Ops& scalar() {
    static const Ops ops{"scalar", dot_scalar, sum_scalar, sumsq_scalar, axpy_scalar,
                         chord_scalar};
    return ops;
}

}  // namespace bsp::kernels
