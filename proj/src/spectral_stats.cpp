#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bsp/errors.hpp"
#include "bsp/spectral.hpp"
#include "bsp/stats.hpp"

namespace bsp {

TruncationConfig TruncationConfig::for_n(std::size_t n, double c) {
    if (n < 2) throw ConstraintError("TruncationConfig::for_n: n must be >= 2");
    TruncationConfig cfg;
    cfg.c_exponent = c;
    cfg.epsilon = std::pow(static_cast<double>(n), -c);
    cfg.delta = cfg.epsilon;
    return cfg;
}

double circular_potential(std::complex<double> z0) {
    const double r = std::abs(z0);
    if (r <= 1.0) return 0.5 * (r * r - 1.0);
    return std::log(r);
}

DistanceReport esd_circular_distance(const ComplexSpectrum& spec) {
    if (spec.values.empty()) throw ConstraintError("esd_circular_distance: empty spectrum");
    const std::size_t n = spec.values.size();
    std::vector<double> radial(n), angular(n), marg(n);
    for (std::size_t i = 0; i < n; ++i) {
        radial[i] = std::abs(spec.values[i]);
        angular[i] = std::arg(spec.values[i]);
        marg[i] = spec.values[i].real();
    }
    DistanceReport out;
    out.sample_size = n;
    // Under the disk law |z| has CDF r^2 on [0,1].
    out.radial_ks = ks_statistic(radial, [](double r) {
        if (r <= 0.0) return 0.0;
        if (r >= 1.0) return 1.0;
        return r * r;
    });
    out.angular_ks = ks_statistic(angular, [](double t) {
        if (t <= -M_PI) return 0.0;
        if (t >= M_PI) return 1.0;
        return (t + M_PI) / (2.0 * M_PI);
    });
    // Real-part marginal of the disk law: density (2/pi)sqrt(1-x^2).
    out.marginal_ks = ks_statistic(marg, [](double x) {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / M_PI;
    });
    return out;
}

double quarter_circle_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return (x * std::sqrt(4.0 - x * x) / 2.0 + 2.0 * std::asin(x / 2.0)) / M_PI;
}

double quarter_circle_distance(const SingularSpectrum& sv) {
    if (sv.values.empty()) throw ConstraintError("quarter_circle_distance: empty spectrum");
    return ks_statistic(sv.values, quarter_circle_cdf);
}

double truncated_log_sum(const SingularSpectrum& sv, const TruncationConfig& cfg) {
    if (sv.values.empty()) throw ConstraintError("truncated_log_sum: empty spectrum");
    double acc = 0.0;
    for (const double s : sv.values) {
        if (s * s >= cfg.epsilon) acc += std::log(s);
    }
    return acc / static_cast<double>(sv.values.size());
}

std::size_t count_in_interval(const std::vector<double>& values, double lo, double hi) {
    if (lo > hi) throw ConstraintError("count_in_interval: lo > hi");
    std::size_t c = 0;
    for (const double v : values) {
        if (v >= lo && v <= hi) ++c;
    }
    return c;
}

std::complex<double> stieltjes_transform(const std::vector<double>& spec,
                                         std::complex<double> z) {
    if (spec.empty()) throw ConstraintError("stieltjes_transform: empty spectrum");
    std::complex<double> acc(0.0, 0.0);
    for (const double lam : spec) {
        const std::complex<double> d = std::complex<double>(lam, 0.0) - z;
        if (std::abs(d) < 1e-14) throw PoleTooClose("stieltjes_transform: z on the spectrum");
        acc += 1.0 / d;
    }
    return acc / static_cast<double>(spec.size());
}

}  // namespace bsp
