#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bsp/birkhoff.hpp"
#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"
#include "bsp/samplers.hpp"
#include "bsp/spectral.hpp"

namespace bsp {

// Houses the free constants (C, B, A, gamma, t, ...) a probe needs.
struct ProbeConfig {
    std::size_t n = 0;
    std::size_t trials = 1;
    std::map<std::string, double> constants;
    std::uint64_t seed = 0;

    double constant(const std::string& name, double fallback) const {
        const auto it = constants.find(name);
        return it == constants.end() ? fallback : it->second;
    }
};

struct TailReport {
    double threshold = 0.0;
    double empirical_prob = 0.0;
    double bound_claimed = 0.0;
    bool pass = false;

    std::string to_json() const;
};

// Scalar test functions with known Lipschitz constants. log_max_eps is
// x -> log(max(eps, x^2)) and is the only non-convex tag.
enum class GTag { square, abs, log_max_eps, huber };

double g_apply(GTag tag, double eps, double x);
double g_lipschitz(GTag tag, double eps);
bool g_convex(GTag tag);

// Empirical P(||x|| >= C/sqrt(n)) for uniform simplex points; pass iff
// it stays under max(exp(-0.1 sqrt(n)), 5/trials). C from constants["C"],
// default 3.
TailReport simplex_norm_tail(const ProbeConfig& cfg);

// P(a <= x_1 <= b) for x_1 ~ Beta(1, n-1), closed form.
double beta_interval_prob_interval(std::size_t n, double a, double b);
// The specific instance used by the probes: a = n^{-B}, b = min(B ln n, 1).
double beta_interval_prob(std::size_t n, double B);

// KS statistic of the samples against Exp(1).
double entry_law_test(const std::vector<double>& samples);

// Max over equal-mass bins (built from the simplex sample) of the
// frequency ratio DS/simplex. Throws EmptyBin when a bin gets no simplex
// mass.
double density_ratio_probe(const std::vector<double>& samples_ds_row,
                           const std::vector<double>& samples_simplex, std::size_t bins);

struct ProjectionReport {
    TailReport tail;
    double mean_norm = 0.0;   // empirical mean of ||pi_V(y + f)||
    double sigma = 0.0;       // stddev of the truncated exponential entry law
};

// Coordinates y_i = y~_i - 1 with y~ truncated exponential; V is a random
// d-dimensional subspace fixed once per call.
ProjectionReport projection_distance_probe(std::size_t d, std::size_t n,
                                           const std::vector<double>& f,
                                           const ProbeConfig& cfg);

// Convexity defect tr g(U+F) + tr g(V+F) - 2 tr g((U+V)/2 + F); must be
// >= -1e-9 for convex tags.
double trace_convexity_check(GTag tag, double eps, const ComplexMatrix& u,
                             const ComplexMatrix& v, const ComplexMatrix& f);

// |tr g(M1/sqrt(n) + F) - tr g(M2/sqrt(n) + F)| / ||M1 - M2||_HS; bounded
// by 2 ||g||_L.
double trace_lipschitz_check(GTag tag, double eps, const ComplexMatrix& m1,
                             const ComplexMatrix& m2, const ComplexMatrix& f,
                             std::size_t n_scale);

struct LogDetSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double deviation = 0.0;   // |mean - circular_potential(z0)|
    std::size_t used = 0;
    std::size_t excluded = 0;  // singular log-det sentinels
};

// Truncated log-sum of the singular values of the F_{z0} augmentation,
// one value per sample.
LogDetSummary logdet_concentration_probe(const std::vector<DoublyStochasticMatrix>& samples,
                                         std::complex<double> z0, const TruncationConfig& cfg);
LogDetSummary logdet_concentration_probe(std::size_t n, std::complex<double> z0,
                                         std::size_t samples, const TruncationConfig& cfg,
                                         RngStream& rng);

}  // namespace bsp
