#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"

namespace bsp {

// Generalized arithmetic progression {g0 + sum k_i g_i : lower_i <= k_i <= upper_i}.
struct GAP {
    std::size_t rank = 0;
    std::complex<double> g0{0.0, 0.0};
    std::vector<std::complex<double>> generators;
    std::vector<long long> lower;
    std::vector<long long> upper;
    bool symmetric = false;
    // Cap on |p|,|q| when the generators are declared rational p/q.
    std::optional<long long> rational_bound;

    // Product of (upper_i - lower_i + 1); recomputed, never cached.
    double volume() const;
    // Frontmatter checks: ranks agree, lower <= upper, symmetric shape.
    void validate() const;

    std::string to_json() const;
    static GAP from_json_string(const std::string& text);
};

struct GapEnumeration {
    std::vector<std::complex<double>> elements;
    bool is_proper = false;
};

enum class Atom { bernoulli_pm1, bernoulli01 };

struct SmallBallResult {
    double rho = 0.0;
    std::complex<double> argmax_center{0.0, 0.0};
    bool exact = false;
    std::size_t trials_or_atoms = 0;
    double std_error = 0.0;  // 0 for the exact method
};

// All volume() images; proper iff distinct (1e-12 clustering) count equals
// the volume. Throws CapExceeded when volume() > cap.
GapEnumeration gap_enumerate(const GAP& q, std::size_t cap = 1000000);

// min_q |point - q| over the enumeration.
double gap_distance(std::complex<double> point, const GAP& q, std::size_t cap = 1000000);

// Exact sup_a P(|sum b_i x_i - a| <= beta) over 2^n atom assignments.
// Throws TooLarge when b.size() > 24.
SmallBallResult small_ball_exact(const std::vector<double>& b, double beta, Atom atom);

// Monte Carlo small-ball estimate with x_i drawn by `draw`; sup_a is
// approximated by the best window over the sampled sums.
SmallBallResult small_ball_mc(const std::vector<std::complex<double>>& b, double beta,
                              const std::function<double(RngStream&)>& draw, std::size_t trials,
                              RngStream& rng);

// Normalized cofactor linear form of the given expansion row:
// a_j proportional to c_{row,j} + sum_i c_{row,i}, with ||a|| = 1.
// Throws SingularInput when the matrix is numerically singular.
std::vector<std::complex<double>> cofactor_unit_vector(const ComplexMatrix& m, std::size_t row);

struct RankOneFit {
    GAP q;
    std::size_t exceptional = 0;
};

// Rank-1 GAP with rational generator p/q (q <= size_cap) covering all but
// at most sqrt(n) coefficients within delta. Empty when no such fit exists.
std::optional<RankOneFit> fit_rank_one_gap(const std::vector<std::complex<double>>& coeffs,
                                           double delta, std::size_t size_cap);

}  // namespace bsp
