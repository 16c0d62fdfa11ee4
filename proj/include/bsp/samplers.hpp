#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bsp/birkhoff.hpp"
#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"

namespace bsp {

// Direction family for the hit-and-run walk. `pairs` draws from the
// 2x2 exchange basis (the Markov basis of the polytope): O(1) per step
// and chords on the scale of the entries, so it mixes at every n.
// `isotropic` is the classic uniform-direction walk in the corner
// coordinates; its chords collapse like n^-3 against the corner-sum
// constraint, so it is only useful at small n.
enum class ChainDirections { pairs, isotropic };

struct ChainConfig {
    std::size_t n = 0;
    std::size_t burn_in = 0;    // 0 means the default 20*(n-1)^2
    std::size_t thin = 0;       // 0 means the default 2*(n-1)^2
    double chord_tol = 1e-12;
    ChainDirections directions = ChainDirections::pairs;

    explicit ChainConfig(std::size_t dim) : n(dim) {}
    ChainConfig() = default;

    std::size_t effective_burn_in() const;
    std::size_t effective_thin() const;
};

// Entry density exp(-x)/(1-n^{-10}) on [0, 10 ln n].
struct TruncatedExponentialSpec {
    std::size_t n = 0;
    double cutoff = 0.0;
    double normalizer = 1.0;

    static TruncatedExponentialSpec for_n(std::size_t n);
    // Inverse-CDF draw.
    double sample(RngStream& rng) const;
    double density(double x) const;
};

// Mixing diagnostics of the last hit_and_run_chain call on this handle.
struct ChainDiagnostics {
    std::size_t steps = 0;
    std::size_t degenerate_chords = 0;
};

// Uniform point on {x >= 0, sum x = 1} via normalized exponentials.
std::vector<double> sample_simplex(std::size_t n, RngStream& rng);

// n x n i.i.d. entries, Exp(1) or the truncated law when spec is given.
DenseMatrix sample_exponential_matrix(std::size_t n, RngStream& rng);
DenseMatrix sample_exponential_matrix(std::size_t n, const TruncatedExponentialSpec& spec,
                                      RngStream& rng);

// Exact uniform draw on S_n by conditioning an Exp(1) matrix on D_n.
// Empty result when max_tries rejections happen first. Feasible only for
// tiny n (acceptance >= n^{-4n}).
std::optional<DoublyStochasticMatrix> rejection_sample_ds(std::size_t n, std::size_t max_tries,
                                                          RngStream& rng);

// Hit-and-run walk on the corner coordinates; stationary law is uniform
// on S_n. Starts at J_n, returns `count` states after burn-in, spaced
// by thin. Degenerate chords (length < chord_tol) are re-drawn and
// counted in diag when given.
std::vector<DoublyStochasticMatrix> hit_and_run_chain(const ChainConfig& cfg, std::size_t count,
                                                      RngStream& rng,
                                                      ChainDiagnostics* diag = nullptr);

// Alternate row/column normalization. Approximate projection utility,
// not a uniform sampler.
DoublyStochasticMatrix sinkhorn_project(const DenseMatrix& m, double tol = 1e-12,
                                        std::size_t max_iter = 10000);

// Row (x_2,...,x_n) with x_i uniform on [0, 1-s_i] conditioned on
// s_1 <= sum x_i <= 1 where s_1 = (n-2) - sum s_i, via rejection.
// Empty result when max_tries rejections happen first.
std::optional<std::vector<double>> sample_constrained_row(const std::vector<double>& s,
                                                          RngStream& rng, std::size_t max_tries);

}  // namespace bsp
