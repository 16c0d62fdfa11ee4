#pragma once

#include <complex>
#include <cstddef>

#include "bsp/matrix.hpp"

namespace bsp {

inline constexpr double kDsTol = 1e-9;

// n x n nonnegative matrix with unit row and column sums (within tol).
struct DoublyStochasticMatrix {
    std::size_t n = 0;
    DenseMatrix m;
    double tol = kDsTol;

    DoublyStochasticMatrix() = default;
    // Throws ConstraintError when the matrix misses the polytope by more than tol.
    DoublyStochasticMatrix(DenseMatrix mat, double tolerance = kDsTol);
};

// The corner projection Phi(X) = (x_ij) for 2<=i,j<=n.
struct CornerBlock {
    std::size_t n = 0;             // size of the full matrix the block extends to
    DenseMatrix block;             // (n-1) x (n-1)

    CornerBlock() = default;
    explicit CornerBlock(DenseMatrix b);
};

// (n-1) x (n-1) matrix with entries x_{ij} - x_{i1}; drops the forced zero
// eigenvalue of X - EX.
struct ReducedMatrix {
    std::size_t n = 0;
    DenseMatrix m;
};

// n x n complex matrix: first row all sqrt(n), first column scale*x_{i1},
// interior scale*x_{ij} - z0*delta_{ij}.
struct AugmentedMatrix {
    std::size_t n = 0;
    std::complex<double> z0;
    ComplexMatrix m;
};

// Extend a corner block to the full doubly stochastic matrix. With
// validate=true any filled entry outside [-tol, 1+tol] raises ConstraintError.
DoublyStochasticMatrix gamma_extend(const CornerBlock& block, bool validate = true,
                                    double tol = kDsTol);

// Fill Gamma(block) into an n x n matrix without membership checks.
DenseMatrix gamma_fill(const CornerBlock& block);

CornerBlock phi_project(const DoublyStochasticMatrix& x);

// True iff every Gamma(block) entry lies in [-tol, entry_bound + tol].
// entry_bound = 1 tests S_n; entry_bound = min(1, 10 ln n / n) tests the
// bounded-entry set.
bool membership_Sn(const CornerBlock& block, double entry_bound, double tol = kDsTol);

ReducedMatrix reduce_bar(const DoublyStochasticMatrix& x);

// sqrt(n) * (X - J_n).
DenseMatrix center_and_scale(const DoublyStochasticMatrix& x);

// The n x n matrix whose determinant equals sqrt(n)*det(scale*Xbar - z0 I).
// scale = sqrt(n) for the X model, 1/sqrt(n) for the Y model.
AugmentedMatrix augment_minus_F(const DoublyStochasticMatrix& x, std::complex<double> z0,
                                double scale);

// Sum over 2<=i,j<=n of (x_ij - x_i1)^2.
double hs_norm_sq_bar(const DoublyStochasticMatrix& x);

// Asymptotic log-volume of S_n (the o(1) term is dropped).
double log_volume_Sn(std::size_t n);

}  // namespace bsp
