#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "bsp/matrix.hpp"

namespace bsp {

// Eigenvalue multiset of a (generally non-normal) matrix.
struct ComplexSpectrum {
    std::vector<std::complex<double>> values;
};

// Singular values sorted descending.
struct SingularSpectrum {
    std::vector<double> values;
    double sigma_max() const { return values.empty() ? 0.0 : values.front(); }
    double sigma_min() const { return values.empty() ? 0.0 : values.back(); }
};

struct TruncationConfig {
    double epsilon = 0.0;
    double delta = 0.0;
    double c_exponent = 0.25;

    // epsilon = delta = n^{-c}.
    static TruncationConfig for_n(std::size_t n, double c = 0.25);
};

// 1-D KS decomposition of the distance between an ESD and the uniform
// disk law: radial CDF r^2, uniform argument, real-part marginal.
struct DistanceReport {
    double radial_ks = 1.0;
    double angular_ks = 1.0;
    double marginal_ks = 1.0;
    std::size_t sample_size = 0;
};

struct LogAbsDet {
    double value = 0.0;      // sum of log sigma_i; meaningless when is_singular
    bool is_singular = false;
};

// Dense eigenvalues: balancing, Givens reduction to Hessenberg, shifted QR
// with deflation. Throws NoConvergence after 50*n sweeps for one eigenvalue.
ComplexSpectrum eigenvalues(const ComplexMatrix& m);
ComplexSpectrum eigenvalues(const DenseMatrix& m);

// Eigenvalues of a real symmetric matrix, ascending (Householder
// tridiagonalization + implicit QL).
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m);
// Hermitian matrices go through the [Re,-Im;Im,Re] doubling.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// One-sided Jacobi for small matrices, Gram-matrix route for large ones.
SingularSpectrum singular_values(const ComplexMatrix& m);
SingularSpectrum singular_values(const DenseMatrix& m);

LogAbsDet log_abs_det(const ComplexMatrix& m);
LogAbsDet log_abs_det(const DenseMatrix& m);

std::complex<double> complex_det(const ComplexMatrix& m);
// Throws SingularInput when a pivot collapses.
ComplexMatrix complex_inverse(const ComplexMatrix& m);

// Log-potential of the uniform disk law: (|z|^2-1)/2 inside, log|z| outside.
double circular_potential(std::complex<double> z0);

DistanceReport esd_circular_distance(const ComplexSpectrum& spec);

// CDF of the quarter-circle density (1/pi)*sqrt(4-x^2) on [0,2].
double quarter_circle_cdf(double x);
double quarter_circle_distance(const SingularSpectrum& sv);

// (1/n) * sum of log sigma_i over sigma_i^2 >= epsilon.
double truncated_log_sum(const SingularSpectrum& sv, const TruncationConfig& cfg);

// Number of values in the closed interval [lo, hi].
std::size_t count_in_interval(const std::vector<double>& values, double lo, double hi);

// (1/n) sum 1/(lambda_j - z). Throws PoleTooClose when z sits on the spectrum.
std::complex<double> stieltjes_transform(const std::vector<double>& spec,
                                         std::complex<double> z);

}  // namespace bsp
