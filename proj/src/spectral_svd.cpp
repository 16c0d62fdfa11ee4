#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "bsp/errors.hpp"
#include "bsp/spectral.hpp"

namespace bsp {
namespace {

using cplx = std::complex<double>;

// One-sided Jacobi on the columns: rotations kill c_p^H c_q pairwise.
// Accurate for small sigma but quadratic per sweep, so only used for
// modest dimensions.
std::vector<double> jacobi_svd(std::vector<cplx> a, std::size_t rows, std::size_t cols) {
    auto col = [&](std::size_t j) { return a.data() + j; };  // stride = cols
    const std::size_t stride = cols;
    constexpr double tol = 1e-14;
    const std::size_t max_sweeps = 60;
    bool converged = false;
    for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                cplx gamma(0.0, 0.0);
                const cplx* cp = col(p);
                const cplx* cq = col(q);
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx x = cp[i * stride];
                    const cplx y = cq[i * stride];
                    alpha += std::norm(x);
                    beta += std::norm(y);
                    gamma += std::conj(x) * y;
                }
                const double g = std::abs(gamma);
                if (g <= tol * std::sqrt(alpha * beta) || g == 0.0) continue;
                converged = false;
                const cplx phi = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = std::copysign(1.0, zeta) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                cplx* mp = col(p);
                cplx* mq = col(q);
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx x = mp[i * stride];
                    const cplx y = mq[i * stride];
                    mp[i * stride] = c * x - s * std::conj(phi) * y;
                    mq[i * stride] = s * phi * x + c * y;
                }
            }
        }
    }
    if (!converged) throw NoConvergence("singular_values: Jacobi sweeps stalled");
    std::vector<double> sv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        const cplx* cj = col(j);
        for (std::size_t i = 0; i < rows; ++i) acc += std::norm(cj[i * stride]);
        sv[j] = std::sqrt(acc);
    }
    return sv;
}

// sigma_i = sqrt(eig_i(A^H A)); cheap for large n, accuracy floor around
// sqrt(eps)*sigma_max.
std::vector<double> gram_svd(const ComplexMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    ComplexMatrix gram(cols, cols);
    for (std::size_t p = 0; p < cols; ++p) {
        for (std::size_t q = p; q < cols; ++q) {
            cplx acc(0.0, 0.0);
            for (std::size_t i = 0; i < rows; ++i) {
                acc += std::conj(m.at(i, p)) * m.at(i, q);
            }
            gram.set(p, q, acc);
            gram.set(q, p, std::conj(acc));
        }
    }
    std::vector<double> ev = hermitian_eigenvalues(gram);
    std::vector<double> sv(cols);
    for (std::size_t j = 0; j < cols; ++j) sv[j] = std::sqrt(std::max(ev[j], 0.0));
    return sv;
}

constexpr std::size_t kJacobiDimCap = 64;

int lu_factor(std::vector<cplx>& a, std::size_t n, std::vector<std::size_t>& piv);

// Solve Ax=b and A^H x=b from one in-place LU factorization (LU = PA).
void lu_solve(const std::vector<cplx>& a, const std::vector<std::size_t>& piv, std::size_t n,
              std::vector<cplx>& b) {
    // The factor stores fully swapped rows, so apply every swap before
    // the triangular solves.
    for (std::size_t k = 0; k < n; ++k) {
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) b[i] -= a[i * n + k] * b[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) b[k] -= a[k * n + j] * b[j];
        b[k] /= a[k * n + k];
    }
}

void lu_solve_adjoint(const std::vector<cplx>& a, const std::vector<std::size_t>& piv,
                      std::size_t n, std::vector<cplx>& b) {
    // A^H = U^H L^H P; forward solve with U^H, back solve with unit L^H,
    // then undo the row swaps.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < k; ++j) b[k] -= std::conj(a[j * n + k]) * b[j];
        b[k] /= std::conj(a[k * n + k]);
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) b[k] -= std::conj(a[j * n + k]) * b[j];
    }
    for (std::size_t k = n; k-- > 0;) {
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    }
}

// Inverse iteration on (A^H A)^{-1}; resolves sigma_min below the Gram
// method's eps*sigma_max^2 floor. Returns 0 on exact LU breakdown.
double refine_sigma_min(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<cplx> a = m.packed();
    std::vector<std::size_t> piv;
    if (lu_factor(a, n, piv) == 0) return 0.0;
    std::vector<cplx> v(n);
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto& vi : v) {
        h ^= h << 13;
        h ^= h >> 7;
        h ^= h << 17;
        vi = cplx(static_cast<double>(h >> 40) / 16777216.0 - 0.5, 0.1);
    }
    double lambda = 0.0;
    for (int iter = 0; iter < 40; ++iter) {
        double nsq = 0.0;
        for (const auto& vi : v) nsq += std::norm(vi);
        const double inv = 1.0 / std::sqrt(nsq);
        for (auto& vi : v) vi *= inv;
        lu_solve_adjoint(a, piv, n, v);
        lu_solve(a, piv, n, v);
        double next = 0.0;
        for (const auto& vi : v) next += std::norm(vi);
        next = std::sqrt(next);
        if (iter > 4 && std::fabs(next - lambda) <= 1e-10 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return 0.0;
    return 1.0 / std::sqrt(lambda);
}

// LU with partial pivoting. Returns the permutation sign, or 0 on exact
// breakdown.
int lu_factor(std::vector<cplx>& a, std::size_t n, std::vector<std::size_t>& piv) {
    piv.resize(n);
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a[i * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            sign = -sign;
        }
        const cplx pivot = a[k * n + k];
        if (pivot == cplx(0.0, 0.0)) return 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a[i * n + k] / pivot;
            a[i * n + k] = f;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
    }
    return sign;
}

}  // namespace

SingularSpectrum singular_values(const ComplexMatrix& m) {
    m.re.validate();
    m.im.validate();
    SingularSpectrum out;
    if (m.rows() == 0 || m.cols() == 0) return out;
    if (m.rows() < m.cols()) {
        // Transpose (conjugation does not change sigma) so rows >= cols.
        ComplexMatrix t(m.cols(), m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) t.set(j, i, m.at(i, j));
        }
        return singular_values(t);
    }
    if (std::max(m.rows(), m.cols()) <= kJacobiDimCap) {
        out.values = jacobi_svd(m.packed(), m.rows(), m.cols());
        std::sort(out.values.begin(), out.values.end(), std::greater<double>());
        return out;
    }
    out.values = gram_svd(m);
    std::sort(out.values.begin(), out.values.end(), std::greater<double>());
    // The Gram route cannot resolve sigma below ~sqrt(eps)*sigma_max;
    // recover a trustworthy sigma_min by inverse iteration.
    if (m.rows() == m.cols() && !out.values.empty()) {
        const double floor = 1e-4 * out.values.front();
        if (out.values.back() < floor) {
            out.values.back() = refine_sigma_min(m);
            std::sort(out.values.begin(), out.values.end(), std::greater<double>());
        }
    }
    return out;
}

SingularSpectrum singular_values(const DenseMatrix& m) {
    return singular_values(ComplexMatrix(m));
}

LogAbsDet log_abs_det(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("log_abs_det: matrix not square");
    const SingularSpectrum sv = singular_values(m);
    LogAbsDet out;
    for (const double s : sv.values) {
        if (s <= 0.0) {
            out.is_singular = true;
            return out;
        }
        out.value += std::log(s);
    }
    return out;
}

LogAbsDet log_abs_det(const DenseMatrix& m) { return log_abs_det(ComplexMatrix(m)); }

std::complex<double> complex_det(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("complex_det: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return {1.0, 0.0};
    std::vector<cplx> a = m.packed();
    std::vector<std::size_t> piv;
    const int sign = lu_factor(a, n, piv);
    if (sign == 0) return {0.0, 0.0};
    cplx det(static_cast<double>(sign), 0.0);
    for (std::size_t k = 0; k < n; ++k) det *= a[k * n + k];
    return det;
}

ComplexMatrix complex_inverse(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("complex_inverse: matrix not square");
    const std::size_t n = m.rows();
    std::vector<cplx> a = m.packed();
    std::vector<std::size_t> piv;
    if (lu_factor(a, n, piv) == 0) throw SingularInput("complex_inverse: zero pivot");
    // Solve A X = I column by column.
    std::vector<cplx> x(n * n, cplx(0.0, 0.0));
    std::vector<cplx> b(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::fill(b.begin(), b.end(), cplx(0.0, 0.0));
        b[col] = 1.0;
        lu_solve(a, piv, n, b);
        for (std::size_t i = 0; i < n; ++i) x[i * n + col] = b[i];
    }
    return ComplexMatrix::from_packed(x, n, n);
}

}  // namespace bsp
