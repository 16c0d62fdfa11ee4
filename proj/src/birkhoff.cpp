#include "bsp/birkhoff.hpp"

#include <cmath>
#include <string>

#include "bsp/errors.hpp"
#include "bsp/kernels.hpp"

namespace bsp {

DoublyStochasticMatrix::DoublyStochasticMatrix(DenseMatrix mat, double tolerance)
    : n(mat.rows), m(std::move(mat)), tol(tolerance) {
    if (!m.square()) throw DimensionError("DoublyStochasticMatrix: not square");
    m.validate();
    for (const double v : m.entries) {
        if (v < -tol) throw ConstraintError("DoublyStochasticMatrix: negative entry");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(m.row_sum(i) - 1.0) > tol) {
            throw ConstraintError("DoublyStochasticMatrix: row sum off by more than tol (row " +
                                  std::to_string(i) + ")");
        }
        if (std::fabs(m.col_sum(i) - 1.0) > tol) {
            throw ConstraintError("DoublyStochasticMatrix: column sum off by more than tol (col " +
                                  std::to_string(i) + ")");
        }
    }
}

CornerBlock::CornerBlock(DenseMatrix b) : n(b.rows + 1), block(std::move(b)) {
    if (!block.square()) throw DimensionError("CornerBlock: not square");
}

DenseMatrix gamma_fill(const CornerBlock& block) {
    const std::size_t n = block.n;
    const std::size_t d = n - 1;
    DenseMatrix g(n, n);
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double* row = block.block.entries.data() + i * d;
        const double rs = kernels::active().sum(row, d);
        total += rs;
        for (std::size_t j = 0; j < d; ++j) g(i + 1, j + 1) = row[j];
        g(i + 1, 0) = 1.0 - rs;
    }
    for (std::size_t j = 0; j < d; ++j) g(0, j + 1) = 1.0 - block.block.col_sum(j);
    // Gamma_{11} = 1 - sum_l (1 - colsum_l) = total - (n - 2).
    g(0, 0) = total - static_cast<double>(n - 2);
    return g;
}

DoublyStochasticMatrix gamma_extend(const CornerBlock& block, bool validate, double tol) {
    DenseMatrix g = gamma_fill(block);
    if (validate) {
        for (const double v : g.entries) {
            if (v < -tol || v > 1.0 + tol) {
                throw ConstraintError("gamma_extend: entry outside [0,1]: " + std::to_string(v));
            }
        }
    }
    DoublyStochasticMatrix out;
    out.n = block.n;
    out.m = std::move(g);
    out.tol = tol;
    return out;
}

CornerBlock phi_project(const DoublyStochasticMatrix& x) {
    const std::size_t d = x.n - 1;
    CornerBlock out;
    out.n = x.n;
    out.block = DenseMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) out.block(i, j) = x.m(i + 1, j + 1);
    }
    return out;
}

bool membership_Sn(const CornerBlock& block, double entry_bound, double tol) {
    const DenseMatrix g = gamma_fill(block);
    for (const double v : g.entries) {
        if (v < -tol || v > entry_bound + tol) return false;
    }
    return true;
}

ReducedMatrix reduce_bar(const DoublyStochasticMatrix& x) {
    const std::size_t d = x.n - 1;
    ReducedMatrix out;
    out.n = x.n;
    out.m = DenseMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const double first = x.m(i + 1, 0);
        for (std::size_t j = 0; j < d; ++j) out.m(i, j) = x.m(i + 1, j + 1) - first;
    }
    return out;
}

DenseMatrix center_and_scale(const DoublyStochasticMatrix& x) {
    const double root = std::sqrt(static_cast<double>(x.n));
    const double mean = 1.0 / static_cast<double>(x.n);
    DenseMatrix out(x.n, x.n);
    for (std::size_t k = 0; k < out.entries.size(); ++k) {
        out.entries[k] = root * (x.m.entries[k] - mean);
    }
    return out;
}

AugmentedMatrix augment_minus_F(const DoublyStochasticMatrix& x, std::complex<double> z0,
                                double scale) {
    if (scale <= 0.0) throw ConstraintError("augment_minus_F: scale must be positive");
    const std::size_t n = x.n;
    const double root = std::sqrt(static_cast<double>(n));
    AugmentedMatrix out;
    out.n = n;
    out.z0 = z0;
    out.m = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) out.m.re(0, j) = root;
    for (std::size_t i = 1; i < n; ++i) {
        out.m.re(i, 0) = scale * x.m(i, 0);
        for (std::size_t j = 1; j < n; ++j) {
            out.m.re(i, j) = scale * x.m(i, j);
            if (i == j) {
                out.m.re(i, j) -= z0.real();
                out.m.im(i, j) = -z0.imag();
            }
        }
    }
    return out;
}

double hs_norm_sq_bar(const DoublyStochasticMatrix& x) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.n; ++i) {
        const double first = x.m(i, 0);
        for (std::size_t j = 1; j < x.n; ++j) {
            const double d = x.m(i, j) - first;
            acc += d * d;
        }
    }
    return acc;
}

double log_volume_Sn(std::size_t n) {
    if (n < 2) throw ConstraintError("log_volume_Sn: n must be >= 2");
    const double nn = static_cast<double>(n);
    const double d = nn - 1.0;
    return -d * std::log(nn) - (nn - 0.5) * std::log(2.0 * M_PI) - d * d * std::log(nn) +
           1.0 / 3.0 + nn * nn;
}

}  // namespace bsp
