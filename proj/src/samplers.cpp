#include "bsp/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bsp/errors.hpp"
#include "bsp/kernels.hpp"

namespace bsp {

std::size_t ChainConfig::effective_burn_in() const {
    if (burn_in != 0) return burn_in;
    const std::size_t d = n - 1;
    return 20 * d * d;
}

std::size_t ChainConfig::effective_thin() const {
    if (thin != 0) return thin;
    const std::size_t d = n - 1;
    return std::max<std::size_t>(1, 2 * d * d);
}

TruncatedExponentialSpec TruncatedExponentialSpec::for_n(std::size_t n) {
    if (n < 2) throw ConstraintError("TruncatedExponentialSpec: n must be >= 2");
    TruncatedExponentialSpec spec;
    spec.n = n;
    spec.cutoff = 10.0 * std::log(static_cast<double>(n));
    spec.normalizer = 1.0 - std::pow(static_cast<double>(n), -10.0);
    return spec;
}

double TruncatedExponentialSpec::sample(RngStream& rng) const {
    // CDF(x) = (1 - e^{-x}) / normalizer on [0, cutoff].
    const double u = rng.uniform01();
    return -std::log1p(-u * normalizer);
}

double TruncatedExponentialSpec::density(double x) const {
    if (x < 0.0 || x > cutoff) return 0.0;
    return std::exp(-x) / normalizer;
}

std::vector<double> sample_simplex(std::size_t n, RngStream& rng) {
    if (n == 0) throw ConstraintError("sample_simplex: n must be >= 1");
    std::vector<double> x(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.exponential();
        total += x[i];
    }
    for (double& v : x) v /= total;
    return x;
}

DenseMatrix sample_exponential_matrix(std::size_t n, RngStream& rng) {
    DenseMatrix m(n, n);
    for (double& v : m.entries) v = rng.exponential();
    return m;
}

DenseMatrix sample_exponential_matrix(std::size_t n, const TruncatedExponentialSpec& spec,
                                      RngStream& rng) {
    DenseMatrix m(n, n);
    for (double& v : m.entries) v = spec.sample(rng);
    return m;
}

std::optional<DoublyStochasticMatrix> rejection_sample_ds(std::size_t n, std::size_t max_tries,
                                                          RngStream& rng) {
    if (n < 2) throw ConstraintError("rejection_sample_ds: n must be >= 2");
    const double inv_n = 1.0 / static_cast<double>(n);
    const std::size_t d = n - 1;
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        const DenseMatrix y = sample_exponential_matrix(n, rng);
        CornerBlock block;
        block.n = n;
        block.block = DenseMatrix(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                block.block(i, j) = y(i + 1, j + 1) * inv_n;
            }
        }
        const DenseMatrix g = gamma_fill(block);
        // Y in D_n: Phi(Y/n) in S_n and y_ij/n >= Gamma entry everywhere.
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double ge = g(i, j);
                if (ge < 0.0 || ge > 1.0 || y(i, j) * inv_n - ge < 0.0) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return DoublyStochasticMatrix(g);
    }
    return std::nullopt;
}

namespace {

// Hit-and-run along random 2x2 exchange directions on the full matrix:
// the move adds t to entries (i1,j1),(i2,j2) and subtracts t from
// (i1,j2),(i2,j1), which preserves every row and column sum. The chord
// is cut by the four nonnegativity constraints alone.
std::vector<DoublyStochasticMatrix> pair_chain(const ChainConfig& cfg, std::size_t count,
                                               RngStream& rng, ChainDiagnostics* diag) {
    const std::size_t n = cfg.n;
    const double inv_n = 1.0 / static_cast<double>(n);
    DenseMatrix x = DenseMatrix::constant(n, n, inv_n);
    ChainDiagnostics local;

    auto step = [&]() {
        for (int tries = 0; tries < 64; ++tries) {
            const std::size_t i1 = rng.below(n);
            std::size_t i2 = rng.below(n - 1);
            if (i2 >= i1) ++i2;
            const std::size_t j1 = rng.below(n);
            std::size_t j2 = rng.below(n - 1);
            if (j2 >= j1) ++j2;
            const double lo = -std::min(x(i1, j1), x(i2, j2));
            const double hi = std::min(x(i1, j2), x(i2, j1));
            if (!(hi - lo >= cfg.chord_tol)) {
                ++local.degenerate_chords;
                continue;
            }
            const double t = rng.uniform(lo, hi);
            x(i1, j1) = std::max(0.0, x(i1, j1) + t);
            x(i2, j2) = std::max(0.0, x(i2, j2) + t);
            x(i1, j2) = std::max(0.0, x(i1, j2) - t);
            x(i2, j1) = std::max(0.0, x(i2, j1) - t);
            ++local.steps;
            return;
        }
        throw NoConvergence("hit_and_run_chain: persistent degenerate chords");
    };

    std::vector<DoublyStochasticMatrix> out;
    out.reserve(count);
    const std::size_t burn = cfg.effective_burn_in();
    const std::size_t thin = cfg.effective_thin();
    for (std::size_t s = 0; s < burn; ++s) step();
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t s = 0; s < thin; ++s) step();
        out.emplace_back(x);
    }
    if (diag) *diag = local;
    return out;
}

std::vector<DoublyStochasticMatrix> isotropic_chain(const ChainConfig& cfg, std::size_t count,
                                                    RngStream& rng, ChainDiagnostics* diag) {
    const std::size_t n = cfg.n;
    const std::size_t d = n - 1;
    const std::size_t dim = d * d;
    const double inv_n = 1.0 / static_cast<double>(n);
    const kernels::Ops& ops = kernels::active();

    // Chain state: the corner block plus cached row/column sums of it.
    std::vector<double> v(dim, inv_n);
    std::vector<double> c(dim);
    std::vector<double> rowsum(d), colsum(d), crow(d), ccol(d);
    double total = 0.0;

    auto refresh_sums = [&]() {
        total = 0.0;
        std::fill(colsum.begin(), colsum.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const double* row = v.data() + i * d;
            rowsum[i] = ops.sum(row, d);
            total += rowsum[i];
            for (std::size_t j = 0; j < d; ++j) colsum[j] += row[j];
        }
    };
    refresh_sums();

    // Extension entries of Gamma and their direction coefficients.
    std::vector<double> aux_v(2 * d + 1), aux_c(2 * d + 1);

    ChainDiagnostics local;
    const double shift = static_cast<double>(n) - 2.0;

    auto step = [&]() {
        for (int tries = 0; tries < 64; ++tries) {
            double ctot = 0.0;
            std::fill(ccol.begin(), ccol.end(), 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                double rs = 0.0;
                double* crow_row = c.data() + i * d;
                for (std::size_t j = 0; j < d; ++j) {
                    const double g = rng.normal();
                    crow_row[j] = g;
                    rs += g;
                    ccol[j] += g;
                }
                crow[i] = rs;
                ctot += rs;
            }

            double tmin = -std::numeric_limits<double>::infinity();
            double tmax = std::numeric_limits<double>::infinity();
            ops.chord(v.data(), c.data(), dim, 0.0, 1.0, 1e-14, &tmin, &tmax);
            for (std::size_t i = 0; i < d; ++i) {
                aux_v[i] = 1.0 - rowsum[i];
                aux_c[i] = -crow[i];
                aux_v[d + i] = 1.0 - colsum[i];
                aux_c[d + i] = -ccol[i];
            }
            aux_v[2 * d] = total - shift;
            aux_c[2 * d] = ctot;
            ops.chord(aux_v.data(), aux_c.data(), 2 * d + 1, 0.0, 1.0, 1e-14, &tmin, &tmax);

            if (!(tmax - tmin >= cfg.chord_tol)) {
                ++local.degenerate_chords;
                continue;
            }
            const double t = rng.uniform(tmin, tmax);
            ops.axpy(t, c.data(), v.data(), dim);
            for (std::size_t i = 0; i < d; ++i) {
                rowsum[i] += t * crow[i];
                colsum[i] += t * ccol[i];
            }
            total += t * ctot;
            ++local.steps;
            return;
        }
        throw NoConvergence("hit_and_run_chain: persistent degenerate chords");
    };

    auto emit = [&]() {
        refresh_sums();  // also kills the incremental-update drift
        CornerBlock block;
        block.n = n;
        block.block = DenseMatrix(d, d);
        block.block.entries = v;
        return gamma_extend(block, true, kDsTol);
    };

    std::vector<DoublyStochasticMatrix> out;
    out.reserve(count);
    const std::size_t burn = cfg.effective_burn_in();
    const std::size_t thin = cfg.effective_thin();
    std::size_t since_refresh = 0;
    for (std::size_t s = 0; s < burn; ++s) {
        step();
        if (++since_refresh == 4096) {
            refresh_sums();
            since_refresh = 0;
        }
    }
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t s = 0; s < thin; ++s) {
            step();
            if (++since_refresh == 4096) {
                refresh_sums();
                since_refresh = 0;
            }
        }
        out.push_back(emit());
    }
    if (diag) *diag = local;
    return out;
}

}  // namespace

std::vector<DoublyStochasticMatrix> hit_and_run_chain(const ChainConfig& cfg, std::size_t count,
                                                      RngStream& rng, ChainDiagnostics* diag) {
    if (cfg.n < 2) throw ConstraintError("hit_and_run_chain: n must be >= 2");
    if (cfg.directions == ChainDirections::pairs) return pair_chain(cfg, count, rng, diag);
    return isotropic_chain(cfg, count, rng, diag);
}

DoublyStochasticMatrix sinkhorn_project(const DenseMatrix& m, double tol, std::size_t max_iter) {
    if (!m.square()) throw DimensionError("sinkhorn_project: matrix not square");
    m.validate();
    for (const double v : m.entries) {
        if (v <= 0.0) throw ConstraintError("sinkhorn_project: entries must be positive");
    }
    const std::size_t n = m.rows;
    DenseMatrix a = m;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::fabs(a.row_sum(i) - 1.0));
        }
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::fabs(a.col_sum(j) - 1.0));
        }
        if (worst < tol) return DoublyStochasticMatrix(a, std::max(tol * 10.0, kDsTol));
        for (std::size_t i = 0; i < n; ++i) {
            const double rs = a.row_sum(i);
            for (std::size_t j = 0; j < n; ++j) a(i, j) /= rs;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double cs = a.col_sum(j);
            for (std::size_t i = 0; i < n; ++i) a(i, j) /= cs;
        }
    }
    throw NoConvergence("sinkhorn_project: max_iter reached");
}

std::optional<std::vector<double>> sample_constrained_row(const std::vector<double>& s,
                                                          RngStream& rng,
                                                          std::size_t max_tries) {
    const std::size_t k = s.size();  // number of free coordinates x_2..x_n
    if (k == 0) throw ConstraintError("sample_constrained_row: empty column-sum vector");
    const std::size_t n = k + 1;
    double ssum = 0.0;
    for (const double si : s) {
        if (si > 1.0 - 1e-12) throw ConstraintError("sample_constrained_row: s_i must be < 1");
        if (si < 0.0) throw ConstraintError("sample_constrained_row: s_i must be >= 0");
        ssum += si;
    }
    const double s1 = static_cast<double>(n) - 2.0 - ssum;
    if (s1 < -1e-12 || s1 > 1.0 + 1e-12) {
        throw ConstraintError("sample_constrained_row: implied s_1 outside [0,1]");
    }
    std::vector<double> x(k);
    for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            x[i] = rng.uniform(0.0, 1.0 - s[i]);
            sum += x[i];
        }
        if (sum >= s1 && sum <= 1.0) return x;
    }
    return std::nullopt;
}

}  // namespace bsp
