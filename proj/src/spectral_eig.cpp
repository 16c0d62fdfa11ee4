#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "bsp/errors.hpp"
#include "bsp/spectral.hpp"

namespace bsp {
namespace {

using cplx = std::complex<double>;

struct Work {
    std::vector<cplx> a;
    std::size_t n;
    cplx& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    cplx at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Parlett-Reinsch balancing with radix-2 scaling.
void balance(Work& w) {
    const std::size_t n = w.n;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(w.at(j, i));
                r += std::abs(w.at(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / 2.0;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double inv = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) w.at(i, j) *= inv;
                for (std::size_t j = 0; j < n; ++j) w.at(j, i) *= f;
            }
        }
    }
}

struct Givens {
    double c;
    cplx s;
};

// G = [[c, s], [-conj(s), c]] with G*(a,b)^T = (r,0)^T.
Givens make_givens(cplx a, cplx b) {
    const double aa = std::abs(a);
    const double ab = std::abs(b);
    if (ab == 0.0) return {1.0, cplx(0.0, 0.0)};
    const double r = std::hypot(aa, ab);
    if (aa == 0.0) return {0.0, std::conj(b) / ab};
    return {aa / r, (a / aa) * std::conj(b) / r};
}

void rotate_rows(Work& w, std::size_t p, std::size_t q, const Givens& g, std::size_t j0,
                 std::size_t j1) {
    for (std::size_t j = j0; j <= j1; ++j) {
        const cplx x = w.at(p, j);
        const cplx y = w.at(q, j);
        w.at(p, j) = g.c * x + g.s * y;
        w.at(q, j) = -std::conj(g.s) * x + g.c * y;
    }
}

void rotate_cols(Work& w, std::size_t p, std::size_t q, const Givens& g, std::size_t i0,
                 std::size_t i1) {
    for (std::size_t i = i0; i <= i1; ++i) {
        const cplx x = w.at(i, p);
        const cplx y = w.at(i, q);
        w.at(i, p) = g.c * x + std::conj(g.s) * y;
        w.at(i, q) = -g.s * x + g.c * y;
    }
}

void hessenberg(Work& w) {
    const std::size_t n = w.n;
    if (n < 3) return;
    for (std::size_t j = 0; j + 2 < n; ++j) {
        for (std::size_t i = j + 2; i < n; ++i) {
            if (std::abs(w.at(i, j)) == 0.0) continue;
            const Givens g = make_givens(w.at(j + 1, j), w.at(i, j));
            rotate_rows(w, j + 1, i, g, j, n - 1);
            rotate_cols(w, j + 1, i, g, 0, n - 1);
            w.at(i, j) = 0.0;
        }
    }
}

void eig2x2(cplx p, cplx q, cplx r, cplx s, cplx& mu1, cplx& mu2) {
    const cplx tr = p + s;
    const cplx disc = std::sqrt(tr * tr - 4.0 * (p * s - q * r));
    mu1 = 0.5 * (tr + disc);
    mu2 = 0.5 * (tr - disc);
}

// Shifted QR with deflation on the Hessenberg matrix; eigenvalues only.
std::vector<cplx> hessenberg_qr(Work& w) {
    const std::size_t n = w.n;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<cplx> eval(n);
    std::vector<Givens> rots(n);
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    std::size_t iter = 0;
    const std::size_t max_iter = 50 * n;
    while (hi >= 0) {
        const std::size_t h = static_cast<std::size_t>(hi);
        // Deflation scan.
        std::size_t l = h;
        while (l > 0) {
            const double s = std::abs(w.at(l - 1, l - 1)) + std::abs(w.at(l, l));
            if (std::abs(w.at(l, l - 1)) <= eps * std::max(s, 1e-300)) {
                w.at(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == h) {
            eval[h] = w.at(h, h);
            --hi;
            iter = 0;
            continue;
        }
        if (l + 1 == h) {
            eig2x2(w.at(l, l), w.at(l, h), w.at(h, l), w.at(h, h), eval[l], eval[h]);
            hi -= 2;
            iter = 0;
            continue;
        }
        if (++iter > max_iter) throw NoConvergence("eigenvalues: QR iteration stalled");

        cplx shift;
        if (iter % 16 == 0) {
            // Exceptional shift.
            shift = w.at(h, h) + cplx(std::abs(w.at(h, h - 1)) + std::abs(w.at(h - 1, h - 2)), 0);
        } else {
            cplx mu1, mu2;
            eig2x2(w.at(h - 1, h - 1), w.at(h - 1, h), w.at(h, h - 1), w.at(h, h), mu1, mu2);
            shift = (std::abs(mu1 - w.at(h, h)) < std::abs(mu2 - w.at(h, h))) ? mu1 : mu2;
        }

        for (std::size_t k = l; k <= h; ++k) w.at(k, k) -= shift;
        for (std::size_t k = l; k < h; ++k) {
            rots[k] = make_givens(w.at(k, k), w.at(k + 1, k));
            rotate_rows(w, k, k + 1, rots[k], k, h);
            w.at(k + 1, k) = 0.0;
        }
        for (std::size_t k = l; k < h; ++k) {
            rotate_cols(w, k, k + 1, rots[k], l, std::min(k + 1, h));
        }
        for (std::size_t k = l; k <= h; ++k) w.at(k, k) += shift;
    }
    return eval;
}

// Householder tridiagonalization of a symmetric matrix, eigenvalues-only.
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = at(i, j);
                    const double gj = e[j] - hh * f;
                    e[j] = gj;
                    for (std::size_t k = 0; k <= j; ++k) {
                        at(j, k) -= f * e[k] + gj * at(i, k);
                    }
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = d.size();
    if (n == 0) return;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw NoConvergence("tridiagonal QL stalled");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
}

bool effectively_real(const ComplexMatrix& m, double scale) {
    for (const double v : m.im.entries) {
        if (std::fabs(v) > 1e-300 + 0.0 * scale) return false;
    }
    return true;
}

}  // namespace

ComplexSpectrum eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("eigenvalues: matrix not square");
    m.re.validate();
    m.im.validate();
    const std::size_t n = m.rows();
    ComplexSpectrum out;
    if (n == 0) return out;
    Work w{m.packed(), n};
    balance(w);
    hessenberg(w);
    out.values = hessenberg_qr(w);
    return out;
}

ComplexSpectrum eigenvalues(const DenseMatrix& m) { return eigenvalues(ComplexMatrix(m)); }

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
    if (!m.square()) throw DimensionError("symmetric_eigenvalues: matrix not square");
    const std::size_t n = m.rows;
    if (n == 0) return {};
    if (n == 1) return {m(0, 0)};
    std::vector<double> a = m.entries;
    // Symmetrize to wash out roundoff asymmetry.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    std::vector<double> d, e;
    tridiagonalize(a, n, d, e);
    tridiagonal_ql(d, e);
    return d;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("hermitian_eigenvalues: matrix not square");
    const std::size_t n = m.rows();
    if (effectively_real(m, 1.0)) return symmetric_eigenvalues(m.re);
    // Real doubling [[Re, -Im], [Im, Re]]; each eigenvalue appears twice.
    DenseMatrix big(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            big(i, j) = m.re(i, j);
            big(n + i, n + j) = m.re(i, j);
            big(i, n + j) = -m.im(i, j);
            big(n + i, j) = m.im(i, j);
        }
    }
    const std::vector<double> doubled = symmetric_eigenvalues(big);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return out;
}

}  // namespace bsp
