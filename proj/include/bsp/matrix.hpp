#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bsp {

// Dense row-major real matrix; the carrier for X, X-bar, Y and F.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;  // rows*cols, row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool square() const { return rows == cols; }
    // Throws if entries.size() != rows*cols or any entry is non-finite.
    void validate() const;

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix constant(std::size_t r, std::size_t c, double v);

    double row_sum(std::size_t i) const;
    double col_sum(std::size_t j) const;

    // CSV with a "# rows,cols" header line.
    std::string to_csv() const;
    static DenseMatrix from_csv(std::istream& in);
    static DenseMatrix from_csv_string(const std::string& text);

    // {"rows":r,"cols":c,"entries":[...]}
    std::string to_json() const;
    static DenseMatrix from_json_string(const std::string& text);
};

// Complex matrix stored as separate real and imaginary planes so the
// real-only fast paths stay untouched.
struct ComplexMatrix {
    DenseMatrix re;
    DenseMatrix im;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : re(r, c), im(r, c) {}
    explicit ComplexMatrix(const DenseMatrix& real) : re(real), im(real.rows, real.cols) {}

    std::size_t rows() const { return re.rows; }
    std::size_t cols() const { return re.cols; }
    std::complex<double> at(std::size_t i, std::size_t j) const { return {re(i, j), im(i, j)}; }
    void set(std::size_t i, std::size_t j, std::complex<double> v) {
        re(i, j) = v.real();
        im(i, j) = v.imag();
    }

    // Interleaved working copy for the dense solvers.
    std::vector<std::complex<double>> packed() const;
    static ComplexMatrix from_packed(const std::vector<std::complex<double>>& a, std::size_t r,
                                     std::size_t c);
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);

}  // namespace bsp
