#include "bsp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "bsp/errors.hpp"
#include "bsp/kernels.hpp"
#include "json.hpp"

namespace bsp {

void DenseMatrix::validate() const {
    if (entries.size() != rows * cols) {
        throw DimensionError("DenseMatrix: entries length does not match rows*cols");
    }
    for (const double v : entries) {
        if (!std::isfinite(v)) throw ConstraintError("DenseMatrix: non-finite entry");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::constant(std::size_t r, std::size_t c, double v) {
    DenseMatrix m(r, c);
    for (auto& e : m.entries) e = v;
    return m;
}

double DenseMatrix::row_sum(std::size_t i) const {
    return kernels::active().sum(entries.data() + i * cols, cols);
}

double DenseMatrix::col_sum(std::size_t j) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += (*this)(i, j);
    return acc;
}

std::string DenseMatrix::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "# " << rows << "," << cols << "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (j) out << ",";
            out << (*this)(i, j);
        }
        out << "\n";
    }
    return out.str();
}

DenseMatrix DenseMatrix::from_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#') {
        throw ParseError("matrix CSV: missing '# rows,cols' header");
    }
    std::size_t r = 0;
    std::size_t c = 0;
    {
        std::string body = header.substr(1);
        std::replace(body.begin(), body.end(), ',', ' ');
        std::istringstream hs(body);
        if (!(hs >> r >> c)) throw ParseError("matrix CSV: bad header: " + header);
    }
    DenseMatrix m(r, c);
    std::string line;
    for (std::size_t i = 0; i < r; ++i) {
        if (!std::getline(in, line)) throw ParseError("matrix CSV: truncated at row " + std::to_string(i));
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        for (std::size_t j = 0; j < c; ++j) {
            if (!(ls >> m(i, j))) {
                throw ParseError("matrix CSV: bad value at row " + std::to_string(i));
            }
        }
    }
    return m;
}

DenseMatrix DenseMatrix::from_csv_string(const std::string& text) {
    std::istringstream in(text);
    return from_csv(in);
}

std::string DenseMatrix::to_json() const {
    nlohmann::json j;
    j["rows"] = rows;
    j["cols"] = cols;
    j["entries"] = entries;
    return j.dump();
}

DenseMatrix DenseMatrix::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("matrix JSON: ") + e.what());
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
        throw ParseError("matrix JSON: need rows, cols, entries");
    }
    DenseMatrix m(j["rows"].get<std::size_t>(), j["cols"].get<std::size_t>());
    m.entries = j["entries"].get<std::vector<double>>();
    m.validate();
    return m;
}

std::vector<std::complex<double>> ComplexMatrix::packed() const {
    std::vector<std::complex<double>> a(rows() * cols());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = {re.entries[k], im.entries[k]};
    return a;
}

ComplexMatrix ComplexMatrix::from_packed(const std::vector<std::complex<double>>& a, std::size_t r,
                                         std::size_t c) {
    ComplexMatrix m(r, c);
    for (std::size_t k = 0; k < a.size(); ++k) {
        m.re.entries[k] = a[k].real();
        m.im.entries[k] = a[k].imag();
    }
    return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw DimensionError("matmul: inner dimensions differ");
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            kernels::active().axpy(aik, &b.entries[k * b.cols], &c.entries[i * c.cols], b.cols);
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    }
    return t;
}

double frobenius_norm(const DenseMatrix& a) {
    return std::sqrt(kernels::active().sumsq(a.entries.data(), a.entries.size()));
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (const double v : a.entries) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace bsp
