#include "actsem/matrix.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "actsem/error.hpp"

namespace actsem {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

std::size_t Matrix::count_nonzero() const {
    std::size_t n = 0;
    for (double v : data_) n += (v != 0.0);
    return n;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorCode::DimMismatch, "matrix product " + std::to_string(a.rows()) + "x" +
                                                std::to_string(a.cols()) + " * " +
                                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_9g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_matrix_dump(std::ostream& out, const Matrix& m) {
    out << m.rows() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_exact(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix_dump(std::istream& in) {
    std::size_t n = 0;
    if (!(in >> n) || n == 0) throw Error(ErrorCode::MalformedHeader, "matrix dump: missing dimension");
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!(in >> m(i, j)))
                throw Error(ErrorCode::TruncatedStream, "matrix dump: expected " + std::to_string(n * n) + " values");
    return m;
}

}  // namespace actsem
