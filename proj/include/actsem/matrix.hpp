#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace actsem {

/// Dense row-major matrix of doubles. Binary adjacency matrices use the same
/// type with 0/1 entries.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    bool is_symmetric() const;
    std::size_t count_nonzero() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// Plain-text dump of a square matrix: the dimension on the first line, then
/// one row per line. Values use the shortest form that round-trips a double.
void write_matrix_dump(std::ostream& out, const Matrix& m);
Matrix read_matrix_dump(std::istream& in);

/// "%.17g" formatting; exact for any double.
std::string format_exact(double v);
/// "%.9g" formatting.
std::string format_9g(double v);

}  // namespace actsem
