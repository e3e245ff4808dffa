#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace consensus_lab {

// Row-major dense matrix. Sized for the graphs this project handles
// (tens to a few hundred vertices); no expression templates.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] DenseMatrix transpose() const;
    [[nodiscard]] DenseMatrix operator*(const DenseMatrix& rhs) const;
    [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

    // Largest absolute entrywise difference; matrices must have equal shape.
    [[nodiscard]] double max_abs_diff(const DenseMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct JacobiOptions {
    double off_diagonal_tol = 1e-12;
    int max_sweeps = 100;
};

// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
// Iterates until the off-diagonal Frobenius norm falls below
// off_diagonal_tol (relative to the matrix norm when that exceeds one).
// Throws std::invalid_argument for a non-square input.
[[nodiscard]] std::vector<double> symmetric_eigenvalues(DenseMatrix a,
                                                        const JacobiOptions& opts = {});

}  // namespace consensus_lab
