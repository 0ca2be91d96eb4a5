#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace synthbench {

// Dense row-major matrix of doubles. Deliberately minimal; all heavy math in
// this project runs through the handful of kernels below so training stays
// bit-deterministic.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    double* row(std::size_t r) { return a.data() + r * cols; }
    const double* row(std::size_t r) const { return a.data() + r * cols; }

    void fill(double v) { a.assign(a.size(), v); }
};

// C = A * B
Matrix matmul(const Matrix& A, const Matrix& B);
// C = A^T * B
Matrix matmul_tn(const Matrix& A, const Matrix& B);
// C = A * B^T
Matrix matmul_nt(const Matrix& A, const Matrix& B);

}  // namespace synthbench
