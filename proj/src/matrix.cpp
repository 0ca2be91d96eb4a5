#include "synthbench/matrix.hpp"

namespace synthbench {

Matrix matmul(const Matrix& A, const Matrix& B) {
    assert(A.cols == B.rows);
    Matrix C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* arow = A.row(i);
        double* crow = C.row(i);
        for (std::size_t k = 0; k < A.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = B.row(k);
            for (std::size_t j = 0; j < B.cols; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
    return C;
}

Matrix matmul_tn(const Matrix& A, const Matrix& B) {
    assert(A.rows == B.rows);
    Matrix C(A.cols, B.cols);
    for (std::size_t k = 0; k < A.rows; ++k) {
        const double* arow = A.row(k);
        const double* brow = B.row(k);
        for (std::size_t i = 0; i < A.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = C.row(i);
            for (std::size_t j = 0; j < B.cols; ++j) {
                crow[j] += aki * brow[j];
            }
        }
    }
    return C;
}

Matrix matmul_nt(const Matrix& A, const Matrix& B) {
    assert(A.cols == B.cols);
    Matrix C(A.rows, B.rows);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* arow = A.row(i);
        double* crow = C.row(i);
        for (std::size_t j = 0; j < B.rows; ++j) {
            const double* brow = B.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < A.cols; ++k) {
                acc += arow[k] * brow[k];
            }
            crow[j] = acc;
        }
    }
    return C;
}

}  // namespace synthbench
