#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Dense vector/matrix kernel. Everything here is deliberately plain:
// sequential summation order, no blocking, no parallel reductions, so
// results are bit-reproducible on a fixed platform.

namespace sapg {

using Vector = std::vector<double>;

// Throws std::invalid_argument if any entry is NaN or infinite. `what`
// names the offending quantity in the message.
void ensure_finite(const Vector& v, const std::string& what);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm2_sq(const Vector& v);
double norm_inf(const Vector& v);
double norm1(const Vector& v);

// a*x + y
Vector axpy(double a, const Vector& x, const Vector& y);
Vector sub(const Vector& a, const Vector& b);

// Row-major dense matrix. Entries are validated finite on construction.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const Vector& data() const { return data_; }

    DenseMatrix transposed() const;
    double frobenius_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

// A*x, plain inner-product sums in deterministic order.
Vector matvec(const DenseMatrix& A, const Vector& x);

// A^T * y without forming the transpose.
Vector matvec_transpose(const DenseMatrix& A, const Vector& y);

// Orthonormalizes the rows of B (m <= n, full row rank) via Householder QR
// of B^T. The result A spans the same row space and satisfies A A^T = I_m.
// Throws std::runtime_error if a diagonal of R falls below 1e-12 * ||B||_F.
DenseMatrix orthonormalize_rows(const DenseMatrix& B);

// ||A||_2^2 by power iteration on A^T A, started from ones(n)/sqrt(n).
// Returns the final Rayleigh quotient (a safe underestimate). Throws on a
// zero matrix and on non-convergence, with the last estimate in the message.
double spectral_norm_sq(const DenseMatrix& A, double tol = 1e-10, int max_iter = 5000);

}  // namespace sapg
