#include "sapg/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sapg {

void ensure_finite(const Vector& v, const std::string& what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            std::ostringstream os;
            os << what << ": entry " << i << " is not finite";
            throw std::invalid_argument(os.str());
        }
    }
}

namespace {

void check_same_size(const Vector& a, const Vector& b, const char* op) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << op << ": size mismatch (" << a.size() << " vs " << b.size() << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
    check_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2_sq(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double norm2(const Vector& v) { return std::sqrt(norm2_sq(v)); }

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

Vector axpy(double a, const Vector& x, const Vector& y) {
    check_same_size(x, y, "axpy");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    check_same_size(a, b, "sub");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("DenseMatrix: entry count does not match rows*cols");
    }
    ensure_finite(data_, "DenseMatrix entries");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    return T;
}

double DenseMatrix::frobenius_norm() const { return norm2(data_); }

Vector matvec(const DenseMatrix& A, const Vector& x) {
    if (A.cols() != x.size()) {
        throw std::invalid_argument("matvec: dimension mismatch");
    }
    Vector r(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Vector matvec_transpose(const DenseMatrix& A, const Vector& y) {
    if (A.rows() != y.size()) {
        throw std::invalid_argument("matvec_transpose: dimension mismatch");
    }
    Vector r(A.cols(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        const double yi = y[i];
        for (std::size_t j = 0; j < A.cols(); ++j) r[j] += A(i, j) * yi;
    }
    return r;
}

DenseMatrix orthonormalize_rows(const DenseMatrix& B) {
    const std::size_t m = B.rows();
    const std::size_t n = B.cols();
    if (m > n) {
        throw std::invalid_argument("orthonormalize_rows: need rows <= cols");
    }
    if (m == 0) {
        throw std::invalid_argument("orthonormalize_rows: empty matrix");
    }

    // Householder QR of W = B^T (n x m). The reflectors are stored below the
    // diagonal of W, the essential scalars in tau.
    DenseMatrix W = B.transposed();
    const double rank_tol = 1e-12 * B.frobenius_norm();
    std::vector<double> tau(m, 0.0);

    for (std::size_t jcol = 0; jcol < m; ++jcol) {
        double col_norm_sq = 0.0;
        for (std::size_t i = jcol; i < n; ++i) col_norm_sq += W(i, jcol) * W(i, jcol);
        const double col_norm = std::sqrt(col_norm_sq);
        if (col_norm <= rank_tol) {
            throw std::runtime_error("orthonormalize_rows: rank-deficient input");
        }
        const double head = W(jcol, jcol);
        const double alpha = (head >= 0.0) ? -col_norm : col_norm;
        // v = x - alpha*e1, normalized so v[0] = 1.
        const double v0 = head - alpha;
        tau[jcol] = -v0 / alpha;  // = 2 / (v^T v) * v0^2 scaling, standard form
        for (std::size_t i = jcol + 1; i < n; ++i) W(i, jcol) /= v0;
        W(jcol, jcol) = alpha;  // diagonal of R, |alpha| = col_norm > rank_tol
        // Apply H = I - tau * v v^T to the trailing columns.
        for (std::size_t jc = jcol + 1; jc < m; ++jc) {
            double s = W(jcol, jc);
            for (std::size_t i = jcol + 1; i < n; ++i) s += W(i, jcol) * W(i, jc);
            s *= tau[jcol];
            W(jcol, jc) -= s;
            for (std::size_t i = jcol + 1; i < n; ++i) W(i, jc) -= s * W(i, jcol);
        }
    }

    // Accumulate Q1 = H_0 ... H_{m-1} * [I_m; 0], one column at a time.
    DenseMatrix Q(n, m);
    for (std::size_t jc = 0; jc < m; ++jc) {
        Vector e(n, 0.0);
        e[jc] = 1.0;
        for (std::size_t j = m; j-- > 0;) {
            double s = e[j];
            for (std::size_t i = j + 1; i < n; ++i) s += W(i, j) * e[i];
            s *= tau[j];
            e[j] -= s;
            for (std::size_t i = j + 1; i < n; ++i) e[i] -= s * W(i, j);
        }
        for (std::size_t i = 0; i < n; ++i) Q(i, jc) = e[i];
    }

    // A = Q1^T: rows orthonormal, same row space as B.
    DenseMatrix A(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = Q(j, i);
    return A;
}

double spectral_norm_sq(const DenseMatrix& A, double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("spectral_norm_sq: tol must be positive");
    const double fro = A.frobenius_norm();
    if (fro == 0.0) throw std::invalid_argument("spectral_norm_sq: zero matrix");

    const std::size_t n = A.cols();
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = matvec_transpose(A, matvec(A, v));
        const double wn = norm2(w);
        if (wn <= 1e-300 * fro) {
            // Deterministic restart: the start vector hit (numerically) the
            // null space; switch to the largest-column basis vector.
            std::size_t best = 0;
            double best_norm = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                double cn = 0.0;
                for (std::size_t i = 0; i < A.rows(); ++i) cn += A(i, j) * A(i, j);
                if (cn > best_norm) {
                    best_norm = cn;
                    best = j;
                }
            }
            v.assign(n, 0.0);
            v[best] = 1.0;
            continue;
        }
        const double rayleigh = dot(v, w);  // v is unit, so this is v^T A^T A v
        if (it > 0 && std::abs(rayleigh - lambda) <= tol * std::max(1.0, std::abs(rayleigh))) {
            return rayleigh;
        }
        lambda = rayleigh;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    }
    std::ostringstream os;
    os << "spectral_norm_sq: no convergence within " << max_iter
       << " iterations, last estimate " << lambda;
    throw std::runtime_error(os.str());
}

}  // namespace sapg
