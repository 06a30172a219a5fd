#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sapg/linalg.hpp"
#include "test_support.hpp"

using namespace sapg;

namespace {

double max_abs_gram_error(const DenseMatrix& A) {
    // ||A A^T - I||_max
    double worst = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.rows(); ++j) {
            double g = 0.0;
            for (std::size_t k = 0; k < A.cols(); ++k) g += A(i, k) * A(j, k);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("matvec hand cases") {
    CHECK(matvec(DenseMatrix::identity(2), {3.0, -1.0}) == Vector{3.0, -1.0});
    CHECK(matvec(DenseMatrix(2, 2, {1, 2, 0, 1}), {1.0, 1.0}) == Vector{3.0, 1.0});
    CHECK(matvec(DenseMatrix(2, 2), {7.0, -4.0}) == Vector{0.0, 0.0});
    CHECK_THROWS_AS(matvec(DenseMatrix::identity(2), Vector{1.0}), std::invalid_argument);
}

TEST_CASE("matvec is linear") {
    const DenseMatrix A = testing::random_gaussian(7, 5, 42);
    const Vector x = testing::random_uniform(5, 43, -1.0, 1.0);
    const Vector y = testing::random_uniform(5, 44, -1.0, 1.0);
    const double a = 0.37, b = -1.25;

    const Vector lhs = matvec(A, axpy(a, x, [&] {
                                  Vector by(y.size());
                                  for (std::size_t i = 0; i < y.size(); ++i) by[i] = b * y[i];
                                  return by;
                              }()));
    const Vector rhs = axpy(a, matvec(A, x), [&] {
        Vector bAy = matvec(A, y);
        for (double& v : bAy) v *= b;
        return bAy;
    }());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
}

TEST_CASE("finite-entry invariants") {
    CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(ensure_finite({1.0, INFINITY}, "v"), std::invalid_argument);
    CHECK_NOTHROW(ensure_finite({1.0, -2.0}, "v"));
}

TEST_CASE("orthonormalize_rows: diagonal case") {
    const DenseMatrix A = orthonormalize_rows(DenseMatrix(2, 2, {2, 0, 0, 3}));
    CHECK(max_abs_gram_error(A) <= 1e-12);
}

TEST_CASE("orthonormalize_rows: seeded rectangular cases") {
    for (auto [m, n, seed] : {std::tuple<int, int, int>{3, 6, 1},
                              {5, 9, 2},
                              {20, 50, 3},
                              {100, 200, 4}}) {
        const DenseMatrix B = testing::random_gaussian(m, n, seed);
        const DenseMatrix A = orthonormalize_rows(B);
        CHECK(A.rows() == B.rows());
        CHECK(A.cols() == B.cols());
        CHECK(max_abs_gram_error(A) <= 1e-10);

        // Same row space: every row of B reconstructs through A.
        for (std::size_t i = 0; i < B.rows(); ++i) {
            Vector row(B.cols());
            for (std::size_t j = 0; j < B.cols(); ++j) row[j] = B(i, j);
            const Vector coeff = matvec(A, row);
            const Vector back = matvec_transpose(A, coeff);
            CHECK(norm_inf(sub(row, back)) <= 1e-9 * (1.0 + norm_inf(row)));
        }
    }
}

TEST_CASE("orthonormalize_rows rejects rank deficiency") {
    const DenseMatrix dup(2, 3, {1, 2, 3, 1, 2, 3});
    CHECK_THROWS_AS(orthonormalize_rows(dup), std::runtime_error);
    CHECK_THROWS_AS(orthonormalize_rows(DenseMatrix(3, 2)), std::invalid_argument);
}

TEST_CASE("spectral_norm_sq") {
    CHECK(spectral_norm_sq(DenseMatrix(2, 2, {3, 0, 0, 1})) == doctest::Approx(9.0).epsilon(1e-8));

    const DenseMatrix A = orthonormalize_rows(testing::random_gaussian(4, 10, 7));
    CHECK(spectral_norm_sq(A) == doctest::Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(spectral_norm_sq(DenseMatrix(3, 3)), std::invalid_argument);
}

TEST_CASE("spectral_norm_sq dominates Rayleigh quotients") {
    const DenseMatrix A = testing::random_gaussian(6, 9, 11);
    const double lam = spectral_norm_sq(A, 1e-12);
    for (int probe = 0; probe < 20; ++probe) {
        const Vector v = testing::random_uniform(9, 100 + probe, -1.0, 1.0);
        const double q = norm2_sq(matvec(A, v)) / norm2_sq(v);
        CHECK(lam >= q - 1e-8 * std::max(1.0, q));
    }
}

TEST_CASE("spectral_norm_sq recovers from a null-space start") {
    // ones(n) is in the null space of this matrix; the deterministic
    // restart must still find the dominant direction.
    const DenseMatrix A(1, 2, {1.0, -1.0});
    CHECK(spectral_norm_sq(A) == doctest::Approx(2.0).epsilon(1e-8));
}
