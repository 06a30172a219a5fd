#include "sapg/smoothing.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sapg {

namespace {

void require_positive_mu(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("smoothing: mu must be positive");
}

void check_affine_dims(const DenseMatrix& A, const Vector& b, const char* who) {
    if (A.rows() != b.size()) {
        throw std::invalid_argument(std::string(who) + ": rows(A) must equal len(b)");
    }
    if (A.rows() == 0 || A.cols() == 0) {
        throw std::invalid_argument(std::string(who) + ": empty matrix");
    }
    ensure_finite(b, std::string(who) + " offset");
}

// L = ||A||_2^2, with the zero matrix treated as a constant loss: any
// positive factor is then a valid Lipschitz modulus, and 1 keeps the
// inexact solver's step 1/L well-defined.
double lipschitz_of(const DenseMatrix& A) {
    if (A.frobenius_norm() == 0.0) return 1.0;
    return spectral_norm_sq(A);
}

}  // namespace

ScalarSmooth smoothed_abs(double z, double mu) {
    require_positive_mu(mu);
    if (std::abs(z) > mu) {
        return {std::abs(z), z > 0.0 ? 1.0 : -1.0};
    }
    return {z * z / (2.0 * mu) + mu / 2.0, z / mu};
}

ScalarSmooth smoothed_plus(double z, double mu) {
    require_positive_mu(mu);
    if (std::abs(z) > mu) {
        return {std::max(z, 0.0), z > 0.0 ? 1.0 : 0.0};
    }
    const double t = z + mu;
    return {t * t / (4.0 * mu), t / (2.0 * mu)};
}

namespace {

class L1AffineLoss final : public SmoothableLoss {
public:
    L1AffineLoss(DenseMatrix A, Vector b)
        : A_(std::move(A)), b_(std::move(b)), constants_{A_.rows() / 2.0, lipschitz_of(A_)} {}

    double exact_value(const Vector& x) const override {
        const Vector r = sub(matvec(A_, x), b_);
        return norm1(r);
    }

    double smooth_value(const Vector& x, double mu) const override {
        require_positive_mu(mu);
        const Vector r = sub(matvec(A_, x), b_);
        double s = 0.0;
        for (double ri : r) s += smoothed_abs(ri, mu).value;
        return s;
    }

    Vector smooth_gradient(const Vector& x, double mu) const override {
        require_positive_mu(mu);
        Vector d = sub(matvec(A_, x), b_);
        for (double& di : d) di = smoothed_abs(di, mu).derivative;
        return matvec_transpose(A_, d);
    }

    std::optional<SmoothingConstants> constants() const override { return constants_; }
    std::size_t dimension() const override { return A_.cols(); }

private:
    DenseMatrix A_;
    Vector b_;
    SmoothingConstants constants_;
};

class CensoredAffineLoss final : public SmoothableLoss {
public:
    CensoredAffineLoss(DenseMatrix A, Vector b)
        : A_(std::move(A)),
          b_(std::move(b)),
          constants_{0.75 * A_.rows(), 1.5 * lipschitz_of(A_)} {}

    double exact_value(const Vector& x) const override {
        const Vector z = matvec(A_, x);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += std::abs(std::max(z[i], 0.0) - b_[i]);
        return s;
    }

    double smooth_value(const Vector& x, double mu) const override {
        require_positive_mu(mu);
        const Vector z = matvec(A_, x);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            s += smoothed_abs(smoothed_plus(z[i], mu).value - b_[i], mu).value;
        }
        return s;
    }

    Vector smooth_gradient(const Vector& x, double mu) const override {
        require_positive_mu(mu);
        Vector d = matvec(A_, x);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const ScalarSmooth inner = smoothed_plus(d[i], mu);
            const ScalarSmooth outer = smoothed_abs(inner.value - b_[i], mu);
            d[i] = outer.derivative * inner.derivative;
        }
        return matvec_transpose(A_, d);
    }

    std::optional<SmoothingConstants> constants() const override { return constants_; }
    std::size_t dimension() const override { return A_.cols(); }

private:
    DenseMatrix A_;
    Vector b_;
    SmoothingConstants constants_;
};

class HingePenaltyLoss final : public SmoothableLoss {
public:
    HingePenaltyLoss(double lam, DenseMatrix H, Vector d)
        : lam_(lam),
          H_(std::move(H)),
          d_(std::move(d)),
          constants_{lam_ * H_.rows() / 4.0, lam_ * lipschitz_of(H_) / 2.0} {}

    double exact_value(const Vector& x) const override {
        const Vector z = matvec(H_, x);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += std::max(z[i] - d_[i], 0.0);
        return lam_ * s;
    }

    double smooth_value(const Vector& x, double mu) const override {
        require_positive_mu(mu);
        const Vector z = matvec(H_, x);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += smoothed_plus(z[i] - d_[i], mu).value;
        return lam_ * s;
    }

    Vector smooth_gradient(const Vector& x, double mu) const override {
        require_positive_mu(mu);
        Vector w = matvec(H_, x);
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = lam_ * smoothed_plus(w[i] - d_[i], mu).derivative;
        }
        return matvec_transpose(H_, w);
    }

    std::optional<SmoothingConstants> constants() const override { return constants_; }
    std::size_t dimension() const override { return H_.cols(); }

private:
    double lam_;
    DenseMatrix H_;
    Vector d_;
    SmoothingConstants constants_;
};

}  // namespace

LossPtr l1_affine_loss(DenseMatrix A, Vector b) {
    check_affine_dims(A, b, "l1_affine_loss");
    return std::make_shared<L1AffineLoss>(std::move(A), std::move(b));
}

LossPtr censored_affine_loss(DenseMatrix A, Vector b) {
    check_affine_dims(A, b, "censored_affine_loss");
    return std::make_shared<CensoredAffineLoss>(std::move(A), std::move(b));
}

LossPtr hinge_penalty_loss(double lam, DenseMatrix H, Vector d) {
    if (!(lam > 0.0)) throw std::invalid_argument("hinge_penalty_loss: lam must be positive");
    check_affine_dims(H, d, "hinge_penalty_loss");
    return std::make_shared<HingePenaltyLoss>(lam, std::move(H), std::move(d));
}

}  // namespace sapg
