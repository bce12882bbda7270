#include "resrand/linmodel.hpp"

#include <cmath>

namespace resrand {

namespace {

/// Symmetric factorization of X'X with an eigenvalue-based condition guard.
struct Gram {
    Matrix inverse;
    double condition;
};

Gram gram_inverse_guarded(const Matrix& X) {
    const Eigen::Index p = X.cols();
    const Matrix A = X.transpose() * X;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorCode::SingularDesign, "eigendecomposition of X'X failed");
    const Vector& ev = eig.eigenvalues();
    const double lo = ev(0);
    const double hi = ev(p - 1);
    if (!(lo > 0.0) || hi / lo > kConditionBound)
        throw Error(ErrorCode::SingularDesign,
                    "X'X is numerically singular (condition estimate " +
                        std::to_string(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) +
                        ")");
    const Matrix V = eig.eigenvectors();
    return {V * ev.cwiseInverse().asDiagonal() * V.transpose(), hi / lo};
}

}  // namespace

FitResult fit_ols(const Dataset& d) {
    d.validate();
    const Eigen::Index n = d.n();
    const Eigen::Index p = d.p();
    if (p < 1 || n <= p)
        throw Error(ErrorCode::SingularDesign,
                    "standard fit requires n > p >= 1 (n=" + std::to_string(n) +
                        ", p=" + std::to_string(p) + ")");
    Gram g = gram_inverse_guarded(d.X);
    FitResult fit;
    fit.gram_inverse = std::move(g.inverse);
    fit.beta_hat = fit.gram_inverse * (d.X.transpose() * d.y);
    fit.residuals = d.y - d.X * fit.beta_hat;
    return fit;
}

ConstrainedFit fit_constrained_ols(const Dataset& d, const LinearHypothesis& h,
                                   const FitResult& fit) {
    h.validate(d.p());
    // Single-constraint projection: beta0 = bhat - Ga (a'bhat - a0) / (a'Ga).
    const Vector Ga = fit.gram_inverse * h.a;
    const double quad = h.a.dot(Ga);
    if (!(quad > 0.0))
        throw Error(ErrorCode::DegenerateConstraint,
                    "a'(X'X)^-1 a is not positive (" + std::to_string(quad) + ")");
    const double gap = h.a.dot(fit.beta_hat) - h.a0;
    ConstrainedFit cf;
    cf.beta_restricted = fit.beta_hat - Ga * (gap / quad);
    cf.restricted_residuals = d.y - d.X * cf.beta_restricted;
    return cf;
}

ConstrainedFit fit_constrained_ols(const Dataset& d, const LinearHypothesis& h) {
    return fit_constrained_ols(d, h, fit_ols(d));
}

double test_statistic(const Dataset& d, const FitResult& fit, const LinearHypothesis& h) {
    return std::sqrt(static_cast<double>(d.n())) * (h.a.dot(fit.beta_hat) - h.a0);
}

StatFunctional make_stat_functional(const Dataset& d, const LinearHypothesis& h,
                                    const FitResult& fit) {
    h.validate(d.p());
    StatFunctional f;
    f.weight = std::sqrt(static_cast<double>(d.n())) * (d.X * (fit.gram_inverse * h.a));
    return f;
}

StatFunctional make_stat_functional(const Dataset& d, const LinearHypothesis& h) {
    return make_stat_functional(d, h, fit_ols(d));
}

bool classical_wald_test(const Dataset& d, const LinearHypothesis& h, double alpha) {
    const FitResult fit = fit_ols(d);
    h.validate(d.p());
    const Eigen::Index n = d.n();
    const Eigen::Index p = d.p();
    const double sigma2 = fit.residuals.squaredNorm() / static_cast<double>(n - p);
    const double var = sigma2 * h.a.dot(fit.gram_inverse * h.a);
    if (!(var > 0.0)) return false;
    const double z = (h.a.dot(fit.beta_hat) - h.a0) / std::sqrt(var);
    const double pval = std::erfc(std::abs(z) / std::numbers::sqrt2);
    return pval <= alpha;
}

}  // namespace resrand
