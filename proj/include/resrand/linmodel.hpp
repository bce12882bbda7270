#pragma once

#include "resrand/types.hpp"

namespace resrand {

/// Unconstrained least-squares fit.
struct FitResult {
    Vector beta_hat;
    Vector residuals;
    Matrix gram_inverse;  // (X'X)^-1
};

/// Least squares subject to a'beta = a0.
struct ConstrainedFit {
    Vector beta_restricted;
    Vector restricted_residuals;
};

/// The linear functional t(u) = sqrt(n) a'(X'X)^-1 X'u, stored as the
/// weight vector v with t(u) = v'u.
struct StatFunctional {
    Vector weight;

    double operator()(const Vector& u) const { return weight.dot(u); }
};

/// Condition-number guard applied to X'X before inverting.
inline constexpr double kConditionBound = 1e12;

FitResult fit_ols(const Dataset& d);

ConstrainedFit fit_constrained_ols(const Dataset& d, const LinearHypothesis& h);
ConstrainedFit fit_constrained_ols(const Dataset& d, const LinearHypothesis& h,
                                   const FitResult& fit);

/// T = sqrt(n) (a'beta_hat - a0).
double test_statistic(const Dataset& d, const FitResult& fit, const LinearHypothesis& h);

StatFunctional make_stat_functional(const Dataset& d, const LinearHypothesis& h);
StatFunctional make_stat_functional(const Dataset& d, const LinearHypothesis& h,
                                    const FitResult& fit);

/// Plain homoskedastic z-test; the simulation strawman, nothing more.
/// Returns true when H0 is rejected at the two-sided level alpha.
bool classical_wald_test(const Dataset& d, const LinearHypothesis& h, double alpha);

}  // namespace resrand
