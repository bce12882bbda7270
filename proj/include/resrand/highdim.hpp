#pragma once

#include "resrand/engine.hpp"

namespace resrand {

struct PenaltyConfig {
    double lambda_ridge = 0.0;
    double lambda_lasso = 0.0;
    double lasso_tol = 1e-7;
    int lasso_max_sweeps = 100000;

    void validate() const {
        if (!(lambda_ridge > 0.0))
            throw Error(ErrorCode::InvalidConfig, "lambda_ridge must be > 0");
        if (!(lambda_lasso > 0.0))
            throw Error(ErrorCode::InvalidConfig, "lambda_lasso must be > 0");
        if (!(lasso_tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "lasso_tol must be > 0");
        if (lasso_max_sweeps < 1)
            throw Error(ErrorCode::InvalidConfig, "lasso_max_sweeps must be >= 1");
    }
};

/// (X'X + lambda I)^-1 X'y, solved through the n x n dual system when
/// p > n.
Vector fit_ridge(const Dataset& d, double lambda);

/// Coordinate-descent minimizer of (1/2n)||y - Xb||^2 + lambda ||b||_1,
/// iterated to KKT residual <= cfg.lasso_tol.
Vector fit_lasso(const Dataset& d, double lambda, const PenaltyConfig& cfg);

/// 5-fold cross-validated penalty choices. Convenience defaults only; the
/// testing procedure itself takes whatever penalties the caller supplies.
double cv_lambda_lasso(const Dataset& d, std::uint64_t seed);
double cv_lambda_ridge(const Dataset& d, std::uint64_t seed);

TestOutcome run_highdim_test(const Dataset& d, const LinearHypothesis& h,
                             const PenaltyConfig& pen, const PrimitiveKind& kind,
                             const TestConfig& cfg);

struct FamilyTestReport {
    std::vector<double> per_coef_pvals;  // two-sided, 2 * min(upper, lower), capped at 1
    std::vector<char> rejected;          // pval <= alpha_family / p
    double alpha_family = 0.05;
};

/// Tests every H0j: beta_j = 0 with a Bonferroni threshold alpha/p.
/// Draw resolution matters here: rejections need per-coefficient p-values
/// below alpha/(2p), so cfg.draws should be at least ~2p/alpha.
FamilyTestReport family_test(const Dataset& d, const PenaltyConfig& pen,
                             const PrimitiveKind& kind, const TestConfig& cfg);

}  // namespace resrand
