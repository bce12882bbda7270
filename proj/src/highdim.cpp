#include "resrand/highdim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resrand/detail/parallel.hpp"

namespace resrand {

namespace {

double soft_threshold(double z, double g) {
    if (z > g) return z - g;
    if (z < -g) return z + g;
    return 0.0;
}

/// Shared state for solving P w = a with P = X'X + lambda I, factorized
/// once and reused across hypotheses and draws. When p > n the solve goes
/// through K = XX' + lambda I:  P^-1 a = (a - X'K^-1(Xa)) / lambda.
class PenalizedGram {
  public:
    PenalizedGram(const Matrix& X, double lambda) : X_(X), lambda_(lambda) {
        if (X.cols() <= X.rows()) {
            primal_ = true;
            Matrix P = X.transpose() * X;
            P.diagonal().array() += lambda;
            ldlt_.compute(P);
        } else {
            Matrix K = X * X.transpose();
            K.diagonal().array() += lambda;
            ldlt_.compute(K);
        }
        if (ldlt_.info() != Eigen::Success)
            throw Error(ErrorCode::SingularDesign, "penalized Gram factorization failed");
    }

    Vector solve(const Vector& a) const {
        if (primal_) return ldlt_.solve(a);
        return (a - X_.transpose() * ldlt_.solve(X_ * a)) / lambda_;
    }

    Vector ridge(const Vector& y) const {
        if (primal_) return ldlt_.solve(X_.transpose() * y);
        return X_.transpose() * ldlt_.solve(y);
    }

  private:
    const Matrix& X_;
    double lambda_;
    bool primal_ = false;
    Eigen::LDLT<Matrix> ldlt_;
};

struct LassoWork {
    Matrix gram;   // X'X / n
    Vector xty;    // X'y / n
    Vector diag;   // gram diagonal
};

LassoWork lasso_workspace(const Dataset& d) {
    LassoWork w;
    const double n = static_cast<double>(d.n());
    w.gram = (d.X.transpose() * d.X) / n;
    w.xty = (d.X.transpose() * d.y) / n;
    w.diag = w.gram.diagonal();
    return w;
}

double lasso_kkt_gap(const LassoWork& w, const Vector& beta, double lambda) {
    const Vector grad = w.xty - w.gram * beta;
    double gap = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta(j) == 0.0)
            gap = std::max(gap, std::abs(grad(j)) - lambda);
        else
            gap = std::max(gap, std::abs(grad(j) - lambda * (beta(j) > 0 ? 1.0 : -1.0)));
    }
    return gap;
}

/// Cyclic coordinate descent on the covariance form; beta is the warm
/// start and holds the solution on return.
void lasso_descend(const LassoWork& w, double lambda, const PenaltyConfig& cfg, Vector& beta) {
    const Eigen::Index p = beta.size();
    Vector grad_cache = w.gram * beta;  // gram . beta, kept in sync
    for (int sweep = 0; sweep < cfg.lasso_max_sweeps; ++sweep) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (w.diag(j) <= 0.0) continue;
            const double z = w.xty(j) - grad_cache(j) + w.diag(j) * beta(j);
            const double bj = soft_threshold(z, lambda) / w.diag(j);
            const double delta = bj - beta(j);
            if (delta != 0.0) {
                grad_cache += delta * w.gram.col(j);
                beta(j) = bj;
            }
        }
        if (lasso_kkt_gap(w, beta, lambda) <= cfg.lasso_tol) return;
    }
    throw Error(ErrorCode::NoConvergence,
                "lasso did not reach the KKT tolerance after " +
                    std::to_string(cfg.lasso_max_sweeps) + " sweeps (gap " +
                    std::to_string(lasso_kkt_gap(w, beta, lambda)) + ")");
}

}  // namespace

Vector fit_ridge(const Dataset& d, double lambda) {
    d.validate();
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidConfig, "ridge penalty must be > 0");
    return PenalizedGram(d.X, lambda).ridge(d.y);
}

Vector fit_lasso(const Dataset& d, double lambda, const PenaltyConfig& cfg) {
    d.validate();
    if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidConfig, "lasso penalty must be >= 0");
    const LassoWork w = lasso_workspace(d);
    Vector beta = Vector::Zero(d.p());
    lasso_descend(w, lambda, cfg, beta);
    return beta;
}

double cv_lambda_lasso(const Dataset& d, std::uint64_t seed) {
    d.validate();
    const Eigen::Index n = d.n();
    const int folds = 5;
    const double lmax = (d.X.transpose() * d.y).cwiseAbs().maxCoeff() / static_cast<double>(n);
    std::vector<double> grid;
    for (int k = 0; k < 20; ++k) grid.push_back(lmax * std::pow(1e-3, k / 19.0));

    Rng rng(derive_seed(seed, 0xCF));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_below(i))]);

    PenaltyConfig cfg;
    cfg.lambda_ridge = 1.0;
    cfg.lambda_lasso = lmax;
    std::vector<double> cv_err(grid.size(), 0.0);
    for (int f = 0; f < folds; ++f) {
        std::vector<char> hold(static_cast<std::size_t>(n), 0);
        for (Eigen::Index i = 0; i < n; ++i)
            if (static_cast<int>(i) % folds == f) hold[static_cast<std::size_t>(order[i])] = 1;
        Dataset train;
        std::vector<int> test_rows;
        {
            std::vector<int> rows;
            for (Eigen::Index i = 0; i < n; ++i)
                (hold[static_cast<std::size_t>(i)] ? test_rows : rows).push_back(static_cast<int>(i));
            train.y.resize(static_cast<Eigen::Index>(rows.size()));
            train.X.resize(static_cast<Eigen::Index>(rows.size()), d.p());
            for (std::size_t k = 0; k < rows.size(); ++k) {
                train.y(static_cast<Eigen::Index>(k)) = d.y(rows[k]);
                train.X.row(static_cast<Eigen::Index>(k)) = d.X.row(rows[k]);
            }
        }
        const LassoWork w = lasso_workspace(train);
        Vector beta = Vector::Zero(d.p());
        for (std::size_t g = 0; g < grid.size(); ++g) {  // warm starts down the path
            lasso_descend(w, grid[g], cfg, beta);
            double err = 0.0;
            for (int i : test_rows) {
                const double r = d.y(i) - d.X.row(i).dot(beta);
                err += r * r;
            }
            cv_err[g] += err;
        }
    }
    const auto best = std::min_element(cv_err.begin(), cv_err.end()) - cv_err.begin();
    return grid[static_cast<std::size_t>(best)];
}

double cv_lambda_ridge(const Dataset& d, std::uint64_t seed) {
    d.validate();
    const Eigen::Index n = d.n();
    const int folds = 5;
    const double scale = (d.X.transpose() * d.X).trace() / static_cast<double>(d.p());
    std::vector<double> grid;
    for (int k = 0; k < 20; ++k) grid.push_back(scale * std::pow(10.0, -6.0 + 6.0 * k / 19.0));

    Rng rng(derive_seed(seed, 0xCE));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_below(i))]);

    std::vector<double> cv_err(grid.size(), 0.0);
    for (int f = 0; f < folds; ++f) {
        std::vector<int> rows, test_rows;
        for (Eigen::Index i = 0; i < n; ++i)
            ((static_cast<int>(i) % folds == f) ? test_rows : rows)
                .push_back(order[static_cast<std::size_t>(i)]);
        Dataset train;
        train.y.resize(static_cast<Eigen::Index>(rows.size()));
        train.X.resize(static_cast<Eigen::Index>(rows.size()), d.p());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            train.y(static_cast<Eigen::Index>(k)) = d.y(rows[k]);
            train.X.row(static_cast<Eigen::Index>(k)) = d.X.row(rows[k]);
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const Vector beta = fit_ridge(train, grid[g]);
            double err = 0.0;
            for (int i : test_rows) {
                const double r = d.y(i) - d.X.row(i).dot(beta);
                err += r * r;
            }
            cv_err[g] += err;
        }
    }
    const auto best = std::min_element(cv_err.begin(), cv_err.end()) - cv_err.begin();
    return grid[static_cast<std::size_t>(best)];
}

namespace {

struct HighdimContext {
    Vector beta_lasso;
    Vector beta_ridge;
    Vector residuals;  // y - X beta_lasso
    PenalizedGram gram;

    HighdimContext(const Dataset& d, const PenaltyConfig& pen)
        : gram(d.X, pen.lambda_ridge) {
        beta_lasso = fit_lasso(d, pen.lambda_lasso, pen);
        beta_ridge = gram.ridge(d.y);
        residuals = d.y - d.X * beta_lasso;
    }
};

TestOutcome run_one(const Dataset& d, const HighdimContext& ctx, const PenaltyConfig& pen,
                    const LinearHypothesis& h, const PrimitiveKind& kind,
                    const TestConfig& cfg) {
    const double sqrt_n = std::sqrt(static_cast<double>(d.n()));
    const Vector w = ctx.gram.solve(h.a);
    const double t_obs = sqrt_n * (h.a.dot(ctx.beta_ridge) - h.a0 +
                                   pen.lambda_ridge * w.dot(ctx.beta_lasso));
    StatFunctional f;
    f.weight = sqrt_n * (d.X * w);
    return run_core(f, ctx.residuals, t_obs, kind, cfg, CompareMode::ObservedStatistic);
}

}  // namespace

TestOutcome run_highdim_test(const Dataset& d, const LinearHypothesis& h,
                             const PenaltyConfig& pen, const PrimitiveKind& kind,
                             const TestConfig& cfg) {
    d.validate();
    pen.validate();
    h.validate(d.p());
    const HighdimContext ctx(d, pen);
    return run_one(d, ctx, pen, h, kind, cfg);
}

FamilyTestReport family_test(const Dataset& d, const PenaltyConfig& pen,
                             const PrimitiveKind& kind, const TestConfig& cfg) {
    d.validate();
    pen.validate();
    const HighdimContext ctx(d, pen);
    const auto p = static_cast<std::size_t>(d.p());

    FamilyTestReport report;
    report.alpha_family = cfg.alpha;
    report.per_coef_pvals.resize(p);
    report.rejected.resize(p);
    const double threshold = cfg.alpha / static_cast<double>(p);

    // Coefficients are independent work items; draws inside each test stay
    // sequential here to keep the per-draw substreams identical either way.
    detail::parallel_for(p, cfg.threads, [&](std::size_t j) {
        TestConfig one = cfg;
        one.threads = 1;
        one.seed = derive_seed(cfg.seed, j);
        const LinearHypothesis h =
            LinearHypothesis::coefficient(d.p(), static_cast<Eigen::Index>(j), 0.0);
        const TestOutcome o = run_one(d, ctx, pen, h, kind, one);
        report.per_coef_pvals[j] = std::min(1.0, 2.0 * o.pval_two);
        report.rejected[j] = report.per_coef_pvals[j] <= threshold ? 1 : 0;
    });
    return report;
}

}  // namespace resrand
