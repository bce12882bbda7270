#include <doctest.h>

#include <cmath>

#include "resrand/highdim.hpp"
#include "resrand/simlab.hpp"

using namespace resrand;

namespace {

Dataset random_tall(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    d.X.resize(n, p);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rng.normal();
        d.y(i) = rng.normal();
    }
    return d;
}

}  // namespace

TEST_CASE("fit_ridge limits and special cases") {
    SUBCASE("vanishing penalty recovers OLS on a tall design") {
        const Dataset d = random_tall(40, 4, 3);
        const Vector ols = fit_ols(d).beta_hat;
        const Vector ridge = fit_ridge(d, 1e-10);
        CHECK((ols - ridge).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("identity design halves y at lambda = 1") {
        Dataset d;
        d.X = Matrix::Identity(5, 5);
        d.y = Vector{{2.0, -4.0, 6.0, 0.0, 1.0}};
        const Vector ridge = fit_ridge(d, 1.0);
        CHECK((ridge - d.y / 2.0).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("dual solve agrees with a direct primal solve when p > n") {
        const Dataset d = random_tall(20, 50, 5);
        const double lambda = 0.7;
        const Vector dual = fit_ridge(d, lambda);
        Matrix P = d.X.transpose() * d.X;
        P.diagonal().array() += lambda;
        const Vector primal = P.ldlt().solve(d.X.transpose() * d.y);
        CHECK((dual - primal).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("fit_lasso against the soft-threshold oracle on an orthonormal design") {
    const Eigen::Index n = 64, p = 6;
    Rng rng(9);
    Matrix raw(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) raw(i, j) = rng.normal();
    const Eigen::HouseholderQR<Matrix> qr(raw);
    Dataset d;
    d.X = qr.householderQ() * Matrix::Identity(n, p) * std::sqrt(static_cast<double>(n));
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) d.y(i) = rng.normal() * 2.0;

    PenaltyConfig cfg;
    cfg.lambda_ridge = 1.0;
    cfg.lambda_lasso = 0.15;
    cfg.lasso_tol = 1e-10;
    const Vector beta = fit_lasso(d, cfg.lambda_lasso, cfg);
    const Vector corr = d.X.transpose() * d.y / static_cast<double>(n);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double z = corr(j);
        const double expect =
            z > cfg.lambda_lasso ? z - cfg.lambda_lasso
                                 : (z < -cfg.lambda_lasso ? z + cfg.lambda_lasso : 0.0);
        CHECK(beta(j) == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("fit_lasso edge cases") {
    const Dataset d = random_tall(30, 5, 13);
    PenaltyConfig cfg;
    cfg.lambda_ridge = 1.0;
    cfg.lambda_lasso = 1.0;
    SUBCASE("penalty above the null threshold zeroes everything") {
        const double lmax =
            (d.X.transpose() * d.y).cwiseAbs().maxCoeff() / static_cast<double>(d.n());
        const Vector beta = fit_lasso(d, lmax * 1.01, cfg);
        CHECK(beta.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("zero penalty on a tall design is OLS") {
        cfg.lasso_tol = 1e-9;
        const Vector beta = fit_lasso(d, 0.0, cfg);
        CHECK((beta - fit_ols(d).beta_hat).cwiseAbs().maxCoeff() < 1e-6);
    }
    SUBCASE("KKT residual bounds hold at the solution") {
        const double lambda = 0.05;
        const Vector beta = fit_lasso(d, lambda, cfg);
        const Vector grad =
            d.X.transpose() * (d.y - d.X * beta) / static_cast<double>(d.n());
        for (Eigen::Index j = 0; j < d.p(); ++j) {
            if (beta(j) == 0.0)
                CHECK(std::abs(grad(j)) <= lambda + cfg.lasso_tol);
            else
                CHECK(std::abs(grad(j) - lambda * (beta(j) > 0 ? 1.0 : -1.0)) <=
                      cfg.lasso_tol * 10);
        }
    }
    SUBCASE("sweep budget exhaustion reports the gap") {
        PenaltyConfig strict = cfg;
        strict.lasso_tol = 1e-15;
        strict.lasso_max_sweeps = 1;
        const Dataset hard = random_tall(25, 40, 14);
        CHECK_THROWS_AS(fit_lasso(hard, 0.01, strict), Error);
    }
}

TEST_CASE("ridge identity: the bias-corrected contrast equals the error functional") {
    // With y = X beta + eps and a'beta = a0:
    //   a'b_ridge - a0 + lambda a'P^-1 beta = a'P^-1 X' eps.
    for (auto [n, p] : {std::pair<int, int>{40, 10}, {20, 30}}) {
        Rng rng(static_cast<std::uint64_t>(n * 100 + p));
        Dataset d;
        d.X.resize(n, p);
        Vector beta(p), eps(n), a(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            beta(j) = rng.normal();
            a(j) = rng.normal();
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rng.normal();
            eps(i) = rng.normal();
        }
        d.y = d.X * beta + eps;
        const double a0 = a.dot(beta);
        const double lambda = 0.9;

        Matrix P = d.X.transpose() * d.X;
        P.diagonal().array() += lambda;
        const Eigen::LDLT<Matrix> ldlt(P);
        const Vector ridge = fit_ridge(d, lambda);
        const double lhs = a.dot(ridge) - a0 + lambda * a.dot(ldlt.solve(beta));
        const double rhs = a.dot(ldlt.solve(d.X.transpose() * eps));
        CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("run_highdim_test: statistic sign follows the ridge contrast when bias vanishes") {
    const Eigen::Index n = 64, p = 4;
    Rng rng(21);
    Matrix raw(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) raw(i, j) = rng.normal();
    Dataset d;
    d.X = Eigen::HouseholderQR<Matrix>(raw).householderQ() * Matrix::Identity(n, p) *
          std::sqrt(static_cast<double>(n));
    Vector beta = Vector::Zero(p);
    beta(1) = 5.0;
    d.y = d.X * beta;
    for (Eigen::Index i = 0; i < n; ++i) d.y(i) += 0.1 * rng.normal();

    PenaltyConfig pen;
    pen.lambda_ridge = 1e-6;
    pen.lambda_lasso = 0.05;
    TestConfig cfg;
    cfg.draws = 200;
    const LinearHypothesis h = LinearHypothesis::coefficient(p, 1, 0.0);
    const TestOutcome out = run_highdim_test(d, h, pen, global_sign(n), cfg);
    const Vector ridge = fit_ridge(d, pen.lambda_ridge);
    CHECK(out.t_obs * (ridge(1) - h.a0) > 0.0);
    CHECK(out.pval_two <= 0.01);
}

TEST_CASE("family_test applies the Bonferroni rule to doubled p-values") {
    const Dataset d = random_tall(30, 3, 99);
    PenaltyConfig pen;
    pen.lambda_ridge = 0.5;
    pen.lambda_lasso = 0.02;
    TestConfig cfg;
    cfg.draws = 400;
    cfg.alpha = 0.05;
    const FamilyTestReport r = family_test(d, pen, global_sign(30), cfg);
    REQUIRE(r.per_coef_pvals.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(r.per_coef_pvals[j] >= 0.0);
        CHECK(r.per_coef_pvals[j] <= 1.0);
        CHECK(static_cast<bool>(r.rejected[j]) ==
              (r.per_coef_pvals[j] <= r.alpha_family / 3.0));
    }
}

TEST_CASE("feasibility smoke: p=500, n=100 family run stays in budget") {
    sim::HighDim spec;
    spec.n = 100;
    spec.p = 500;
    spec.s0 = 3;
    Rng gen(1234);
    const Dataset d = sim::generate(sim::ScenarioSpec{spec}, gen).data;
    PenaltyConfig pen;
    pen.lambda_ridge = 1.0;
    pen.lambda_lasso = std::sqrt(2.0 * std::log(500.0) / 100.0);
    TestConfig cfg;
    cfg.draws = 100;  // shape check only; too coarse for Bonferroni rejections
    const FamilyTestReport r = family_test(d, pen, global_sign(100), cfg);
    REQUIRE(r.per_coef_pvals.size() == 500);
    for (double p : r.per_coef_pvals) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("cross-validated penalties are positive and finite") {
    const Dataset d = random_tall(40, 8, 31);
    const double ll = cv_lambda_lasso(d, 5);
    const double lr = cv_lambda_ridge(d, 5);
    CHECK(ll > 0.0);
    CHECK(std::isfinite(ll));
    CHECK(lr > 0.0);
    CHECK(std::isfinite(lr));
}
