#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "resrand/csv.hpp"
#include "resrand/engine.hpp"

using namespace resrand;

namespace {

Dataset random_design(Eigen::Index n, std::uint64_t seed, double noise = 1.0) {
    Rng rng(seed);
    Dataset d;
    d.X.resize(n, 2);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d.X(i, 0) = 1.0;
        d.X(i, 1) = rng.normal();
        d.y(i) = 0.3 + 0.7 * d.X(i, 1) + noise * rng.normal();
    }
    return d;
}

const LinearHypothesis kSlopeZero{Vector{{0.0, 1.0}}, 0.0};

}  // namespace

TEST_CASE("pvalue_one_sided counts") {
    const std::vector<double> draws{-2.0, -1.0, 0.0, 1.0, 2.0};
    CHECK(pvalue_one_sided(1.0, draws) == doctest::Approx(0.4));
    CHECK(pvalue_one_sided(3.0, draws) == 0.0);
    CHECK(pvalue_one_sided(-3.0, draws) == 1.0);
}

TEST_CASE("pvalue_two_sided counts") {
    const std::vector<double> draws{-2.0, -1.0, 0.0, 1.0, 2.0};
    CHECK(pvalue_two_sided(1.0, draws) == doctest::Approx(0.4));

    // t at the center of a large symmetric set sits near 1/2
    std::vector<double> sym;
    for (int k = -50; k <= 50; ++k) sym.push_back(k);
    CHECK(pvalue_two_sided(0.0, sym) == doctest::Approx(0.5).epsilon(0.02));

    std::vector<double> nineteen;
    for (int k = 1; k <= 19; ++k) nineteen.push_back(k);
    CHECK(pvalue_two_sided(19.0, nineteen) == doctest::Approx(1.0 / 19));
}

TEST_CASE("decide_with_correction order-statistic rule") {
    SUBCASE("observed at the maximum of 19 distinct draws") {
        std::vector<double> draws;
        for (int k = 1; k <= 19; ++k) draws.push_back(k);
        const Decision dec = decide_with_correction(19.0, draws, 0.05);
        CHECK(dec.kind == Decision::Kind::RejectWithProb);
        CHECK(dec.b == doctest::Approx(0.95));
    }
    SUBCASE("fully tied draws") {
        const std::vector<double> draws(20, 3.0);
        const Decision dec = decide_with_correction(3.0, draws, 0.05);
        CHECK(dec.kind == Decision::Kind::RejectWithProb);
        CHECK(dec.b == doctest::Approx(0.05));
    }
    SUBCASE("observed below the threshold order statistic") {
        std::vector<double> draws;
        for (int k = 1; k <= 19; ++k) draws.push_back(k);
        CHECK(decide_with_correction(5.0, draws, 0.05).kind == Decision::Kind::Accept);
    }
}

TEST_CASE("enumerated global permutation test equals the brute-force orbit") {
    const Dataset d = random_design(6, 101);
    TestConfig cfg;
    cfg.mode = Mode::Enumerated;
    const TestOutcome out = run_test(d, kSlopeZero, global_perm(6), cfg);
    CHECK(out.mode_used == Mode::Enumerated);
    CHECK(out.draw_values.size() == 720);

    const ConstrainedFit cf = fit_constrained_ols(d, kSlopeZero);
    const auto ref = oracle::perm_orbit_pvalues(d.X, kSlopeZero.a, cf.restricted_residuals);
    CHECK(ref.orbit_size == 720);
    CHECK(out.pval_one == ref.one_sided);
    CHECK(out.pval_two == ref.two_sided);
}

TEST_CASE("observed statistic at the center of a sign-symmetric distribution") {
    const Dataset d = random_design(24, 7);
    const FitResult fit = fit_ols(d);
    LinearHypothesis h = kSlopeZero;
    h.a0 = h.a.dot(fit.beta_hat);  // t_obs = 0
    TestConfig cfg;
    cfg.draws = 999;
    const TestOutcome out = run_test(d, h, global_sign(24), cfg);
    CHECK(std::abs(out.t_obs) < 1e-12);
    CHECK(out.pval_two >= 0.4);
    CHECK(out.decision.kind == Decision::Kind::Accept);
}

TEST_CASE("small groups auto-enumerate in sampled mode") {
    const Dataset d = random_design(12, 55);
    Dataset dc = d;
    dc.cluster = std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
    TestConfig cfg;
    cfg.draws = 2000;
    const PrimitiveKind kind = make_kind("cluster-sign", dc);
    const TestOutcome out = run_test(dc, kSlopeZero, kind, cfg);
    CHECK(out.mode_used == Mode::Enumerated);
    CHECK(out.draw_values.size() == 8);
    CHECK(out.draw_values[0] == out.t_eval);  // identity comes first
}

TEST_CASE("sampled p-values converge to the enumerated ones") {
    const Dataset d = random_design(12, 56);
    Dataset dc = d;
    dc.cluster = std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2};
    const PrimitiveKind kind = make_kind("cluster-sign", dc);

    TestConfig enum_cfg;
    enum_cfg.mode = Mode::Enumerated;
    const TestOutcome exact = run_test(dc, kSlopeZero, kind, enum_cfg);

    TestConfig samp_cfg;
    samp_cfg.draws = 1600;  // 200 * |G|
    samp_cfg.auto_enumerate = false;
    samp_cfg.seed = 9;
    const TestOutcome approx = run_test(dc, kSlopeZero, kind, samp_cfg);
    CHECK(approx.mode_used == Mode::Sampled);

    const double p = exact.pval_one;
    const double tol = 3.0 * std::sqrt(std::max(p * (1.0 - p), 1e-6) / 1600.0);
    CHECK(std::abs(approx.pval_one - p) <= tol);
}

TEST_CASE("identical configuration reproduces the outcome bit-for-bit") {
    const Dataset d = random_design(40, 77);
    TestConfig cfg;
    cfg.draws = 500;
    cfg.seed = 20240101;
    const TestOutcome a = run_test(d, kSlopeZero, global_perm(40), cfg);
    const TestOutcome b = run_test(d, kSlopeZero, global_perm(40), cfg);
    REQUIRE(a.draw_values.size() == b.draw_values.size());
    for (std::size_t i = 0; i < a.draw_values.size(); ++i)
        CHECK(a.draw_values[i] == b.draw_values[i]);
    CHECK(a.pval_two == b.pval_two);

    TestConfig threaded = cfg;
    threaded.threads = 3;
    const TestOutcome c = run_test(d, kSlopeZero, global_perm(40), threaded);
    for (std::size_t i = 0; i < a.draw_values.size(); ++i)
        CHECK(a.draw_values[i] == c.draw_values[i]);
}

TEST_CASE("randomization level on true errors is at most alpha plus noise") {
    // Harness hook: the invariance holds exactly for the fed vector, so the
    // decision rule must hit the level up to Monte Carlo error.
    const int n = 20, reps = 2000;
    Rng data_rng(13);
    StatFunctional f;
    f.weight.resize(n);
    for (int i = 0; i < n; ++i) f.weight(i) = data_rng.normal();
    const PrimitiveKind kind = global_sign(n);

    TestConfig cfg;
    cfg.draws = 2000;
    cfg.alpha = 0.05;
    int rejections = 0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng rng(derive_seed(4242, static_cast<std::uint64_t>(rep)));
        Vector eps(n);
        for (int i = 0; i < n; ++i) eps(i) = rng.normal();
        cfg.seed = derive_seed(777, static_cast<std::uint64_t>(rep));
        const TestOutcome out = run_core(f, eps, f(eps), kind, cfg);
        Rng coin(derive_seed(888, static_cast<std::uint64_t>(rep)));
        if (out.decision.resolve(coin)) ++rejections;
    }
    const double rate = rejections / static_cast<double>(reps);
    CHECK(rate <= 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / reps));
}

TEST_CASE("confidence interval contains the point estimate under pure noise") {
    Rng rng(2718);
    Dataset d;
    d.X.resize(30, 2);
    d.y.resize(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        d.X(i, 0) = 1.0;
        d.X(i, 1) = rng.normal();
        d.y(i) = 5.0 * rng.normal();
    }
    const FitResult fit = fit_ols(d);
    TestConfig cfg;
    cfg.draws = 500;
    cfg.seed = 3;
    GridSpec grid{fit.beta_hat(1) - 3.0, fit.beta_hat(1) + 3.0, 0.0};
    const ConfidenceInterval ci = invert_ci(d, 1, global_perm(30), cfg, grid);
    CHECK_FALSE(ci.empty);
    CHECK(ci.lower <= fit.beta_hat(1));
    CHECK(ci.upper >= fit.beta_hat(1));
    CHECK(ci.grid.size() == 201);
}

TEST_CASE("enumerated sign-test interval matches brute-force grid inversion") {
    const int n = 8;
    Rng rng(515);
    Dataset d;
    d.X.resize(n, 2);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d.X(i, 0) = 1.0;
        d.X(i, 1) = rng.normal();
        d.y(i) = 1.0 - 0.8 * d.X(i, 1) + rng.normal();
    }
    TestConfig cfg;
    cfg.mode = Mode::Enumerated;
    cfg.alpha = 0.05;
    const FitResult fit = fit_ols(d);
    GridSpec grid{fit.beta_hat(1) - 4.0, fit.beta_hat(1) + 4.0, 0.05};
    const ConfidenceInterval ci = invert_ci(d, 1, global_sign(n), cfg, grid);

    // Oracle: restricted residuals through the KKT solve, all 2^8 sign
    // patterns through the LU functional, the same acceptance rule.
    std::vector<int> singleton_labels(n);
    std::iota(singleton_labels.begin(), singleton_labels.end(), 0);
    double lo = std::numeric_limits<double>::quiet_NaN(), hi = lo;
    for (std::size_t k = 0; k < ci.grid.size(); ++k) {
        const double a0 = ci.grid[k];
        const auto beta0 = oracle::constrained_kkt(d.X, d.y, Vector{{0.0, 1.0}}, a0);
        Vector resid(n);
        for (Eigen::Index i = 0; i < n; ++i)
            resid(i) = d.y(i) - d.X(i, 0) * beta0[0] - d.X(i, 1) * beta0[1];
        const auto orbit = oracle::cluster_sign_orbit_pvalues(d.X, Vector{{0.0, 1.0}}, resid,
                                                              singleton_labels, n);
        CHECK(ci.pvals[k] == orbit.two_sided);
        if (orbit.two_sided >= cfg.alpha / 2.0) {
            if (std::isnan(lo)) lo = a0;
            hi = a0;
        }
    }
    CHECK(ci.lower == lo);
    CHECK(ci.upper == hi);
}

TEST_CASE("similarity diagnostic") {
    SUBCASE("identity-only group has zero deviation") {
        const Dataset d = random_design(15, 91);
        const SimilarityDiagnostic diag =
            similarity_diagnostic(d, cluster_perm(Clustering::singletons(15)), 5, 1);
        CHECK(diag.mean_deviation <= 1e-12);
    }
    SUBCASE("global signs: the mean randomized Gram washes out like 1/sqrt(draws)") {
        const Dataset d = random_design(40, 92);
        const PrimitiveKind kind = global_sign(40);
        const SimilarityDiagnostic few = similarity_diagnostic(d, kind, 100, 5);
        const SimilarityDiagnostic many = similarity_diagnostic(d, kind, 10000, 5);
        CHECK(few.mean_matrix_deviation > 0.0);
        CHECK(many.mean_matrix_deviation < few.mean_matrix_deviation / 3.0);
    }
    SUBCASE("balanced binary design: cluster signs satisfy similarity exactly") {
        Dataset d;
        d.X.resize(30, 2);
        d.y.resize(30);
        Rng rng(93);
        std::vector<int> labels(30);
        for (int i = 0; i < 30; ++i) {
            const int cluster = i / 10;
            labels[static_cast<std::size_t>(i)] = cluster;
            d.X(i, 0) = 1.0;
            d.X(i, 1) = (i % 10 == 0) ? 1.0 : 0.0;  // one treated unit per cluster
            d.y(i) = rng.normal();
        }
        const SimilarityDiagnostic diag =
            similarity_diagnostic(d, cluster_sign(Clustering::from_labels(labels)), 50, 2);
        for (double dev : diag.per_draw_norms) CHECK(dev <= 1e-10);
    }
}

TEST_CASE("hormone data: exchangeable-errors test strongly rejects a zero slope") {
    const Dataset d = ingest_csv(std::string(RESRAND_SOURCE_DIR) + "/data/hormone.csv", true);
    REQUIRE(d.n() == 27);
    REQUIRE(d.p() == 2);
    const FitResult fit = fit_ols(d);
    TestConfig cfg;
    cfg.draws = 2000;
    cfg.seed = 1;
    const TestOutcome out = run_test(d, kSlopeZero, global_perm(27), cfg);
    CHECK(out.t_obs < 0.0);
    CHECK(out.pval_two < 0.005);
    CHECK(out.decision.kind == Decision::Kind::Reject);
}

TEST_CASE("one-sided configurations orient the p-value and decision") {
    Rng rng(606);
    Dataset d;
    d.X.resize(30, 2);
    d.y.resize(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        d.X(i, 0) = 1.0;
        d.X(i, 1) = rng.normal();
        d.y(i) = 2.0 * d.X(i, 1) + 0.3 * rng.normal();  // strong positive slope
    }
    TestConfig cfg;
    cfg.draws = 999;
    cfg.seed = 5;

    cfg.sidedness = Sidedness::OneSidedGreater;
    const TestOutcome greater = run_test(d, kSlopeZero, global_sign(30), cfg);
    CHECK(greater.pval_one <= 0.01);
    CHECK(greater.decision.kind == Decision::Kind::Reject);

    cfg.sidedness = Sidedness::OneSidedLess;
    const TestOutcome less = run_test(d, kSlopeZero, global_sign(30), cfg);
    CHECK(less.pval_one >= 0.99);
    CHECK(less.decision.kind == Decision::Kind::Accept);
}

TEST_CASE("a draw budget too small for the level earns a warning") {
    const Dataset d = random_design(16, 77);
    TestConfig cfg;
    cfg.draws = 9;  // alpha * R < 1
    cfg.auto_enumerate = false;
    const TestOutcome out = run_test(d, kSlopeZero, global_perm(16), cfg);
    CHECK(!out.warnings.empty());
}
