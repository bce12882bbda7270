#include <doctest.h>

#include <cmath>

#include "resrand/simlab.hpp"

using namespace resrand;
using namespace resrand::sim;

TEST_CASE("generate: one-way cluster scenario shapes") {
    OneWayCluster spec;
    Rng rng(1);
    const Generated g = generate(ScenarioSpec{spec}, rng);
    CHECK(g.data.n() == 300);
    CHECK(g.data.p() == 2);
    CHECK((g.data.X.col(0).array() == 1.0).all());
    REQUIRE(g.data.cluster.has_value());
    std::vector<int> counts(10, 0);
    for (int c : *g.data.cluster) ++counts[static_cast<std::size_t>(c)];
    for (int c : counts) CHECK(c == 30);
}

TEST_CASE("generate: Behrens-Fisher defaults") {
    BehrensFisher spec;
    Rng rng(2);
    const Generated g = generate(ScenarioSpec{spec}, rng);
    CHECK(g.data.n() == 30);
    CHECK(g.data.X.col(1).sum() == doctest::Approx(3.0));
}

TEST_CASE("generate: dyadic scenario emits the strict lower triangle") {
    Dyadic spec;
    spec.m = 4;
    Rng rng(3);
    const Generated g = generate(ScenarioSpec{spec}, rng);
    CHECK(g.data.n() == 6);
    REQUIRE(g.data.row_cluster.has_value());
    for (std::size_t i = 0; i < 6; ++i)
        CHECK((*g.data.row_cluster)[i] > (*g.data.col_cluster)[i]);
}

TEST_CASE("generate: high-dimensional rows have the Toeplitz correlation profile") {
    HighDim spec;
    spec.n = 4000;
    spec.p = 5;
    spec.s0 = 1;
    Rng rng(4);
    const Generated g = generate(ScenarioSpec{spec}, rng);
    for (int lag = 1; lag <= 3; ++lag) {
        double num = 0.0, va = 0.0, vb = 0.0;
        for (Eigen::Index i = 0; i < g.data.X.rows(); ++i) {
            const double a = g.data.X(i, 0);
            const double b = g.data.X(i, lag);
            num += a * b;
            va += a * a;
            vb += b * b;
        }
        const double corr = num / std::sqrt(va * vb);
        CHECK(std::abs(corr - std::pow(0.9, lag)) < 0.05);
    }
    CHECK(g.truth.active.size() == 1);
}

TEST_CASE("generate: AR(1) scenario carries a strictly increasing time index") {
    AR1 spec;
    Rng rng(5);
    const Generated g = generate(ScenarioSpec{spec}, rng);
    REQUIRE(g.data.time.has_value());
    CHECK(g.data.time->size() == 100);
    CHECK(g.data.time->front() < g.data.time->back());
    CHECK((g.data.y - g.truth.errors).cwiseAbs().maxCoeff() == 0.0);  // beta = 0
}

TEST_CASE("run_monte_carlo: deterministic across thread counts") {
    OneWayCluster spec;
    spec.num_clusters = 5;
    spec.cluster_size = 10;
    const LinearHypothesis h{Vector{{0.0, 1.0}}, 0.0};
    TestConfig cfg;
    cfg.draws = 99;
    std::vector<Method> methods;
    methods.push_back(wald_method(h, 0.05));
    methods.push_back(randomization_method("cluster-sign", h, cfg));

    const MonteCarloReport a = run_monte_carlo(ScenarioSpec{spec}, methods, 40, 123, 1);
    const MonteCarloReport b = run_monte_carlo(ScenarioSpec{spec}, methods, 40, 123, 3);
    REQUIRE(a.methods.size() == b.methods.size());
    for (std::size_t k = 0; k < a.methods.size(); ++k) {
        CHECK(a.methods[k].rejections == b.methods[k].rejections);
        CHECK(a.methods[k].decided == b.methods[k].decided);
        CHECK(a.methods[k].excluded == b.methods[k].excluded);
    }
}

TEST_CASE("run_monte_carlo: the reported standard error is the binomial formula") {
    OneWayCluster spec;
    spec.num_clusters = 4;
    spec.cluster_size = 8;
    const LinearHypothesis h{Vector{{0.0, 1.0}}, 0.0};
    const MonteCarloReport r =
        run_monte_carlo(ScenarioSpec{spec}, {wald_method(h, 0.05)}, 60, 9, 1);
    const auto& m = r.methods[0];
    CHECK(m.mc_standard_error ==
          doctest::Approx(std::sqrt(m.rejection_rate * (1.0 - m.rejection_rate) / m.decided)));
    CHECK(m.completed == 60);
}

TEST_CASE("run_monte_carlo: failures are counted as exclusions") {
    OneWayCluster spec;
    spec.num_clusters = 3;
    spec.cluster_size = 4;
    Method flaky{"flaky", [](const Dataset& d, std::uint64_t seed) {
                     if (seed % 3 == 0)
                         throw Error(ErrorCode::SingularDesign, "synthetic failure");
                     (void)d;
                     return MethodDecision::Accept;
                 }};
    const MonteCarloReport r = run_monte_carlo(ScenarioSpec{spec}, {flaky}, 30, 77, 1);
    CHECK(r.methods[0].excluded > 0);
    CHECK(r.methods[0].completed + r.methods[0].excluded == 30);
}

TEST_CASE("classical Wald strawman over-rejects under clustered errors") {
    OneWayCluster spec;  // random effects on, clustered x, J=10
    const LinearHypothesis h{Vector{{0.0, 1.0}}, 0.0};
    const MonteCarloReport r =
        run_monte_carlo(ScenarioSpec{spec}, {wald_method(h, 0.05)}, 200, 2024, 1);
    CHECK(r.methods[0].rejection_rate > 0.10);
}

TEST_CASE("generate: every scenario variant produces a well-formed dataset") {
    Rng rng(31415);
    std::vector<ScenarioSpec> specs;
    for (int model = 1; model <= 4; ++model) {
        AR1 a;
        a.n = 50;
        a.x_model = model;
        a.u_dist = model % 2 == 0 ? ErrDist::Mixture : ErrDist::Normal;
        specs.push_back(a);
    }
    {
        Dyadic dy;
        dy.m = 6;
        dy.x_dist = XDist::LogNormal;
        dy.eps_dist = ErrDist::Mixture;
        specs.push_back(dy);
    }
    {
        OneWayCluster w;
        w.num_clusters = 4;
        w.cluster_size = 6;
        w.x_dist = XDist::LogNormal;
        w.heteroskedastic = true;
        w.beta0 = 1.0;
        specs.push_back(w);
    }
    for (ErrDist e : {ErrDist::Normal, ErrDist::T3, ErrDist::Mixture}) {
        BehrensFisher b;
        b.err = e;
        b.sigma0 = 0.5;
        specs.push_back(b);
    }
    {
        HighDim h;
        h.n = 20;
        h.p = 30;
        h.s0 = 2;
        h.signal = SignalKind::UniformM2P2;
        h.err = ErrDist::Cauchy;
        specs.push_back(h);
    }
    for (const auto& spec : specs) {
        const Generated g = generate(spec, rng);
        CHECK(g.data.n() > 0);
        CHECK(g.data.y.allFinite());
        CHECK(g.data.X.allFinite());
        CHECK(g.truth.errors.allFinite());
        CHECK_NOTHROW(g.data.validate());
        CHECK(!scenario_name(spec).empty());
        CHECK(!scenario_paper_scale(spec).empty());
        CHECK(!scenario_run_scale(spec).empty());
    }
}
