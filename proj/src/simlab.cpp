#include "resrand/simlab.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "resrand/detail/parallel.hpp"
#include "resrand/exactcons.hpp"

namespace resrand::sim {

namespace {

double draw_err(ErrDist dist, Rng& rng) {
    switch (dist) {
        case ErrDist::Normal: return rng.normal();
        case ErrDist::T3: return rng.student_t3();
        case ErrDist::Mixture: return rng.bimodal_mixture();
        case ErrDist::Cauchy: return rng.cauchy();
    }
    return 0.0;
}

const char* err_name(ErrDist dist) {
    switch (dist) {
        case ErrDist::Normal: return "normal";
        case ErrDist::T3: return "t3";
        case ErrDist::Mixture: return "mixture";
        case ErrDist::Cauchy: return "cauchy";
    }
    return "?";
}

Generated generate_impl(const OneWayCluster& s, Rng& rng) {
    const int n = s.num_clusters * s.cluster_size;
    Generated g;
    g.data.y.resize(n);
    g.data.X.resize(n, 2);
    g.truth.errors.resize(n);
    std::vector<int> labels(static_cast<std::size_t>(n));
    int at = 0;
    for (int c = 0; c < s.num_clusters; ++c) {
        const double xc = s.x_dist == XDist::Normal ? rng.normal() : 0.5 * rng.lognormal();
        const double ec = s.random_effect ? rng.normal() : 0.0;
        for (int k = 0; k < s.cluster_size; ++k, ++at) {
            const double x = xc + rng.normal();
            double eps = ec + rng.normal();
            if (s.heteroskedastic) eps *= 3.0 * std::abs(x);
            g.data.X(at, 0) = 1.0;
            g.data.X(at, 1) = x;
            g.data.y(at) = s.beta0 + s.beta1 * x + eps;
            g.truth.errors(at) = eps;
            labels[static_cast<std::size_t>(at)] = c;
        }
    }
    g.data.cluster = labels;
    g.truth.beta = Vector{{s.beta0, s.beta1}};
    return g;
}

Generated generate_impl(const BehrensFisher& s, Rng& rng) {
    Generated g;
    g.data.y.resize(s.n);
    g.data.X.resize(s.n, 2);
    g.truth.errors.resize(s.n);
    for (int i = 0; i < s.n; ++i) {
        const double d = i < s.n1 ? 1.0 : 0.0;
        const double sd = d > 0.5 ? s.sigma1 : s.sigma0;
        const double eps = sd * draw_err(s.err, rng);
        g.data.X(i, 0) = 1.0;
        g.data.X(i, 1) = d;
        g.data.y(i) = s.beta0 + s.beta1 * d + eps;
        g.truth.errors(i) = eps;
    }
    g.truth.beta = Vector{{s.beta0, s.beta1}};
    return g;
}

Generated generate_impl(const Dyadic& s, Rng& rng) {
    const int m = s.m;
    const int n = m * (m - 1) / 2;
    std::vector<double> node_x(static_cast<std::size_t>(m));
    std::vector<double> node_e(static_cast<std::size_t>(m));
    for (auto& v : node_x) v = s.x_dist == XDist::Normal ? rng.normal() : rng.lognormal();
    for (auto& v : node_e) v = draw_err(s.eps_dist, rng);

    Generated g;
    g.data.y.resize(n);
    g.data.X.resize(n, 2);
    g.truth.errors.resize(n);
    std::vector<int> rows, cols;
    rows.reserve(static_cast<std::size_t>(n));
    cols.reserve(static_cast<std::size_t>(n));
    int at = 0;
    for (int r = 1; r < m; ++r) {
        for (int c = 0; c < r; ++c, ++at) {
            const double x = std::abs(node_x[static_cast<std::size_t>(r)] -
                                      node_x[static_cast<std::size_t>(c)]);
            const double eps = node_e[static_cast<std::size_t>(r)] +
                               node_e[static_cast<std::size_t>(c)] + rng.normal();
            g.data.X(at, 0) = 1.0;
            g.data.X(at, 1) = x;
            g.data.y(at) = s.beta0 + s.beta1 * x + eps;
            g.truth.errors(at) = eps;
            rows.push_back(r);
            cols.push_back(c);
        }
    }
    g.data.row_cluster = rows;
    g.data.col_cluster = cols;
    g.truth.beta = Vector{{s.beta0, s.beta1}};
    return g;
}

Generated generate_impl(const AR1& s, Rng& rng) {
    Generated g;
    g.data.y.resize(s.n);
    g.data.X.resize(s.n, 2);
    g.truth.errors.resize(s.n);

    double x_prev = 0.0;
    std::vector<double> xs(static_cast<std::size_t>(s.n));
    for (int t = 0; t < s.n; ++t) {
        double x = 0.0;
        switch (s.x_model) {
            case 1: x = rng.normal(); break;
            case 2: x = rng.lognormal(); break;
            case 3: x = s.rho * x_prev + rng.normal(); break;
            case 4: x = s.rho * x_prev + rng.lognormal(); break;
            default: throw Error(ErrorCode::InvalidConfig, "x_model must be 1..4");
        }
        x_prev = x;
        xs[static_cast<std::size_t>(t)] = x;
    }

    // Short burn-in toward the stationary error law.
    double eps = 0.0;
    for (int t = 0; t < 50; ++t)
        eps = s.rho * eps + (s.u_dist == ErrDist::Mixture ? rng.bimodal_mixture() : rng.normal());

    std::vector<long long> time(static_cast<std::size_t>(s.n));
    for (int t = 0; t < s.n; ++t) {
        eps = s.rho * eps + (s.u_dist == ErrDist::Mixture ? rng.bimodal_mixture() : rng.normal());
        g.data.X(t, 0) = 1.0;
        g.data.X(t, 1) = xs[static_cast<std::size_t>(t)];
        g.data.y(t) = eps;  // beta0 = beta1 = 0
        g.truth.errors(t) = eps;
        time[static_cast<std::size_t>(t)] = t + 1;
    }
    g.data.time = time;
    g.truth.beta = Vector{{0.0, 0.0}};
    return g;
}

Generated generate_impl(const HighDim& s, Rng& rng) {
    Generated g;
    g.data.y.resize(s.n);
    g.data.X.resize(s.n, s.p);
    g.truth.errors.resize(s.n);

    // Row covariance Toeplitz 0.9^|i-j|: exactly the stationary AR(1)
    // marginal path, so rows are generated recursively.
    const double rho = 0.9;
    const double innov = std::sqrt(1.0 - rho * rho);
    for (int i = 0; i < s.n; ++i) {
        double prev = rng.normal();
        g.data.X(i, 0) = prev;
        for (int j = 1; j < s.p; ++j) {
            prev = rho * prev + innov * rng.normal();
            g.data.X(i, j) = prev;
        }
    }

    // Active set: s0 positions sampled without replacement.
    std::vector<int> idx(static_cast<std::size_t>(s.p));
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < s.s0; ++k) {
        const auto j =
            k + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(s.p - k)));
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
    }
    g.truth.active.assign(idx.begin(), idx.begin() + s.s0);

    Vector beta = Vector::Zero(s.p);
    for (int a : g.truth.active) {
        double v = 0.0;
        switch (s.signal) {
            case SignalKind::UniformM2P2: v = -2.0 + 4.0 * rng.uniform(); break;
            case SignalKind::Uniform0P2: v = 2.0 * rng.uniform(); break;
            case SignalKind::Uniform0P4: v = 4.0 * rng.uniform(); break;
            case SignalKind::Const1: v = 1.0; break;
            case SignalKind::Const2: v = 2.0; break;
            case SignalKind::Const10: v = 10.0; break;
        }
        beta(a) = v;
    }

    for (int i = 0; i < s.n; ++i) {
        const double eps = draw_err(s.err, rng);
        g.data.y(i) = g.data.X.row(i).dot(beta) + eps;
        g.truth.errors(i) = eps;
    }
    g.truth.beta = std::move(beta);
    return g;
}

}  // namespace

Generated generate(const ScenarioSpec& spec, Rng& rng) {
    return std::visit([&rng](const auto& s) { return generate_impl(s, rng); }, spec);
}

std::string scenario_name(const ScenarioSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OneWayCluster>) {
                std::string name = "oneway-J" + std::to_string(s.num_clusters);
                name += s.heteroskedastic ? "-het" : "-homo";
                if (!s.random_effect) name += "-nofx";
                if (s.x_dist == XDist::LogNormal) name += "-lnx";
                return name;
            } else if constexpr (std::is_same_v<T, BehrensFisher>) {
                return "behrens-fisher-s0=" + std::to_string(s.sigma0) + "-" +
                       err_name(s.err);
            } else if constexpr (std::is_same_v<T, Dyadic>) {
                return "dyadic-m" + std::to_string(s.m);
            } else if constexpr (std::is_same_v<T, AR1>) {
                return "ar1-rho" + std::to_string(s.rho);
            } else {
                return "highdim-p" + std::to_string(s.p) + "-n" + std::to_string(s.n);
            }
        },
        spec);
}

std::string scenario_paper_scale(const ScenarioSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OneWayCluster>) {
                return "original study: J in {10,15,20}, 30 points per cluster, "
                       "5000 replications, R = 2000";
            } else if constexpr (std::is_same_v<T, BehrensFisher>) {
                return "original study: n = 30, n1 = 3, 5000 replications";
            } else if constexpr (std::is_same_v<T, Dyadic>) {
                return "original study: m in {10,25,50}, 5000 replications";
            } else if constexpr (std::is_same_v<T, AR1>) {
                return "original study: n = 100, 5000 replications, J = 6";
            } else {
                return "original study: p = 500, n = 100, 6000 tests on a 600-core cluster";
            }
            (void)s;
        },
        spec);
}

std::string scenario_run_scale(const ScenarioSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OneWayCluster>) {
                return "J = " + std::to_string(s.num_clusters) + ", cluster size " +
                       std::to_string(s.cluster_size);
            } else if constexpr (std::is_same_v<T, BehrensFisher>) {
                return "n = " + std::to_string(s.n) + ", n1 = " + std::to_string(s.n1);
            } else if constexpr (std::is_same_v<T, Dyadic>) {
                return "m = " + std::to_string(s.m) + " (" +
                       std::to_string(s.m * (s.m - 1) / 2) + " dyads)";
            } else if constexpr (std::is_same_v<T, AR1>) {
                return "n = " + std::to_string(s.n) + ", rho = " + std::to_string(s.rho);
            } else {
                return "p = " + std::to_string(s.p) + ", n = " + std::to_string(s.n) +
                       ", s0 = " + std::to_string(s.s0);
            }
        },
        spec);
}

Method wald_method(LinearHypothesis h, double alpha) {
    return {"wald", [h = std::move(h), alpha](const Dataset& d, std::uint64_t) {
                return classical_wald_test(d, h, alpha) ? MethodDecision::Reject
                                                        : MethodDecision::Accept;
            }};
}

Method randomization_method(const std::string& primitive, LinearHypothesis h, TestConfig cfg) {
    return {primitive, [primitive, h = std::move(h), cfg](const Dataset& d,
                                                          std::uint64_t seed) {
                TestConfig local = cfg;
                local.seed = derive_seed(seed, 1);
                const PrimitiveKind kind = make_kind(primitive, d);
                const TestOutcome o = run_test(d, h, kind, local);
                Rng coin(derive_seed(seed, 2));
                return o.decision.resolve(coin) ? MethodDecision::Reject
                                                : MethodDecision::Accept;
            }};
}

Method exact_bf_method(LinearHypothesis h, int num_clusters, double alpha) {
    return {"exact", [h = std::move(h), num_clusters, alpha](const Dataset& d,
                                                             std::uint64_t seed) {
                BalancedDesignSpec spec;
                spec.num_clusters = num_clusters;
                spec.treatment.resize(static_cast<std::size_t>(d.n()));
                for (Eigen::Index i = 0; i < d.n(); ++i)
                    spec.treatment[static_cast<std::size_t>(i)] =
                        d.X(i, d.p() - 1) > 0.5 ? 1 : 0;
                Rng split_rng(derive_seed(seed, 1));
                const Clustering c = build_balanced_clustering(spec, split_rng);
                const ExactTestResult r = run_exact_test(d, h, c, alpha);
                Rng coin(derive_seed(seed, 2));
                return r.outcome.decision.resolve(coin) ? MethodDecision::Reject
                                                        : MethodDecision::Accept;
            }};
}

Method reflection_method(ReflectionVariant variant, LinearHypothesis h, ReflectionConfig rcfg,
                         TestConfig cfg) {
    rcfg.variant = variant;
    std::string label =
        variant == ReflectionVariant::Conditional ? "reflect-cond" : "reflect-uncond";
    return {std::move(label),
            [h = std::move(h), rcfg, cfg](const Dataset& d, std::uint64_t seed) {
                TestConfig local = cfg;
                local.seed = derive_seed(seed, 1);
                const ReflectionResult r = run_reflection_test(d, h, rcfg, local);
                if (!r.decided) {
                    return rcfg.variant == ReflectionVariant::Conditional
                               ? MethodDecision::Undecided
                               : MethodDecision::Accept;
                }
                Rng coin(derive_seed(seed, 2));
                return r.decision.resolve(coin) ? MethodDecision::Reject
                                                : MethodDecision::Accept;
            }};
}

MonteCarloReport run_family_monte_carlo(const HighDim& spec, const FamilyStudyConfig& fc,
                                        int replications, std::uint64_t seed, int threads) {
    if (replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = static_cast<std::size_t>(replications);

    struct RepResult {
        int any_false = 0;
        int active_rejected = 0;
        int active_total = 0;
        int excluded = 0;
    };
    std::vector<RepResult> results(m);

    detail::parallel_for(m, threads, [&](std::size_t rep) {
        RepResult& r = results[rep];
        try {
            Rng gen_rng(derive_seed(seed, rep));
            const Generated g = generate(ScenarioSpec{spec}, gen_rng);
            TestConfig cfg = fc.test;
            cfg.threads = 1;
            cfg.seed = derive_seed(seed, rep, 1);
            const FamilyTestReport fam =
                family_test(g.data, fc.penalties, make_kind(fc.primitive, g.data), cfg);
            std::vector<char> active(static_cast<std::size_t>(spec.p), 0);
            for (int a : g.truth.active) active[static_cast<std::size_t>(a)] = 1;
            for (std::size_t j = 0; j < fam.rejected.size(); ++j) {
                if (active[j]) {
                    ++r.active_total;
                    if (fam.rejected[j]) ++r.active_rejected;
                } else if (fam.rejected[j]) {
                    r.any_false = 1;
                }
            }
        } catch (const Error&) {
            r.excluded = 1;
        }
    });

    MonteCarloReport report;
    report.scenario = scenario_name(ScenarioSpec{spec});
    report.paper_scale = scenario_paper_scale(ScenarioSpec{spec});
    report.run_scale = scenario_run_scale(ScenarioSpec{spec});
    report.replications = replications;
    report.seed = seed;

    MethodReport fwer;
    fwer.label = "family-fwer";
    MethodReport power;
    power.label = "family-power";
    for (const auto& r : results) {
        if (r.excluded) {
            ++fwer.excluded;
            ++power.excluded;
            continue;
        }
        ++fwer.completed;
        ++fwer.decided;
        fwer.rejections += r.any_false;
        ++power.completed;
        power.decided += r.active_total;
        power.rejections += r.active_rejected;
    }
    auto finish = [](MethodReport& mr) {
        if (mr.decided > 0) {
            mr.rejection_rate =
                static_cast<double>(mr.rejections) / static_cast<double>(mr.decided);
            mr.mc_standard_error = std::sqrt(mr.rejection_rate * (1.0 - mr.rejection_rate) /
                                             static_cast<double>(mr.decided));
        }
        mr.decided_fraction = mr.completed > 0 ? 1.0 : 0.0;
    };
    finish(fwer);
    report.methods.push_back(fwer);
    if (spec.s0 > 0) {
        finish(power);
        report.methods.push_back(power);
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

MonteCarloReport run_monte_carlo(const ScenarioSpec& spec, const std::vector<Method>& methods,
                                 int replications, std::uint64_t seed, int threads) {
    if (replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be >= 1");
    if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "no methods registered");

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t m = static_cast<std::size_t>(replications);
    const std::size_t k = methods.size();

    enum class Cell : char { Accept, Reject, Undecided, Excluded };
    std::vector<Cell> cells(m * k);

    detail::parallel_for(m, threads, [&](std::size_t rep) {
        Rng gen_rng(derive_seed(seed, rep));
        Generated g = generate(spec, gen_rng);
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint64_t method_seed = derive_seed(seed, rep, 1000 + j);
            Cell cell = Cell::Excluded;
            try {
                switch (methods[j].run(g.data, method_seed)) {
                    case MethodDecision::Accept: cell = Cell::Accept; break;
                    case MethodDecision::Reject: cell = Cell::Reject; break;
                    case MethodDecision::Undecided: cell = Cell::Undecided; break;
                }
            } catch (const Error&) {
                cell = Cell::Excluded;
            }
            cells[rep * k + j] = cell;
        }
    });

    MonteCarloReport report;
    report.scenario = scenario_name(spec);
    report.paper_scale = scenario_paper_scale(spec);
    report.run_scale = scenario_run_scale(spec);
    report.replications = replications;
    report.seed = seed;
    for (std::size_t j = 0; j < k; ++j) {
        MethodReport mr;
        mr.label = methods[j].label;
        for (std::size_t rep = 0; rep < m; ++rep) {
            switch (cells[rep * k + j]) {
                case Cell::Reject:
                    ++mr.rejections;
                    ++mr.decided;
                    ++mr.completed;
                    break;
                case Cell::Accept:
                    ++mr.decided;
                    ++mr.completed;
                    break;
                case Cell::Undecided: ++mr.completed; break;
                case Cell::Excluded: ++mr.excluded; break;
            }
        }
        if (mr.decided > 0) {
            mr.rejection_rate =
                static_cast<double>(mr.rejections) / static_cast<double>(mr.decided);
            mr.mc_standard_error = std::sqrt(mr.rejection_rate * (1.0 - mr.rejection_rate) /
                                             static_cast<double>(mr.decided));
        }
        mr.decided_fraction = mr.completed > 0 ? static_cast<double>(mr.decided) /
                                                     static_cast<double>(mr.completed)
                                               : 0.0;
        report.methods.push_back(std::move(mr));
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return report;
}

}  // namespace resrand::sim
