// resrand: residual randomization inference for linear regression.
//
// Subcommands: test, ci, exact, reflect, highdim, simulate, diagnose.
// Reports are JSON (written to --out or stdout); simulate can also emit a
// flat CSV table. Exit codes: 0 ok, 2 input error, 3 numerical error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "resrand/csv.hpp"
#include "resrand/engine.hpp"
#include "resrand/exactcons.hpp"
#include "resrand/highdim.hpp"
#include "resrand/reflect.hpp"
#include "resrand/report.hpp"
#include "resrand/simlab.hpp"

using nlohmann::json;
using namespace resrand;

namespace {

struct CommonOpts {
    std::string data_path;
    bool no_intercept = false;
    std::string a_csv;
    double a0 = 0.0;
    bool have_a0 = false;
    int coef = -1;
    std::vector<std::string> primitives;
    int draws = 2000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 1;
    bool enumerate = false;
    std::string out_path;
};

void add_dataset_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("data", o.data_path, "input CSV (y, x*, cluster, rowc, colc, time)")
        ->required();
    cmd->add_flag("--no-intercept", o.no_intercept, "do not prepend a ones column");
}

void add_test_flags(CLI::App* cmd, CommonOpts& o, bool need_primitive) {
    cmd->add_option("--a", o.a_csv, "contrast vector a as a comma list");
    cmd->add_option("--a0", o.a0, "null value a0")->each([&o](const std::string&) {
        o.have_a0 = true;
    });
    cmd->add_option("--coef", o.coef, "test the given coefficient (unit contrast)");
    if (need_primitive)
        cmd->add_option("--primitive", o.primitives,
                        "perm | sign | cluster-perm | cluster-sign | double | two-way "
                        "(repeat or comma-separate for a sensitivity comparison)")
            ->delimiter(',')
            ->required();
    cmd->add_option("-R,--draws", o.draws, "randomization draws");
    cmd->add_option("--alpha", o.alpha, "test level");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--threads", o.threads, "worker threads")->envname("RESRAND_THREADS");
    cmd->add_flag("--enumerate", o.enumerate, "force full group enumeration");
    cmd->add_option("-o,--out", o.out_path, "write the JSON report here (default stdout)");
}

LinearHypothesis hypothesis_from(const CommonOpts& o, const Dataset& d) {
    const bool have_a = !o.a_csv.empty();
    if (have_a == (o.coef >= 0))
        throw Error(ErrorCode::InvalidConfig, "specify the hypothesis with exactly one of "
                                              "--a <list> or --coef <index>");
    if (o.coef >= 0) {
        if (o.coef >= d.p())
            throw Error(ErrorCode::InvalidConfig, "--coef out of range for p=" +
                                                      std::to_string(d.p()));
        return LinearHypothesis::coefficient(d.p(), o.coef, o.a0);
    }
    std::vector<double> vals;
    std::stringstream ss(o.a_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    LinearHypothesis h;
    h.a = Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    h.a0 = o.a0;
    h.validate(d.p());
    return h;
}

TestConfig config_from(const CommonOpts& o) {
    TestConfig cfg;
    cfg.draws = o.draws;
    cfg.alpha = o.alpha;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    if (o.enumerate) cfg.mode = Mode::Enumerated;
    return cfg;
}

json config_echo(const CommonOpts& o) {
    json j;
    j["data"] = o.data_path;
    j["no_intercept"] = o.no_intercept;
    if (!o.a_csv.empty()) j["a"] = o.a_csv;
    if (o.coef >= 0) j["coef"] = o.coef;
    j["a0"] = o.a0;
    j["R"] = o.draws;
    j["alpha"] = o.alpha;
    j["seed"] = o.seed;
    j["enumerate"] = o.enumerate;
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + out_path + "'");
        out << j.dump(2) << std::endl;
    }
}

int run_test_cmd(const CommonOpts& o) {
    const Dataset d = ingest_csv(o.data_path, !o.no_intercept);
    const LinearHypothesis h = hypothesis_from(o, d);
    const TestConfig cfg = config_from(o);

    json reports = json::array();
    for (const auto& name : o.primitives) {
        const PrimitiveKind kind = make_kind(name, d);
        json j = outcome_to_json(run_test(d, h, kind, cfg));
        j["primitive"] = name;
        j["seed"] = cfg.seed;
        reports.push_back(std::move(j));
    }
    json j;
    j["command"] = "test";
    j["config"] = config_echo(o);
    if (reports.size() == 1) {
        j["report"] = reports[0];
    } else {
        j["reports"] = reports;  // sensitivity comparison across primitives
    }
    emit(j, o.out_path);
    return 0;
}

int run_ci_cmd(const CommonOpts& o, double lo, double hi, double step) {
    const Dataset d = ingest_csv(o.data_path, !o.no_intercept);
    if (o.coef < 0)
        throw Error(ErrorCode::InvalidConfig, "ci needs --coef");
    const TestConfig cfg = config_from(o);
    json reports = json::array();
    for (const auto& name : o.primitives) {
        const PrimitiveKind kind = make_kind(name, d);
        const ConfidenceInterval ci = invert_ci(d, o.coef, kind, cfg, {lo, hi, step});
        json j = ci_to_json(ci);
        j["primitive"] = name;
        j["seed"] = cfg.seed;
        reports.push_back(std::move(j));
    }
    json j;
    j["command"] = "ci";
    j["config"] = config_echo(o);
    j["grid_lo"] = lo;
    j["grid_hi"] = hi;
    j["grid_step"] = step;
    if (reports.size() == 1)
        j["report"] = reports[0];
    else
        j["reports"] = reports;
    emit(j, o.out_path);
    return 0;
}

int run_exact_cmd(const CommonOpts& o, int num_clusters) {
    const Dataset d = ingest_csv(o.data_path, !o.no_intercept);
    const LinearHypothesis h = hypothesis_from(o, d);

    Clustering clustering;
    if (d.cluster) {
        clustering = Clustering::from_labels(*d.cluster);
    } else {
        if (d.p() != 2)
            throw Error(ErrorCode::InvalidConfig,
                        "balanced clustering construction needs an intercept plus one "
                        "binary column; give a cluster column for other designs");
        BalancedDesignSpec spec;
        spec.num_clusters = num_clusters;
        spec.treatment.resize(static_cast<std::size_t>(d.n()));
        for (Eigen::Index i = 0; i < d.n(); ++i) {
            const double v = d.X(i, 1);
            if (v != 0.0 && v != 1.0)
                throw Error(ErrorCode::InvalidConfig,
                            "balanced clustering construction needs a 0/1 column");
            spec.treatment[static_cast<std::size_t>(i)] = v > 0.5 ? 1 : 0;
        }
        Rng rng(derive_seed(o.seed, 0xBA1A));
        clustering = build_balanced_clustering(spec, rng);
    }

    const ExactTestResult r = run_exact_test(d, h, clustering, o.alpha);
    json j;
    j["command"] = "exact";
    j["config"] = config_echo(o);
    j["report"] = outcome_to_json(r.outcome);
    j["report"]["exact"] = r.exact;
    j["report"]["worst_relative_deviation"] = r.worst_relative_deviation;
    j["report"]["seed"] = o.seed;
    emit(j, o.out_path);
    return 0;
}

int run_reflect_cmd(const CommonOpts& o, int J, const std::string& variant) {
    const Dataset d = ingest_csv(o.data_path, !o.no_intercept);
    const LinearHypothesis h = hypothesis_from(o, d);
    ReflectionConfig rcfg;
    rcfg.num_clusters = J;
    if (variant == "conditional")
        rcfg.variant = ReflectionVariant::Conditional;
    else if (variant == "unconditional")
        rcfg.variant = ReflectionVariant::Unconditional;
    else
        throw Error(ErrorCode::InvalidConfig,
                    "--variant must be 'conditional' or 'unconditional'");
    const ReflectionResult r = run_reflection_test(d, h, rcfg, config_from(o));

    json j;
    j["command"] = "reflect";
    j["config"] = config_echo(o);
    j["J"] = J;
    j["variant"] = variant;
    j["decided"] = r.decided;
    j["achieved_clusters"] = r.achieved;
    if (r.outcome) {
        j["report"] = outcome_to_json(*r.outcome);
        j["report"]["seed"] = o.seed;
    } else {
        j["report"] = json{{"decision", r.decided ? r.decision.name()
                                                  : (rcfg.variant == ReflectionVariant::Conditional
                                                         ? "undecided"
                                                         : "accept")}};
    }
    emit(j, o.out_path);
    return 0;
}

int run_highdim_cmd(const CommonOpts& o, double lambda_ridge, double lambda_lasso, bool family,
                    double alpha_family) {
    const Dataset d = ingest_csv(o.data_path, !o.no_intercept);
    PenaltyConfig pen;
    pen.lambda_ridge = lambda_ridge > 0.0 ? lambda_ridge : cv_lambda_ridge(d, o.seed);
    pen.lambda_lasso = lambda_lasso > 0.0 ? lambda_lasso : cv_lambda_lasso(d, o.seed);

    const std::string primitive = o.primitives.empty() ? "sign" : o.primitives.front();
    const PrimitiveKind kind = make_kind(primitive, d);
    TestConfig cfg = config_from(o);

    json j;
    j["command"] = "highdim";
    j["config"] = config_echo(o);
    j["lambda_ridge"] = pen.lambda_ridge;
    j["lambda_lasso"] = pen.lambda_lasso;
    j["primitive"] = primitive;
    if (family) {
        cfg.alpha = alpha_family;
        const FamilyTestReport r = family_test(d, pen, kind, cfg);
        json rep;
        rep["alpha_family"] = r.alpha_family;
        rep["per_coef_pvals"] = r.per_coef_pvals;
        json rej = json::array();
        for (char c : r.rejected) rej.push_back(static_cast<bool>(c));
        rep["rejected"] = rej;
        j["report"] = std::move(rep);
    } else {
        const LinearHypothesis h = hypothesis_from(o, d);
        json rep = outcome_to_json(run_highdim_test(d, h, pen, kind, cfg));
        rep["seed"] = cfg.seed;
        j["report"] = std::move(rep);
    }
    emit(j, o.out_path);
    return 0;
}

int run_diagnose_cmd(const CommonOpts& o, int diag_draws) {
    const Dataset d = ingest_csv(o.data_path, !o.no_intercept);
    json reports = json::array();
    for (const auto& name : o.primitives) {
        const PrimitiveKind kind = make_kind(name, d);
        const SimilarityDiagnostic diag = similarity_diagnostic(d, kind, diag_draws, o.seed);
        json j;
        j["primitive"] = name;
        j["draws"] = diag_draws;
        j["mean_deviation"] = diag.mean_deviation;
        j["mean_matrix_deviation"] = diag.mean_matrix_deviation;
        reports.push_back(std::move(j));
    }
    json j;
    j["command"] = "diagnose";
    j["config"] = config_echo(o);
    if (reports.size() == 1)
        j["report"] = reports[0];
    else
        j["reports"] = reports;
    emit(j, o.out_path);
    return 0;
}

struct SimulateOpts {
    std::string scenario;
    double lambda_ridge = 0.0;
    double lambda_lasso = 0.0;
    int replications = 1000;
    std::vector<std::string> methods;
    std::string csv_path;
    // scenario knobs
    int J = 10;
    int cluster_size = 30;
    bool lognormal_x = false;
    bool no_random_effect = false;
    bool heteroskedastic = false;
    double power_a0 = 0.0;
    bool have_power_a0 = false;
    double sigma0 = 1.0;
    std::string err = "normal";
    double beta1 = 0.0;
    int m = 10;
    double rho = 0.8;
    int x_model = 1;
    int n = 100;
    int p = 120;
    int s0 = 3;
    std::string signal = "const10";
};

sim::ErrDist parse_err(const std::string& name) {
    if (name == "normal") return sim::ErrDist::Normal;
    if (name == "t3") return sim::ErrDist::T3;
    if (name == "mixture") return sim::ErrDist::Mixture;
    if (name == "cauchy") return sim::ErrDist::Cauchy;
    throw Error(ErrorCode::InvalidConfig, "unknown error distribution '" + name + "'");
}

sim::SignalKind parse_signal(const std::string& name) {
    if (name == "u-2,2") return sim::SignalKind::UniformM2P2;
    if (name == "u0,2") return sim::SignalKind::Uniform0P2;
    if (name == "u0,4") return sim::SignalKind::Uniform0P4;
    if (name == "const1") return sim::SignalKind::Const1;
    if (name == "const2") return sim::SignalKind::Const2;
    if (name == "const10") return sim::SignalKind::Const10;
    throw Error(ErrorCode::InvalidConfig, "unknown signal kind '" + name + "'");
}

int run_simulate_cmd(const CommonOpts& o, const SimulateOpts& s) {
    if (s.scenario == "highdim") {
        sim::HighDim hd;
        hd.n = s.n;
        hd.p = s.p;
        hd.s0 = s.s0;
        hd.signal = parse_signal(s.signal);
        hd.err = parse_err(s.err);
        sim::FamilyStudyConfig fc;
        fc.penalties.lambda_ridge = s.lambda_ridge > 0.0 ? s.lambda_ridge : 1.0;
        fc.penalties.lambda_lasso =
            s.lambda_lasso > 0.0
                ? s.lambda_lasso
                : std::sqrt(2.0 * std::log(static_cast<double>(s.p)) / s.n);
        fc.test = config_from(o);
        const sim::MonteCarloReport report =
            sim::run_family_monte_carlo(hd, fc, s.replications, o.seed, o.threads);
        json j;
        j["command"] = "simulate";
        j["config"] = config_echo(o);
        j["lambda_ridge"] = fc.penalties.lambda_ridge;
        j["lambda_lasso"] = fc.penalties.lambda_lasso;
        j["report"] = mc_report_to_json(report);
        emit(j, o.out_path);
        if (!s.csv_path.empty()) {
            std::ofstream csv(s.csv_path);
            if (!csv) throw Error(ErrorCode::InvalidConfig, "cannot write '" + s.csv_path + "'");
            write_mc_report_csv(report, csv);
        }
        return 0;
    }

    sim::ScenarioSpec spec = [&]() -> sim::ScenarioSpec {
        if (s.scenario == "oneway") {
            sim::OneWayCluster w;
            w.num_clusters = s.J;
            w.cluster_size = s.cluster_size;
            w.x_dist = s.lognormal_x ? sim::XDist::LogNormal : sim::XDist::Normal;
            w.random_effect = !s.no_random_effect;
            w.heteroskedastic = s.heteroskedastic;
            w.beta0 = s.heteroskedastic ? 1.0 : 0.0;
            return w;
        }
        if (s.scenario == "behrens-fisher") {
            sim::BehrensFisher b;
            b.sigma0 = s.sigma0;
            b.err = parse_err(s.err);
            b.beta1 = s.beta1;
            return b;
        }
        if (s.scenario == "dyadic") {
            sim::Dyadic dy;
            dy.m = s.m;
            dy.x_dist = s.lognormal_x ? sim::XDist::LogNormal : sim::XDist::Normal;
            dy.eps_dist = parse_err(s.err);
            return dy;
        }
        if (s.scenario == "ar1") {
            sim::AR1 a;
            a.n = s.n;
            a.rho = s.rho;
            a.x_model = s.x_model;
            a.u_dist = parse_err(s.err);
            return a;
        }
        throw Error(ErrorCode::InvalidConfig,
                    "unknown scenario '" + s.scenario +
                        "' (oneway | behrens-fisher | dyadic | ar1 | highdim)");
    }();

    // Null value under test: scenario default, or --power-a0 for power runs.
    double a0 = 0.0;
    if (s.scenario == "dyadic") a0 = 1.0;
    if (s.have_power_a0) a0 = s.power_a0;
    const LinearHypothesis h{Vector{{0.0, 1.0}}, a0};

    TestConfig cfg = config_from(o);
    std::vector<sim::Method> methods;
    for (const auto& name : s.methods) {
        if (name == "wald") {
            methods.push_back(sim::wald_method(h, o.alpha));
        } else if (name == "exact") {
            methods.push_back(sim::exact_bf_method(h, 3, o.alpha));
        } else if (name == "reflect-cond" || name == "reflect-uncond") {
            ReflectionConfig rcfg;
            rcfg.num_clusters = s.J;
            methods.push_back(sim::reflection_method(name == "reflect-cond"
                                                         ? ReflectionVariant::Conditional
                                                         : ReflectionVariant::Unconditional,
                                                     h, rcfg, cfg));
        } else {
            methods.push_back(sim::randomization_method(name, h, cfg));
        }
    }
    if (methods.empty())
        throw Error(ErrorCode::InvalidConfig, "--methods is required for this scenario");

    const sim::MonteCarloReport report =
        sim::run_monte_carlo(spec, methods, s.replications, o.seed, o.threads);
    json j;
    j["command"] = "simulate";
    j["config"] = config_echo(o);
    j["report"] = mc_report_to_json(report);
    emit(j, o.out_path);
    if (!s.csv_path.empty()) {
        std::ofstream csv(s.csv_path);
        if (!csv) throw Error(ErrorCode::InvalidConfig, "cannot write '" + s.csv_path + "'");
        write_mc_report_csv(report, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"residual randomization inference for linear regression"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts o;

    auto* test_cmd = app.add_subcommand("test", "randomization test of a'beta = a0");
    add_dataset_flags(test_cmd, o);
    add_test_flags(test_cmd, o, true);

    auto* ci_cmd = app.add_subcommand("ci", "confidence interval by test inversion");
    add_dataset_flags(ci_cmd, o);
    add_test_flags(ci_cmd, o, true);
    double lo = 0.0, hi = 0.0, step = 0.0;
    ci_cmd->add_option("--lo", lo, "grid lower bound")->required();
    ci_cmd->add_option("--hi", hi, "grid upper bound")->required();
    ci_cmd->add_option("--step", step, "grid step (default (hi-lo)/200)");

    auto* exact_cmd = app.add_subcommand("exact", "finite-sample exact cluster sign test");
    add_dataset_flags(exact_cmd, o);
    add_test_flags(exact_cmd, o, false);
    int exact_clusters = 3;
    exact_cmd->add_option("-J,--clusters", exact_clusters,
                          "clusters for the balanced construction (when no cluster column)");

    auto* reflect_cmd = app.add_subcommand("reflect", "reflection test for autocorrelated errors");
    add_dataset_flags(reflect_cmd, o);
    add_test_flags(reflect_cmd, o, false);
    int reflect_J = 6;
    std::string variant = "conditional";
    reflect_cmd->add_option("-J,--clusters", reflect_J, "target cluster count");
    reflect_cmd->add_option("--variant", variant, "conditional | unconditional");

    auto* highdim_cmd = app.add_subcommand("highdim", "ridge/lasso randomization test");
    add_dataset_flags(highdim_cmd, o);
    add_test_flags(highdim_cmd, o, false);
    double lambda_ridge = 0.0, lambda_lasso = 0.0, alpha_family = 0.05;
    bool family = false;
    highdim_cmd->add_option("--lambda-ridge", lambda_ridge,
                            "ridge penalty (default: 5-fold CV)");
    highdim_cmd->add_option("--lambda-lasso", lambda_lasso,
                            "lasso penalty (default: 5-fold CV)");
    highdim_cmd->add_flag("--family", family, "test every coefficient with Bonferroni control");
    highdim_cmd->add_option("--alpha-family", alpha_family, "family-wise level");
    highdim_cmd->add_option("--primitive", o.primitives, "sign (default) or perm");

    auto* diagnose_cmd = app.add_subcommand("diagnose", "similarity diagnostic for a primitive");
    add_dataset_flags(diagnose_cmd, o);
    add_test_flags(diagnose_cmd, o, true);
    int diag_draws = 200;
    diagnose_cmd->add_option("--diag-draws", diag_draws, "number of sampled transforms");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo rejection-rate study");
    SimulateOpts s;
    sim_cmd->add_option("--scenario", s.scenario,
                        "oneway | behrens-fisher | dyadic | ar1 | highdim")
        ->required();
    sim_cmd->add_option("-M,--replications", s.replications, "Monte Carlo replications");
    sim_cmd->add_option("--methods", s.methods,
                        "wald | perm | sign | cluster-perm | cluster-sign | double | two-way | "
                        "exact | reflect-cond | reflect-uncond (comma-separated; ignored for "
                        "the highdim scenario, which reports family FWER and power)")
        ->delimiter(',');
    sim_cmd->add_option("--csv", s.csv_path, "also write a flat CSV table here");
    sim_cmd->add_option("-J,--clusters", s.J, "clusters (oneway) / target clusters (ar1)");
    sim_cmd->add_option("--cluster-size", s.cluster_size, "points per cluster (oneway)");
    sim_cmd->add_flag("--lognormal-x", s.lognormal_x, "log-normal cluster-level covariate");
    sim_cmd->add_flag("--no-random-effect", s.no_random_effect, "drop the cluster error term");
    sim_cmd->add_flag("--heteroskedastic", s.heteroskedastic, "scale errors by 3|x|");
    sim_cmd->add_option("--power-a0", s.power_a0, "test this (false) null instead")
        ->each([&s](const std::string&) { s.have_power_a0 = true; });
    sim_cmd->add_option("--sigma0", s.sigma0, "control-arm sd (behrens-fisher)");
    sim_cmd->add_option("--err", s.err, "normal | t3 | mixture (| cauchy)");
    sim_cmd->add_option("--beta1", s.beta1, "true treatment effect (behrens-fisher)");
    sim_cmd->add_option("-m,--nodes", s.m, "nodes (dyadic)");
    sim_cmd->add_option("--rho", s.rho, "autocorrelation (ar1)");
    sim_cmd->add_option("--x-model", s.x_model, "covariate model 1..4 (ar1)");
    sim_cmd->add_option("-n", s.n, "series length (ar1) / sample size (highdim)");
    sim_cmd->add_option("-p", s.p, "covariate count (highdim)");
    sim_cmd->add_option("--s0", s.s0, "active coefficients (highdim)");
    sim_cmd->add_option("--signal", s.signal,
                        "u-2,2 | u0,2 | u0,4 | const1 | const2 | const10 (highdim)");
    sim_cmd->add_option("--lambda-ridge", s.lambda_ridge, "ridge penalty (highdim)");
    sim_cmd->add_option("--lambda-lasso", s.lambda_lasso, "lasso penalty (highdim)");
    sim_cmd->add_option("-R,--draws", o.draws, "randomization draws per test");
    sim_cmd->add_option("--alpha", o.alpha, "test level");
    sim_cmd->add_option("--seed", o.seed, "RNG seed");
    sim_cmd->add_option("--threads", o.threads, "worker threads")->envname("RESRAND_THREADS");
    sim_cmd->add_option("-o,--out", o.out_path, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (test_cmd->parsed()) return run_test_cmd(o);
        if (ci_cmd->parsed()) return run_ci_cmd(o, lo, hi, step);
        if (exact_cmd->parsed()) return run_exact_cmd(o, exact_clusters);
        if (reflect_cmd->parsed()) return run_reflect_cmd(o, reflect_J, variant);
        if (highdim_cmd->parsed())
            return run_highdim_cmd(o, lambda_ridge, lambda_lasso, family, alpha_family);
        if (diagnose_cmd->parsed()) return run_diagnose_cmd(o, diag_draws);
        if (sim_cmd->parsed()) return run_simulate_cmd(o, s);
    } catch (const Error& e) {
        json err;
        err["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
        std::cerr << err.dump(2) << std::endl;
        return e.is_input_error() ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
    return 0;
}
