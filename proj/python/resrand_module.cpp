#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resrand/csv.hpp"
#include "resrand/engine.hpp"
#include "resrand/exactcons.hpp"
#include "resrand/highdim.hpp"
#include "resrand/reflect.hpp"

namespace py = pybind11;
using namespace resrand;

namespace {

Dataset make_dataset(const Vector& y, const Matrix& X, std::optional<std::vector<int>> cluster,
                     std::optional<std::vector<int>> rowc, std::optional<std::vector<int>> colc,
                     std::optional<std::vector<long long>> time) {
    Dataset d;
    d.y = y;
    d.X = X;
    d.cluster = std::move(cluster);
    d.row_cluster = std::move(rowc);
    d.col_cluster = std::move(colc);
    d.time = std::move(time);
    d.validate();
    return d;
}

TestConfig make_config(int draws, double alpha, std::uint64_t seed, bool enumerate,
                       int threads) {
    TestConfig cfg;
    cfg.draws = draws;
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.threads = threads;
    if (enumerate) cfg.mode = Mode::Enumerated;
    return cfg;
}

py::dict outcome_dict(const TestOutcome& o) {
    py::dict d;
    d["t_obs"] = o.t_obs;
    d["pval_one"] = o.pval_one;
    d["pval_two"] = o.pval_two;
    d["decision"] = o.decision.name();
    d["b"] = o.decision.b;
    d["R_used"] = o.draw_values.size();
    d["mode"] = o.mode_used == Mode::Enumerated ? "enumerated" : "sampled";
    d["group_size_note"] = o.group_size_note;
    return d;
}

}  // namespace

PYBIND11_MODULE(_resrand, m) {
    m.doc() = "residual randomization inference for linear regression";

    py::register_exception<Error>(m, "ResrandError");

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&make_dataset), py::arg("y"), py::arg("X"),
             py::arg("cluster") = py::none(), py::arg("rowc") = py::none(),
             py::arg("colc") = py::none(), py::arg("time") = py::none())
        .def_readonly("y", &Dataset::y)
        .def_readonly("X", &Dataset::X)
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("p", &Dataset::p);

    m.def("load_csv", &ingest_csv, py::arg("path"), py::arg("add_intercept") = true,
          "Load a dataset from CSV (columns y, x*, cluster, rowc, colc, time).");

    m.def(
        "fit_ols",
        [](const Dataset& d) {
            const FitResult f = fit_ols(d);
            return py::make_tuple(f.beta_hat, f.residuals);
        },
        py::arg("data"), "Least squares fit; returns (beta_hat, residuals).");

    m.def(
        "fit_constrained_ols",
        [](const Dataset& d, const Vector& a, double a0) {
            const ConstrainedFit f = fit_constrained_ols(d, {a, a0});
            return py::make_tuple(f.beta_restricted, f.restricted_residuals);
        },
        py::arg("data"), py::arg("a"), py::arg("a0"),
        "Least squares under a'beta = a0; returns (beta, residuals).");

    m.def(
        "run_test",
        [](const Dataset& d, const Vector& a, double a0, const std::string& primitive,
           int draws, double alpha, std::uint64_t seed, bool enumerate, int threads) {
            const TestOutcome o = run_test(d, {a, a0}, make_kind(primitive, d),
                                           make_config(draws, alpha, seed, enumerate, threads));
            return outcome_dict(o);
        },
        py::arg("data"), py::arg("a"), py::arg("a0") = 0.0, py::arg("primitive") = "perm",
        py::arg("draws") = 2000, py::arg("alpha") = 0.05, py::arg("seed") = 0,
        py::arg("enumerate") = false, py::arg("threads") = 1,
        "Randomization test of a'beta = a0 under the named primitive.");

    m.def(
        "invert_ci",
        [](const Dataset& d, int coef, const std::string& primitive, double lo, double hi,
           double step, int draws, double alpha, std::uint64_t seed, int threads) {
            const ConfidenceInterval ci =
                invert_ci(d, coef, make_kind(primitive, d),
                          make_config(draws, alpha, seed, false, threads), {lo, hi, step});
            py::dict out;
            out["lower"] = ci.lower;
            out["upper"] = ci.upper;
            out["level"] = ci.level;
            out["empty"] = ci.empty;
            out["non_monotone"] = ci.non_monotone;
            out["grid"] = ci.grid;
            out["pvals"] = ci.pvals;
            return out;
        },
        py::arg("data"), py::arg("coef"), py::arg("primitive") = "perm", py::arg("lo") = 0.0,
        py::arg("hi") = 0.0, py::arg("step") = 0.0, py::arg("draws") = 2000,
        py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("threads") = 1,
        "Confidence interval for one coefficient by test inversion.");

    m.def(
        "run_exact_test",
        [](const Dataset& d, const Vector& a, double a0, const std::vector<int>& labels,
           double alpha) {
            const ExactTestResult r =
                run_exact_test(d, {a, a0}, Clustering::from_labels(labels), alpha);
            py::dict out = outcome_dict(r.outcome);
            out["exact"] = r.exact;
            out["worst_relative_deviation"] = r.worst_relative_deviation;
            return out;
        },
        py::arg("data"), py::arg("a"), py::arg("a0"), py::arg("cluster_labels"),
        py::arg("alpha") = 0.05,
        "Enumerated cluster sign test; exact when the clustering passes the "
        "similarity check.");

    m.def(
        "build_balanced_clustering",
        [](const std::vector<int>& treatment, int num_clusters, std::uint64_t seed) {
            Rng rng(seed);
            return build_balanced_clustering({treatment, num_clusters}, rng).assignment;
        },
        py::arg("treatment"), py::arg("num_clusters"), py::arg("seed") = 0,
        "Random balanced split of a binary design; returns cluster labels.");

    m.def(
        "run_reflection_test",
        [](const Dataset& d, const Vector& a, double a0, int num_clusters,
           const std::string& variant, int draws, double alpha, std::uint64_t seed) {
            ReflectionConfig rcfg;
            rcfg.num_clusters = num_clusters;
            rcfg.variant = variant == "unconditional" ? ReflectionVariant::Unconditional
                                                      : ReflectionVariant::Conditional;
            const ReflectionResult r = run_reflection_test(
                d, {a, a0}, rcfg, make_config(draws, alpha, seed, false, 1));
            py::dict out;
            out["decided"] = r.decided;
            out["achieved_clusters"] = r.achieved;
            out["decision"] = r.decided ? r.decision.name()
                                        : (rcfg.variant == ReflectionVariant::Conditional
                                               ? "undecided"
                                               : "accept");
            if (r.outcome) out["report"] = outcome_dict(*r.outcome);
            return out;
        },
        py::arg("data"), py::arg("a"), py::arg("a0") = 0.0, py::arg("num_clusters") = 6,
        py::arg("variant") = "conditional", py::arg("draws") = 2000, py::arg("alpha") = 0.05,
        py::arg("seed") = 0, "Reflection test for autocorrelated errors.");

    m.def(
        "run_highdim_test",
        [](const Dataset& d, const Vector& a, double a0, double lambda_ridge,
           double lambda_lasso, const std::string& primitive, int draws, double alpha,
           std::uint64_t seed) {
            PenaltyConfig pen;
            pen.lambda_ridge = lambda_ridge;
            pen.lambda_lasso = lambda_lasso;
            const TestOutcome o =
                run_highdim_test(d, {a, a0}, pen, make_kind(primitive, d),
                                 make_config(draws, alpha, seed, false, 1));
            return outcome_dict(o);
        },
        py::arg("data"), py::arg("a"), py::arg("a0"), py::arg("lambda_ridge"),
        py::arg("lambda_lasso"), py::arg("primitive") = "sign", py::arg("draws") = 2000,
        py::arg("alpha") = 0.05, py::arg("seed") = 0,
        "Ridge/lasso randomization test for possibly p > n designs.");

    m.def(
        "family_test",
        [](const Dataset& d, double lambda_ridge, double lambda_lasso,
           const std::string& primitive, int draws, double alpha_family, std::uint64_t seed,
           int threads) {
            PenaltyConfig pen;
            pen.lambda_ridge = lambda_ridge;
            pen.lambda_lasso = lambda_lasso;
            const FamilyTestReport r =
                family_test(d, pen, make_kind(primitive, d),
                            make_config(draws, alpha_family, seed, false, threads));
            py::dict out;
            out["per_coef_pvals"] = r.per_coef_pvals;
            std::vector<bool> rej(r.rejected.begin(), r.rejected.end());
            out["rejected"] = rej;
            out["alpha_family"] = r.alpha_family;
            return out;
        },
        py::arg("data"), py::arg("lambda_ridge"), py::arg("lambda_lasso"),
        py::arg("primitive") = "sign", py::arg("draws") = 2000, py::arg("alpha_family") = 0.05,
        py::arg("seed") = 0, py::arg("threads") = 1,
        "Per-coefficient tests of beta_j = 0 with Bonferroni family control.");

    m.def("fit_ridge", &fit_ridge, py::arg("data"), py::arg("lambda_"));
    m.def(
        "fit_lasso",
        [](const Dataset& d, double lambda, double tol, int max_sweeps) {
            PenaltyConfig cfg;
            cfg.lambda_ridge = 1.0;
            cfg.lambda_lasso = std::max(lambda, 1e-300);
            cfg.lasso_tol = tol;
            cfg.lasso_max_sweeps = max_sweeps;
            return fit_lasso(d, lambda, cfg);
        },
        py::arg("data"), py::arg("lambda_"), py::arg("tol") = 1e-7,
        py::arg("max_sweeps") = 100000);
}
