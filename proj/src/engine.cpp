#include "resrand/engine.hpp"

#include "resrand/detail/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace resrand {

void TestConfig::validate() const {
    if (draws < 1) throw Error(ErrorCode::InvalidConfig, "draws must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
    if (threads < 1) throw Error(ErrorCode::InvalidConfig, "threads must be >= 1");
}

double pvalue_one_sided(double t_obs, std::span<const double> draws) {
    if (draws.empty()) throw Error(ErrorCode::EmptyInput, "no randomization draws");
    std::size_t count = 0;
    for (double v : draws)
        if (v >= t_obs) ++count;
    return static_cast<double>(count) / static_cast<double>(draws.size());
}

double pvalue_two_sided(double t_obs, std::span<const double> draws) {
    if (draws.empty()) throw Error(ErrorCode::EmptyInput, "no randomization draws");
    std::size_t ge = 0, le = 0;
    for (double v : draws) {
        if (v >= t_obs) ++ge;
        if (v <= t_obs) ++le;
    }
    const double r = static_cast<double>(draws.size());
    return std::min(static_cast<double>(ge) / r, static_cast<double>(le) / r);
}

Decision decide_with_correction(double t_obs, std::span<const double> draws, double alpha) {
    if (draws.empty()) throw Error(ErrorCode::EmptyInput, "no randomization draws");
    const auto R = static_cast<std::int64_t>(draws.size());
    std::vector<double> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());
    // k = ceil(R (1 - alpha)) computed as R - floor(R alpha) to dodge
    // binary-representation slop in R * (1 - alpha).
    const auto k = R - static_cast<std::int64_t>(
                           std::floor(static_cast<double>(R) * alpha + 1e-9));
    if (k < 1 || k > R) return {Decision::Kind::Reject, 1.0};  // alpha >= 1 - 1/R edge
    const double tk = sorted[static_cast<std::size_t>(k - 1)];
    if (t_obs > tk) return {Decision::Kind::Reject, 1.0};
    if (t_obs < tk) return {Decision::Kind::Accept, 0.0};
    const auto r_plus = static_cast<std::int64_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), tk));
    const auto r_zero = static_cast<std::int64_t>(
        std::upper_bound(sorted.begin(), sorted.end(), tk) -
        std::lower_bound(sorted.begin(), sorted.end(), tk));
    double b = (static_cast<double>(R) * alpha - static_cast<double>(r_plus)) /
               static_cast<double>(r_zero);
    b = std::clamp(b, 0.0, 1.0);
    if (b <= 0.0) return {Decision::Kind::Accept, 0.0};
    if (b >= 1.0) return {Decision::Kind::Reject, 1.0};
    return {Decision::Kind::RejectWithProb, b};
}

Decision decide_two_sided(double t_obs, std::span<const double> draws, double alpha) {
    const Decision upper = decide_with_correction(t_obs, draws, alpha / 2.0);
    std::vector<double> negated(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) negated[i] = -draws[i];
    const Decision lower = decide_with_correction(-t_obs, negated, alpha / 2.0);
    const double b = std::clamp(upper.b + lower.b, 0.0, 1.0);
    if (b <= 0.0) return {Decision::Kind::Accept, 0.0};
    if (b >= 1.0) return {Decision::Kind::Reject, 1.0};
    return {Decision::Kind::RejectWithProb, b};
}

namespace {

void parallel_fill(std::vector<double>& out, std::size_t count, int threads,
                   const std::function<double(std::size_t)>& fn) {
    out.resize(count);
    detail::parallel_for(count, threads, [&](std::size_t i) { out[i] = fn(i); });
}

/// Sign-flip kinds: the draw value is excluded + sum_c s_c d_c over
/// precomputed per-cluster partial dots, O(J) per draw.
struct SignEvaluator {
    std::vector<double> cluster_dot;
    double excluded_dot = 0.0;

    SignEvaluator(const Clustering& c, const Vector& v, const Vector& u) {
        cluster_dot.resize(c.members.size(), 0.0);
        for (std::size_t cl = 0; cl < c.members.size(); ++cl)
            for (int i : c.members[cl]) cluster_dot[cl] += v(i) * u(i);
        for (std::size_t i = 0; i < c.assignment.size(); ++i)
            if (c.assignment[i] < 0) excluded_dot += v(static_cast<Eigen::Index>(i)) *
                                                     u(static_cast<Eigen::Index>(i));
    }

    double eval_pattern(std::uint64_t pattern) const {
        double acc = excluded_dot;
        for (std::size_t cl = 0; cl < cluster_dot.size(); ++cl)
            acc += ((pattern >> cl) & 1 ? -cluster_dot[cl] : cluster_dot[cl]);
        return acc;
    }

    double eval_sampled(Rng& rng) const {
        double acc = excluded_dot;
        for (double d : cluster_dot) acc += static_cast<double>(rng.rademacher()) * d;
        return acc;
    }

    double identity() const { return eval_pattern(0); }
};

/// Permutation kinds (with optional cluster signs): cluster-major traversal
/// so the identity evaluation and the draws share one summation order.
struct PermEvaluator {
    const Clustering& clustering;
    const Vector& v;
    const Vector& u;

    double eval_sampled(Rng& rng, std::vector<int>& scratch) const {
        double acc = 0.0;
        for (const auto& members : clustering.members) {
            scratch.assign(members.begin(), members.end());
            for (std::size_t i = scratch.size(); i > 1; --i)
                std::swap(scratch[i - 1], scratch[static_cast<std::size_t>(rng.uniform_below(i))]);
            double block = 0.0;
            for (std::size_t t = 0; t < members.size(); ++t)
                block += v(members[t]) * u(scratch[t]);
            acc += block;
        }
        return acc;
    }

    double eval_sampled_double(Rng& rng, std::vector<int>& scratch,
                               std::vector<double>& block_vals) const {
        block_vals.resize(clustering.members.size());
        for (std::size_t cl = 0; cl < clustering.members.size(); ++cl) {
            const auto& members = clustering.members[cl];
            scratch.assign(members.begin(), members.end());
            for (std::size_t i = scratch.size(); i > 1; --i)
                std::swap(scratch[i - 1], scratch[static_cast<std::size_t>(rng.uniform_below(i))]);
            double block = 0.0;
            for (std::size_t t = 0; t < members.size(); ++t)
                block += v(members[t]) * u(scratch[t]);
            block_vals[cl] = block;
        }
        double acc = 0.0;
        for (double b : block_vals) acc += static_cast<double>(rng.rademacher()) * b;
        return acc;
    }

    double eval_element(const GroupElement& g) const {
        double acc = 0.0;
        for (const auto& members : clustering.members) {
            double block = 0.0;
            for (int i : members) {
                const auto iu = static_cast<std::size_t>(i);
                block += v(i) * static_cast<double>(g.sign[iu]) * u(g.perm[iu]);
            }
            acc += block;
        }
        return acc;
    }

    double identity() const {
        double acc = 0.0;
        for (const auto& members : clustering.members) {
            double block = 0.0;
            for (int i : members) block += v(i) * u(i);
            acc += block;
        }
        return acc;
    }
};

struct TwoWayEvaluator {
    const TwoWayLayout& layout;
    const Vector& v;
    const Vector& u;

    double eval_maps(const std::vector<int>& row_map, const std::vector<int>& col_map) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < layout.n(); ++i) {
            int r = row_map[static_cast<std::size_t>(layout.row_of[i])];
            int c = col_map[static_cast<std::size_t>(layout.col_of[i])];
            if (layout.dyadic && r < c) std::swap(r, c);
            acc += v(static_cast<Eigen::Index>(i)) * u(layout.cell_index(r, c));
        }
        return acc;
    }

    double eval_sampled(Rng& rng, std::vector<int>& rows, std::vector<int>& cols) const {
        rows.resize(static_cast<std::size_t>(layout.row_count));
        std::iota(rows.begin(), rows.end(), 0);
        for (std::size_t i = rows.size(); i > 1; --i)
            std::swap(rows[i - 1], rows[static_cast<std::size_t>(rng.uniform_below(i))]);
        if (layout.dyadic) return eval_maps(rows, rows);
        cols.resize(static_cast<std::size_t>(layout.col_count));
        std::iota(cols.begin(), cols.end(), 0);
        for (std::size_t i = cols.size(); i > 1; --i)
            std::swap(cols[i - 1], cols[static_cast<std::size_t>(rng.uniform_below(i))]);
        return eval_maps(rows, cols);
    }

    double identity() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < layout.n(); ++i)
            acc += v(static_cast<Eigen::Index>(i)) * u(static_cast<Eigen::Index>(i));
        return acc;
    }
};

bool is_sign_only(const PrimitiveKind& kind) {
    return kind.tag == PrimitiveTag::GlobalSign || kind.tag == PrimitiveTag::ClusterSign;
}

}  // namespace

TestOutcome run_core(const StatFunctional& f, const Vector& u, double t_obs,
                     const PrimitiveKind& kind, const TestConfig& cfg, CompareMode compare) {
    cfg.validate();
    if (static_cast<Eigen::Index>(kind.n) != u.size() || f.weight.size() != u.size())
        throw Error(ErrorCode::LayoutMismatch, "primitive / functional / residual sizes differ");

    TestOutcome out;
    out.t_obs = t_obs;

    const GroupSizeInfo size = group_size(kind);
    out.group_size_note = size.note();

    bool enumerated = false;
    if (cfg.mode == Mode::Enumerated) {
        if (size.overflow || size.value > cfg.enumeration_cap)
            throw Error(ErrorCode::GroupTooLarge, size.note() + " exceeds enumeration cap " +
                                                      std::to_string(cfg.enumeration_cap));
        enumerated = true;
    } else if (cfg.auto_enumerate && !size.overflow &&
               size.value <= static_cast<std::uint64_t>(cfg.draws)) {
        enumerated = true;
        out.group_size_note += " (auto-enumerated)";
    }
    out.mode_used = enumerated ? Mode::Enumerated : Mode::Sampled;

    if (cfg.alpha * static_cast<double>(cfg.draws) < 1.0 && !enumerated)
        out.warnings.push_back("alpha * R < 1; the test cannot resolve the target level");

    const Vector& v = f.weight;

    if (is_sign_only(kind)) {
        const SignEvaluator eval(kind.clustering, v, u);
        out.t_eval = eval.identity();
        if (enumerated) {
            parallel_fill(out.draw_values, static_cast<std::size_t>(size.value), cfg.threads,
                          [&](std::size_t j) { return eval.eval_pattern(j); });
        } else {
            parallel_fill(out.draw_values, static_cast<std::size_t>(cfg.draws), cfg.threads,
                          [&](std::size_t r) {
                              Rng rng(derive_seed(cfg.seed, r));
                              return eval.eval_sampled(rng);
                          });
        }
    } else if (kind.tag == PrimitiveTag::TwoWayPerm) {
        const TwoWayEvaluator eval{kind.layout, v, u};
        out.t_eval = eval.identity();
        if (enumerated) {
            const auto elements = enumerate_elements(kind, cfg.enumeration_cap);
            parallel_fill(out.draw_values, elements.size(), cfg.threads, [&](std::size_t j) {
                const auto& g = elements[j];
                double acc = 0.0;
                for (std::size_t i = 0; i < kind.n; ++i)
                    acc += v(static_cast<Eigen::Index>(i)) * u(g.perm[i]);
                return acc;
            });
        } else {
            parallel_fill(out.draw_values, static_cast<std::size_t>(cfg.draws), cfg.threads,
                          [&](std::size_t r) {
                              Rng rng(derive_seed(cfg.seed, r));
                              std::vector<int> rows, cols;
                              return eval.eval_sampled(rng, rows, cols);
                          });
        }
    } else {
        const PermEvaluator eval{kind.clustering, v, u};
        out.t_eval = eval.identity();
        if (enumerated) {
            const auto elements = enumerate_elements(kind, cfg.enumeration_cap);
            parallel_fill(out.draw_values, elements.size(), cfg.threads,
                          [&](std::size_t j) { return eval.eval_element(elements[j]); });
        } else if (kind.tag == PrimitiveTag::Double) {
            parallel_fill(out.draw_values, static_cast<std::size_t>(cfg.draws), cfg.threads,
                          [&](std::size_t r) {
                              Rng rng(derive_seed(cfg.seed, r));
                              std::vector<int> scratch;
                              std::vector<double> blocks;
                              return eval.eval_sampled_double(rng, scratch, blocks);
                          });
        } else {
            parallel_fill(out.draw_values, static_cast<std::size_t>(cfg.draws), cfg.threads,
                          [&](std::size_t r) {
                              Rng rng(derive_seed(cfg.seed, r));
                              std::vector<int> scratch;
                              return eval.eval_sampled(rng, scratch);
                          });
        }
    }

    const double ref =
        compare == CompareMode::IdentityEvaluation ? out.t_eval : out.t_obs;

    // One-sided count per the configured direction.
    {
        std::size_t count = 0;
        for (double d : out.draw_values) {
            if (cfg.sidedness == Sidedness::OneSidedLess ? (d <= ref) : (d >= ref)) ++count;
        }
        out.pval_one =
            static_cast<double>(count) / static_cast<double>(out.draw_values.size());
    }
    out.pval_two = pvalue_two_sided(ref, out.draw_values);

    switch (cfg.sidedness) {
        case Sidedness::TwoSided:
            out.decision = decide_two_sided(ref, out.draw_values, cfg.alpha);
            break;
        case Sidedness::OneSidedGreater:
            out.decision = decide_with_correction(ref, out.draw_values, cfg.alpha);
            break;
        case Sidedness::OneSidedLess: {
            std::vector<double> neg(out.draw_values.size());
            for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -out.draw_values[i];
            out.decision = decide_with_correction(-ref, neg, cfg.alpha);
            break;
        }
    }
    return out;
}

TestOutcome run_test(const Dataset& d, const LinearHypothesis& h, const PrimitiveKind& kind,
                     const TestConfig& cfg) {
    d.validate();
    if (kind.n != static_cast<std::size_t>(d.n()))
        throw Error(ErrorCode::LayoutMismatch, "primitive built for n=" + std::to_string(kind.n) +
                                                   " but dataset has n=" + std::to_string(d.n()));
    const FitResult fit = fit_ols(d);
    const ConstrainedFit cf = fit_constrained_ols(d, h, fit);
    const StatFunctional f = make_stat_functional(d, h, fit);
    const double t_obs = test_statistic(d, fit, h);
    return run_core(f, cf.restricted_residuals, t_obs, kind, cfg);
}

ConfidenceInterval invert_ci(const Dataset& d, Eigen::Index coef_index,
                             const PrimitiveKind& kind, const TestConfig& cfg, GridSpec grid) {
    d.validate();
    if (coef_index < 0 || coef_index >= d.p())
        throw Error(ErrorCode::InvalidConfig, "coefficient index out of range");
    if (!(grid.hi > grid.lo))
        throw Error(ErrorCode::InvalidConfig, "grid upper bound must exceed lower bound");
    const double step = grid.step > 0.0 ? grid.step : (grid.hi - grid.lo) / 200.0;

    const FitResult fit = fit_ols(d);
    const double point = fit.beta_hat(coef_index);
    if (point < grid.lo || point > grid.hi)
        throw Error(ErrorCode::InvalidConfig,
                    "grid [" + std::to_string(grid.lo) + ", " + std::to_string(grid.hi) +
                        "] does not cover the point estimate " + std::to_string(point));

    LinearHypothesis h = LinearHypothesis::coefficient(d.p(), coef_index, 0.0);
    const StatFunctional f = make_stat_functional(d, h, fit);

    ConfidenceInterval ci;
    ci.level = 1.0 - cfg.alpha;
    const auto npts =
        static_cast<std::size_t>(std::floor((grid.hi - grid.lo) / step + 1e-9)) + 1;
    ci.grid.reserve(npts);
    ci.pvals.reserve(npts);

    std::vector<bool> accepted(npts, false);
    for (std::size_t k = 0; k < npts; ++k) {
        const double a0 = grid.lo + static_cast<double>(k) * step;
        h.a0 = a0;
        const ConstrainedFit cf = fit_constrained_ols(d, h, fit);
        const double t_obs = test_statistic(d, fit, h);
        const TestOutcome o = run_core(f, cf.restricted_residuals, t_obs, kind, cfg);
        ci.grid.push_back(a0);
        ci.pvals.push_back(o.pval_two);
        accepted[k] = o.pval_two >= cfg.alpha / 2.0;
    }

    std::size_t first = npts, last = npts;
    for (std::size_t k = 0; k < npts; ++k) {
        if (accepted[k]) {
            if (first == npts) first = k;
            last = k;
        }
    }
    if (first == npts) {
        ci.empty = true;
        ci.lower = ci.upper = std::numeric_limits<double>::quiet_NaN();
        return ci;
    }
    ci.lower = ci.grid[first];
    ci.upper = ci.grid[last];
    for (std::size_t k = first; k <= last; ++k)
        if (!accepted[k]) ci.non_monotone = true;
    return ci;
}

SimilarityDiagnostic similarity_diagnostic(const Dataset& d, const PrimitiveKind& kind,
                                           int num_draws, std::uint64_t seed) {
    d.validate();
    if (num_draws < 1) throw Error(ErrorCode::InvalidConfig, "num_draws must be >= 1");
    if (kind.n != static_cast<std::size_t>(d.n()))
        throw Error(ErrorCode::LayoutMismatch, "primitive size does not match dataset");
    const FitResult fit = fit_ols(d);
    const Eigen::Index p = d.p();

    SimilarityDiagnostic diag;
    diag.per_draw_norms.resize(static_cast<std::size_t>(num_draws));
    Matrix msum = Matrix::Zero(p, p);
    Matrix gx(d.n(), p);
    for (int r = 0; r < num_draws; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const GroupElement g = sample_element(kind, rng);
        for (Eigen::Index i = 0; i < d.n(); ++i)
            gx.row(i) = static_cast<double>(g.sign[static_cast<std::size_t>(i)]) *
                        d.X.row(g.perm[static_cast<std::size_t>(i)]);
        const Matrix m = fit.gram_inverse * (d.X.transpose() * gx);
        const double b = m.trace() / static_cast<double>(p);
        diag.per_draw_norms[static_cast<std::size_t>(r)] =
            (m - b * Matrix::Identity(p, p)).norm();
        msum += m;
    }
    for (double v : diag.per_draw_norms) diag.mean_deviation += v;
    diag.mean_deviation /= static_cast<double>(num_draws);
    const Matrix mbar = msum / static_cast<double>(num_draws);
    const double bbar = mbar.trace() / static_cast<double>(p);
    diag.mean_matrix_deviation = (mbar - bbar * Matrix::Identity(p, p)).norm();
    return diag;
}

}  // namespace resrand
