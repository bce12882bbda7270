#pragma once

#include <span>
#include <string>
#include <vector>

#include "resrand/linmodel.hpp"
#include "resrand/primitives.hpp"
#include "resrand/rng.hpp"
#include "resrand/types.hpp"

namespace resrand {

enum class Mode { Sampled, Enumerated };
enum class Sidedness { TwoSided, OneSidedGreater, OneSidedLess };

struct TestConfig {
    int draws = 2000;  // R
    double alpha = 0.05;
    Mode mode = Mode::Sampled;
    /// In Sampled mode, switch to full enumeration when |G| <= draws;
    /// strictly better than sampling a small group with replacement.
    bool auto_enumerate = true;
    std::uint64_t enumeration_cap = std::uint64_t{1} << 20;
    std::uint64_t seed = 0;
    Sidedness sidedness = Sidedness::TwoSided;
    int threads = 1;

    void validate() const;
};

/// Randomized decision: b = 0 accept, b = 1 reject, otherwise reject with
/// probability b (the order-statistic boundary correction).
struct Decision {
    enum class Kind { Accept, Reject, RejectWithProb };
    Kind kind = Kind::Accept;
    double b = 0.0;

    bool resolve(Rng& rng) const {
        if (kind == Kind::Accept) return false;
        if (kind == Kind::Reject) return true;
        return rng.bernoulli(b);
    }
    std::string name() const {
        switch (kind) {
            case Kind::Accept: return "accept";
            case Kind::Reject: return "reject";
            case Kind::RejectWithProb: return "reject_with_prob";
        }
        return "?";
    }
};

struct TestOutcome {
    double t_obs = 0.0;   // sqrt(n)(a'beta_hat - a0)
    /// The functional evaluated at the identity element through the same
    /// summation path as the draws; equals t_obs up to roundoff and is the
    /// value the draws are counted against, so orbit ties are exact.
    double t_eval = 0.0;
    std::vector<double> draw_values;
    double pval_one = 1.0;
    double pval_two = 1.0;
    Decision decision;
    Mode mode_used = Mode::Sampled;
    std::string group_size_note;
    std::vector<std::string> warnings;
};

/// Eq.-style one-sided p-value: (1/R) #{draws >= t}.
double pvalue_one_sided(double t_obs, std::span<const double> draws);

/// min(P{draws >= t}, P{draws <= t}); compare against alpha/2.
double pvalue_two_sided(double t_obs, std::span<const double> draws);

/// Order-statistic decision at level alpha (one-sided, upper tail):
/// k = R - floor(R alpha), reject above the k-th order statistic, randomize
/// with b = (R alpha - R+)/R0 on ties with it.
Decision decide_with_correction(double t_obs, std::span<const double> draws, double alpha);

/// phi_{alpha/2}(t, draws) + phi_{alpha/2}(-t, -draws).
Decision decide_two_sided(double t_obs, std::span<const double> draws, double alpha);

/// What the draws are counted against. The OLS-style tests compare at the
/// functional's identity evaluation, which equals the observed statistic
/// algebraically and keeps orbit ties exact. Procedures whose observed
/// statistic is not t(u) (the penalized test with its bias-correction
/// term) compare at the observed value itself.
enum class CompareMode { IdentityEvaluation, ObservedStatistic };

/// Randomization core over a precomputed functional and residual vector.
/// Exposed separately so harnesses can feed true errors in place of
/// residuals.
TestOutcome run_core(const StatFunctional& f, const Vector& u, double t_obs,
                     const PrimitiveKind& kind, const TestConfig& cfg,
                     CompareMode compare = CompareMode::IdentityEvaluation);

TestOutcome run_test(const Dataset& d, const LinearHypothesis& h, const PrimitiveKind& kind,
                     const TestConfig& cfg);

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;  // <= 0: use (hi - lo) / 200
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> grid;
    std::vector<double> pvals;
    double level = 0.0;
    bool empty = false;          // no grid point accepted
    bool non_monotone = false;   // acceptance region not an interval on the grid
};

/// Test inversion for coefficient `coef_index`. Every grid point reuses the
/// same seed, so the p-value curve is a deterministic function of a0.
ConfidenceInterval invert_ci(const Dataset& d, Eigen::Index coef_index,
                             const PrimitiveKind& kind, const TestConfig& cfg, GridSpec grid);

struct SimilarityDiagnostic {
    /// Mean over draws of || M_r - (tr M_r / p) I ||_F with
    /// M_r = (X'X)^-1 X' G_r X.
    double mean_deviation = 0.0;
    std::vector<double> per_draw_norms;
    /// Same distance for the across-draw mean of M_r; shrinks like
    /// 1/sqrt(draws) when the primitive satisfies the similarity condition
    /// in expectation.
    double mean_matrix_deviation = 0.0;
};

SimilarityDiagnostic similarity_diagnostic(const Dataset& d, const PrimitiveKind& kind,
                                           int num_draws, std::uint64_t seed);

}  // namespace resrand
