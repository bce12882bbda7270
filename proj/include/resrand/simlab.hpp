#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "resrand/engine.hpp"
#include "resrand/highdim.hpp"
#include "resrand/reflect.hpp"
#include "resrand/types.hpp"

namespace resrand::sim {

enum class XDist { Normal, LogNormal };
enum class ErrDist { Normal, T3, Mixture, Cauchy };

/// One-way clustered design: x_i = x_c + x_ic and eps_i = eps_c + eps_ic,
/// optionally scaled by 3|x_i|.
struct OneWayCluster {
    int num_clusters = 10;
    int cluster_size = 30;
    XDist x_dist = XDist::Normal;
    bool random_effect = true;
    bool heteroskedastic = false;
    double beta0 = 0.0;  // 1 in the heteroskedastic setting
    double beta1 = 0.0;
};

/// Two-sample mean comparison with unequal variances, as a regression on
/// an intercept and a binary treatment column.
struct BehrensFisher {
    int n = 30;
    int n1 = 3;
    double sigma0 = 1.0;
    double sigma1 = 1.0;
    ErrDist err = ErrDist::Normal;
    double beta0 = 0.0;
    double beta1 = 0.0;
};

/// Dyads over the strict lower triangle of an m-node set, with additive
/// row/column error components.
struct Dyadic {
    int m = 10;
    XDist x_dist = XDist::Normal;
    ErrDist eps_dist = ErrDist::Normal;
    double beta0 = 1.0;
    double beta1 = 1.0;
};

/// AR(1) errors eps_t = rho eps_{t-1} + u_t over a time index.
struct AR1 {
    int n = 100;
    double rho = 0.8;
    int x_model = 1;  // 1: N(0,1), 2: LN(0,1), 3: AR + normal, 4: AR + lognormal
    ErrDist u_dist = ErrDist::Normal;
};

enum class SignalKind { UniformM2P2, Uniform0P2, Uniform0P4, Const1, Const2, Const10 };

/// Rows drawn with Toeplitz 0.9^|i-j| covariance, s0 active coefficients.
struct HighDim {
    int n = 60;
    int p = 120;
    int s0 = 3;
    SignalKind signal = SignalKind::Const10;
    ErrDist err = ErrDist::Normal;
};

using ScenarioSpec = std::variant<OneWayCluster, BehrensFisher, Dyadic, AR1, HighDim>;

std::string scenario_name(const ScenarioSpec& spec);
/// Human-readable note on the scale the original study ran at.
std::string scenario_paper_scale(const ScenarioSpec& spec);
std::string scenario_run_scale(const ScenarioSpec& spec);

/// What the harness knows and the tests never see.
struct Truth {
    Vector beta;
    Vector errors;
    std::vector<int> active;  // high-dimensional active set
};

struct Generated {
    Dataset data;
    Truth truth;
};

Generated generate(const ScenarioSpec& spec, Rng& rng);

enum class MethodDecision { Accept, Reject, Undecided };

/// A registered test: sees only the dataset and a seed.
struct Method {
    std::string label;
    std::function<MethodDecision(const Dataset&, std::uint64_t seed)> run;
};

/// Standard method constructors. Randomized boundary decisions are
/// resolved to binary by a Bernoulli draw on a dedicated substream.
Method wald_method(LinearHypothesis h, double alpha);
Method randomization_method(const std::string& primitive, LinearHypothesis h, TestConfig cfg);
Method exact_bf_method(LinearHypothesis h, int num_clusters, double alpha);
Method reflection_method(ReflectionVariant variant, LinearHypothesis h, ReflectionConfig rcfg,
                         TestConfig cfg);

struct MethodReport {
    std::string label;
    int rejections = 0;
    int decided = 0;    // replications with a definite decision
    int completed = 0;  // replications that ran without error
    int excluded = 0;   // replications that threw
    double rejection_rate = 0.0;       // rejections / decided
    double mc_standard_error = 0.0;    // sqrt(r(1-r)/decided)
    double decided_fraction = 1.0;     // decided / completed
};

struct MonteCarloReport {
    std::string scenario;
    std::string paper_scale;
    std::string run_scale;
    int replications = 0;
    std::uint64_t seed = 0;
    std::vector<MethodReport> methods;
    double wall_seconds = 0.0;
};

MonteCarloReport run_monte_carlo(const ScenarioSpec& spec, const std::vector<Method>& methods,
                                 int replications, std::uint64_t seed, int threads = 1);

struct FamilyStudyConfig {
    PenaltyConfig penalties;
    std::string primitive = "sign";
    TestConfig test;
};

/// Monte Carlo over the high-dimensional family test: the `family-fwer`
/// row reports the share of replications with any false rejection, and
/// `family-power` the share of active coefficients rejected (present when
/// s0 > 0). The Bonferroni threshold alpha/p needs p-value resolution
/// around alpha/(2p), so test.draws should be at least ~2p/alpha.
MonteCarloReport run_family_monte_carlo(const HighDim& spec, const FamilyStudyConfig& fc,
                                        int replications, std::uint64_t seed, int threads = 1);

}  // namespace resrand::sim
