#pragma once

#include "resrand/engine.hpp"
#include "resrand/primitives.hpp"
#include "resrand/types.hpp"

namespace resrand {

/// A binary-treatment design to be split into clusters with equal
/// treated/control proportions.
struct BalancedDesignSpec {
    std::vector<int> treatment;  // 0/1 per unit
    int num_clusters = 0;        // J
};

/// Default tolerance for the in-sample similarity condition; the balanced
/// binary construction satisfies it exactly, so only floating-point slack
/// is needed.
inline constexpr double kSimilarityTol = 1e-8;

/// Splits units into J clusters, each with n1/J treated and n0/J control
/// units; the assignment is a uniformly random balanced split.
Clustering build_balanced_clustering(const BalancedDesignSpec& spec, Rng& rng);

struct SimilarityCheck {
    bool ok = false;
    double worst_relative_deviation = 0.0;
};

/// Checks Xc'Xc = (nc/n) lambda_c X'X per cluster, reporting the worst
/// relative Frobenius deviation from the best per-cluster scalar fit.
SimilarityCheck verify_cluster_similarity(const Dataset& d, const Clustering& c, double tol);

struct ExactTestResult {
    TestOutcome outcome;
    bool exact = false;  // similarity verified at tolerance
    double worst_relative_deviation = 0.0;
};

/// Cluster sign test enumerated over all 2^J sign patterns. The outcome is
/// flagged exact only when the similarity verification passes; otherwise
/// the test still runs, with a warning, as an asymptotic test.
ExactTestResult run_exact_test(const Dataset& d, const LinearHypothesis& h, const Clustering& c,
                               double alpha);

}  // namespace resrand
