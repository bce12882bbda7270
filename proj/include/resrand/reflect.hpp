#pragma once

#include <optional>

#include "resrand/engine.hpp"

namespace resrand {

enum class ReflectionVariant { Conditional, Unconditional };

struct ReflectionConfig {
    int num_clusters = 6;  // J
    ReflectionVariant variant = ReflectionVariant::Conditional;
};

/// Consecutive clustering anchored at the J+1 timepoints of smallest
/// absolute residual. All clusters are kept in the clustering; `achieved`
/// counts the effective ones, i.e. clusters containing at least one
/// non-anchor point. Runs of adjacent anchors produce anchor-only clusters
/// that carry no signal, which is how a strongly autocorrelated series
/// drives `achieved` toward zero.
struct ReflectionClustering {
    Clustering clustering;     // label -1 outside [t0, tJ]
    std::vector<int> anchors;  // t0 < ... < tJ (0-based indices)
    int achieved = 0;
};

ReflectionClustering build_reflection_clustering(const Vector& residuals, int num_clusters);

struct ReflectionResult {
    bool decided = false;
    int achieved = 0;
    ReflectionVariant variant = ReflectionVariant::Conditional;
    /// Present when the sign test ran, i.e. when the clustering achieved
    /// the target cluster count.
    std::optional<TestOutcome> outcome;
    /// Final decision. Meaningless for the conditional variant when
    /// undecided; the unconditional variant maps that case to
    /// does-not-reject.
    Decision decision;
};

ReflectionResult run_reflection_test(const Dataset& d, const LinearHypothesis& h,
                                     const ReflectionConfig& rcfg, const TestConfig& cfg);

}  // namespace resrand
