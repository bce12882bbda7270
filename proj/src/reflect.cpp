#include "resrand/reflect.hpp"

#include <algorithm>
#include <numeric>

namespace resrand {

ReflectionClustering build_reflection_clustering(const Vector& residuals, int num_clusters) {
    const int J = num_clusters;
    const auto n = static_cast<int>(residuals.size());
    if (J < 2) throw Error(ErrorCode::InvalidConfig, "reflection clustering needs J >= 2");
    if (J + 1 > n)
        throw Error(ErrorCode::InvalidConfig,
                    "reflection clustering needs J + 1 <= n (J=" + std::to_string(J) +
                        ", n=" + std::to_string(n) + ")");

    // The J+1 smallest |residuals|; ties broken by earliest time.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(residuals(a)) < std::abs(residuals(b));
    });
    ReflectionClustering rc;
    rc.anchors.assign(order.begin(), order.begin() + J + 1);
    std::sort(rc.anchors.begin(), rc.anchors.end());

    // Cluster 0 spans [t0, t1]; cluster k spans [t_k + 1, t_{k+1}].
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (int k = 0; k < J; ++k) {
        const int lo = k == 0 ? rc.anchors[0] : rc.anchors[static_cast<std::size_t>(k)] + 1;
        const int hi = rc.anchors[static_cast<std::size_t>(k) + 1];
        for (int t = lo; t <= hi; ++t) labels[static_cast<std::size_t>(t)] = k;
    }
    rc.clustering = Clustering::from_labels(labels);

    std::vector<bool> is_anchor(static_cast<std::size_t>(n), false);
    for (int a : rc.anchors) is_anchor[static_cast<std::size_t>(a)] = true;
    for (const auto& members : rc.clustering.members) {
        const bool effective = std::any_of(members.begin(), members.end(), [&](int i) {
            return !is_anchor[static_cast<std::size_t>(i)];
        });
        if (effective) ++rc.achieved;
    }
    return rc;
}

ReflectionResult run_reflection_test(const Dataset& d, const LinearHypothesis& h,
                                     const ReflectionConfig& rcfg, const TestConfig& cfg) {
    d.validate();
    if (!d.time)
        throw Error(ErrorCode::LayoutMismatch, "the reflection test needs a time index");

    const FitResult fit = fit_ols(d);
    const ConstrainedFit cf = fit_constrained_ols(d, h, fit);
    const ReflectionClustering rc =
        build_reflection_clustering(cf.restricted_residuals, rcfg.num_clusters);

    ReflectionResult result;
    result.achieved = rc.achieved;
    result.variant = rcfg.variant;
    result.decided = rc.achieved >= rcfg.num_clusters;

    if (!result.decided) {
        result.decision = {Decision::Kind::Accept, 0.0};
        return result;
    }

    const StatFunctional f = make_stat_functional(d, h, fit);
    const double t_obs = test_statistic(d, fit, h);
    result.outcome =
        run_core(f, cf.restricted_residuals, t_obs, cluster_sign(rc.clustering), cfg);
    result.decision = result.outcome->decision;
    return result;
}

}  // namespace resrand
