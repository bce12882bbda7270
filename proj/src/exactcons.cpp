#include "resrand/exactcons.hpp"

#include <algorithm>

namespace resrand {

Clustering build_balanced_clustering(const BalancedDesignSpec& spec, Rng& rng) {
    const int J = spec.num_clusters;
    if (J < 1) throw Error(ErrorCode::InvalidConfig, "need at least one cluster");
    std::vector<int> treated, control;
    for (std::size_t i = 0; i < spec.treatment.size(); ++i) {
        if (spec.treatment[i] == 1)
            treated.push_back(static_cast<int>(i));
        else if (spec.treatment[i] == 0)
            control.push_back(static_cast<int>(i));
        else
            throw Error(ErrorCode::InvalidConfig, "treatment vector must be 0/1");
    }
    if (treated.size() % static_cast<std::size_t>(J) != 0)
        throw Error(ErrorCode::IndivisibleDesign,
                    "J=" + std::to_string(J) + " does not divide the treated count " +
                        std::to_string(treated.size()) + " (remainder " +
                        std::to_string(treated.size() % static_cast<std::size_t>(J)) + ")");
    if (control.size() % static_cast<std::size_t>(J) != 0)
        throw Error(ErrorCode::IndivisibleDesign,
                    "J=" + std::to_string(J) + " does not divide the control count " +
                        std::to_string(control.size()) + " (remainder " +
                        std::to_string(control.size() % static_cast<std::size_t>(J)) + ")");

    auto shuffle = [&rng](std::vector<int>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform_below(i))]);
    };
    shuffle(treated);
    shuffle(control);

    std::vector<int> labels(spec.treatment.size(), -1);
    const std::size_t per_t = treated.size() / static_cast<std::size_t>(J);
    const std::size_t per_c = control.size() / static_cast<std::size_t>(J);
    for (std::size_t k = 0; k < treated.size(); ++k)
        labels[static_cast<std::size_t>(treated[k])] = static_cast<int>(k / per_t);
    for (std::size_t k = 0; k < control.size(); ++k)
        labels[static_cast<std::size_t>(control[k])] = static_cast<int>(k / per_c);
    return Clustering::from_labels(labels);
}

SimilarityCheck verify_cluster_similarity(const Dataset& d, const Clustering& c, double tol) {
    d.validate();
    if (c.covered() != static_cast<std::size_t>(d.n()))
        throw Error(ErrorCode::LayoutMismatch, "clustering must cover every datapoint");
    const Matrix gram = d.X.transpose() * d.X;
    const double gram_norm = gram.norm();
    if (!(gram_norm > 0.0)) throw Error(ErrorCode::SingularDesign, "X'X is zero");

    SimilarityCheck check;
    check.ok = true;
    const double n = static_cast<double>(d.n());
    for (const auto& members : c.members) {
        Matrix gc = Matrix::Zero(d.p(), d.p());
        for (int i : members) gc += d.X.row(i).transpose() * d.X.row(i);
        const double frac = static_cast<double>(members.size()) / n;
        // Best scalar fit of gc against frac * gram in Frobenius inner product.
        const double lambda = (gc.array() * gram.array()).sum() / (frac * gram_norm * gram_norm);
        const double dev = (gc - frac * lambda * gram).norm() / (frac * gram_norm);
        check.worst_relative_deviation = std::max(check.worst_relative_deviation, dev);
    }
    check.ok = check.worst_relative_deviation <= tol;
    return check;
}

ExactTestResult run_exact_test(const Dataset& d, const LinearHypothesis& h, const Clustering& c,
                               double alpha) {
    const SimilarityCheck check = verify_cluster_similarity(d, c, kSimilarityTol);

    TestConfig cfg;
    cfg.alpha = alpha;
    cfg.mode = Mode::Enumerated;

    ExactTestResult result;
    result.outcome = run_test(d, h, cluster_sign(c), cfg);
    result.exact = check.ok;
    result.worst_relative_deviation = check.worst_relative_deviation;
    if (!check.ok)
        result.outcome.warnings.push_back(
            "clustering fails the in-sample similarity condition (worst relative deviation " +
            std::to_string(check.worst_relative_deviation) +
            "); the test is asymptotic, not exact");
    return result;
}

}  // namespace resrand
