#include "resrand/types.hpp"

#include <algorithm>

namespace resrand {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::DegenerateConstraint: return "DegenerateConstraint";
        case ErrorCode::LayoutMismatch: return "LayoutMismatch";
        case ErrorCode::GroupTooLarge: return "GroupTooLarge";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::IndivisibleDesign: return "IndivisibleDesign";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

namespace {

void check_labels(const std::vector<int>& labels, Eigen::Index n, const char* name) {
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw Error(ErrorCode::LayoutMismatch,
                    std::string(name) + " labels have length " + std::to_string(labels.size()) +
                        ", expected " + std::to_string(n));
    if (labels.empty()) return;
    const int max_label = *std::max_element(labels.begin(), labels.end());
    std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
    for (int c : labels) {
        if (c < 0)
            throw Error(ErrorCode::LayoutMismatch, std::string(name) + " labels must be >= 0");
        seen[static_cast<std::size_t>(c)] = true;
    }
    for (std::size_t c = 0; c < seen.size(); ++c)
        if (!seen[c])
            throw Error(ErrorCode::LayoutMismatch, std::string(name) + " label " +
                                                       std::to_string(c) + " is empty; labels "
                                                       "must be contiguous from 0");
}

}  // namespace

void Dataset::validate() const {
    const Eigen::Index nn = n();
    if (nn == 0) throw Error(ErrorCode::EmptyInput, "dataset has no rows");
    if (X.rows() != nn)
        throw Error(ErrorCode::LayoutMismatch, "X has " + std::to_string(X.rows()) +
                                                   " rows but y has " + std::to_string(nn));
    if (X.cols() < 1) throw Error(ErrorCode::EmptyInput, "X has no columns");
    if (cluster) check_labels(*cluster, nn, "cluster");
    // Row/column labels are normalized by layout_from_labels; only the
    // lengths are structural here.
    if (row_cluster && static_cast<Eigen::Index>(row_cluster->size()) != nn)
        throw Error(ErrorCode::LayoutMismatch, "row_cluster labels have the wrong length");
    if (col_cluster && static_cast<Eigen::Index>(col_cluster->size()) != nn)
        throw Error(ErrorCode::LayoutMismatch, "col_cluster labels have the wrong length");
    if (row_cluster.has_value() != col_cluster.has_value())
        throw Error(ErrorCode::LayoutMismatch,
                    "row_cluster and col_cluster must be given together");
    if (time) {
        if (static_cast<Eigen::Index>(time->size()) != nn)
            throw Error(ErrorCode::LayoutMismatch, "time index length mismatch");
        for (std::size_t t = 1; t < time->size(); ++t)
            if ((*time)[t] <= (*time)[t - 1])
                throw Error(ErrorCode::LayoutMismatch,
                            "time index must be strictly increasing");
    }
}

}  // namespace resrand
