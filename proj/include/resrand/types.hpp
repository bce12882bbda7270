#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace resrand {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
    SingularDesign,
    DegenerateConstraint,
    LayoutMismatch,
    GroupTooLarge,
    EmptyInput,
    IndivisibleDesign,
    NoConvergence,
    MissingColumn,
    NonNumericCell,
    RaggedRow,
    InvalidConfig,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

    /// True for malformed-input errors (CLI exit 2), false for numerical
    /// failures (CLI exit 3).
    bool is_input_error() const {
        switch (code_) {
            case ErrorCode::MissingColumn:
            case ErrorCode::NonNumericCell:
            case ErrorCode::RaggedRow:
            case ErrorCode::EmptyInput:
            case ErrorCode::InvalidConfig:
                return true;
            default:
                return false;
        }
    }

  private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

/// A regression dataset: response, design matrix, and the optional
/// grouping structure that the inferential primitives act on.
/// The library never adds an intercept column; callers (and the CLI)
/// decide what the columns of X are.
struct Dataset {
    Vector y;
    Matrix X;
    std::optional<std::vector<int>> cluster;       // one-way labels, 0..J-1
    std::optional<std::vector<int>> row_cluster;   // two-way row labels
    std::optional<std::vector<int>> col_cluster;   // two-way column labels
    std::optional<std::vector<long long>> time;    // strictly increasing

    Eigen::Index n() const { return y.size(); }
    Eigen::Index p() const { return X.cols(); }

    /// Structural checks (lengths, label normalization, time ordering).
    /// The n > p and invertibility requirements belong to the fitting
    /// routines, since the high-dimensional path relaxes them.
    void validate() const;
};

/// H0: a'beta = a0.
struct LinearHypothesis {
    Vector a;
    double a0 = 0.0;

    void validate(Eigen::Index p) const {
        if (a.size() != p)
            throw Error(ErrorCode::InvalidConfig, "hypothesis vector a has length " +
                                                      std::to_string(a.size()) + ", expected " +
                                                      std::to_string(p));
        if (a.lpNorm<Eigen::Infinity>() == 0.0)
            throw Error(ErrorCode::InvalidConfig, "hypothesis vector a must be nonzero");
    }

    /// Unit-vector hypothesis e_j' beta = a0.
    static LinearHypothesis coefficient(Eigen::Index p, Eigen::Index j, double a0) {
        LinearHypothesis h;
        h.a = Vector::Zero(p);
        h.a(j) = 1.0;
        h.a0 = a0;
        return h;
    }
};

/// Unit-free scale used to normalize numerical tolerances:
/// max(1, |X|_max, |y|_max).
inline double problem_scale(const Matrix& X, const Vector& y) {
    double s = 1.0;
    if (X.size() > 0) s = std::max(s, X.cwiseAbs().maxCoeff());
    if (y.size() > 0) s = std::max(s, y.cwiseAbs().maxCoeff());
    return s;
}

}  // namespace resrand
