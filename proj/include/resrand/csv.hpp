#pragma once

#include <string>

#include "resrand/types.hpp"

namespace resrand {

/// Reads a UTF-8 CSV with a header row into a Dataset.
///
/// Column conventions: `y` is required; every column whose name starts
/// with `x` is a covariate (in file order); `cluster`, `rowc`, `colc` and
/// `time` are optional grouping columns. Cluster labels are re-normalized
/// to 0..J-1. A ones column is prepended when add_intercept is set.
Dataset ingest_csv(const std::string& path, bool add_intercept = true);

Dataset parse_csv(std::istream& in, const std::string& origin, bool add_intercept);

}  // namespace resrand
