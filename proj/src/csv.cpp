#include "resrand/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "resrand/primitives.hpp"

namespace resrand {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_cell(const std::string& cell, std::size_t line_no, const std::string& col) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw Error(ErrorCode::NonNumericCell, "non-numeric cell '" + cell + "' at line " +
                                                   std::to_string(line_no) + ", column '" +
                                                   col + "'");
    return v;
}

long long parse_int_cell(const std::string& cell, std::size_t line_no, const std::string& col) {
    const double v = parse_cell(cell, line_no, col);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        throw Error(ErrorCode::NonNumericCell, "column '" + col + "' must be integer, got '" +
                                                   cell + "' at line " +
                                                   std::to_string(line_no));
    return static_cast<long long>(r);
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& origin, bool add_intercept) {
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::EmptyInput, origin + ": no header row");
    const auto header = split_row(line);

    int y_col = -1, cluster_col = -1, rowc_col = -1, colc_col = -1, time_col = -1;
    std::vector<int> x_cols;
    for (std::size_t k = 0; k < header.size(); ++k) {
        const std::string& name = header[k];
        if (name == "y")
            y_col = static_cast<int>(k);
        else if (name == "cluster")
            cluster_col = static_cast<int>(k);
        else if (name == "rowc")
            rowc_col = static_cast<int>(k);
        else if (name == "colc")
            colc_col = static_cast<int>(k);
        else if (name == "time")
            time_col = static_cast<int>(k);
        else if (!name.empty() && name.front() == 'x')
            x_cols.push_back(static_cast<int>(k));
    }
    if (y_col < 0) throw Error(ErrorCode::MissingColumn, origin + ": required column 'y' missing");
    if (x_cols.empty() && !add_intercept)
        throw Error(ErrorCode::MissingColumn,
                    origin + ": no covariate columns (named x*) and no intercept requested");

    std::vector<double> ys;
    std::vector<std::vector<double>> xs;
    std::vector<int> cluster, rowc, colc;
    std::vector<long long> time;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto row = split_row(line);
        if (row.size() != header.size())
            throw Error(ErrorCode::RaggedRow, origin + ": line " + std::to_string(line_no) +
                                                  " has " + std::to_string(row.size()) +
                                                  " fields, expected " +
                                                  std::to_string(header.size()));
        ys.push_back(parse_cell(row[static_cast<std::size_t>(y_col)], line_no, "y"));
        std::vector<double> xrow;
        for (int c : x_cols)
            xrow.push_back(parse_cell(row[static_cast<std::size_t>(c)], line_no,
                                      header[static_cast<std::size_t>(c)]));
        xs.push_back(std::move(xrow));
        if (cluster_col >= 0)
            cluster.push_back(static_cast<int>(
                parse_int_cell(row[static_cast<std::size_t>(cluster_col)], line_no, "cluster")));
        if (rowc_col >= 0)
            rowc.push_back(static_cast<int>(
                parse_int_cell(row[static_cast<std::size_t>(rowc_col)], line_no, "rowc")));
        if (colc_col >= 0)
            colc.push_back(static_cast<int>(
                parse_int_cell(row[static_cast<std::size_t>(colc_col)], line_no, "colc")));
        if (time_col >= 0)
            time.push_back(parse_int_cell(row[static_cast<std::size_t>(time_col)], line_no,
                                          "time"));
    }
    if (ys.empty()) throw Error(ErrorCode::EmptyInput, origin + ": no data rows");

    Dataset d;
    const auto n = static_cast<Eigen::Index>(ys.size());
    const auto p = static_cast<Eigen::Index>(x_cols.size()) + (add_intercept ? 1 : 0);
    d.y.resize(n);
    d.X.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        d.y(i) = ys[static_cast<std::size_t>(i)];
        Eigen::Index at = 0;
        if (add_intercept) d.X(i, at++) = 1.0;
        for (double v : xs[static_cast<std::size_t>(i)]) d.X(i, at++) = v;
    }
    if (!cluster.empty()) d.cluster = Clustering::from_labels(cluster).assignment;
    if (!rowc.empty()) d.row_cluster = rowc;
    if (!colc.empty()) d.col_cluster = colc;
    if (!time.empty()) d.time = time;
    d.validate();
    return d;
}

Dataset ingest_csv(const std::string& path, bool add_intercept) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::EmptyInput, "cannot open '" + path + "'");
    return parse_csv(in, path, add_intercept);
}

}  // namespace resrand
