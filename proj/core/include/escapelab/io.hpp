#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "escapelab/measure.hpp"
#include "escapelab/survival_curve.hpp"

namespace escapelab {

// 17 significant digits: enough for exact double round-trips.
std::string format_double(double v);

// Write-to-temp-then-rename in the target directory, so readers never see a
// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Survival CSV: header `n,survivors,total,p_hat`, LF line endings.
std::string survival_to_csv(const SurvivalCurve& curve);
SurvivalCurve survival_from_csv(const std::string& text);

// Generic two-or-more-column numeric CSV with a header row; returns the
// first column as n and the named column (default: second) as values.
struct Series {
  std::vector<std::int64_t> n;
  std::vector<double> value;
};
Series series_from_csv(const std::string& text, const std::string& value_column = "");

// name_0,name_1,... columns over a shared integer first column.
std::string columns_to_csv(const std::vector<std::string>& names,
                           const std::vector<std::int64_t>& n,
                           const std::vector<std::vector<double>>& columns);

std::string density_to_csv(const GridDensity& density);   // cell,value
std::string ulam_to_csv(const UlamOperator& op);          // row,col,value triplets

}  // namespace escapelab
