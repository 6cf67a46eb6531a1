#include "escapelab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace escapelab {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_file_atomic: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write_file_atomic: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string survival_to_csv(const SurvivalCurve& curve) {
  std::string out = "n,survivors,total,p_hat\n";
  for (std::size_t j = 0; j < curve.size(); ++j) {
    out += std::to_string(curve.times()[j]);
    out += ',';
    out += std::to_string(curve.survivors()[j]);
    out += ',';
    out += std::to_string(curve.total());
    out += ',';
    out += format_double(curve.p_hat(j));
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

SurvivalCurve survival_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() < 4 ||
      split_csv_line(line)[0] != "n")
    throw std::runtime_error("survival_from_csv: missing n,survivors,total,p_hat header");
  std::vector<std::int64_t> times, survivors;
  std::int64_t total = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < 4) throw std::runtime_error("survival_from_csv: bad row: " + line);
    times.push_back(std::stoll(f[0]));
    survivors.push_back(std::stoll(f[1]));
    total = std::stoll(f[2]);
  }
  if (times.empty()) throw std::runtime_error("survival_from_csv: no rows");
  const std::int64_t censored = survivors.back();  // horizon survivors
  return SurvivalCurve(std::move(times), std::move(survivors), total, censored);
}

Series series_from_csv(const std::string& text, const std::string& value_column) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("series_from_csv: empty input");
  const auto header = split_csv_line(line);
  std::size_t col = 1;
  if (!value_column.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == value_column) {
        col = i;
        found = true;
        break;
      }
    if (!found) throw std::runtime_error("series_from_csv: no column named " + value_column);
  }
  if (header.size() < 2 || col >= header.size())
    throw std::runtime_error("series_from_csv: need at least two columns");
  Series s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() <= col) throw std::runtime_error("series_from_csv: bad row: " + line);
    s.n.push_back(std::stoll(f[0]));
    s.value.push_back(std::stod(f[col]));
  }
  return s;
}

std::string columns_to_csv(const std::vector<std::string>& names,
                           const std::vector<std::int64_t>& n,
                           const std::vector<std::vector<double>>& columns) {
  std::string out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    out += names[c];
    out += (c + 1 < names.size()) ? ',' : '\n';
  }
  for (std::size_t i = 0; i < n.size(); ++i) {
    out += std::to_string(n[i]);
    for (const auto& column : columns) {
      out += ',';
      out += format_double(column[i]);
    }
    out += '\n';
  }
  return out;
}

std::string density_to_csv(const GridDensity& density) {
  std::string out = "cell,weight\n";
  for (std::size_t i = 0; i < density.weights.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(density.weights[i]);
    out += '\n';
  }
  return out;
}

std::string ulam_to_csv(const UlamOperator& op) {
  std::string out = "row,col,value\n";
  for (std::int64_t i = 0; i < op.n_cells; ++i) {
    for (std::int64_t k = op.row_ptr[static_cast<std::size_t>(i)];
         k < op.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      out += std::to_string(i);
      out += ',';
      out += std::to_string(op.col[static_cast<std::size_t>(k)]);
      out += ',';
      out += format_double(op.val[static_cast<std::size_t>(k)]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace escapelab
