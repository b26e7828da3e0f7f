#include "msdg/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace msdg {

namespace {

std::vector<std::string> split_row(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == name) return i;
  throw std::runtime_error("input header has no column named '" + name + "'");
}

// Mean of the marks per type; plain accumulation followed by a compensated
// pass keeps the residual mean tiny after demeaning.
std::vector<double> per_type_mark_means(const MarkedPointPattern& pattern) {
  std::vector<double> sum(pattern.types.size(), 0.0);
  std::vector<double> comp(pattern.types.size(), 0.0);
  std::vector<std::size_t> n(pattern.types.size(), 0);
  for (const auto& pt : pattern.points) {
    double y = pt.mark - comp[pt.type_id];
    double t = sum[pt.type_id] + y;
    comp[pt.type_id] = (t - sum[pt.type_id]) - y;
    sum[pt.type_id] = t;
    ++n[pt.type_id];
  }
  std::vector<double> mean(pattern.types.size(), 0.0);
  for (std::size_t i = 0; i < mean.size(); ++i)
    if (n[i] > 0) mean[i] = sum[i] / static_cast<double>(n[i]);
  return mean;
}

}  // namespace

MarkedPointPattern load_pattern(std::istream& source, const LoadOptions& options,
                                LoadDiagnostics* diagnostics) {
  std::string line;
  if (!std::getline(source, line)) throw std::runtime_error("input is empty (no header row)");
  const auto header = split_row(line, options.delimiter);
  const std::size_t cx = find_column(header, options.columns.x);
  const std::size_t cy = find_column(header, options.columns.y);
  const std::size_t ct = find_column(header, options.columns.type);
  const std::size_t cm = find_column(header, options.columns.mark);

  MarkedPointPattern pattern;
  std::unordered_map<std::string, int> type_ids;
  std::size_t row = 0;
  while (std::getline(source, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_row(line, options.delimiter);
    const std::size_t needed = std::max(std::max(cx, cy), std::max(ct, cm));
    if (fields.size() <= needed)
      throw std::runtime_error("row " + std::to_string(row) + ": expected at least " +
                               std::to_string(needed + 1) + " fields, got " +
                               std::to_string(fields.size()));
    MarkedPoint pt;
    if (!parse_double(fields[cx], pt.x))
      throw std::runtime_error("row " + std::to_string(row) + ": x value '" + trim(fields[cx]) +
                               "' is not a finite number");
    if (!parse_double(fields[cy], pt.y))
      throw std::runtime_error("row " + std::to_string(row) + ": y value '" + trim(fields[cy]) +
                               "' is not a finite number");
    if (!parse_double(fields[cm], pt.mark))
      throw std::runtime_error("row " + std::to_string(row) + ": mark value '" + trim(fields[cm]) +
                               "' is not a finite number");
    const std::string label = trim(fields[ct]);
    if (label.empty())
      throw std::runtime_error("row " + std::to_string(row) + ": empty type label");
    auto [it, inserted] = type_ids.try_emplace(label, static_cast<int>(pattern.types.size()));
    if (inserted) pattern.types.push_back(TypeInfo{label, 0, 0.0});
    pt.type_id = it->second;
    pattern.points.push_back(pt);
  }
  if (pattern.points.empty()) throw std::runtime_error("input contains no data rows");

  if (options.window) {
    pattern.window = *options.window;
    if (!(pattern.window.width() > 0.0) || !(pattern.window.height() > 0.0))
      throw std::runtime_error("configured window has non-positive side length");
    for (std::size_t i = 0; i < pattern.points.size(); ++i) {
      const auto& pt = pattern.points[i];
      if (!pattern.window.contains(pt.x, pt.y))
        throw std::runtime_error("row " + std::to_string(i + 1) +
                                 ": point lies outside the configured window");
    }
  } else {
    Window w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& pt : pattern.points) {
      w.x_min = std::min(w.x_min, pt.x);
      w.x_max = std::max(w.x_max, pt.x);
      w.y_min = std::min(w.y_min, pt.y);
      w.y_max = std::max(w.y_max, pt.y);
    }
    if (!(w.width() > 0.0) || !(w.height() > 0.0))
      throw std::runtime_error("bounding box of the data has zero area; supply a window");
    pattern.window = w;
  }

  for (const auto& pt : pattern.points) ++pattern.types[pt.type_id].count;
  const auto means = per_type_mark_means(pattern);
  for (std::size_t i = 0; i < pattern.types.size(); ++i) pattern.types[i].mark_mean = means[i];

  if (diagnostics) {
    std::set<std::pair<double, double>> seen;
    std::size_t dup = 0;
    for (const auto& pt : pattern.points)
      if (!seen.insert({pt.x, pt.y}).second) ++dup;
    diagnostics->duplicate_coordinates = dup;
    if (dup > 0)
      diagnostics->warnings.push_back(std::to_string(dup) +
                                      " duplicate coordinate(s) found; keeping all points");
  }
  return pattern;
}

MarkedPointPattern load_pattern_file(const std::string& path, const LoadOptions& options,
                                     LoadDiagnostics* diagnostics) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  return load_pattern(in, options, diagnostics);
}

MarkedPointPattern rescale_to_unit_square(const MarkedPointPattern& pattern) {
  if (!(pattern.window.width() > 0.0) || !(pattern.window.height() > 0.0))
    throw std::runtime_error("window has non-positive side length");
  MarkedPointPattern out = pattern;
  const double lx = pattern.window.width();
  const double ly = pattern.window.height();
  for (auto& pt : out.points) {
    pt.x = (pt.x - pattern.window.x_min) / lx;
    pt.y = (pt.y - pattern.window.y_min) / ly;
  }
  out.window = Window::unit_square();
  out.on_unit_square = true;
  return out;
}

MarkedPointPattern demean_marks(const MarkedPointPattern& pattern) {
  for (const auto& info : pattern.types)
    if (info.count == 0)
      throw std::runtime_error("type '" + info.name + "' has no points; cannot demean");
  MarkedPointPattern out = pattern;
  const auto means = per_type_mark_means(pattern);
  for (auto& pt : out.points) pt.mark -= means[pt.type_id];
  out.marks_demeaned = true;
  return out;
}

FilterResult filter_min_count(const MarkedPointPattern& pattern, std::size_t min_n) {
  if (min_n < 1) throw std::runtime_error("min count must be at least 1");
  FilterResult result;
  std::vector<int> remap(pattern.types.size(), -1);
  for (std::size_t i = 0; i < pattern.types.size(); ++i) {
    if (pattern.types[i].count >= min_n) {
      remap[i] = static_cast<int>(result.pattern.types.size());
      result.pattern.types.push_back(pattern.types[i]);
    } else {
      result.dropped.push_back(pattern.types[i].name);
    }
  }
  if (result.pattern.types.empty())
    throw std::runtime_error("no type has at least " + std::to_string(min_n) +
                             " points; nothing left to analyse");
  for (const auto& pt : pattern.points) {
    if (remap[pt.type_id] < 0) continue;
    MarkedPoint q = pt;
    q.type_id = remap[pt.type_id];
    result.pattern.points.push_back(q);
  }
  result.pattern.window = pattern.window;
  result.pattern.on_unit_square = pattern.on_unit_square;
  result.pattern.marks_demeaned = pattern.marks_demeaned;
  return result;
}

void validate_pattern(const MarkedPointPattern& pattern) {
  if (!(pattern.window.width() > 0.0) || !(pattern.window.height() > 0.0))
    throw std::runtime_error("pattern window has non-positive side length");
  std::vector<std::size_t> counts(pattern.types.size(), 0);
  std::vector<double> abs_sum(pattern.types.size(), 0.0);
  for (const auto& pt : pattern.points) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || !std::isfinite(pt.mark))
      throw std::runtime_error("pattern contains a non-finite coordinate or mark");
    if (pt.type_id < 0 || static_cast<std::size_t>(pt.type_id) >= pattern.types.size())
      throw std::runtime_error("pattern contains an unregistered type id");
    if (!pattern.window.contains(pt.x, pt.y))
      throw std::runtime_error("pattern contains a point outside its window");
    ++counts[pt.type_id];
    abs_sum[pt.type_id] += std::abs(pt.mark);
  }
  for (std::size_t i = 0; i < pattern.types.size(); ++i)
    if (counts[i] != pattern.types[i].count)
      throw std::runtime_error("registry count for type '" + pattern.types[i].name +
                               "' does not match the points");
  if (pattern.marks_demeaned) {
    const auto means = per_type_mark_means(pattern);
    for (std::size_t i = 0; i < pattern.types.size(); ++i) {
      const double scale = counts[i] > 0 ? abs_sum[i] / static_cast<double>(counts[i]) : 0.0;
      if (std::abs(means[i]) > 1e-12 * std::max(scale, 1e-300) && scale > 0.0)
        throw std::runtime_error("marks of type '" + pattern.types[i].name +
                                 "' are not centred although the pattern is flagged demeaned");
    }
  }
}

void write_pattern_csv(const MarkedPointPattern& pattern, std::ostream& out, char delimiter) {
  char buf[64];
  out << "x" << delimiter << "y" << delimiter << "type" << delimiter << "mark\n";
  for (const auto& pt : pattern.points) {
    std::snprintf(buf, sizeof(buf), "%.17g", pt.x);
    out << buf << delimiter;
    std::snprintf(buf, sizeof(buf), "%.17g", pt.y);
    out << buf << delimiter;
    out << pattern.types[pt.type_id].name << delimiter;
    std::snprintf(buf, sizeof(buf), "%.17g", pt.mark);
    out << buf << "\n";
  }
}

}  // namespace msdg
