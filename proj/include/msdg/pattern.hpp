#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace msdg {

struct MarkedPoint {
  double x = 0.0;
  double y = 0.0;
  int type_id = 0;
  double mark = 0.0;
};

/// Rectangular observation window.
struct Window {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  static Window unit_square() { return {0.0, 1.0, 0.0, 1.0}; }
};

struct TypeInfo {
  std::string name;
  std::size_t count = 0;
  /// Mean of the marks at construction time; demean_marks centres the marks
  /// but keeps this record.
  double mark_mean = 0.0;
};

/// A multi-type point pattern with one real-valued mark per point.
/// Values are immutable after construction; every operation below returns a
/// new pattern.
struct MarkedPointPattern {
  std::vector<MarkedPoint> points;
  Window window;
  std::vector<TypeInfo> types;  ///< registry, indexed by type_id
  bool on_unit_square = false;
  bool marks_demeaned = false;

  std::size_t dim() const { return types.size(); }
};

struct ColumnSchema {
  std::string x = "x";
  std::string y = "y";
  std::string type = "type";
  std::string mark = "mark";
};

struct LoadOptions {
  ColumnSchema columns;
  char delimiter = ',';
  /// When absent the window is the tight bounding box of the data.
  std::optional<Window> window;
};

struct LoadDiagnostics {
  std::vector<std::string> warnings;
  std::size_t duplicate_coordinates = 0;
};

/// Parse a delimited text stream with a header row. Rows with missing or
/// non-numeric fields are rejected with the 1-based data row number in the
/// message. Type registry order is first appearance.
MarkedPointPattern load_pattern(std::istream& source, const LoadOptions& options = {},
                                LoadDiagnostics* diagnostics = nullptr);

MarkedPointPattern load_pattern_file(const std::string& path, const LoadOptions& options = {},
                                     LoadDiagnostics* diagnostics = nullptr);

/// Affine map of all coordinates onto [0,1]^2 using the shared window.
MarkedPointPattern rescale_to_unit_square(const MarkedPointPattern& pattern);

/// Centre the marks of each type on zero. The registry keeps the pre-existing
/// mark_mean record, so the original means survive.
MarkedPointPattern demean_marks(const MarkedPointPattern& pattern);

struct FilterResult {
  MarkedPointPattern pattern;
  std::vector<std::string> dropped;  ///< names of removed types
};

/// Remove types with fewer than min_n points and reindex the registry densely.
FilterResult filter_min_count(const MarkedPointPattern& pattern, std::size_t min_n);

/// Check the structural invariants (points in window, counts consistent,
/// finite values, demeaned marks centred). Throws on violation.
void validate_pattern(const MarkedPointPattern& pattern);

/// Write in the same delimited format load_pattern reads (header x,y,type,mark).
void write_pattern_csv(const MarkedPointPattern& pattern, std::ostream& out,
                       char delimiter = ',');

}  // namespace msdg
