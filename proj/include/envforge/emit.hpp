#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "envforge/vec.hpp"

namespace envforge {

using Json = nlohmann::ordered_json;

/// Shortest text that still round-trips the double: %.17g.
std::string fmt17(double v);

/// Long-format numeric table: one row per sample, one column per quantity.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Header row, comma separators, LF line endings, %.17g floats.
std::string to_csv(const Table& table);

/// {"columns": [...], "rows": [[...], ...]} fragment for run documents.
Json table_json(const Table& table);

/// Serializer with %.17g floats and LF endings, so emissions are byte-stable
/// across platforms (the library dump is shortest-round-trip, not fixed).
std::string dump_json(const Json& doc, int indent = 2);

/// Parses a CSV produced by to_csv back into a table. Throws Error on a
/// ragged or empty body.
Table parse_csv(const std::string& text);

struct SvgPath {
  std::vector<Vec> points;  // 2D; higher-dimensional data is projected first
  std::string stroke = "#1a6feb";
  double opacity = 1.0;
  double width = 1.5;
};

/// Standalone SVG: viewBox fitted to the data bounds with a 5% margin,
/// y axis pointing up, strokes in screen units. No renderer dependencies.
std::string svg_plot(const std::vector<SvgPath>& paths);

}  // namespace envforge
