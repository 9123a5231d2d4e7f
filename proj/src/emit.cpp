#include "envforge/emit.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "envforge/errors.hpp"

namespace envforge {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const std::vector<double>& row : table.rows) {
    if (row.size() != table.columns.size())
      throw Error("table row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += fmt17(row[c]);
    }
    out += '\n';
  }
  return out;
}

Json table_json(const Table& table) {
  Json out;
  out["columns"] = table.columns;
  Json rows = Json::array();
  for (const std::vector<double>& row : table.rows) {
    if (row.size() != table.columns.size())
      throw Error("table row width does not match the header");
    rows.push_back(row);
  }
  out["rows"] = std::move(rows);
  return out;
}

namespace {

void dump_value(const Json& v, std::string& out, int indent, int depth) {
  std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (v.type()) {
    case Json::value_t::null:
      out += "null";
      return;
    case Json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(v.get<long long>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(v.get<unsigned long long>());
      return;
    case Json::value_t::number_float:
      out += fmt17(v.get<double>());
      return;
    case Json::value_t::string:
      out += nlohmann::json(v.get<std::string>()).dump();
      return;
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line; anything nested is spread.
      bool flat = true;
      for (const Json& e : v) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const Json& e : v) {
        if (!first) out += ',';
        if (!flat) {
          out += '\n';
          out += pad;
        }
        first = false;
        dump_value(e, out, indent, depth + 1);
      }
      if (!flat) {
        out += '\n';
        out += close_pad;
      }
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, val] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += '\n';
        out += pad;
        out += nlohmann::json(key).dump();
        out += ": ";
        dump_value(val, out, indent, depth + 1);
      }
      out += '\n';
      out += close_pad;
      out += '}';
      return;
    }
    default:
      throw Error("unserializable value in a run document");
  }
}

}  // namespace

std::string dump_json(const Json& doc, int indent) {
  std::string out;
  dump_value(doc, out, indent, 0);
  out += '\n';
  return out;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table out;
  if (!std::getline(in, line)) throw Error("empty csv document");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) out.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    while (std::getline(fields, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw Error("non-numeric csv cell: " + cell);
      row.push_back(v);
    }
    if (row.size() != out.columns.size()) throw Error("ragged csv row: " + line);
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

std::string fmt_svg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

}  // namespace

std::string svg_plot(const std::vector<SvgPath>& paths) {
  double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
  bool first = true;
  for (const SvgPath& p : paths) {
    for (const Vec& q : p.points) {
      if (q.dim != 2) throw Error("svg paths take 2d points");
      lo_x = first ? q[0] : std::min(lo_x, q[0]);
      hi_x = first ? q[0] : std::max(hi_x, q[0]);
      lo_y = first ? q[1] : std::min(lo_y, q[1]);
      hi_y = first ? q[1] : std::max(hi_y, q[1]);
      first = false;
    }
  }
  double margin = 0.05 * std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  lo_x -= margin;
  hi_x += margin;
  lo_y -= margin;
  hi_y += margin;
  double w = hi_x - lo_x;
  double h = hi_y - lo_y;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"" +
                    fmt_svg(720.0 * h / w) + "\" viewBox=\"" + fmt_svg(lo_x) + " " +
                    fmt_svg(-hi_y) + " " + fmt_svg(w) + " " + fmt_svg(h) + "\">\n";
  out += "<rect x=\"" + fmt_svg(lo_x) + "\" y=\"" + fmt_svg(-hi_y) + "\" width=\"" +
         fmt_svg(w) + "\" height=\"" + fmt_svg(h) + "\" fill=\"white\"/>\n";
  for (const SvgPath& p : paths) {
    out += "<polyline fill=\"none\" stroke=\"" + p.stroke + "\" stroke-opacity=\"" +
           fmt_svg(p.opacity) + "\" stroke-width=\"" + fmt_svg(p.width) +
           "\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      if (i) out += ' ';
      out += fmt_svg(p.points[i][0]);
      out += ',';
      out += fmt_svg(-p.points[i][1]);
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace envforge
