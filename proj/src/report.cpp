#include "onsum/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ostream>
#include <stdexcept>

namespace onsum {

std::string format_double(double v) {
  char buf[40];
  // try successively longer forms, keep the first that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// RFC 4180 quoting, applied only when the cell needs it
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  q += '"';
  return q;
}

std::string cell_to_csv(const nlohmann::json& c) {
  if (c.is_string()) return csv_escape(c.get<std::string>());
  if (c.is_number_float()) return format_double(c.get<double>());
  return c.dump();
}

}  // namespace

void write_csv(std::ostream& out, const RunManifest& m, const ReportTable& t) {
  out << "# tool=" << m.tool << "\n";
  out << "# version=" << m.version << "\n";
  for (const auto& [k, v] : m.config) out << "# config." << k << "=" << v << "\n";
  for (const auto& [k, v] : m.thresholds)
    out << "# threshold." << k << "=" << format_double(v) << "\n";
  for (size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << t.columns[c];
  out << "\n";
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << cell_to_csv(row[c]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const RunManifest& m, const ReportTable& t) {
  nlohmann::json j;
  j["manifest"]["tool"] = m.tool;
  j["manifest"]["version"] = m.version;
  j["manifest"]["config"] = m.config;
  j["manifest"]["thresholds"] = m.thresholds;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  out << j.dump(2) << "\n";
}

void write_report(std::ostream& out, const std::string& format, const RunManifest& m,
                  const ReportTable& t) {
  if (format == "csv")
    write_csv(out, m, t);
  else if (format == "json")
    write_json(out, m, t);
  else
    throw std::invalid_argument("write_report: unknown format '" + format + "'");
}

}  // namespace onsum
