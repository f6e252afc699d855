#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace onsum {

/// Everything a report needs to be reproducible: tool id, the configuration
/// that produced it, and the threshold values consulted.  Deliberately free of
/// timestamps and durations so identical runs serialize identically; wall
/// times go to stderr.
struct RunManifest {
  std::string tool = "onsum";
  std::string version = "0.1.0";
  std::map<std::string, std::string> config;
  std::map<std::string, double> thresholds;
};

/// Column-ordered table; cells are JSON values (double, integer, or string).
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

/// Shortest exact decimal form of v via %.17g with a round-trip check; used
/// everywhere a double reaches a report so output is byte-stable.
std::string format_double(double v);

/// CSV: '#' manifest comment lines, a header row, then data rows.
void write_csv(std::ostream& out, const RunManifest& m, const ReportTable& t);

/// JSON: {"manifest": {...}, "columns": [...], "rows": [[...], ...]}.
void write_json(std::ostream& out, const RunManifest& m, const ReportTable& t);

/// Dispatch on format "csv" | "json"; throws std::invalid_argument otherwise.
void write_report(std::ostream& out, const std::string& format, const RunManifest& m,
                  const ReportTable& t);

}  // namespace onsum
