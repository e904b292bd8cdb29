#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qtomo/experiment.hpp"

namespace qtomo {

enum class ReportFormat { csv, json };
ReportFormat report_format_from_string(const std::string& s);

/// Per-state table "state_index,L,eff[,one_minus_F]" preceded by a single
/// "# provenance <json>" comment line.
std::string records_to_csv(const ExperimentReport& report);
/// "percentile,L" for percentiles 1..99, same comment line.
std::string curve_to_csv(const ExperimentReport& report);

std::string summary_to_json(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

/// csv:  <base>.csv, <base>.summary.json, <base>.curve.csv
/// json: <base>.json, <base>.curve.csv
/// Returns the paths written.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, ReportFormat format,
                                               const std::filesystem::path& base);

/// Reads a report written by emit_report: a full .json report, or a
/// per-state .csv (provenance taken from its comment line).
ExperimentReport load_report(const std::filesystem::path& path);

}  // namespace qtomo
