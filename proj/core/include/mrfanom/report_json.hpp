#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrfanom/anomaly.hpp"
#include "mrfanom/lwa.hpp"

namespace mrfanom {

// JSON renderings of the analysis reports. Year sets are written as year
// labels (`years[t]`), absent values as null. Output is indented with two
// spaces and ends with a newline.

std::string to_json(const YearSets& sets, std::span<const int> years);
std::string to_json(const AnomalyStats& stats);
std::string to_json(const GainLossReport& report);
std::string to_json(const OverlapReport& report, std::span<const int> years);
std::string to_json(const YearAssignmentStats& stats);
std::string to_json(const CorrelationReport& report);
std::string to_json(const CaseReport& report);

/// Inverse of to_json(const CaseReport&). Throws ParseError on malformed input.
CaseReport case_report_from_json(const std::string& text);

/// Provenance record written by every CLI command before its outputs.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::vector<std::pair<std::string, std::string>> inputs;  // role -> path
  std::vector<std::pair<std::string, std::string>> config;  // key -> value
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

std::string to_json(const RunManifest& manifest);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mrfanom
