#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "di/report.hpp"

namespace di {

enum class ReportFormat { kJson, kCsv };

ReportFormat parse_report_format(std::string_view name);

// Rejects non-finite values and scores or shares outside their ranges.
void validate(const AnalysisReport& report);

nlohmann::json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

// JSON: `path` is the report file. CSV: `path` is a directory receiving
// summary.csv, temporal.csv, topics.csv and wordfreq_<class>.csv. Output
// bytes depend only on the report contents.
void save_report(const AnalysisReport& report, const std::filesystem::path& path, ReportFormat format);
AnalysisReport load_report(const std::filesystem::path& path, ReportFormat format);

nlohmann::json to_json(const DialectComparison& table);
// "corpus,dialect,documents,negative_share,hate_share" then a ratio table
// in a second file "<stem>_ratios.csv".
void save_comparison_csv(const DialectComparison& table, const std::filesystem::path& path);

}  // namespace di
