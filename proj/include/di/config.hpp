#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "di/analysis.hpp"
#include "di/classify.hpp"
#include "di/corpus_io.hpp"
#include "di/rake.hpp"
#include "di/report_io.hpp"
#include "di/topic_model.hpp"

namespace di::config {

// Raw dotted-key settings, e.g. "cluster.eps" -> "0.5".
using KeyValues = std::map<std::string, std::string>;

// "key = value" per line, '#' comments, blank lines ignored. Relative
// values of path-valued keys are resolved against `base_dir`. Throws on
// unknown keys and malformed lines (message names the line number).
KeyValues parse_key_values(std::string_view text, const std::filesystem::path& base_dir = {});
KeyValues load_key_values(const std::filesystem::path& path);

// Every recognised key with its default value.
const KeyValues& defaults();
bool is_known_key(std::string_view key);
bool is_path_key(std::string_view key);

struct TrainingSource {
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
};

struct RunConfig {
  std::vector<std::filesystem::path> corpora;
  std::vector<std::filesystem::path> embeddings;  // aligned to corpora
  std::vector<Task> tasks;
  std::filesystem::path out = "out";
  std::uint64_t seed = 42;
  ReportFormat format = ReportFormat::kJson;

  bool lowercase = true;
  bool keep_emoji = true;
  std::filesystem::path stopwords;  // file or directory of *.txt

  topics::TopicConfig topics;
  rake::ScoreMetric rake_metric = rake::ScoreMetric::kDegree;
  std::size_t max_phrases_per_length = 5;
  std::size_t min_phrase_length = 2;

  classify::TrainConfig train;
  double split_ratio = 0.8;
  std::map<Task, TrainingSource> training_sources;

  analysis::AnalysisConfig analysis;

  // Canonical "key=value\n" listing of every effective parameter (output
  // directory excluded) and its SHA-256.
  std::string canonical;
  std::string hash;
};

// Precedence: defaults < config file < DI_STOPWORDS (norm.stopwords only)
// < command-line flags. Parses and validates the merged values; input
// paths are checked for existence by the CLI per subcommand.
RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values,
                  const std::optional<std::string>& stopwords_env, const std::filesystem::path& data_dir);

// Splits "a, b" into trimmed non-empty items.
std::vector<std::string> split_list(std::string_view value);

}  // namespace di::config
