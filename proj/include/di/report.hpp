#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace di {

struct TemporalPoint {
  std::string date;  // YYYY-MM-DD, UTC
  double sentiment_score = 0.0;
  double hate_rate = 0.0;
  long long doc_count = 0;

  friend bool operator==(const TemporalPoint&, const TemporalPoint&) = default;
};

struct TopicScore {
  int topic_id = 0;
  std::string label_phrase;
  double sentiment_score = 0.0;
  double hate_rate = 0.0;
  long long size = 0;
  // Number of member predictions per task; 0 means the score is a
  // placeholder, not a measurement.
  long long sentiment_predictions = 0;
  long long hate_predictions = 0;

  friend bool operator==(const TopicScore&, const TopicScore&) = default;
};

struct CorpusSummary {
  std::string corpus;
  std::string dialect;
  long long documents = 0;
  long long positive = 0;
  long long negative = 0;
  long long hate = 0;
  long long non_hate = 0;
  double sentiment_score = 0.0;
  double negative_share = 0.0;  // neg / (pos + neg)
  double hate_share = 0.0;      // hate / (hate + non-hate)

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

struct WordCount {
  std::string token;
  long long count = 0;

  friend bool operator==(const WordCount&, const WordCount&) = default;
};

struct ReportDiagnostics {
  long long corpus_size = 0;
  long long outliers = 0;               // documents with topic -1
  long long undated = 0;                // excluded from the temporal view
  long long unmatched_predictions = 0;  // prediction ids absent from the corpus

  friend bool operator==(const ReportDiagnostics&, const ReportDiagnostics&) = default;
};

struct AnalysisReport {
  std::string corpus;
  std::vector<TemporalPoint> temporal_series;
  std::vector<TopicScore> topic_scores;
  CorpusSummary dialect_summary;
  std::map<std::string, std::vector<WordCount>> word_frequencies;  // class -> ranked
  ReportDiagnostics diagnostics;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

struct ShareRatio {
  std::string numerator;
  std::string denominator;
  std::optional<double> negative_ratio;  // absent when the denominator share is 0
  std::optional<double> hate_ratio;

  friend bool operator==(const ShareRatio&, const ShareRatio&) = default;
};

struct DialectComparison {
  std::vector<CorpusSummary> rows;
  std::vector<ShareRatio> ratios;  // every ordered pair (i < j): rows[i] / rows[j]

  friend bool operator==(const DialectComparison&, const DialectComparison&) = default;
};

}  // namespace di
