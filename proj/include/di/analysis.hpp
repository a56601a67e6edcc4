#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "di/corpus_io.hpp"
#include "di/report.hpp"
#include "di/topic_interpret.hpp"
#include "di/topic_model.hpp"

namespace di::analysis {

// (pos - neg) / (pos + neg); 0 when both are zero. Takes reals so that
// confidence-weighted masses can be passed as well as counts.
double sentiment_score(double positive, double negative);

// hate / total; 0 when total is zero.
double hate_rate(double hate, double total);

struct TemporalResult {
  std::vector<TemporalPoint> series;
  long long undated = 0;
  long long unmatched_predictions = 0;
};

enum class Weighting { kCounts, kConfidence };

// Buckets dated documents by UTC day. Either prediction set may be absent.
TemporalResult temporal_view(const PredictionSet* sentiment, const PredictionSet* hate, const DocumentSet& docs,
                             Weighting weighting = Weighting::kCounts);

std::vector<TopicScore> topic_view(const PredictionSet* sentiment, const PredictionSet* hate,
                                   const topics::TopicAssignment& assignment,
                                   const std::vector<interpret::TopicInterpretation>& interpretations,
                                   Weighting weighting = Weighting::kCounts);

CorpusSummary corpus_summary(const std::string& corpus, const std::string& dialect, long long documents,
                             const PredictionSet* sentiment, const PredictionSet* hate);

DialectComparison dialect_view(const std::vector<AnalysisReport>& reports);

// Token counts over documents predicted as `cls`, count descending then
// token ascending, at most top_w entries.
std::vector<WordCount> word_frequencies(const PredictionSet& preds,
                                        const std::map<std::string, std::vector<std::string>>& doc_tokens,
                                        const std::string& cls, std::size_t top_w);

struct AnalysisConfig {
  std::size_t top_words = 20;
  Weighting weighting = Weighting::kCounts;
};

struct AnalysisInputs {
  const DocumentSet* corpus = nullptr;
  const PredictionSet* sentiment = nullptr;
  const PredictionSet* hate = nullptr;
  const topics::TopicAssignment* assignment = nullptr;
  const std::vector<interpret::TopicInterpretation>* interpretations = nullptr;
  // Topic-mode tokens per document id, for word frequencies.
  const std::map<std::string, std::vector<std::string>>* doc_tokens = nullptr;
};

AnalysisReport build_report(const AnalysisInputs& in, const AnalysisConfig& config);

}  // namespace di::analysis
