#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "di/corpus_io.hpp"
#include "di/rake.hpp"
#include "di/textnorm.hpp"
#include "di/topic_model.hpp"

namespace di::interpret {

struct DedupResult {
  std::vector<topics::Topic> topics;  // keyword lists with shared terms removed
  std::set<int> emptied;              // topics left without keywords
};

// Removes every term that appears in the keyword lists of two or more
// topics from all of them; surviving order is preserved.
DedupResult dedup_topic_keywords(const std::vector<topics::Topic>& topics);

// Phrases of at least `min_length` tokens containing one of `keywords`,
// in RAKE rank order.
std::vector<rake::PhraseCandidate> select_topic_phrases(const std::vector<rake::PhraseCandidate>& rake_output,
                                                        const std::set<std::string, std::less<>>& keywords,
                                                        std::size_t min_length = 2);

struct LengthWindow {
  std::size_t representative_length = 2;  // modal phrase length, ties -> shorter
  std::set<std::size_t> lengths;          // {L-1, L, L+1} ∩ observed ∩ [2, inf)
};

// Throws Error(kInvalidInput) on an empty list.
LengthWindow length_window(const std::vector<rake::PhraseCandidate>& phrases);

struct InterpretConfig {
  textnorm::NormalizationConfig norm;  // mode is forced to phrase
  rake::ScoreMetric metric = rake::ScoreMetric::kDegree;
  std::size_t max_phrases_per_length = 5;
  std::size_t min_phrase_length = 2;
};

struct TopicInterpretation {
  int topic_id = 0;
  std::vector<topics::Keyword> unique_keywords;
  std::size_t representative_length = 2;
  std::set<std::size_t> window;
  std::map<std::size_t, std::vector<rake::PhraseCandidate>> phrases_by_length;
  std::vector<std::string> diagnostics;

  // Highest-scoring emitted phrase, or "" when there is none.
  std::string top_phrase() const;

  friend bool operator==(const TopicInterpretation&, const TopicInterpretation&) = default;
};

// `topic` must already carry its deduplicated keyword list. `corpus`
// supplies the member documents' raw text.
TopicInterpretation interpret_topic(const topics::Topic& topic, const DocumentSet& corpus,
                                    const InterpretConfig& config);

// Dedup first, then interpret each topic.
std::vector<TopicInterpretation> interpret_topics(const std::vector<topics::Topic>& topics,
                                                  const DocumentSet& corpus, const InterpretConfig& config);

nlohmann::json to_json(const TopicInterpretation& ti);
TopicInterpretation interpretation_from_json(const nlohmann::json& j);

}  // namespace di::interpret
