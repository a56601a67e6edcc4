#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "di/textnorm.hpp"

namespace di::rake {

using Phrase = std::vector<std::string>;

struct PhraseCandidate {
  Phrase tokens;
  double score = 0.0;
  std::set<std::string> source_doc_ids;

  std::size_t length() const { return tokens.size(); }
  std::string text() const;  // tokens joined by a single space

  friend bool operator==(const PhraseCandidate&, const PhraseCandidate&) = default;
};

// deg(w) = sum of the lengths of the candidate occurrences containing w;
// freq(w) = number of occurrences of w over all candidates.
struct CooccurrenceGraph {
  std::map<std::string, long long> deg;
  std::map<std::string, long long> freq;

  bool empty() const { return freq.empty(); }
  void merge(const CooccurrenceGraph& other);
};

enum class ScoreMetric { kDegree, kFrequency, kDegreeOverFrequency };

std::string_view to_string(ScoreMetric metric);
ScoreMetric parse_metric(std::string_view name);

using TokenSet = std::set<std::string, std::less<>>;

struct RakeConfig {
  TokenSet stopwords;
  TokenSet delimiters = {textnorm::phrase_delimiters().begin(), textnorm::phrase_delimiters().end()};
  ScoreMetric metric = ScoreMetric::kDegree;
};

// Maximal runs of tokens that are neither stopwords nor delimiters, in
// document order. Returned candidates carry no score.
std::vector<Phrase> extract_candidates(const std::vector<std::string>& tokens, const TokenSet& stopwords,
                                       const TokenSet& delimiters);

CooccurrenceGraph build_cooccurrence(const std::vector<Phrase>& candidates);

std::map<std::string, double> word_scores(const CooccurrenceGraph& graph, ScoreMetric metric);

// Pools candidates from every document into one graph, merges identical
// token sequences (source ids unioned) and ranks them by score descending,
// ties by the space-joined phrase ascending (bytewise).
std::vector<PhraseCandidate> rake(const std::vector<textnorm::TokenSequence>& documents,
                                  const RakeConfig& config);

// "phrase,length,score,doc_count"
std::string to_csv(const std::vector<PhraseCandidate>& ranked);

}  // namespace di::rake
