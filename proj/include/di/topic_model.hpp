#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "di/corpus_io.hpp"
#include "di/textnorm.hpp"

namespace di::topics {

inline constexpr int kOutlier = -1;

// Row-aligned topic labels; label kOutlier marks unclustered documents.
struct TopicAssignment {
  std::vector<std::string> doc_ids;
  std::vector<int> labels;
  int k = 0;

  std::size_t outliers() const;
  std::map<int, std::vector<std::string>> members() const;  // excludes outliers

  friend bool operator==(const TopicAssignment&, const TopicAssignment&) = default;
};

struct Keyword {
  std::string term;
  double weight = 0.0;

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

struct Topic {
  int id = 0;
  std::vector<std::string> member_doc_ids;
  std::vector<Keyword> keywords;  // weight descending, ties by term ascending

  friend bool operator==(const Topic&, const Topic&) = default;
};

using TokenDocs = std::vector<std::vector<std::string>>;

// PCA onto the top `target_dim` components (descending variance), each
// component's largest-magnitude coordinate made positive. Identity when
// target_dim >= dim. PCA is exact, so `seed` never changes the result; it
// is accepted so every stage shares one signature for seeded runs.
EmbeddingMatrix reduce_dimensions(const EmbeddingMatrix& emb, std::size_t target_dim, std::uint64_t seed = 0);

// DBSCAN with Euclidean distance. A point is core when at least `min_pts`
// points (itself included) lie within distance <= eps. Clusters are the
// connected components of core points; a border point joins the reachable
// cluster whose lowest core index is smallest (what sequential row-order
// expansion yields). Ids follow the first member in row order.
TopicAssignment cluster(const EmbeddingMatrix& emb, double eps, std::size_t min_pts);

struct CtfidfModel {
  std::map<int, std::map<std::string, long long>> tf;  // class -> term -> count
  std::map<std::string, long long> corpus_frequency;   // f(t)
  double average_class_size = 0.0;                     // A

  double weight(int cls, const std::string& term) const;
};

CtfidfModel build_ctfidf(const std::map<int, TokenDocs>& docs_by_topic);

// weight(t, c) = tf(t, c) * ln(1 + A / f(t)); top n per class.
std::map<int, std::vector<Keyword>> ctfidf_keywords(const std::map<int, TokenDocs>& docs_by_topic, std::size_t n);

// Document-frequency table for UMass coherence.
class DocFrequency {
 public:
  explicit DocFrequency(const TokenDocs& docs);
  long long count(const std::string& w) const;
  long long count(const std::string& a, const std::string& b) const;
  std::size_t documents() const { return docs_.size(); }

 private:
  std::vector<std::vector<std::string>> docs_;  // sorted unique tokens per doc
  std::map<std::string, std::vector<std::size_t>> postings_;
};

struct TopicCoherence {
  double value = 0.0;
  std::size_t pairs = 0;
  std::size_t skipped_pairs = 0;  // pairs whose conditioning word has D = 0
};

// Sum over i = 2..m, j < i of ln((D(w_i, w_j) + 1) / D(w_j)).
TopicCoherence umass(const std::vector<std::string>& top_words, const DocFrequency& df);

struct CoherenceReport {
  std::map<int, TopicCoherence> per_topic;
  double mean = 0.0;
  std::size_t skipped_pairs = 0;
};

CoherenceReport coherence(const std::vector<Topic>& topics, const TokenDocs& token_docs, std::size_t top_m);

struct TopicConfig {
  std::size_t reduce_dim = 5;
  double eps = 0.5;
  std::size_t min_pts = 5;
  std::size_t n_keywords = 5;
  std::size_t coherence_top_m = 5;
  std::uint64_t seed = 0;
};

void validate(const TopicConfig& config);

struct TopicResult {
  TopicAssignment assignment;
  std::vector<Topic> topics;
  CoherenceReport coherence;
  TopicConfig config;
};

// Drops tokens of a single code point; the c-TF-IDF vocabulary filter.
std::vector<std::string> vocabulary_tokens(const std::vector<std::string>& tokens);

// reduce -> cluster -> c-TF-IDF over topic-mode tokens -> coherence.
// `embeddings` rows must be aligned to `corpus` order.
TopicResult fit_topics(const DocumentSet& corpus, const EmbeddingMatrix& embeddings, const TopicConfig& config,
                       const textnorm::NormalizationConfig& norm);

nlohmann::json to_json(const TopicResult& result);
TopicResult topic_result_from_json(const nlohmann::json& j, const TopicAssignment& assignment);

// "doc_id,topic_id"
std::string assignment_to_csv(const TopicAssignment& a);
TopicAssignment assignment_from_csv(std::string_view text);

}  // namespace di::topics
