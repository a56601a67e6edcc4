#include "di/topic_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <Eigen/Dense>

#include "di/csv.hpp"
#include "di/error.hpp"
#include "di/numfmt.hpp"
#include "di/utf8.hpp"

namespace di::topics {

using nlohmann::json;

std::size_t TopicAssignment::outliers() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kOutlier));
}

std::map<int, std::vector<std::string>> TopicAssignment::members() const {
  std::map<int, std::vector<std::string>> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kOutlier) out[labels[i]].push_back(doc_ids[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dimensionality reduction

EmbeddingMatrix reduce_dimensions(const EmbeddingMatrix& emb, std::size_t target_dim, std::uint64_t /*seed*/) {
  if (target_dim < 1) fail(ErrorKind::kInvalidInput, "target_dim must be >= 1");
  if (target_dim >= emb.dim) return emb;
  if (emb.count < 2) fail(ErrorKind::kInvalidInput, "dimensionality reduction needs at least 2 samples");

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMatrix> x(emb.values.data(), static_cast<Eigen::Index>(emb.count),
                                      static_cast<Eigen::Index>(emb.dim));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  Eigen::MatrixXd components = svd.matrixV().leftCols(static_cast<Eigen::Index>(target_dim));
  for (Eigen::Index c = 0; c < components.cols(); ++c) {
    Eigen::Index arg = 0;
    components.col(c).cwiseAbs().maxCoeff(&arg);
    if (components(arg, c) < 0) components.col(c) *= -1.0;
  }
  const Eigen::MatrixXd projected = centered * components;

  EmbeddingMatrix out;
  out.count = emb.count;
  out.dim = target_dim;
  out.doc_ids = emb.doc_ids;
  out.values.resize(out.count * out.dim);
  for (std::size_t i = 0; i < out.count; ++i) {
    for (std::size_t j = 0; j < out.dim; ++j) {
      out.values[i * out.dim + j] = projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Density clustering

TopicAssignment cluster(const EmbeddingMatrix& emb, double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) fail(ErrorKind::kInvalidInput, "eps must be > 0");
  if (min_pts < 1) fail(ErrorKind::kInvalidInput, "min_pts must be >= 1");
  if (emb.count == 0) fail(ErrorKind::kInvalidInput, "cannot cluster an empty matrix");

  const std::size_t n = emb.count;
  const double eps2 = eps * eps;
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = emb.row(i);
    neighbors[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = emb.row(j);
      double d2 = 0.0;
      for (std::size_t k = 0; k < emb.dim; ++k) {
        const double diff = a[k] - b[k];
        d2 += diff * diff;
      }
      if (d2 <= eps2) {
        neighbors[i].push_back(j);
        neighbors[j].push_back(i);
      }
    }
  }

  constexpr int kUnassigned = -2;
  std::vector<int> label(n, kUnassigned);
  int next = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (label[seed] != kUnassigned || neighbors[seed].size() < min_pts) continue;
    const int c = next++;
    label[seed] = c;
    std::deque<std::size_t> frontier{seed};
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      for (std::size_t nb : neighbors[q]) {
        if (label[nb] != kUnassigned) continue;
        label[nb] = c;
        if (neighbors[nb].size() >= min_pts) frontier.push_back(nb);
      }
    }
  }

  // Renumber by first member in row order.
  std::vector<int> remap(static_cast<std::size_t>(next), -1);
  int ordinal = 0;
  TopicAssignment out;
  out.doc_ids = emb.doc_ids;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == kUnassigned) {
      out.labels[i] = kOutlier;
      continue;
    }
    auto& r = remap[static_cast<std::size_t>(label[i])];
    if (r < 0) r = ordinal++;
    out.labels[i] = r;
  }
  out.k = next;
  return out;
}

// ---------------------------------------------------------------------------
// c-TF-IDF

double CtfidfModel::weight(int cls, const std::string& term) const {
  const auto& counts = tf.at(cls);
  const auto it = counts.find(term);
  if (it == counts.end()) return 0.0;
  const double f = static_cast<double>(corpus_frequency.at(term));
  return static_cast<double>(it->second) * std::log(1.0 + average_class_size / f);
}

CtfidfModel build_ctfidf(const std::map<int, TokenDocs>& docs_by_topic) {
  CtfidfModel m;
  long long total = 0;
  for (const auto& [cls, docs] : docs_by_topic) {
    if (docs.empty()) fail(ErrorKind::kInvalidInput, "topic " + std::to_string(cls) + " has no documents");
    auto& counts = m.tf[cls];
    for (const auto& doc : docs) {
      for (const auto& tok : doc) {
        ++counts[tok];
        ++m.corpus_frequency[tok];
        ++total;
      }
    }
  }
  if (!docs_by_topic.empty()) {
    m.average_class_size = static_cast<double>(total) / static_cast<double>(docs_by_topic.size());
  }
  return m;
}

namespace {

void sort_keywords(std::vector<Keyword>& kws) {
  std::sort(kws.begin(), kws.end(), [](const Keyword& a, const Keyword& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.term < b.term;
  });
}

}  // namespace

std::map<int, std::vector<Keyword>> ctfidf_keywords(const std::map<int, TokenDocs>& docs_by_topic, std::size_t n) {
  if (n < 1) fail(ErrorKind::kInvalidInput, "number of keywords must be >= 1");
  const CtfidfModel m = build_ctfidf(docs_by_topic);
  std::map<int, std::vector<Keyword>> out;
  for (const auto& [cls, counts] : m.tf) {
    std::vector<Keyword> kws;
    kws.reserve(counts.size());
    for (const auto& [term, _] : counts) kws.push_back({term, m.weight(cls, term)});
    sort_keywords(kws);
    if (kws.size() > n) kws.resize(n);
    out.emplace(cls, std::move(kws));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coherence

DocFrequency::DocFrequency(const TokenDocs& docs) {
  docs_.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<std::string> uniq(docs[d].begin(), docs[d].end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (const auto& w : uniq) postings_[w].push_back(d);
    docs_.push_back(std::move(uniq));
  }
}

long long DocFrequency::count(const std::string& w) const {
  const auto it = postings_.find(w);
  return it == postings_.end() ? 0 : static_cast<long long>(it->second.size());
}

long long DocFrequency::count(const std::string& a, const std::string& b) const {
  const auto ia = postings_.find(a);
  const auto ib = postings_.find(b);
  if (ia == postings_.end() || ib == postings_.end()) return 0;
  std::vector<std::size_t> both;
  std::set_intersection(ia->second.begin(), ia->second.end(), ib->second.begin(), ib->second.end(),
                        std::back_inserter(both));
  return static_cast<long long>(both.size());
}

TopicCoherence umass(const std::vector<std::string>& top_words, const DocFrequency& df) {
  TopicCoherence tc;
  for (std::size_t i = 1; i < top_words.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const long long dj = df.count(top_words[j]);
      if (dj == 0) {
        ++tc.skipped_pairs;
        continue;
      }
      const long long dij = df.count(top_words[i], top_words[j]);
      tc.value += std::log(static_cast<double>(dij + 1) / static_cast<double>(dj));
      ++tc.pairs;
    }
  }
  return tc;
}

CoherenceReport coherence(const std::vector<Topic>& topics, const TokenDocs& token_docs, std::size_t top_m) {
  if (top_m < 2) fail(ErrorKind::kInvalidInput, "coherence top_m must be >= 2");
  const DocFrequency df(token_docs);
  CoherenceReport report;
  double sum = 0.0;
  for (const auto& t : topics) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < t.keywords.size() && i < top_m; ++i) words.push_back(t.keywords[i].term);
    const auto tc = umass(words, df);
    report.per_topic.emplace(t.id, tc);
    report.skipped_pairs += tc.skipped_pairs;
    sum += tc.value;
  }
  if (!topics.empty()) report.mean = sum / static_cast<double>(topics.size());
  return report;
}

// ---------------------------------------------------------------------------
// Pipeline

void validate(const TopicConfig& c) {
  if (c.reduce_dim < 1) fail(ErrorKind::kInvalidInput, "reduce.dim must be >= 1");
  if (!(c.eps > 0.0)) fail(ErrorKind::kInvalidInput, "cluster.eps must be > 0");
  if (c.min_pts < 1) fail(ErrorKind::kInvalidInput, "cluster.min_pts must be >= 1");
  if (c.n_keywords < 1) fail(ErrorKind::kInvalidInput, "topics.n must be >= 1");
  if (c.coherence_top_m < 2) fail(ErrorKind::kInvalidInput, "topics.coherence_top_m must be >= 2");
}

std::vector<std::string> vocabulary_tokens(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (utf8::length(t) > 1) out.push_back(t);
  }
  return out;
}

TopicResult fit_topics(const DocumentSet& corpus, const EmbeddingMatrix& embeddings, const TopicConfig& config,
                       const textnorm::NormalizationConfig& norm) {
  validate(config);
  if (embeddings.count != corpus.size()) {
    fail(ErrorKind::kInvalidInput, "embedding count " + std::to_string(embeddings.count) +
                                       " does not match corpus size " + std::to_string(corpus.size()));
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (embeddings.doc_ids[i] != corpus.documents[i].id) {
      fail(ErrorKind::kInvalidInput, "embedding row " + std::to_string(i) + " is not aligned to document '" +
                                         corpus.documents[i].id + "'");
    }
  }

  // A single document has no variance to project; cluster it as-is.
  const EmbeddingMatrix reduced =
      embeddings.count < 2 ? embeddings : reduce_dimensions(embeddings, config.reduce_dim, config.seed);

  TopicResult result;
  result.config = config;
  result.assignment = cluster(reduced, config.eps, config.min_pts);

  textnorm::NormalizationConfig topic_norm = norm;
  topic_norm.mode = textnorm::Mode::kTopic;
  TokenDocs token_docs;
  token_docs.reserve(corpus.size());
  for (const auto& d : corpus.documents) {
    token_docs.push_back(vocabulary_tokens(textnorm::normalize(d.text, topic_norm, d.id).tokens));
  }

  std::map<int, TokenDocs> by_topic;
  std::map<int, std::vector<std::string>> members;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const int label = result.assignment.labels[i];
    if (label == kOutlier) continue;
    by_topic[label].push_back(token_docs[i]);
    members[label].push_back(corpus.documents[i].id);
  }
  auto keywords = ctfidf_keywords(by_topic, config.n_keywords);
  for (auto& [id, ids] : members) {
    result.topics.push_back({id, std::move(ids), std::move(keywords[id])});
  }
  result.coherence = coherence(result.topics, token_docs, config.coherence_top_m);
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

json to_json(const TopicResult& r) {
  json topics = json::array();
  for (const auto& t : r.topics) {
    json kws = json::array();
    for (const auto& kw : t.keywords) kws.push_back(json::array({kw.term, kw.weight}));
    const auto& tc = r.coherence.per_topic.at(t.id);
    topics.push_back({{"id", t.id},
                      {"size", t.member_doc_ids.size()},
                      {"keywords", std::move(kws)},
                      {"coherence", tc.value},
                      {"coherence_pairs", tc.pairs},
                      {"coherence_skipped_pairs", tc.skipped_pairs}});
  }
  return {{"k", r.assignment.k},
          {"outliers", r.assignment.outliers()},
          {"topics", std::move(topics)},
          {"mean_coherence", r.coherence.mean},
          {"skipped_pairs", r.coherence.skipped_pairs},
          {"params",
           {{"reduction", "pca"},
            {"reduce_dim", r.config.reduce_dim},
            {"clusterer", "dbscan"},
            {"clusterer_note", "deterministic density clustering used in place of hdbscan"},
            {"eps", r.config.eps},
            {"min_pts", r.config.min_pts},
            {"n_keywords", r.config.n_keywords},
            {"keyword_weighting", "ctfidf"},
            {"coherence", "umass"},
            {"coherence_top_m", r.config.coherence_top_m},
            {"seed", r.config.seed}}}};
}

TopicResult topic_result_from_json(const json& j, const TopicAssignment& assignment) {
  try {
    TopicResult r;
    r.assignment = assignment;
    const auto& p = j.at("params");
    r.config.reduce_dim = p.at("reduce_dim").get<std::size_t>();
    r.config.eps = p.at("eps").get<double>();
    r.config.min_pts = p.at("min_pts").get<std::size_t>();
    r.config.n_keywords = p.at("n_keywords").get<std::size_t>();
    r.config.coherence_top_m = p.at("coherence_top_m").get<std::size_t>();
    r.config.seed = p.at("seed").get<std::uint64_t>();
    auto members = assignment.members();
    for (const auto& t : j.at("topics")) {
      Topic topic;
      topic.id = t.at("id").get<int>();
      topic.member_doc_ids = members[topic.id];
      for (const auto& kw : t.at("keywords")) {
        topic.keywords.push_back({kw.at(0).get<std::string>(), kw.at(1).get<double>()});
      }
      TopicCoherence tc;
      tc.value = t.at("coherence").get<double>();
      tc.pairs = t.value("coherence_pairs", std::size_t{0});
      tc.skipped_pairs = t.value("coherence_skipped_pairs", std::size_t{0});
      r.coherence.per_topic.emplace(topic.id, tc);
      r.coherence.skipped_pairs += tc.skipped_pairs;
      r.topics.push_back(std::move(topic));
    }
    r.coherence.mean = j.at("mean_coherence").get<double>();
    if (j.at("k").get<int>() != assignment.k) {
      fail(ErrorKind::kInvalidInput, "topic report k does not match the assignment");
    }
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("malformed topic report: ") + e.what());
  }
}

std::string assignment_to_csv(const TopicAssignment& a) {
  std::string out = "doc_id,topic_id\n";
  for (std::size_t i = 0; i < a.doc_ids.size(); ++i) out += csv::row({a.doc_ids[i], std::to_string(a.labels[i])});
  return out;
}

TopicAssignment assignment_from_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty() || records.front().fields != std::vector<std::string>{"doc_id", "topic_id"}) {
    fail(ErrorKind::kInvalidInput, "assignment CSV must start with header doc_id,topic_id");
  }
  TopicAssignment a;
  std::set<int> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    if (f.size() != 2) {
      fail(ErrorKind::kInvalidInput, "assignment CSV line " + std::to_string(records[r].line) + ": expected 2 fields");
    }
    const int label = static_cast<int>(parse_int(f[1]));
    if (label < kOutlier) fail(ErrorKind::kInvalidInput, "invalid topic id " + f[1]);
    a.doc_ids.push_back(f[0]);
    a.labels.push_back(label);
    if (label != kOutlier) ids.insert(label);
  }
  a.k = static_cast<int>(ids.size());
  return a;
}

}  // namespace di::topics
