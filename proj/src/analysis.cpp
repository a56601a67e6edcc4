#include "di/analysis.hpp"

#include <algorithm>
#include <unordered_map>

#include "di/error.hpp"

namespace di::analysis {

double sentiment_score(double positive, double negative) {
  const double total = positive + negative;
  return total > 0 ? (positive - negative) / total : 0.0;
}

double hate_rate(double hate, double total) { return total > 0 ? hate / total : 0.0; }

namespace {

// Per-group accumulator for both tasks.
struct Tally {
  double positive = 0, negative = 0;
  double hate = 0, non_hate = 0;
  long long sentiment_n = 0, hate_n = 0;

  void add(Task task, const PredictionRecord& rec, Weighting w) {
    const double mass = w == Weighting::kConfidence ? rec.confidence : 1.0;
    if (task == Task::kSentiment) {
      ++sentiment_n;
      (rec.label == "positive" ? positive : negative) += mass;
    } else {
      ++hate_n;
      (rec.label == "hate" ? hate : non_hate) += mass;
    }
  }
  double sentiment() const { return sentiment_score(positive, negative); }
  double hate_share() const { return hate_rate(hate, hate + non_hate); }
};

using PredictionIndex = std::unordered_map<std::string_view, const PredictionRecord*>;

PredictionIndex index_predictions(const PredictionSet* p) {
  PredictionIndex idx;
  if (!p) return idx;
  for (const auto& r : p->records) idx.emplace(r.doc_id, &r);
  return idx;
}

long long count_unmatched(const PredictionSet* p, const std::unordered_map<std::string, std::size_t>& doc_index) {
  if (!p) return 0;
  long long n = 0;
  for (const auto& r : p->records) {
    if (!doc_index.contains(r.doc_id)) ++n;
  }
  return n;
}

}  // namespace

TemporalResult temporal_view(const PredictionSet* sentiment, const PredictionSet* hate, const DocumentSet& docs,
                             Weighting weighting) {
  const auto s_idx = index_predictions(sentiment);
  const auto h_idx = index_predictions(hate);
  const auto doc_index = docs.index();

  TemporalResult out;
  out.unmatched_predictions = count_unmatched(sentiment, doc_index) + count_unmatched(hate, doc_index);
  std::map<std::string, std::pair<Tally, long long>> buckets;  // ISO dates sort chronologically
  for (const auto& d : docs.documents) {
    if (!d.timestamp) {
      ++out.undated;
      continue;
    }
    const auto s = s_idx.find(d.id);
    const auto h = h_idx.find(d.id);
    if (s == s_idx.end() && h == h_idx.end()) continue;
    auto& [tally, count] = buckets[format_date(*d.timestamp)];
    if (s != s_idx.end()) tally.add(Task::kSentiment, *s->second, weighting);
    if (h != h_idx.end()) tally.add(Task::kHate, *h->second, weighting);
    ++count;
  }
  for (const auto& [date, entry] : buckets) {
    out.series.push_back({date, entry.first.sentiment(), entry.first.hate_share(), entry.second});
  }
  return out;
}

std::vector<TopicScore> topic_view(const PredictionSet* sentiment, const PredictionSet* hate,
                                   const topics::TopicAssignment& assignment,
                                   const std::vector<interpret::TopicInterpretation>& interpretations,
                                   Weighting weighting) {
  const auto s_idx = index_predictions(sentiment);
  const auto h_idx = index_predictions(hate);
  std::map<int, std::pair<Tally, long long>> per_topic;
  for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
    const int t = assignment.labels[i];
    if (t == topics::kOutlier) continue;
    auto& [tally, size] = per_topic[t];
    ++size;
    const auto& id = assignment.doc_ids[i];
    if (auto s = s_idx.find(id); s != s_idx.end()) tally.add(Task::kSentiment, *s->second, weighting);
    if (auto h = h_idx.find(id); h != h_idx.end()) tally.add(Task::kHate, *h->second, weighting);
  }
  std::map<int, std::string> labels;
  for (const auto& ti : interpretations) labels[ti.topic_id] = ti.top_phrase();

  std::vector<TopicScore> out;
  for (const auto& [t, entry] : per_topic) {
    const auto& [tally, size] = entry;
    out.push_back({t, labels[t], tally.sentiment(), tally.hate_share(), size, tally.sentiment_n, tally.hate_n});
  }
  return out;
}

CorpusSummary corpus_summary(const std::string& corpus, const std::string& dialect, long long documents,
                             const PredictionSet* sentiment, const PredictionSet* hate) {
  CorpusSummary s;
  s.corpus = corpus;
  s.dialect = dialect;
  s.documents = documents;
  if (sentiment) {
    for (const auto& r : sentiment->records) ++(r.label == "positive" ? s.positive : s.negative);
  }
  if (hate) {
    for (const auto& r : hate->records) ++(r.label == "hate" ? s.hate : s.non_hate);
  }
  s.sentiment_score = sentiment_score(static_cast<double>(s.positive), static_cast<double>(s.negative));
  s.negative_share = hate_rate(static_cast<double>(s.negative), static_cast<double>(s.positive + s.negative));
  s.hate_share = hate_rate(static_cast<double>(s.hate), static_cast<double>(s.hate + s.non_hate));
  return s;
}

DialectComparison dialect_view(const std::vector<AnalysisReport>& reports) {
  DialectComparison out;
  for (const auto& r : reports) out.rows.push_back(r.dialect_summary);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < out.rows.size(); ++j) {
      const auto& a = out.rows[i];
      const auto& b = out.rows[j];
      ShareRatio ratio{a.corpus, b.corpus, std::nullopt, std::nullopt};
      if (b.negative_share > 0) ratio.negative_ratio = a.negative_share / b.negative_share;
      if (b.hate_share > 0) ratio.hate_ratio = a.hate_share / b.hate_share;
      out.ratios.push_back(std::move(ratio));
    }
  }
  return out;
}

std::vector<WordCount> word_frequencies(const PredictionSet& preds,
                                        const std::map<std::string, std::vector<std::string>>& doc_tokens,
                                        const std::string& cls, std::size_t top_w) {
  std::map<std::string, long long> counts;
  for (const auto& r : preds.records) {
    if (r.label != cls) continue;
    const auto it = doc_tokens.find(r.doc_id);
    if (it == doc_tokens.end()) continue;
    for (const auto& tok : it->second) ++counts[tok];
  }
  std::vector<WordCount> out;
  out.reserve(counts.size());
  for (auto& [tok, n] : counts) out.push_back({tok, n});
  std::stable_sort(out.begin(), out.end(), [](const WordCount& a, const WordCount& b) { return a.count > b.count; });
  if (out.size() > top_w) out.resize(top_w);
  return out;
}

AnalysisReport build_report(const AnalysisInputs& in, const AnalysisConfig& config) {
  if (!in.corpus) fail(ErrorKind::kInternal, "build_report requires a corpus");
  const DocumentSet& docs = *in.corpus;
  AnalysisReport r;
  r.corpus = docs.name;
  r.diagnostics.corpus_size = static_cast<long long>(docs.size());

  const auto temporal = temporal_view(in.sentiment, in.hate, docs, config.weighting);
  r.temporal_series = temporal.series;
  r.diagnostics.undated = temporal.undated;
  r.diagnostics.unmatched_predictions = temporal.unmatched_predictions;

  if (in.assignment) {
    static const std::vector<interpret::TopicInterpretation> kNone;
    r.topic_scores = topic_view(in.sentiment, in.hate, *in.assignment, in.interpretations ? *in.interpretations : kNone,
                                config.weighting);
    r.diagnostics.outliers = static_cast<long long>(in.assignment->outliers());
  }

  std::string dialect;
  for (const auto& d : docs.documents) {
    if (d.dialect) {
      dialect = *d.dialect;
      break;
    }
  }
  r.dialect_summary = corpus_summary(docs.name, dialect, r.diagnostics.corpus_size, in.sentiment, in.hate);

  if (in.doc_tokens) {
    for (const PredictionSet* p : {in.sentiment, in.hate}) {
      if (!p) continue;
      for (const auto& cls : class_set(p->task)) {
        r.word_frequencies[cls] = word_frequencies(*p, *in.doc_tokens, cls, config.top_words);
      }
    }
  }
  return r;
}

}  // namespace di::analysis
