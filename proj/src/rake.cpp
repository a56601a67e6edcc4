#include "di/rake.hpp"

#include <algorithm>

#include "di/csv.hpp"
#include "di/error.hpp"
#include "di/numfmt.hpp"

namespace di::rake {

std::string PhraseCandidate::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

void CooccurrenceGraph::merge(const CooccurrenceGraph& other) {
  for (const auto& [w, d] : other.deg) deg[w] += d;
  for (const auto& [w, f] : other.freq) freq[w] += f;
}

std::string_view to_string(ScoreMetric metric) {
  switch (metric) {
    case ScoreMetric::kDegree: return "degree";
    case ScoreMetric::kFrequency: return "frequency";
    case ScoreMetric::kDegreeOverFrequency: return "degree_over_frequency";
  }
  return "degree";
}

ScoreMetric parse_metric(std::string_view name) {
  if (name == "degree") return ScoreMetric::kDegree;
  if (name == "frequency") return ScoreMetric::kFrequency;
  if (name == "degree_over_frequency" || name == "ratio") return ScoreMetric::kDegreeOverFrequency;
  fail(ErrorKind::kInvalidInput, "unknown RAKE metric '" + std::string(name) + "'");
}

std::vector<Phrase> extract_candidates(const std::vector<std::string>& tokens, const TokenSet& stopwords,
                                       const TokenSet& delimiters) {
  std::vector<Phrase> out;
  Phrase run;
  for (const auto& tok : tokens) {
    if (stopwords.contains(tok) || delimiters.contains(tok)) {
      if (!run.empty()) out.push_back(std::move(run));
      run.clear();
    } else {
      run.push_back(tok);
    }
  }
  if (!run.empty()) out.push_back(std::move(run));
  return out;
}

CooccurrenceGraph build_cooccurrence(const std::vector<Phrase>& candidates) {
  CooccurrenceGraph g;
  for (const auto& cand : candidates) {
    const auto len = static_cast<long long>(cand.size());
    for (const auto& w : cand) {
      g.freq[w] += 1;
      g.deg[w] += len;
    }
  }
  return g;
}

std::map<std::string, double> word_scores(const CooccurrenceGraph& graph, ScoreMetric metric) {
  std::map<std::string, double> out;
  for (const auto& [w, f] : graph.freq) {
    const auto d = graph.deg.at(w);
    switch (metric) {
      case ScoreMetric::kDegree: out.emplace(w, static_cast<double>(d)); break;
      case ScoreMetric::kFrequency: out.emplace(w, static_cast<double>(f)); break;
      case ScoreMetric::kDegreeOverFrequency:
        out.emplace(w, static_cast<double>(d) / static_cast<double>(f));
        break;
    }
  }
  return out;
}

std::vector<PhraseCandidate> rake(const std::vector<textnorm::TokenSequence>& documents, const RakeConfig& config) {
  std::map<Phrase, std::set<std::string>> sources;
  std::vector<Phrase> all;
  for (const auto& doc : documents) {
    for (auto& cand : extract_candidates(doc.tokens, config.stopwords, config.delimiters)) {
      sources[cand].insert(doc.source_id);
      all.push_back(std::move(cand));
    }
  }
  const auto scores = word_scores(build_cooccurrence(all), config.metric);

  std::vector<PhraseCandidate> ranked;
  ranked.reserve(sources.size());
  for (auto& [tokens, ids] : sources) {
    PhraseCandidate pc{tokens, 0.0, std::move(ids)};
    for (const auto& w : tokens) pc.score += scores.at(w);
    ranked.push_back(std::move(pc));
  }
  // Joined text is the tie-break key; cache it once.
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) keys.emplace_back(ranked[i].text(), i);
  std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    const double sa = ranked[a.second].score;
    const double sb = ranked[b.second].score;
    if (sa != sb) return sa > sb;
    return a.first < b.first;
  });
  std::vector<PhraseCandidate> out;
  out.reserve(ranked.size());
  for (const auto& [_, i] : keys) out.push_back(std::move(ranked[i]));
  return out;
}

std::string to_csv(const std::vector<PhraseCandidate>& ranked) {
  std::string out = "phrase,length,score,doc_count\n";
  for (const auto& pc : ranked) {
    out += csv::row({pc.text(), std::to_string(pc.length()), format_double(pc.score),
                     std::to_string(pc.source_doc_ids.size())});
  }
  return out;
}

}  // namespace di::rake
