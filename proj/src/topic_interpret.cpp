#include "di/topic_interpret.hpp"

#include <algorithm>

#include "di/error.hpp"

namespace di::interpret {

using nlohmann::json;

DedupResult dedup_topic_keywords(const std::vector<topics::Topic>& input) {
  std::map<std::string, int> topic_count;
  for (const auto& t : input) {
    std::set<std::string> seen;
    for (const auto& kw : t.keywords) {
      if (seen.insert(kw.term).second) ++topic_count[kw.term];
    }
  }
  DedupResult out;
  out.topics = input;
  for (auto& t : out.topics) {
    const bool had_keywords = !t.keywords.empty();
    std::erase_if(t.keywords, [&](const topics::Keyword& kw) { return topic_count[kw.term] >= 2; });
    if (t.keywords.empty() && had_keywords) out.emptied.insert(t.id);
  }
  return out;
}

std::vector<rake::PhraseCandidate> select_topic_phrases(const std::vector<rake::PhraseCandidate>& rake_output,
                                                        const std::set<std::string, std::less<>>& keywords,
                                                        std::size_t min_length) {
  std::vector<rake::PhraseCandidate> out;
  for (const auto& pc : rake_output) {
    if (pc.length() < min_length) continue;
    const bool anchored =
        std::any_of(pc.tokens.begin(), pc.tokens.end(), [&](const std::string& t) { return keywords.contains(t); });
    if (anchored) out.push_back(pc);
  }
  // rake() output is already ranked; keep the order stable for other callers.
  std::stable_sort(out.begin(), out.end(),
                   [](const rake::PhraseCandidate& a, const rake::PhraseCandidate& b) { return a.score > b.score; });
  return out;
}

LengthWindow length_window(const std::vector<rake::PhraseCandidate>& phrases) {
  if (phrases.empty()) fail(ErrorKind::kInvalidInput, "length window of an empty phrase list");
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& p : phrases) ++histogram[p.length()];
  LengthWindow w;
  std::size_t best = 0;
  for (const auto& [len, count] : histogram) {
    if (count > best) {  // ascending iteration keeps the shorter length on ties
      best = count;
      w.representative_length = len;
    }
  }
  const std::size_t L = w.representative_length;
  for (std::size_t len : {L - 1, L, L + 1}) {
    if (len >= 2 && histogram.contains(len)) w.lengths.insert(len);
  }
  return w;
}

std::string TopicInterpretation::top_phrase() const {
  const rake::PhraseCandidate* best = nullptr;
  std::string best_text;
  for (const auto& [len, list] : phrases_by_length) {
    if (list.empty()) continue;
    const auto& p = list.front();
    const std::string text = p.text();
    if (!best || p.score > best->score || (p.score == best->score && text < best_text)) {
      best = &p;
      best_text = text;
    }
  }
  return best_text;
}

TopicInterpretation interpret_topic(const topics::Topic& topic, const DocumentSet& corpus,
                                    const InterpretConfig& config) {
  if (topic.member_doc_ids.empty()) {
    fail(ErrorKind::kInvalidInput, "topic " + std::to_string(topic.id) + " has no member documents");
  }
  TopicInterpretation ti;
  ti.topic_id = topic.id;
  ti.unique_keywords = topic.keywords;
  ti.representative_length = std::max<std::size_t>(2, config.min_phrase_length);

  if (topic.keywords.empty()) {
    ti.diagnostics.push_back("no unique keywords after cross-topic dedup");
    return ti;
  }

  textnorm::NormalizationConfig norm = config.norm;
  norm.mode = textnorm::Mode::kPhrase;
  const auto index = corpus.index();
  std::vector<textnorm::TokenSequence> subset;
  subset.reserve(topic.member_doc_ids.size());
  for (const auto& id : topic.member_doc_ids) {
    const auto it = index.find(id);
    if (it == index.end()) {
      fail(ErrorKind::kInvalidInput, "topic member '" + id + "' is not in corpus " + corpus.name);
    }
    subset.push_back(textnorm::normalize(corpus.documents[it->second].text, norm, id));
  }

  rake::RakeConfig rc;
  rc.stopwords.insert(config.norm.stopwords.begin(), config.norm.stopwords.end());
  rc.metric = config.metric;
  const auto ranked = rake::rake(subset, rc);

  std::set<std::string, std::less<>> keywords;
  for (const auto& kw : topic.keywords) keywords.insert(kw.term);
  const auto selected = select_topic_phrases(ranked, keywords, std::max<std::size_t>(2, config.min_phrase_length));
  if (selected.empty()) {
    ti.diagnostics.push_back("no keyword-anchored phrases");
    return ti;
  }

  const LengthWindow window = length_window(selected);
  ti.representative_length = window.representative_length;
  ti.window = window.lengths;
  for (const auto& pc : selected) {
    if (!ti.window.contains(pc.length())) continue;
    auto& bucket = ti.phrases_by_length[pc.length()];
    if (bucket.size() < config.max_phrases_per_length) bucket.push_back(pc);
  }
  return ti;
}

std::vector<TopicInterpretation> interpret_topics(const std::vector<topics::Topic>& topics,
                                                  const DocumentSet& corpus, const InterpretConfig& config) {
  const DedupResult dedup = dedup_topic_keywords(topics);
  std::vector<TopicInterpretation> out;
  out.reserve(dedup.topics.size());
  for (const auto& t : dedup.topics) {
    auto ti = interpret_topic(t, corpus, config);
    if (dedup.emptied.contains(t.id)) ti.diagnostics.insert(ti.diagnostics.begin(), "keywords_emptied_by_dedup");
    out.push_back(std::move(ti));
  }
  return out;
}

json to_json(const TopicInterpretation& ti) {
  json kws = json::array();
  for (const auto& kw : ti.unique_keywords) kws.push_back(json::array({kw.term, kw.weight}));
  json phrases = json::object();
  for (const auto& [len, list] : ti.phrases_by_length) {
    json arr = json::array();
    for (const auto& pc : list) {
      arr.push_back({{"phrase", pc.text()},
                     {"tokens", pc.tokens},
                     {"score", pc.score},
                     {"doc_ids", pc.source_doc_ids}});
    }
    phrases[std::to_string(len)] = std::move(arr);
  }
  return {{"topic_id", ti.topic_id},
          {"keywords", std::move(kws)},
          {"representative_length", ti.representative_length},
          {"window", ti.window},
          {"phrases", std::move(phrases)},
          {"diagnostics", ti.diagnostics}};
}

TopicInterpretation interpretation_from_json(const json& j) {
  try {
    TopicInterpretation ti;
    ti.topic_id = j.at("topic_id").get<int>();
    for (const auto& kw : j.at("keywords")) {
      ti.unique_keywords.push_back({kw.at(0).get<std::string>(), kw.at(1).get<double>()});
    }
    ti.representative_length = j.at("representative_length").get<std::size_t>();
    ti.window = j.at("window").get<std::set<std::size_t>>();
    for (const auto& [len, arr] : j.at("phrases").items()) {
      auto& bucket = ti.phrases_by_length[std::stoul(len)];
      for (const auto& p : arr) {
        rake::PhraseCandidate pc;
        pc.tokens = p.at("tokens").get<std::vector<std::string>>();
        pc.score = p.at("score").get<double>();
        pc.source_doc_ids = p.at("doc_ids").get<std::set<std::string>>();
        bucket.push_back(std::move(pc));
      }
    }
    ti.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return ti;
  } catch (const std::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("malformed interpretation: ") + e.what());
  }
}

}  // namespace di::interpret
