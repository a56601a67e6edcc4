// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "count_oracles.hpp"
#include "dbscan_oracle.hpp"
#include "di/analysis.hpp"
#include "di/classify.hpp"
#include "di/cli.hpp"
#include "di/fsutil.hpp"
#include "di/rake.hpp"
#include "di/synthetic.hpp"
#include "di/textnorm.hpp"
#include "di/topic_interpret.hpp"
#include "di/topic_model.hpp"
#include "di/utf8.hpp"
#include "finite_diff.hpp"
#include "fixtures.hpp"
#include "rake_oracle.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace di;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failed expectations for one criterion.
class Expect {
 public:
  void that(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  void within(Clock::time_point start, std::chrono::milliseconds limit, const std::string& what) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    that(ms <= limit, what + " took " + std::to_string(ms.count()) + " ms (limit " +
                          std::to_string(limit.count()) + " ms)");
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    if (count_ > failures_.size()) s += "; +" + std::to_string(count_ - failures_.size()) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<textnorm::TokenSequence> as_docs(const std::vector<std::vector<std::string>>& docs) {
  std::vector<textnorm::TokenSequence> out;
  for (std::size_t i = 0; i < docs.size(); ++i) out.push_back({docs[i], "d" + std::to_string(i)});
  return out;
}

EmbeddingMatrix matrix(const std::vector<std::vector<double>>& rows) {
  EmbeddingMatrix m;
  m.count = rows.size();
  m.dim = rows.empty() ? 0 : rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.values.insert(m.values.end(), rows[i].begin(), rows[i].end());
    m.doc_ids.push_back("r" + std::to_string(i));
  }
  return m;
}

int run_pipeline(const fs::path& out) {
  std::ostringstream sink_out, sink_err;
  return cli::run({"pipeline", "--config", (testing::data_dir() / "synthetic" / "pipeline.conf").string(), "--out",
                   out.string()},
                  sink_out, sink_err);
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return files;
}

// ---------------------------------------------------------------------------

void rake_oracle_equivalence(Expect& x) {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  const rake::TokenSet stop{"the", "of"}, delims{".", "!"};
  for (int trial = 0; trial < 50; ++trial) {
    const auto docs = fixtures::random_rake_corpus(rng);
    for (auto [metric, om] : {std::pair{rake::ScoreMetric::kDegree, oracle::RakeMetric::kDegree},
                              std::pair{rake::ScoreMetric::kFrequency, oracle::RakeMetric::kFrequency},
                              std::pair{rake::ScoreMetric::kDegreeOverFrequency, oracle::RakeMetric::kRatio}}) {
      rake::RakeConfig c;
      c.stopwords = stop;
      c.delimiters = delims;
      c.metric = metric;
      const auto got = rake::rake(as_docs(docs), c);
      const auto want = oracle::rake(docs, {"the", "of"}, {".", "!"}, om);
      x.that(got.size() == want.size(), "trial " + std::to_string(trial) + ": phrase count differs");
      for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
        x.that(got[i].text() == want[i].text && got[i].score == want[i].score,
               "trial " + std::to_string(trial) + " rank " + std::to_string(i) + ": '" + got[i].text() + "' " +
                   fmt(got[i].score) + " vs '" + want[i].text + "' " + fmt(want[i].score));
      }
    }
  }
  x.within(start, std::chrono::seconds(5), "50 corpora");
}

void rake_worked_example(Expect& x) {
  const std::vector<textnorm::TokenSequence> docs{{{"red", "apple", ".", "green", "apple"}, "d0"}};
  rake::RakeConfig c;
  c.delimiters = {"."};
  const auto ranked = rake::rake(docs, c);
  x.that(ranked.size() == 2, "expected two phrases");
  for (const auto& p : ranked) x.that(p.score == 6.0, p.text() + " scored " + fmt(p.score));
  const auto graph = rake::build_cooccurrence(rake::extract_candidates(docs[0].tokens, {}, {"."}));
  for (const auto& [w, s] : rake::word_scores(graph, rake::ScoreMetric::kDegreeOverFrequency)) {
    x.that(s == 2.0, "ratio score of " + w + " is " + fmt(s));
  }
}

void length_window_reproduction(Expect& x) {
  std::vector<rake::PhraseCandidate> phrases;
  for (const auto& [len, n] : std::map<std::size_t, int>{{2, 3}, {3, 7}, {4, 2}, {6, 1}}) {
    for (int i = 0; i < n; ++i) phrases.push_back({std::vector<std::string>(len, "w"), 1.0, {}});
  }
  const auto w = interpret::length_window(phrases);
  x.that(w.representative_length == 3, "modal length " + std::to_string(w.representative_length));
  x.that(w.lengths == std::set<std::size_t>{2, 3, 4}, "window is not {2,3,4}");
}

void ctfidf_oracle(Expect& x) {
  const std::map<int, std::vector<std::string>> classes{{0, {"x", "x", "y"}}, {1, {"y", "y", "z"}}};
  std::map<int, topics::TokenDocs> docs;
  for (const auto& [c, toks] : classes) docs[c] = {toks};
  const auto m = topics::build_ctfidf(docs);
  const std::vector<std::tuple<int, std::string, double>> hand{
      {0, "x", 2 * std::log(2.5)}, {1, "z", std::log(4.0)}, {0, "y", std::log(2.0)}};
  for (const auto& [c, t, v] : hand) {
    x.that(rel_close(m.weight(c, t), v, 1e-9), "weight(" + t + ") = " + fmt(m.weight(c, t)) + ", hand " + fmt(v));
    x.that(rel_close(m.weight(c, t), oracle::ctfidf_weight(classes, c, t), 1e-9), "oracle mismatch for " + t);
  }

  const std::map<int, topics::TokenDocs> base{{0, {{"aa", "bb", "bb"}, {"cc"}}}, {1, {{"bb", "dd", "dd", "dd"}}},
                                              {2, {{"aa", "ee"}}}};
  for (int k : {2, 3, 10}) {
    std::map<int, topics::TokenDocs> scaled;
    for (const auto& [c, d] : base) {
      for (int copy = 0; copy < k; ++copy) scaled[c].insert(scaled[c].end(), d.begin(), d.end());
    }
    const auto a = topics::ctfidf_keywords(base, 10);
    const auto b = topics::ctfidf_keywords(scaled, 10);
    for (const auto& [c, list] : a) {
      std::vector<std::string> ta, tb;
      for (const auto& kw : list) ta.push_back(kw.term);
      for (const auto& kw : b.at(c)) tb.push_back(kw.term);
      x.that(ta == tb, "ranking of class " + std::to_string(c) + " changes at scale " + std::to_string(k));
    }
  }
}

void clustering(Expect& x) {
  const auto start = Clock::now();
  const auto blobs = synthetic::gaussian_blobs({{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {0, 1.5, 0, 0, 0}}, 20, 0.05, 11);
  const auto a = topics::cluster(blobs, 0.3, 4);
  x.that(a.k == 3, "k = " + std::to_string(a.k));
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) wrong += a.labels[i] == static_cast<int>(i / 20) ? 0 : 1;
  x.that(wrong == 0, std::to_string(wrong) + " misassigned points");

  synthetic::Sampler s(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + s.index(200);
    const std::size_t dim = 1 + s.index(4);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    const bool grid = trial % 3 == 0;
    for (auto& p : pts) {
      for (auto& v : p) v = grid ? static_cast<double>(s.index(6)) * 0.25 : s.uniform();
    }
    const double eps = grid ? 0.25 : 0.05 + 0.3 * s.uniform();
    const std::size_t min_pts = 1 + s.index(8);
    x.that(topics::cluster(matrix(pts), eps, min_pts).labels == oracle::dbscan(pts, eps, min_pts),
           "oracle mismatch on corpus " + std::to_string(trial));
  }
  x.within(start, std::chrono::seconds(1), "clustering checks");
}

void coherence_oracle(Expect& x) {
  topics::TokenDocs together(10, {"filler"});
  for (std::size_t d = 0; d < 4; ++d) together[d] = {"w1", "w2"};
  topics::TokenDocs apart(10);
  for (std::size_t d = 0; d < 10; ++d) apart[d] = {d < 5 ? "w1" : "w2"};
  for (const auto& [docs, hand] : {std::pair{together, std::log(5.0 / 4.0)}, std::pair{apart, std::log(1.0 / 5.0)}}) {
    const double got = topics::umass({"w1", "w2"}, topics::DocFrequency(docs)).value;
    x.that(rel_close(got, hand, 1e-9), "umass " + fmt(got) + " vs " + fmt(hand));
    x.that(rel_close(got, oracle::umass_pair(docs, "w2", "w1"), 1e-9), "direct count mismatch");
  }
  x.that(std::abs(std::log(5.0 / 4.0) - 0.2231) < 1e-4 && std::abs(std::log(1.0 / 5.0) + 1.6094) < 1e-4,
         "reference constants");
}

classify::LabeledDataset separable(std::size_t per_blob, std::uint64_t seed) {
  classify::LabeledDataset ds;
  ds.features = synthetic::gaussian_blobs({{-2, 0}, {2, 0}}, per_blob, 0.3, seed);
  for (std::size_t i = 0; i < ds.features.count; ++i) ds.labels.push_back(i < per_blob ? "positive" : "negative");
  return ds;
}

classify::LabeledDataset constant_features(std::size_t n) {
  classify::LabeledDataset ds;
  ds.features.count = n;
  ds.features.dim = 2;
  ds.features.values.assign(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    ds.features.doc_ids.push_back("d" + std::to_string(i));
    ds.labels.push_back(i % 2 == 0 ? "positive" : "negative");
  }
  return ds;
}

void classifier(Expect& x) {
  // Separable blobs.
  const auto [train, val] = classify::split_dataset(separable(40, 21), 0.8, 4);
  classify::TrainConfig c;
  c.learning_rate = 0.5;
  c.max_steps = 500;
  c.eval_every = 25;
  const auto model = classify::train_linear_head(train, val, c);
  x.that(model.val_metrics.accuracy == 1.0, "validation accuracy " + fmt(model.val_metrics.accuracy));
  x.that(model.steps_run <= 500, "ran " + std::to_string(model.steps_run) + " steps");

  // Gradient check.
  synthetic::Sampler s(99);
  const auto ds = separable(6, 5);
  std::vector<int> y;
  for (const auto& l : ds.labels) y.push_back(l == "positive" ? 0 : 1);
  std::vector<std::size_t> rows(ds.features.count);
  std::iota(rows.begin(), rows.end(), 0);
  double worst = 0;
  for (int draw = 0; draw < 10; ++draw) {
    auto m = classify::zero_model(Task::kSentiment, 2);
    for (auto& w : m.weights) w = s.normal(0, 1);
    for (auto& b : m.bias) b = s.normal(0, 1);
    const double wd = 0.01 * draw;
    std::vector<double> gw, gb;
    classify::loss_and_gradient(m, ds.features, y, rows, wd, gw, gb);
    std::vector<double> params = m.weights;
    params.insert(params.end(), m.bias.begin(), m.bias.end());
    const auto numeric = oracle::central_difference(
        [&](const std::vector<double>& p) {
          auto probe = m;
          std::copy(p.begin(), p.begin() + 4, probe.weights.begin());
          std::copy(p.begin() + 4, p.end(), probe.bias.begin());
          return classify::loss(probe, ds.features, y, wd);
        },
        params, 1e-5);
    gw.insert(gw.end(), gb.begin(), gb.end());
    for (std::size_t i = 0; i < gw.size(); ++i) {
      worst = std::max(worst, std::abs(gw[i] - numeric[i]) / std::max({std::abs(gw[i]), std::abs(numeric[i]), 1e-6}));
    }
  }
  x.that(worst < 1e-4, "gradient relative error " + fmt(worst));

  // Split sizes.
  for (const auto& [n, want_train] : std::vector<std::pair<std::size_t, std::size_t>>{{10, 8}, {11023, 8818}}) {
    const auto [tr, va] = classify::split_dataset(constant_features(n), 0.8, 1);
    x.that(tr.features.count == want_train && va.features.count == n - want_train,
           "split of " + std::to_string(n) + " gave " + std::to_string(tr.features.count) + "/" +
               std::to_string(va.features.count));
  }

  // Early stopping on a plateau.
  classify::TrainConfig plateau;
  plateau.learning_rate = 0.1;
  plateau.max_steps = 10000;
  plateau.eval_every = 10;
  plateau.patience = 3;
  const auto flat = classify::train_linear_head(constant_features(20), constant_features(20), plateau);
  x.that(flat.stopped_early && flat.steps_run == plateau.patience * plateau.eval_every,
         "plateau run stopped after " + std::to_string(flat.steps_run) + " steps");
}

void metrics_arithmetic(Expect& x) {
  std::vector<std::string> gold(5, "positive"), pred;
  gold.insert(gold.end(), 5, "negative");
  for (const char* l : {"positive", "positive", "positive", "negative", "negative", "positive", "negative",
                        "negative", "negative", "negative"}) {
    pred.push_back(l);
  }
  const auto m = classify::evaluate_labels({"positive", "negative"}, pred, gold);
  x.that(std::abs(m.precision[0] - 0.75) < 1e-12, "precision " + fmt(m.precision[0]));
  x.that(std::abs(m.recall[0] - 0.60) < 1e-12, "recall " + fmt(m.recall[0]));
  x.that(std::abs(m.f_score[0] - 0.6667) < 1e-4, "F " + fmt(m.f_score[0]));
  x.that(std::abs(m.accuracy - 0.70) < 1e-12, "accuracy " + fmt(m.accuracy));
  const auto p = classify::evaluate_labels({"positive", "negative"}, gold, gold);
  for (std::size_t c = 0; c < 2; ++c) {
    x.that(p.precision[c] == 1.0 && p.recall[c] == 1.0 && p.f_score[c] == 1.0, "perfect predictions below 1.0");
  }
  x.that(p.accuracy == 1.0, "perfect accuracy " + fmt(p.accuracy));
}

void normalization(Expect& x) {
  for (char32_t cp = 0x0600; cp <= 0x06FF; ++cp) {
    std::string s;
    utf8::append(s, cp);
    const bool stripped = textnorm::remove_diacritics(s).empty();
    x.that(stripped == fixtures::is_listed_diacritic(cp), "diacritic table at U+" + std::to_string(cp));
    const bool mapped = textnorm::normalize_hamza(s) != s;
    x.that(mapped == fixtures::is_hamza_source(cp), "hamza table at U+" + std::to_string(cp));
  }
  const std::vector<std::pair<std::string, std::string>> golden{
      {"مُحَمَّد", "محمد"}, {"عـــربي", "عربي"}, {"أحمد", "احمد"}, {"إسلام", "اسلام"}, {"آمن", "امن"},
      {"مؤمن", "مومن"},   {"قائد", "قايد"},  {"ى", "ى"}};
  for (const auto& [in, want] : golden) {
    const auto got = textnorm::normalize_hamza(textnorm::remove_diacritics(in));
    x.that(got == want, in + " -> " + got);
  }

  std::mt19937_64 rng(20240601);
  const textnorm::StopwordSet stop{"the", "في", "word", "."};
  for (int i = 0; i < 1000; ++i) {
    const std::string text = fixtures::fuzz_utf8(rng);
    for (auto mode : {textnorm::Mode::kTopic, textnorm::Mode::kPhrase}) {
      textnorm::NormalizationConfig c;
      c.mode = mode;
      c.stopwords = stop;
      const auto once = textnorm::normalize(text, c);
      x.that(textnorm::normalize(textnorm::detokenize(once), c).tokens == once.tokens,
             "not idempotent on fuzz string " + std::to_string(i));
    }
    const auto d = textnorm::remove_diacritics(text);
    x.that(textnorm::remove_diacritics(d) == d, "diacritic removal not idempotent");
    const auto h = textnorm::normalize_hamza(text);
    x.that(textnorm::normalize_hamza(h) == h, "hamza mapping not idempotent");
  }
}

void analysis_arithmetic(Expect& x) {
  x.that(analysis::hate_rate(18, 100) == 0.18, "hate_rate(18, 100)");
  x.that(analysis::hate_rate(7, 100) == 0.07, "hate_rate(7, 100)");
  const double ratio = analysis::hate_rate(18, 100) / analysis::hate_rate(7, 100);
  x.that(std::abs(ratio - 2.57) < 0.005 && ratio > 2.0, "ratio " + fmt(ratio));

  synthetic::Sampler s(1000);
  for (int i = 0; i < 1000; ++i) {
    const auto a = static_cast<double>(s.index(10000));
    const auto b = static_cast<double>(s.index(10000));
    x.that(analysis::sentiment_score(a, b) == -analysis::sentiment_score(b, a),
           "antisymmetry at (" + fmt(a) + ", " + fmt(b) + ")");
  }

  testing::TempDir one, two;
  x.that(run_pipeline(one.path()) == 0 && run_pipeline(two.path()) == 0, "pipeline failed");
  const auto a = snapshot(one / "analysis");
  const auto b = snapshot(two / "analysis");
  x.that(!a.empty() && a == b, "report bytes differ between seeded runs");
}

void end_to_end(Expect& x) {
  testing::TempDir dir;
  const auto start = Clock::now();
  const int code = run_pipeline(dir.path());
  x.within(start, std::chrono::seconds(30), "pipeline");
  x.that(code == 0, "pipeline exit code " + std::to_string(code));
  if (code != 0) return;

  const auto topics = nlohmann::json::parse(read_file(dir / "topics" / "synthetic.topics.json"));
  x.that(topics.at("k") == 3, "k = " + topics.at("k").dump());
  std::vector<std::string> top;
  for (const auto& t : topics.at("topics")) top.push_back(t.at("keywords").at(0).at(0).get<std::string>());
  x.that(top == synthetic::dominant_terms(), "top-1 keywords differ from the blob-dominant terms");

  const auto interpretations = nlohmann::json::parse(read_file(dir / "interpret" / "synthetic.interpretations.json"));
  x.that(interpretations.size() == 3, "interpretation count");
  for (const auto& ti : interpretations) {
    x.that(!ti.at("phrases").empty(), "topic " + ti.at("topic_id").dump() + " has no phrases");
  }

  for (const char* f : {"summary.csv", "temporal.csv", "topics.csv", "wordfreq_positive.csv", "wordfreq_negative.csv",
                        "wordfreq_hate.csv", "wordfreq_non-hate.csv"}) {
    x.that(fs::exists(dir / "analysis" / "synthetic" / f), std::string("missing ") + f);
  }
  x.that(fs::exists(dir / "analysis" / "dialects.csv"), "missing dialects.csv");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Expect&)>>> criteria{
      {"rake-oracle-equivalence", rake_oracle_equivalence},
      {"rake-worked-example", rake_worked_example},
      {"length-window-reproduction", length_window_reproduction},
      {"ctfidf-oracle", ctfidf_oracle},
      {"clustering", clustering},
      {"coherence-oracle", coherence_oracle},
      {"classifier", classifier},
      {"metrics-arithmetic", metrics_arithmetic},
      {"normalization", normalization},
      {"analysis-arithmetic", analysis_arithmetic},
      {"end-to-end", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Expect x;
    const auto start = Clock::now();
    try {
      check(x);
    } catch (const std::exception& e) {
      x.that(false, std::string("exception: ") + e.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
    if (x.ok()) {
      std::cout << "PASS " << name << " (" << ms << " ms)\n";
    } else {
      ++failed;
      std::cout << "FAIL " << name << " (" << ms << " ms): " << x.summary() << "\n";
    }
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
