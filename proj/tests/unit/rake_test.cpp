#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "di/rake.hpp"
#include "fixtures.hpp"
#include "rake_oracle.hpp"
#include "support.hpp"

using namespace di;
using namespace di::rake;

namespace {

std::vector<textnorm::TokenSequence> as_docs(const std::vector<std::vector<std::string>>& docs) {
  std::vector<textnorm::TokenSequence> out;
  for (std::size_t i = 0; i < docs.size(); ++i) out.push_back({docs[i], "d" + std::to_string(i)});
  return out;
}

RakeConfig rake_config(TokenSet stopwords, TokenSet delimiters, ScoreMetric metric = ScoreMetric::kDegree) {
  RakeConfig c;
  c.stopwords = std::move(stopwords);
  c.delimiters = std::move(delimiters);
  c.metric = metric;
  return c;
}

const std::vector<std::vector<std::string>> kApples{{"red", "apple", ".", "green", "apple"}};

}  // namespace

TEST_CASE("extract_candidates examples") {
  CHECK(extract_candidates(kApples[0], {}, {"."}) ==
        std::vector<Phrase>{{"red", "apple"}, {"green", "apple"}});
  CHECK(extract_candidates({"the", "cat"}, {"the"}, {}) == std::vector<Phrase>{{"cat"}});
  CHECK(extract_candidates({"the", "a", "the"}, {"the", "a"}, {}).empty());
  CHECK(extract_candidates({}, {}, {}).empty());
}

TEST_CASE("build_cooccurrence examples") {
  const auto g = build_cooccurrence({{"red", "apple"}, {"green", "apple"}});
  CHECK(g.freq.at("apple") == 2);
  CHECK(g.deg.at("apple") == 4);
  CHECK(g.freq.at("red") == 1);
  CHECK(g.deg.at("red") == 2);
  const auto single = build_cooccurrence({{"cat"}});
  CHECK(single.freq.at("cat") == 1);
  CHECK(single.deg.at("cat") == 1);
  CHECK(build_cooccurrence({}).empty());
}

TEST_CASE("repeated word inside one candidate counts each occurrence") {
  const auto g = build_cooccurrence({{"very", "very", "good"}});
  CHECK(g.freq.at("very") == 2);
  CHECK(g.deg.at("very") == 6);
}

TEST_CASE("word_scores for the three metrics") {
  const auto g = build_cooccurrence({{"red", "apple"}, {"green", "apple"}});
  using M = std::map<std::string, double>;
  CHECK(word_scores(g, ScoreMetric::kDegree) == M{{"apple", 4}, {"green", 2}, {"red", 2}});
  CHECK(word_scores(g, ScoreMetric::kFrequency) == M{{"apple", 2}, {"green", 1}, {"red", 1}});
  CHECK(word_scores(g, ScoreMetric::kDegreeOverFrequency) == M{{"apple", 2.0}, {"green", 2.0}, {"red", 2.0}});
}

TEST_CASE("red apple / green apple ranks with the lexicographic tie-break") {
  const auto ranked = rake::rake(as_docs(kApples), rake_config({}, {"."}));
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].text() == "green apple");
  CHECK(ranked[0].score == 6.0);
  CHECK(ranked[1].text() == "red apple");
  CHECK(ranked[1].score == 6.0);
}

TEST_CASE("single document single word") {
  const auto ranked = rake::rake(as_docs({{"cat"}}), rake_config({}, {}));
  REQUIRE(ranked.size() == 1);
  CHECK(ranked[0].text() == "cat");
  CHECK(ranked[0].score == 1.0);
  CHECK(ranked[0].source_doc_ids == std::set<std::string>{"d0"});
}

TEST_CASE("duplicate phrases merge across documents") {
  const auto ranked = rake::rake(as_docs({{"good", "day"}, {"bad", "."}, {"good", "day"}}), rake_config({}, {"."}));
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].text() == "good day");
  CHECK(ranked[0].score == 8.0);  // deg(good) = deg(day) = 4
  CHECK(ranked[0].source_doc_ids == std::set<std::string>{"d0", "d2"});
}

TEST_CASE("metric names parse and print") {
  for (auto m : {ScoreMetric::kDegree, ScoreMetric::kFrequency, ScoreMetric::kDegreeOverFrequency}) {
    CHECK(parse_metric(to_string(m)) == m);
  }
  CHECK(testing::catch_error([] { parse_metric("tfidf"); }).kind() == ErrorKind::kInvalidInput);
}

TEST_CASE("csv dump") {
  const auto ranked = rake::rake(as_docs(kApples), rake_config({}, {"."}));
  CHECK(to_csv(ranked) == "phrase,length,score,doc_count\ngreen apple,2,6,1\nred apple,2,6,1\n");
}

TEST_CASE("rake equals the brute-force oracle on 50 random corpora") {
  std::mt19937_64 rng(7);
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 50; ++trial) {
    const auto docs = fixtures::random_rake_corpus(rng);
    for (auto [metric, om] : {std::pair{ScoreMetric::kDegree, oracle::RakeMetric::kDegree},
                              std::pair{ScoreMetric::kFrequency, oracle::RakeMetric::kFrequency},
                              std::pair{ScoreMetric::kDegreeOverFrequency, oracle::RakeMetric::kRatio}}) {
      const auto got = rake::rake(as_docs(docs), rake_config({"the", "of"}, {".", "!"}, metric));
      const auto want = oracle::rake(docs, {"the", "of"}, {".", "!"}, om);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].text() == want[i].text);
        CHECK(got[i].score == want[i].score);
      }
    }
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
}

TEST_CASE("rake invariants on random corpora") {
  std::mt19937_64 rng(11);
  const TokenSet stop{"the", "of"};
  const TokenSet delims{".", "!"};
  for (int trial = 0; trial < 50; ++trial) {
    auto docs = fixtures::random_rake_corpus(rng);
    const auto cfg = rake_config(stop, delims);
    const auto ranked = rake::rake(as_docs(docs), cfg);

    std::vector<Phrase> all;
    for (const auto& d : docs) {
      for (auto& c : extract_candidates(d, stop, delims)) all.push_back(c);
    }
    const auto g = build_cooccurrence(all);
    const auto scores = word_scores(g, ScoreMetric::kDegree);
    for (const auto& [w, f] : g.freq) {
      CHECK(g.deg.at(w) >= f);
      const bool only_singletons = std::all_of(all.begin(), all.end(), [&](const Phrase& p) {
        return std::find(p.begin(), p.end(), w) == p.end() || p.size() == 1;
      });
      CHECK((g.deg.at(w) == f) == only_singletons);
    }
    for (const auto& pc : ranked) {
      double sum = 0;
      for (const auto& t : pc.tokens) {
        sum += scores.at(t);
        CHECK_FALSE(stop.contains(t));  // purity
        CHECK_FALSE(delims.contains(t));
      }
      CHECK(pc.score == sum);  // additivity
    }

    // Permutation stability and determinism.
    std::shuffle(docs.begin(), docs.end(), rng);
    auto shuffled = rake::rake(as_docs(docs), cfg);
    REQUIRE(shuffled.size() == ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      CHECK(shuffled[i].text() == ranked[i].text());
      CHECK(shuffled[i].score == ranked[i].score);
    }
    CHECK(to_csv(rake::rake(as_docs(docs), cfg)) == to_csv(shuffled));
  }
}

TEST_CASE("graph merge is the same as pooled construction") {
  const auto a = build_cooccurrence({{"x", "y"}});
  const auto b = build_cooccurrence({{"y"}, {"z", "y", "x"}});
  auto merged = a;
  merged.merge(b);
  const auto pooled = build_cooccurrence({{"x", "y"}, {"y"}, {"z", "y", "x"}});
  CHECK(merged.deg == pooled.deg);
  CHECK(merged.freq == pooled.freq);
}
