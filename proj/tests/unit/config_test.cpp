#include <doctest.h>

#include <string>

#include "di/config.hpp"
#include "di/fsutil.hpp"
#include "di/hash.hpp"
#include "support.hpp"

using namespace di;
using namespace di::config;

namespace {

RunConfig resolve_flags(const KeyValues& flags, const KeyValues& file = {},
                        const std::optional<std::string>& env = std::nullopt) {
  return resolve(file, flags, env, testing::data_dir());
}

}  // namespace

TEST_CASE("defaults resolve to the documented settings") {
  const auto c = resolve_flags({});
  CHECK(c.tasks == std::vector<Task>{Task::kSentiment, Task::kHate});
  CHECK(c.seed == 42);
  CHECK(c.format == ReportFormat::kJson);
  CHECK(c.topics.reduce_dim == 5);
  CHECK(c.topics.eps == 0.5);
  CHECK(c.topics.min_pts == 5);
  CHECK(c.topics.n_keywords == 5);
  CHECK(c.rake_metric == rake::ScoreMetric::kDegree);
  CHECK(c.max_phrases_per_length == 5);
  CHECK(c.min_phrase_length == 2);
  CHECK(c.train.learning_rate == 1e-4);
  CHECK(c.train.weight_decay == 0.01);
  CHECK(c.split_ratio == 0.8);
  CHECK(c.analysis.top_words == 20);
  CHECK(c.stopwords == (testing::data_dir() / "stopwords").lexically_normal());
  CHECK(c.hash.size() == 64);
  CHECK(c.hash == sha256_hex(c.canonical));
}

TEST_CASE("parse_key_values syntax") {
  const auto kv = parse_key_values("# comment\n\nseed = 7   # trailing\ncluster.eps=0.3\n");
  CHECK(kv == KeyValues{{"seed", "7"}, {"cluster.eps", "0.3"}});

  const auto unknown = testing::catch_error([] { parse_key_values("seed = 1\nbogus = 2\n"); });
  CHECK(unknown.kind() == ErrorKind::kInvalidInput);
  CHECK(std::string(unknown.what()).find("line 2") != std::string::npos);
  CHECK(std::string(unknown.what()).find("bogus") != std::string::npos);

  const auto malformed = testing::catch_error([] { parse_key_values("seed 1\n"); });
  CHECK(std::string(malformed.what()).find("line 1") != std::string::npos);
}

TEST_CASE("precedence is defaults, file, environment, flags") {
  const KeyValues file{{"seed", "7"}, {"cluster.eps", "0.3"}, {"norm.stopwords", "/from/file"}};
  const auto from_file = resolve_flags({}, file);
  CHECK(from_file.seed == 7);
  CHECK(from_file.topics.eps == 0.3);
  CHECK(from_file.stopwords == "/from/file");

  const auto with_env = resolve_flags({}, file, "/from/env");
  CHECK(with_env.stopwords == "/from/env");

  const auto with_flags = resolve_flags({{"seed", "9"}, {"norm.stopwords", "/from/flag"}}, file, "/from/env");
  CHECK(with_flags.seed == 9);
  CHECK(with_flags.topics.eps == 0.3);
  CHECK(with_flags.stopwords == "/from/flag");

  CHECK(resolve_flags({}, {}, "").stopwords == (testing::data_dir() / "stopwords").lexically_normal());
}

TEST_CASE("relative paths in a config file resolve against its directory") {
  testing::TempDir dir;
  std::filesystem::create_directories(dir / "conf");
  write_file_atomic(dir / "conf" / "run.conf", "corpus = a.jsonl, ../b.jsonl\nembeddings = a.demb, /abs/b.demb\n");
  const auto kv = load_key_values(dir / "conf" / "run.conf");
  const auto c = resolve_flags({}, kv);
  REQUIRE(c.corpora.size() == 2);
  CHECK(c.corpora[0] == (dir / "conf" / "a.jsonl").lexically_normal());
  CHECK(c.corpora[1] == (dir / "b.jsonl").lexically_normal());
  CHECK(c.embeddings[1] == "/abs/b.demb");

  const auto e = testing::catch_error([&] {
    write_file_atomic(dir / "bad.conf", "seed = 1\nnope = 1\n");
    load_key_values(dir / "bad.conf");
  });
  CHECK(e.kind() == ErrorKind::kInvalidInput);
  CHECK(std::string(e.what()).find("bad.conf") != std::string::npos);
  CHECK(testing::catch_error([&] { load_key_values(dir / "absent.conf"); }).kind() == ErrorKind::kMissingFile);
}

TEST_CASE("hash ignores spelling and the output directory") {
  const auto a = resolve_flags({{"task", "sentiment, hate"}, {"cluster.eps", "0.50"}, {"out", "one"}});
  const auto b = resolve_flags({{"task", "sentiment,hate"}, {"cluster.eps", "0.5"}, {"out", "two"}});
  CHECK(a.hash == b.hash);
  CHECK(a.canonical == b.canonical);
  CHECK(a.canonical.find("out=") == std::string::npos);
  CHECK(a.canonical.find("task=sentiment,hate\n") != std::string::npos);
}

TEST_CASE("hash changes with any effective parameter") {
  const auto base = resolve_flags({}).hash;
  for (const auto& [k, v] : KeyValues{{"seed", "43"},
                                      {"cluster.eps", "0.25"},
                                      {"topics.n", "6"},
                                      {"rake.metric", "frequency"},
                                      {"train.learning_rate", "0.5"},
                                      {"task", "hate"},
                                      {"analysis.weighting", "confidence"},
                                      {"format", "csv"}}) {
    CHECK_MESSAGE(resolve_flags({{k, v}}).hash != base, k);
  }
}

TEST_CASE("invalid values are rejected") {
  const std::vector<KeyValues> bad{
      {{"bogus", "1"}},
      {{"seed", "-1"}},
      {{"seed", "abc"}},
      {{"cluster.eps", "0"}},
      {{"cluster.min_pts", "0"}},
      {{"topics.coherence_top_m", "1"}},
      {{"interpret.min_length", "1"}},
      {{"train.learning_rate", "0"}},
      {{"train.split_ratio", "0"}},
      {{"train.split_ratio", "1.5"}},
      {{"task", "spam"}},
      {{"task", ""}},
      {{"format", "xml"}},
      {{"rake.metric", "pagerank"}},
      {{"norm.lowercase", "maybe"}},
      {{"analysis.weighting", "mean"}},
      {{"corpus", "a.jsonl"}, {"embeddings", "a.demb, b.demb"}},
      {{"train.hate.corpus", "h.jsonl"}},
  };
  for (const auto& flags : bad) {
    CHECK_MESSAGE(testing::catch_error([&] { resolve_flags(flags); }).kind() == ErrorKind::kInvalidInput,
                  flags.begin()->first);
  }
}

TEST_CASE("per-task training sources") {
  const auto c = resolve_flags({{"train.hate.corpus", "/h.jsonl"}, {"train.hate.embeddings", "/h.demb"}});
  REQUIRE(c.training_sources.contains(Task::kHate));
  CHECK(c.training_sources.at(Task::kHate).corpus == "/h.jsonl");
  CHECK(!c.training_sources.contains(Task::kSentiment));
}

TEST_CASE("split_list trims and drops empty items") {
  CHECK(split_list(" a , b,,c ") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_list("").empty());
}
