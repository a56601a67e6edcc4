#include "di/config.hpp"

#include <set>

#include "di/error.hpp"
#include "di/fsutil.hpp"
#include "di/hash.hpp"
#include "di/numfmt.hpp"

namespace di::config {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

const std::set<std::string, std::less<>>& path_keys() {
  static const std::set<std::string, std::less<>> keys{
      "corpus", "embeddings", "out", "norm.stopwords", "train.sentiment.corpus", "train.sentiment.embeddings",
      "train.hate.corpus", "train.hate.embeddings"};
  return keys;
}

std::string resolve_paths(const std::string& key, const std::string& value, const fs::path& base) {
  if (!is_path_key(key) || value.empty()) return value;
  std::string out;
  for (const auto& item : split_list(value)) {
    fs::path p(item);
    if (p.is_relative() && !base.empty()) p = base / p;
    if (!out.empty()) out += ",";
    out += p.lexically_normal().string();
  }
  return out;
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::kInvalidInput, "config key '" + key + "': expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    auto comma = value.find(',', pos);
    if (comma == std::string_view::npos) comma = value.size();
    const auto item = trim(value.substr(pos, comma - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = comma + 1;
  }
  return out;
}

const KeyValues& defaults() {
  static const KeyValues kDefaults{
      {"corpus", ""},
      {"embeddings", ""},
      {"task", "sentiment,hate"},
      {"out", "out"},
      {"seed", "42"},
      {"format", "json"},
      {"norm.lowercase", "true"},
      {"norm.keep_emoji", "true"},
      {"norm.stopwords", ""},
      {"reduce.dim", "5"},
      {"cluster.eps", "0.5"},
      {"cluster.min_pts", "5"},
      {"topics.n", "5"},
      {"topics.coherence_top_m", "5"},
      {"rake.metric", "degree"},
      {"interpret.max_phrases", "5"},
      {"interpret.min_length", "2"},
      {"train.learning_rate", "0.0001"},
      {"train.weight_decay", "0.01"},
      {"train.warmup_steps", "-1"},
      {"train.max_steps", "1000"},
      {"train.eval_every", "100"},
      {"train.patience", "5"},
      {"train.batch_size", "0"},
      {"train.split_ratio", "0.8"},
      {"train.sentiment.corpus", ""},
      {"train.sentiment.embeddings", ""},
      {"train.hate.corpus", ""},
      {"train.hate.embeddings", ""},
      {"analysis.top_words", "20"},
      {"analysis.weighting", "counts"},
  };
  return kDefaults;
}

bool is_known_key(std::string_view key) { return defaults().contains(std::string(key)); }
bool is_path_key(std::string_view key) { return path_keys().contains(key); }

KeyValues parse_key_values(std::string_view text, const fs::path& base_dir) {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::kInvalidInput, "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!is_known_key(key)) {
      fail(ErrorKind::kInvalidInput, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    out[key] = resolve_paths(key, value, base_dir);
  }
  return out;
}

KeyValues load_key_values(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_key_values(text, fs::absolute(path).parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what(), path.string());
  }
}

RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values,
                  const std::optional<std::string>& stopwords_env, const fs::path& data_dir) {
  KeyValues kv = defaults();
  for (const auto& [k, v] : file_values) {
    if (!is_known_key(k)) fail(ErrorKind::kInvalidInput, "unknown config key '" + k + "'");
    kv[k] = v;
  }
  if (stopwords_env && !stopwords_env->empty()) kv["norm.stopwords"] = *stopwords_env;
  for (const auto& [k, v] : flag_values) {
    if (!is_known_key(k)) fail(ErrorKind::kInvalidInput, "unknown config key '" + k + "'");
    kv[k] = v;
  }
  if (kv["norm.stopwords"].empty()) kv["norm.stopwords"] = (data_dir / "stopwords").string();

  // Absolute, normalized paths make the canonical form independent of cwd.
  for (auto& [k, v] : kv) {
    if (!is_path_key(k) || v.empty()) continue;
    std::string joined;
    for (const auto& item : split_list(v)) {
      if (!joined.empty()) joined += ",";
      joined += fs::absolute(item).lexically_normal().string();
    }
    v = joined;
  }

  auto num = [&](const char* key) {
    try {
      return parse_double(kv.at(key));
    } catch (const Error&) {
      fail(ErrorKind::kInvalidInput, std::string("config key '") + key + "': expected a number");
    }
  };
  auto integer = [&](const char* key) {
    try {
      return parse_int(kv.at(key));
    } catch (const Error&) {
      fail(ErrorKind::kInvalidInput, std::string("config key '") + key + "': expected an integer");
    }
  };
  auto count = [&](const char* key) {
    const long long v = integer(key);
    if (v < 0) fail(ErrorKind::kInvalidInput, std::string("config key '") + key + "' must be >= 0");
    return static_cast<std::size_t>(v);
  };

  RunConfig c;
  for (const auto& p : split_list(kv["corpus"])) c.corpora.emplace_back(p);
  for (const auto& p : split_list(kv["embeddings"])) c.embeddings.emplace_back(p);
  if (!c.embeddings.empty() && c.embeddings.size() != c.corpora.size()) {
    fail(ErrorKind::kInvalidInput, "embeddings must list one file per corpus");
  }
  for (const auto& t : split_list(kv["task"])) {
    const Task task = parse_task(t);
    if (std::find(c.tasks.begin(), c.tasks.end(), task) == c.tasks.end()) c.tasks.push_back(task);
  }
  if (c.tasks.empty()) fail(ErrorKind::kInvalidInput, "at least one task is required");
  c.out = kv["out"];
  const long long seed = integer("seed");
  if (seed < 0) fail(ErrorKind::kInvalidInput, "seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.format = parse_report_format(kv["format"]);

  c.lowercase = parse_bool("norm.lowercase", kv["norm.lowercase"]);
  c.keep_emoji = parse_bool("norm.keep_emoji", kv["norm.keep_emoji"]);
  c.stopwords = kv["norm.stopwords"];

  c.topics.reduce_dim = count("reduce.dim");
  c.topics.eps = num("cluster.eps");
  c.topics.min_pts = count("cluster.min_pts");
  c.topics.n_keywords = count("topics.n");
  c.topics.coherence_top_m = count("topics.coherence_top_m");
  c.topics.seed = c.seed;
  topics::validate(c.topics);

  c.rake_metric = rake::parse_metric(kv["rake.metric"]);
  c.max_phrases_per_length = count("interpret.max_phrases");
  c.min_phrase_length = count("interpret.min_length");
  if (c.max_phrases_per_length < 1) fail(ErrorKind::kInvalidInput, "interpret.max_phrases must be >= 1");
  if (c.min_phrase_length < 2) fail(ErrorKind::kInvalidInput, "interpret.min_length must be >= 2");

  c.train.learning_rate = num("train.learning_rate");
  c.train.weight_decay = num("train.weight_decay");
  c.train.warmup_steps = integer("train.warmup_steps");
  c.train.max_steps = integer("train.max_steps");
  c.train.eval_every = integer("train.eval_every");
  c.train.patience = static_cast<int>(integer("train.patience"));
  c.train.batch_size = count("train.batch_size");
  c.train.seed = c.seed;
  classify::validate(c.train);
  c.split_ratio = num("train.split_ratio");
  if (!(c.split_ratio > 0.0 && c.split_ratio <= 1.0)) {
    fail(ErrorKind::kInvalidInput, "train.split_ratio must be in (0, 1]");
  }
  for (Task t : {Task::kSentiment, Task::kHate}) {
    const std::string prefix = "train." + std::string(to_string(t));
    const auto& corpus = kv[prefix + ".corpus"];
    const auto& emb = kv[prefix + ".embeddings"];
    if (corpus.empty() != emb.empty()) {
      fail(ErrorKind::kInvalidInput, prefix + ".corpus and " + prefix + ".embeddings must be set together");
    }
    if (!corpus.empty()) c.training_sources[t] = {corpus, emb};
  }

  c.analysis.top_words = count("analysis.top_words");
  const auto& weighting = kv["analysis.weighting"];
  if (weighting == "counts") {
    c.analysis.weighting = analysis::Weighting::kCounts;
  } else if (weighting == "confidence") {
    c.analysis.weighting = analysis::Weighting::kConfidence;
  } else {
    fail(ErrorKind::kInvalidInput, "analysis.weighting must be counts|confidence");
  }

  // Canonical spellings, so equal effective settings hash equally.
  auto join = [](const auto& items, auto&& fmt) {
    std::string out;
    for (const auto& i : items) out += (out.empty() ? "" : ",") + fmt(i);
    return out;
  };
  auto path_str = [](const fs::path& p) { return p.string(); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  kv["corpus"] = join(c.corpora, path_str);
  kv["embeddings"] = join(c.embeddings, path_str);
  kv["task"] = join(c.tasks, [](Task t) { return std::string(to_string(t)); });
  kv["seed"] = std::to_string(c.seed);
  kv["norm.lowercase"] = flag(c.lowercase);
  kv["norm.keep_emoji"] = flag(c.keep_emoji);
  kv["reduce.dim"] = std::to_string(c.topics.reduce_dim);
  kv["cluster.eps"] = format_double(c.topics.eps);
  kv["cluster.min_pts"] = std::to_string(c.topics.min_pts);
  kv["topics.n"] = std::to_string(c.topics.n_keywords);
  kv["topics.coherence_top_m"] = std::to_string(c.topics.coherence_top_m);
  kv["interpret.max_phrases"] = std::to_string(c.max_phrases_per_length);
  kv["interpret.min_length"] = std::to_string(c.min_phrase_length);
  kv["train.learning_rate"] = format_double(c.train.learning_rate);
  kv["train.weight_decay"] = format_double(c.train.weight_decay);
  kv["train.warmup_steps"] = std::to_string(c.train.warmup_steps);
  kv["train.max_steps"] = std::to_string(c.train.max_steps);
  kv["train.eval_every"] = std::to_string(c.train.eval_every);
  kv["train.patience"] = std::to_string(c.train.patience);
  kv["train.batch_size"] = std::to_string(c.train.batch_size);
  kv["train.split_ratio"] = format_double(c.split_ratio);
  kv["analysis.top_words"] = std::to_string(c.analysis.top_words);
  for (const auto& [k, v] : kv) {
    if (k == "out") continue;
    c.canonical += k + "=" + v + "\n";
  }
  c.hash = sha256_hex(c.canonical);
  return c;
}

}  // namespace di::config
