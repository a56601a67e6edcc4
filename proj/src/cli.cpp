#include "di/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "di/analysis.hpp"
#include "di/classify.hpp"
#include "di/config.hpp"
#include "di/corpus_io.hpp"
#include "di/error.hpp"
#include "di/fsutil.hpp"
#include "di/hash.hpp"
#include "di/report_io.hpp"
#include "di/textnorm.hpp"
#include "di/topic_interpret.hpp"
#include "di/topic_model.hpp"

#ifndef DI_DATA_DIR
#define DI_DATA_DIR "data"
#endif
#ifndef DI_VERSION
#define DI_VERSION "0.0.0"
#endif

namespace di::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string>& stage_order() {
  static const std::vector<std::string> kStages{"normalize", "topics",   "interpret", "train",
                                                "predict",   "evaluate", "analyze"};
  return kStages;
}

struct Flags {
  std::string config;
  std::vector<std::string> corpora;
  std::vector<std::string> embeddings;
  std::vector<std::string> tasks;
  std::string out;
  std::string seed;
  std::string format;
  std::vector<std::string> sets;
};

config::KeyValues flag_values(const Flags& f) {
  config::KeyValues kv;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(ErrorKind::kInvalidInput, "--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (const auto& i : items) out += (out.empty() ? "" : ",") + i;
    return out;
  };
  if (!f.corpora.empty()) kv["corpus"] = join(f.corpora);
  if (!f.embeddings.empty()) kv["embeddings"] = join(f.embeddings);
  if (!f.tasks.empty()) kv["task"] = join(f.tasks);
  if (!f.out.empty()) kv["out"] = f.out;
  if (!f.seed.empty()) kv["seed"] = f.seed;
  if (!f.format.empty()) kv["format"] = f.format;
  return kv;
}

void require_exists(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) fail(ErrorKind::kMissingFile, what + " not found: " + p.string(), p.string());
}

// Artifacts written by one stage, relative to the output directory.
class Recorder {
 public:
  explicit Recorder(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& rel, std::string_view bytes) {
    write_file_atomic(root_ / rel, bytes);
    artifacts_[rel.generic_string()] = sha256_hex(bytes);
  }
  // For files written by library routines.
  void record(const fs::path& rel) { artifacts_[rel.generic_string()] = sha256_hex(read_file(root_ / rel)); }
  void record_dir(const fs::path& rel) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(root_ / rel)) {
      if (e.is_regular_file()) files.push_back(e.path().filename());
    }
    for (const auto& f : files) record(rel / f);
  }

  const fs::path& root() const { return root_; }
  const std::map<std::string, std::string>& artifacts() const { return artifacts_; }
  void merge(const Recorder& other) {
    for (const auto& [k, v] : other.artifacts_) artifacts_[k] = v;
  }

 private:
  fs::path root_;
  std::map<std::string, std::string> artifacts_;
};

json config_json(const config::RunConfig& c) {
  json j = json::object();
  std::size_t pos = 0;
  const auto& s = c.canonical;
  while (pos < s.size()) {
    const auto nl = s.find('\n', pos);
    const std::string line = s.substr(pos, nl - pos);
    const auto eq = line.find('=');
    j[line.substr(0, eq)] = line.substr(eq + 1);
    pos = nl + 1;
  }
  return j;
}

void write_manifest(const std::string& subcommand, const config::RunConfig& c, Recorder& rec,
                    const json& notes = json::object()) {
  json artifacts = json::array();
  for (const auto& [path, digest] : rec.artifacts()) artifacts.push_back({{"path", path}, {"sha256", digest}});
  json m = {{"subcommand", subcommand},
            {"tool", "dialect_insight"},
            {"version", DI_VERSION},
            {"config_hash", c.hash},
            {"seed", c.seed},
            {"config", config_json(c)},
            {"artifacts", std::move(artifacts)}};
  if (!notes.empty()) m["notes"] = notes;
  write_file_atomic(c.out / "manifests" / (subcommand + ".json"), m.dump(2) + "\n");
}

// Shared state for one invocation: parsed config plus lazily loaded inputs.
class Context {
 public:
  explicit Context(config::RunConfig c) : cfg(std::move(c)) {}

  config::RunConfig cfg;

  textnorm::NormalizationConfig norm(textnorm::Mode mode) {
    if (!stopwords_) {
      require_exists(cfg.stopwords, "stopword list");
      stopwords_ = fs::is_directory(cfg.stopwords) ? textnorm::load_stopword_dir(cfg.stopwords)
                                                   : textnorm::load_stopwords(cfg.stopwords);
    }
    textnorm::NormalizationConfig n;
    n.mode = mode;
    n.stopwords = *stopwords_;
    n.lowercase = cfg.lowercase;
    n.keep_emoji = cfg.keep_emoji;
    return n;
  }

  void require_corpora() {
    if (cfg.corpora.empty()) fail(ErrorKind::kInvalidInput, "no corpus given (--corpus or corpus = ...)");
    std::set<std::string> names;
    for (const auto& p : cfg.corpora) {
      require_exists(p, "corpus");
      if (!names.insert(p.stem().string()).second) {
        fail(ErrorKind::kInvalidInput, "two corpora share the name '" + p.stem().string() + "'", p.string());
      }
    }
  }

  void require_embeddings() {
    require_corpora();
    if (cfg.embeddings.empty()) fail(ErrorKind::kInvalidInput, "no embeddings given (--embeddings or embeddings = ...)");
    for (const auto& p : cfg.embeddings) require_exists(p, "embeddings");
  }

  const DocumentSet& corpus(std::size_t i) {
    auto& slot = corpora_[i];
    if (!slot) slot = load_documents(cfg.corpora[i]);
    return *slot;
  }

  const EmbeddingMatrix& embeddings(std::size_t i) {
    auto& slot = embeddings_[i];
    if (!slot) slot = align_embeddings(load_embeddings(cfg.embeddings[i]), corpus(i));
    return *slot;
  }

  std::string name(std::size_t i) const { return cfg.corpora[i].stem().string(); }

 private:
  std::optional<textnorm::StopwordSet> stopwords_;
  std::map<std::size_t, std::optional<DocumentSet>> corpora_;
  std::map<std::size_t, std::optional<EmbeddingMatrix>> embeddings_;
};

json parse_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, path.string() + ": " + e.what(), path.string());
  }
}

fs::path topics_path(const Context& ctx, std::size_t i) { return fs::path("topics") / (ctx.name(i) + ".topics.json"); }
fs::path assignment_path(const Context& ctx, std::size_t i) {
  return fs::path("topics") / (ctx.name(i) + ".assignment.csv");
}
fs::path interpret_path(const Context& ctx, std::size_t i) {
  return fs::path("interpret") / (ctx.name(i) + ".interpretations.json");
}
fs::path model_path(Task t) { return fs::path("models") / (std::string(to_string(t)) + ".model.json"); }
fs::path predictions_path(const Context& ctx, std::size_t i, Task t) {
  return fs::path("predictions") / (ctx.name(i) + "." + std::string(to_string(t)) + ".csv");
}

void stage_normalize(Context& ctx, Recorder& rec) {
  ctx.require_corpora();
  for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
    for (auto mode : {textnorm::Mode::kTopic, textnorm::Mode::kPhrase}) {
      const auto norm = ctx.norm(mode);
      std::string lines;
      for (const auto& d : ctx.corpus(i).documents) {
        const auto seq = textnorm::normalize(d.text, norm, d.id);
        lines += json{{"id", d.id}, {"tokens", seq.tokens}}.dump() + "\n";
      }
      const std::string suffix = mode == textnorm::Mode::kTopic ? ".topic.jsonl" : ".phrase.jsonl";
      rec.write(fs::path("normalized") / (ctx.name(i) + suffix), lines);
    }
  }
}

void stage_topics(Context& ctx, Recorder& rec) {
  ctx.require_embeddings();
  for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
    const auto result =
        topics::fit_topics(ctx.corpus(i), ctx.embeddings(i), ctx.cfg.topics, ctx.norm(textnorm::Mode::kTopic));
    rec.write(topics_path(ctx, i), to_json(result).dump(2) + "\n");
    rec.write(assignment_path(ctx, i), topics::assignment_to_csv(result.assignment));
  }
}

topics::TopicResult load_topics(Context& ctx, std::size_t i) {
  const fs::path a = ctx.cfg.out / assignment_path(ctx, i);
  const fs::path t = ctx.cfg.out / topics_path(ctx, i);
  require_exists(a, "topic assignment");
  require_exists(t, "topic report");
  const auto assignment = topics::assignment_from_csv(read_file(a));
  return topics::topic_result_from_json(parse_json_file(t), assignment);
}

void stage_interpret(Context& ctx, Recorder& rec) {
  ctx.require_corpora();
  interpret::InterpretConfig ic;
  ic.norm = ctx.norm(textnorm::Mode::kPhrase);
  ic.metric = ctx.cfg.rake_metric;
  ic.max_phrases_per_length = ctx.cfg.max_phrases_per_length;
  ic.min_phrase_length = ctx.cfg.min_phrase_length;
  for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
    const auto result = load_topics(ctx, i);
    const auto interpretations = interpret::interpret_topics(result.topics, ctx.corpus(i), ic);
    json arr = json::array();
    for (const auto& ti : interpretations) arr.push_back(interpret::to_json(ti));
    rec.write(interpret_path(ctx, i), arr.dump(2) + "\n");
  }
}

classify::LabeledDataset concat(std::vector<classify::LabeledDataset> parts, Task task) {
  classify::LabeledDataset out;
  out.task = task;
  for (auto& p : parts) {
    if (p.features.count == 0) continue;
    if (out.features.count == 0) out.features.dim = p.features.dim;
    if (p.features.dim != out.features.dim) fail(ErrorKind::kInvalidInput, "training embeddings differ in dimension");
    out.features.count += p.features.count;
    out.features.values.insert(out.features.values.end(), p.features.values.begin(), p.features.values.end());
    out.features.doc_ids.insert(out.features.doc_ids.end(), p.features.doc_ids.begin(), p.features.doc_ids.end());
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
  }
  return out;
}

json stage_train(Context& ctx, Recorder& rec) {
  json notes = json::object();
  for (Task task : ctx.cfg.tasks) {
    std::vector<classify::LabeledDataset> parts;
    if (const auto it = ctx.cfg.training_sources.find(task); it != ctx.cfg.training_sources.end()) {
      require_exists(it->second.corpus, "training corpus");
      require_exists(it->second.embeddings, "training embeddings");
      const auto docs = load_documents(it->second.corpus);
      const auto emb = align_embeddings(load_embeddings(it->second.embeddings), docs);
      parts.push_back(classify::labeled_from_corpus(docs, emb, task));
    } else {
      ctx.require_embeddings();
      for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
        parts.push_back(classify::labeled_from_corpus(ctx.corpus(i), ctx.embeddings(i), task));
      }
    }
    const auto data = concat(std::move(parts), task);
    if (data.features.count == 0) {
      fail(ErrorKind::kInvalidInput, "no documents labelled for task '" + std::string(to_string(task)) + "'");
    }
    auto [train, val] = classify::split_dataset(data, ctx.cfg.split_ratio, ctx.cfg.seed);
    const auto model = classify::train_linear_head(train, val, ctx.cfg.train);
    rec.write(model_path(task), classify::to_json(model).dump(2) + "\n");
    notes[std::string(to_string(task))] = {{"train_size", train.features.count}, {"val_size", val.features.count}};
  }
  return notes;
}

void stage_predict(Context& ctx, Recorder& rec) {
  ctx.require_embeddings();
  for (Task task : ctx.cfg.tasks) {
    const fs::path mp = ctx.cfg.out / model_path(task);
    require_exists(mp, "model");
    const auto model = classify::model_from_json(parse_json_file(mp));
    if (model.task != task) fail(ErrorKind::kInvalidInput, mp.string() + ": model task mismatch", mp.string());
    for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
      rec.write(predictions_path(ctx, i, task), encode_predictions(classify::predict(model, ctx.embeddings(i))));
    }
  }
}

PredictionSet load_required_predictions(Context& ctx, std::size_t i, Task task) {
  const fs::path p = ctx.cfg.out / predictions_path(ctx, i, task);
  require_exists(p, "predictions file");
  return load_predictions(p, task);
}

json stage_evaluate(Context& ctx, Recorder& rec) {
  ctx.require_corpora();
  json skipped = json::array();
  for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
    for (Task task : ctx.cfg.tasks) {
      const auto preds = load_required_predictions(ctx, i, task);
      std::map<std::string, std::string> gold;
      for (const auto& d : ctx.corpus(i).documents) {
        if (d.label && is_class_of(task, *d.label)) gold[d.id] = *d.label;
      }
      const std::string key = ctx.name(i) + "." + std::string(to_string(task));
      if (gold.empty()) {
        skipped.push_back(key);
        continue;
      }
      PredictionSet scored{task, {}};
      for (const auto& r : preds.records) {
        if (gold.contains(r.doc_id)) scored.records.push_back(r);
      }
      const auto metrics = classify::evaluate(scored, gold);
      rec.write(fs::path("eval") / (key + ".metrics.json"), classify::to_json(metrics).dump(2) + "\n");
    }
  }
  return skipped.empty() ? json::object() : json{{"skipped_without_gold", skipped}};
}

void stage_analyze(Context& ctx, Recorder& rec) {
  ctx.require_corpora();
  const bool want_sentiment =
      std::find(ctx.cfg.tasks.begin(), ctx.cfg.tasks.end(), Task::kSentiment) != ctx.cfg.tasks.end();
  const bool want_hate = std::find(ctx.cfg.tasks.begin(), ctx.cfg.tasks.end(), Task::kHate) != ctx.cfg.tasks.end();
  const auto topic_norm = ctx.norm(textnorm::Mode::kTopic);

  std::vector<AnalysisReport> reports;
  for (std::size_t i = 0; i < ctx.cfg.corpora.size(); ++i) {
    std::optional<PredictionSet> sentiment, hate;
    if (want_sentiment) sentiment = load_required_predictions(ctx, i, Task::kSentiment);
    if (want_hate) hate = load_required_predictions(ctx, i, Task::kHate);

    // Topic artifacts are optional: without them the topic view is empty.
    std::optional<topics::TopicAssignment> assignment;
    std::vector<interpret::TopicInterpretation> interpretations;
    if (fs::exists(ctx.cfg.out / assignment_path(ctx, i))) {
      assignment = topics::assignment_from_csv(read_file(ctx.cfg.out / assignment_path(ctx, i)));
      if (fs::exists(ctx.cfg.out / interpret_path(ctx, i))) {
        for (const auto& j : parse_json_file(ctx.cfg.out / interpret_path(ctx, i))) {
          interpretations.push_back(interpret::interpretation_from_json(j));
        }
      }
    }

    const auto& docs = ctx.corpus(i);
    std::map<std::string, std::vector<std::string>> doc_tokens;
    for (const auto& d : docs.documents) doc_tokens[d.id] = textnorm::normalize(d.text, topic_norm, d.id).tokens;

    analysis::AnalysisInputs in;
    in.corpus = &docs;
    in.sentiment = sentiment ? &*sentiment : nullptr;
    in.hate = hate ? &*hate : nullptr;
    in.assignment = assignment ? &*assignment : nullptr;
    in.interpretations = &interpretations;
    in.doc_tokens = &doc_tokens;
    const auto report = analysis::build_report(in, ctx.cfg.analysis);

    const fs::path dir = fs::path("analysis") / ctx.name(i);
    fs::create_directories(ctx.cfg.out / dir);
    if (ctx.cfg.format == ReportFormat::kJson) {
      save_report(report, ctx.cfg.out / dir / "report.json", ReportFormat::kJson);
    }
    save_report(report, ctx.cfg.out / dir, ReportFormat::kCsv);
    rec.record_dir(dir);
    reports.push_back(report);
  }

  const auto comparison = analysis::dialect_view(reports);
  save_comparison_csv(comparison, ctx.cfg.out / "analysis" / "dialects.csv");
  rec.record("analysis/dialects.csv");
  rec.record("analysis/dialects_ratios.csv");
  rec.write("analysis/dialects.json", to_json(comparison).dump(2) + "\n");
}

json run_stage(const std::string& stage, Context& ctx, Recorder& rec) {
  if (stage == "normalize") stage_normalize(ctx, rec);
  else if (stage == "topics") stage_topics(ctx, rec);
  else if (stage == "interpret") stage_interpret(ctx, rec);
  else if (stage == "train") return stage_train(ctx, rec);
  else if (stage == "predict") stage_predict(ctx, rec);
  else if (stage == "evaluate") return stage_evaluate(ctx, rec);
  else if (stage == "analyze") stage_analyze(ctx, rec);
  else fail(ErrorKind::kInternal, "unknown stage " + stage);
  return json::object();
}

void execute(const std::string& subcommand, const Flags& flags, std::ostream& out) {
  config::KeyValues file_values;
  if (!flags.config.empty()) {
    require_exists(flags.config, "config file");
    file_values = config::load_key_values(flags.config);
  }
  std::optional<std::string> env;
  if (const char* v = std::getenv("DI_STOPWORDS")) env = v;
  Context ctx(config::resolve(file_values, flag_values(flags), env, DI_DATA_DIR));

  if (subcommand != "pipeline") {
    Recorder rec(ctx.cfg.out);
    const json notes = run_stage(subcommand, ctx, rec);
    write_manifest(subcommand, ctx.cfg, rec, notes);
  } else {
    Recorder all(ctx.cfg.out);
    json notes = json::object();
    for (const auto& stage : stage_order()) {
      Recorder rec(ctx.cfg.out);
      const json n = run_stage(stage, ctx, rec);
      write_manifest(stage, ctx.cfg, rec, n);
      if (!n.empty()) notes[stage] = n;
      all.merge(rec);
    }
    write_manifest("pipeline", ctx.cfg, all, notes);
  }
  out << json{{"status", "ok"}, {"subcommand", subcommand}, {"config_hash", ctx.cfg.hash},
              {"out", ctx.cfg.out.string()}}
             .dump()
      << "\n";
}

void report_error(std::ostream& err, const std::string& subcommand, std::string_view kind, const std::string& message,
                  const std::string& path) {
  json e = {{"error", kind}, {"message", message}};
  if (!subcommand.empty()) e["subcommand"] = subcommand;
  if (!path.empty()) e["path"] = path;
  err << e.dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dialectal social-media analytics: topics, interpretation, sentiment and hate analysis", "di"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", DI_VERSION);

  Flags flags;
  const std::map<std::string, std::string> descriptions{
      {"normalize", "write topic- and phrase-mode token files"},
      {"topics", "reduce, cluster and name topics"},
      {"interpret", "extract keyword-anchored phrases per topic"},
      {"train", "train the sentiment / hate classifier heads"},
      {"predict", "write prediction CSVs"},
      {"evaluate", "score predictions against gold labels"},
      {"analyze", "build analysis reports and the dialect comparison"},
      {"pipeline", "run every stage in order"},
  };
  for (const auto& [name, desc] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", flags.config, "key = value config file");
    sub->add_option("--corpus", flags.corpora, "document file (JSONL or CSV); repeatable");
    sub->add_option("--embeddings", flags.embeddings, "DEMB file aligned to each --corpus; repeatable");
    sub->add_option("--task", flags.tasks, "sentiment|hate; repeatable");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "seed for every stochastic step");
    sub->add_option("--format", flags.format, "report format: json|csv");
    sub->add_option("--set", flags.sets, "override any config key: key=value; repeatable");
  }

  std::string subcommand;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    subcommand = app.get_subcommands().front()->get_name();
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "", to_string(ErrorKind::kInvalidInput), e.what(), "");
    return kExitInvalidInput;
  }

  try {
    execute(subcommand, flags, out);
    return kExitOk;
  } catch (const Error& e) {
    report_error(err, subcommand, to_string(e.kind()), e.what(), e.path());
    const bool input = e.kind() == ErrorKind::kInvalidInput || e.kind() == ErrorKind::kMissingFile;
    return input ? kExitInvalidInput : kExitInternal;
  } catch (const std::exception& e) {
    report_error(err, subcommand, to_string(ErrorKind::kInternal), e.what(), "");
    return kExitInternal;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace di::cli
