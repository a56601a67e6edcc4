#include "di/report_io.hpp"

#include <cmath>

#include "di/csv.hpp"
#include "di/error.hpp"
#include "di/fsutil.hpp"
#include "di/numfmt.hpp"

namespace di {

namespace fs = std::filesystem;
using nlohmann::json;

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  fail(ErrorKind::kInvalidInput, "unknown report format '" + std::string(name) + "' (expected json|csv)");
}

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::kInvalidInput, "invalid report: " + what);
}

void check_signed_unit(double v, const std::string& what) {
  check(std::isfinite(v), what + " is not finite");
  check(v >= -1.0 && v <= 1.0, what + " outside [-1, 1]");
}

void check_unit(double v, const std::string& what) {
  check(std::isfinite(v), what + " is not finite");
  check(v >= 0.0 && v <= 1.0, what + " outside [0, 1]");
}

}  // namespace

void validate(const AnalysisReport& r) {
  for (const auto& p : r.temporal_series) {
    check_signed_unit(p.sentiment_score, "sentiment score on " + p.date);
    check_unit(p.hate_rate, "hate rate on " + p.date);
    check(p.doc_count >= 0, "negative doc count");
  }
  long long sizes = 0;
  for (const auto& t : r.topic_scores) {
    const auto tag = "topic " + std::to_string(t.topic_id);
    check_signed_unit(t.sentiment_score, tag + " sentiment score");
    check_unit(t.hate_rate, tag + " hate rate");
    sizes += t.size;
  }
  if (!r.topic_scores.empty()) {
    check(sizes + r.diagnostics.outliers == r.diagnostics.corpus_size, "topic sizes + outliers != corpus size");
  }
  check_signed_unit(r.dialect_summary.sentiment_score, "corpus sentiment score");
  check_unit(r.dialect_summary.negative_share, "negative share");
  check_unit(r.dialect_summary.hate_share, "hate share");
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const AnalysisReport& r) {
  json temporal = json::array();
  for (const auto& p : r.temporal_series) {
    temporal.push_back({{"date", p.date}, {"sentiment", p.sentiment_score}, {"hate", p.hate_rate}, {"count", p.doc_count}});
  }
  json topics = json::array();
  for (const auto& t : r.topic_scores) {
    topics.push_back({{"topic_id", t.topic_id},
                      {"label", t.label_phrase},
                      {"sentiment", t.sentiment_score},
                      {"hate", t.hate_rate},
                      {"size", t.size},
                      {"sentiment_predictions", t.sentiment_predictions},
                      {"hate_predictions", t.hate_predictions}});
  }
  const auto& s = r.dialect_summary;
  json summary = {{"corpus", s.corpus},
                  {"dialect", s.dialect},
                  {"documents", s.documents},
                  {"positive", s.positive},
                  {"negative", s.negative},
                  {"hate", s.hate},
                  {"non_hate", s.non_hate},
                  {"sentiment_score", s.sentiment_score},
                  {"negative_share", s.negative_share},
                  {"hate_share", s.hate_share}};
  json words = json::object();
  for (const auto& [cls, list] : r.word_frequencies) {
    json arr = json::array();
    for (const auto& w : list) arr.push_back(json::array({w.token, w.count}));
    words[cls] = std::move(arr);
  }
  return {{"corpus", r.corpus},
          {"temporal_series", std::move(temporal)},
          {"topic_scores", std::move(topics)},
          {"dialect_summary", std::move(summary)},
          {"word_frequencies", std::move(words)},
          {"diagnostics",
           {{"corpus_size", r.diagnostics.corpus_size},
            {"outliers", r.diagnostics.outliers},
            {"undated", r.diagnostics.undated},
            {"unmatched_predictions", r.diagnostics.unmatched_predictions}}}};
}

AnalysisReport report_from_json(const json& j) {
  try {
    AnalysisReport r;
    r.corpus = j.at("corpus").get<std::string>();
    for (const auto& p : j.at("temporal_series")) {
      r.temporal_series.push_back({p.at("date").get<std::string>(), p.at("sentiment").get<double>(),
                                   p.at("hate").get<double>(), p.at("count").get<long long>()});
    }
    for (const auto& t : j.at("topic_scores")) {
      r.topic_scores.push_back({t.at("topic_id").get<int>(), t.at("label").get<std::string>(),
                                t.at("sentiment").get<double>(), t.at("hate").get<double>(),
                                t.at("size").get<long long>(), t.at("sentiment_predictions").get<long long>(),
                                t.at("hate_predictions").get<long long>()});
    }
    const auto& s = j.at("dialect_summary");
    auto& d = r.dialect_summary;
    d.corpus = s.at("corpus").get<std::string>();
    d.dialect = s.at("dialect").get<std::string>();
    d.documents = s.at("documents").get<long long>();
    d.positive = s.at("positive").get<long long>();
    d.negative = s.at("negative").get<long long>();
    d.hate = s.at("hate").get<long long>();
    d.non_hate = s.at("non_hate").get<long long>();
    d.sentiment_score = s.at("sentiment_score").get<double>();
    d.negative_share = s.at("negative_share").get<double>();
    d.hate_share = s.at("hate_share").get<double>();
    for (const auto& [cls, arr] : j.at("word_frequencies").items()) {
      auto& list = r.word_frequencies[cls];
      for (const auto& w : arr) list.push_back({w.at(0).get<std::string>(), w.at(1).get<long long>()});
    }
    const auto& diag = j.at("diagnostics");
    r.diagnostics.corpus_size = diag.at("corpus_size").get<long long>();
    r.diagnostics.outliers = diag.at("outliers").get<long long>();
    r.diagnostics.undated = diag.at("undated").get<long long>();
    r.diagnostics.unmatched_predictions = diag.at("unmatched_predictions").get<long long>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidInput, std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr const char* kWordfreqPrefix = "wordfreq_";

std::vector<csv::Record> read_table(const fs::path& path, const std::vector<std::string>& header) {
  auto records = csv::parse(read_file(path));
  if (records.empty() || records.front().fields != header) {
    fail(ErrorKind::kInvalidInput, path.string() + ": unexpected header", path.string());
  }
  records.erase(records.begin());
  for (const auto& rec : records) {
    if (rec.fields.size() != header.size()) {
      fail(ErrorKind::kInvalidInput, path.string() + ": wrong field count on line " + std::to_string(rec.line),
           path.string());
    }
  }
  return records;
}

}  // namespace

void save_report(const AnalysisReport& r, const fs::path& path, ReportFormat format) {
  validate(r);
  if (format == ReportFormat::kJson) {
    write_file_atomic(path, to_json(r).dump(2) + "\n");
    return;
  }
  const auto& s = r.dialect_summary;
  const auto& d = r.diagnostics;
  std::string summary = "key,value\n";
  auto kv = [&](const std::string& k, const std::string& v) { summary += csv::row({k, v}); };
  kv("corpus", r.corpus);
  kv("summary.corpus", s.corpus);
  kv("summary.dialect", s.dialect);
  kv("summary.documents", std::to_string(s.documents));
  kv("summary.positive", std::to_string(s.positive));
  kv("summary.negative", std::to_string(s.negative));
  kv("summary.hate", std::to_string(s.hate));
  kv("summary.non_hate", std::to_string(s.non_hate));
  kv("summary.sentiment_score", format_double(s.sentiment_score));
  kv("summary.negative_share", format_double(s.negative_share));
  kv("summary.hate_share", format_double(s.hate_share));
  kv("diagnostics.corpus_size", std::to_string(d.corpus_size));
  kv("diagnostics.outliers", std::to_string(d.outliers));
  kv("diagnostics.undated", std::to_string(d.undated));
  kv("diagnostics.unmatched_predictions", std::to_string(d.unmatched_predictions));
  write_file_atomic(path / "summary.csv", summary);

  std::string temporal = "date,sentiment,hate,count\n";
  for (const auto& p : r.temporal_series) {
    temporal += csv::row({p.date, format_double(p.sentiment_score), format_double(p.hate_rate),
                          std::to_string(p.doc_count)});
  }
  write_file_atomic(path / "temporal.csv", temporal);

  std::string topics = "topic_id,label,sentiment,hate,size,sentiment_predictions,hate_predictions\n";
  for (const auto& t : r.topic_scores) {
    topics += csv::row({std::to_string(t.topic_id), t.label_phrase, format_double(t.sentiment_score),
                        format_double(t.hate_rate), std::to_string(t.size), std::to_string(t.sentiment_predictions),
                        std::to_string(t.hate_predictions)});
  }
  write_file_atomic(path / "topics.csv", topics);

  for (const auto& [cls, list] : r.word_frequencies) {
    std::string wf = "token,count\n";
    for (const auto& w : list) wf += csv::row({w.token, std::to_string(w.count)});
    write_file_atomic(path / (kWordfreqPrefix + cls + ".csv"), wf);
  }
}

AnalysisReport load_report(const fs::path& path, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    const std::string text = read_file(path);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorKind::kInvalidInput, path.string() + ": " + e.what(), path.string());
    }
    return report_from_json(j);
  }

  AnalysisReport r;
  std::map<std::string, std::string> kv;
  for (const auto& rec : read_table(path / "summary.csv", {"key", "value"})) kv[rec.fields[0]] = rec.fields[1];
  auto get = [&](const std::string& k) -> const std::string& {
    const auto it = kv.find(k);
    if (it == kv.end()) fail(ErrorKind::kInvalidInput, "summary.csv lacks key '" + k + "'");
    return it->second;
  };
  r.corpus = get("corpus");
  auto& s = r.dialect_summary;
  s.corpus = get("summary.corpus");
  s.dialect = get("summary.dialect");
  s.documents = parse_int(get("summary.documents"));
  s.positive = parse_int(get("summary.positive"));
  s.negative = parse_int(get("summary.negative"));
  s.hate = parse_int(get("summary.hate"));
  s.non_hate = parse_int(get("summary.non_hate"));
  s.sentiment_score = parse_double(get("summary.sentiment_score"));
  s.negative_share = parse_double(get("summary.negative_share"));
  s.hate_share = parse_double(get("summary.hate_share"));
  r.diagnostics.corpus_size = parse_int(get("diagnostics.corpus_size"));
  r.diagnostics.outliers = parse_int(get("diagnostics.outliers"));
  r.diagnostics.undated = parse_int(get("diagnostics.undated"));
  r.diagnostics.unmatched_predictions = parse_int(get("diagnostics.unmatched_predictions"));

  for (const auto& rec : read_table(path / "temporal.csv", {"date", "sentiment", "hate", "count"})) {
    const auto& f = rec.fields;
    r.temporal_series.push_back({f[0], parse_double(f[1]), parse_double(f[2]), parse_int(f[3])});
  }
  for (const auto& rec : read_table(path / "topics.csv", {"topic_id", "label", "sentiment", "hate", "size",
                                                          "sentiment_predictions", "hate_predictions"})) {
    const auto& f = rec.fields;
    r.topic_scores.push_back({static_cast<int>(parse_int(f[0])), f[1], parse_double(f[2]), parse_double(f[3]),
                              parse_int(f[4]), parse_int(f[5]), parse_int(f[6])});
  }
  for (const auto& entry : fs::directory_iterator(path)) {
    const std::string name = entry.path().filename().string();
    if (!name.starts_with(kWordfreqPrefix) || entry.path().extension() != ".csv") continue;
    const std::string cls = entry.path().stem().string().substr(std::string(kWordfreqPrefix).size());
    auto& list = r.word_frequencies[cls];
    for (const auto& rec : read_table(entry.path(), {"token", "count"})) {
      list.push_back({rec.fields[0], parse_int(rec.fields[1])});
    }
  }
  return r;
}

json to_json(const DialectComparison& table) {
  json rows = json::array();
  for (const auto& s : table.rows) {
    rows.push_back({{"corpus", s.corpus},
                    {"dialect", s.dialect},
                    {"documents", s.documents},
                    {"negative_share", s.negative_share},
                    {"hate_share", s.hate_share}});
  }
  json ratios = json::array();
  for (const auto& r : table.ratios) {
    ratios.push_back({{"numerator", r.numerator},
                      {"denominator", r.denominator},
                      {"negative_ratio", r.negative_ratio ? json(*r.negative_ratio) : json(nullptr)},
                      {"hate_ratio", r.hate_ratio ? json(*r.hate_ratio) : json(nullptr)}});
  }
  return {{"rows", std::move(rows)}, {"ratios", std::move(ratios)}};
}

void save_comparison_csv(const DialectComparison& table, const fs::path& path) {
  std::string rows = "corpus,dialect,documents,negative_share,hate_share\n";
  for (const auto& s : table.rows) {
    rows += csv::row({s.corpus, s.dialect, std::to_string(s.documents), format_double(s.negative_share),
                      format_double(s.hate_share)});
  }
  write_file_atomic(path, rows);
  std::string ratios = "numerator,denominator,negative_ratio,hate_ratio\n";
  for (const auto& r : table.ratios) {
    ratios += csv::row({r.numerator, r.denominator, r.negative_ratio ? format_double(*r.negative_ratio) : "",
                        r.hate_ratio ? format_double(*r.hate_ratio) : ""});
  }
  fs::path ratio_path = path;
  ratio_path.replace_filename(path.stem().string() + "_ratios.csv");
  write_file_atomic(ratio_path, ratios);
}

}  // namespace di
