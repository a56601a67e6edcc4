#include "di/corpus_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "di/csv.hpp"
#include "di/error.hpp"
#include "di/fsutil.hpp"
#include "di/numfmt.hpp"

namespace di {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kMissingFile: return "missing_file";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kInternal: return "internal";
  }
  return "internal";
}

std::string_view to_string(Task task) {
  return task == Task::kSentiment ? "sentiment" : "hate";
}

Task parse_task(std::string_view name) {
  if (name == "sentiment") return Task::kSentiment;
  if (name == "hate") return Task::kHate;
  fail(ErrorKind::kInvalidInput, "unknown task '" + std::string(name) + "' (expected sentiment|hate)");
}

const std::vector<std::string>& class_set(Task task) {
  static const std::vector<std::string> sentiment{"positive", "negative"};
  static const std::vector<std::string> hate{"hate", "non-hate"};
  return task == Task::kSentiment ? sentiment : hate;
}

bool is_class_of(Task task, std::string_view label) {
  const auto& cs = class_set(task);
  return std::find(cs.begin(), cs.end(), label) != cs.end();
}

std::unordered_map<std::string, std::size_t> DocumentSet::index() const {
  std::unordered_map<std::string, std::size_t> out;
  out.reserve(documents.size());
  for (std::size_t i = 0; i < documents.size(); ++i) out.emplace(documents[i].id, i);
  return out;
}

// ---------------------------------------------------------------------------
// Timestamps

namespace {

bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  int y, mo, d, h, mi, se;
  const bool shape_ok = text.size() == 20 && text[4] == '-' && text[7] == '-' && text[10] == 'T' &&
                        text[13] == ':' && text[16] == ':' && text[19] == 'Z';
  if (!shape_ok || !parse_fixed_int(text, 0, 4, y) || !parse_fixed_int(text, 5, 2, mo) ||
      !parse_fixed_int(text, 8, 2, d) || !parse_fixed_int(text, 11, 2, h) ||
      !parse_fixed_int(text, 14, 2, mi) || !parse_fixed_int(text, 17, 2, se)) {
    fail(ErrorKind::kInvalidInput, "unparseable timestamp '" + std::string(text) + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 59) {
    fail(ErrorKind::kInvalidInput, "timestamp out of range '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

std::string format_date(Timestamp ts) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(ts)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_start = floor<days>(ts);
  const hh_mm_ss tod{ts - day_start};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()), static_cast<int>(tod.seconds().count()));
  return format_date(ts) + buf;
}

// ---------------------------------------------------------------------------
// Documents

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

class RowErrors {
 public:
  void add(std::size_t line, const std::string& what) {
    lines_.push_back(line);
    msgs_ << (msgs_.tellp() > 0 ? "; " : "") << "line " << line << ": " << what;
  }
  void raise_if_any(const std::string& name) const {
    if (lines_.empty()) return;
    std::ostringstream head;
    head << "malformed rows in " << (name.empty() ? "<input>" : name) << " at lines ";
    for (std::size_t i = 0; i < lines_.size(); ++i) head << (i ? "," : "") << lines_[i];
    fail(ErrorKind::kInvalidInput, head.str() + " (" + msgs_.str() + ")", name);
  }

 private:
  std::vector<std::size_t> lines_;
  std::ostringstream msgs_;
};

// Validates and appends, or records a row error.
void accept_document(Document doc, std::size_t line, std::unordered_map<std::string, std::size_t>& seen,
                     std::vector<Document>& out, RowErrors& errors) {
  if (doc.id.empty()) {
    errors.add(line, "empty id");
    return;
  }
  if (trim(doc.text).empty()) {
    errors.add(line, "empty text for id '" + doc.id + "'");
    return;
  }
  auto [it, inserted] = seen.emplace(doc.id, line);
  if (!inserted) {
    errors.add(line, "duplicate id '" + doc.id + "' (first seen on line " + std::to_string(it->second) + ")");
    return;
  }
  out.push_back(std::move(doc));
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

DocumentSet parse_jsonl(std::string_view text, std::string name) {
  DocumentSet set{std::move(name), {}};
  std::unordered_map<std::string, std::size_t> seen;
  RowErrors errors;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    ++line_no;
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      const json obj = json::parse(line);
      if (!obj.is_object()) throw std::invalid_argument("row is not a JSON object");
      Document doc;
      auto id = optional_string(obj, "id");
      auto txt = optional_string(obj, "text");
      if (!id) throw std::invalid_argument("missing id");
      if (!txt) throw std::invalid_argument("missing text");
      doc.id = *id;
      doc.text = *txt;
      if (auto ts = optional_string(obj, "timestamp")) doc.timestamp = parse_timestamp(*ts);
      doc.dialect = optional_string(obj, "dialect");
      doc.region = optional_string(obj, "region");
      doc.label = optional_string(obj, "label");
      accept_document(std::move(doc), line_no, seen, set.documents, errors);
    } catch (const json::exception& e) {
      errors.add(line_no, std::string("invalid JSON: ") + e.what());
    } catch (const Error& e) {
      errors.add(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      errors.add(line_no, e.what());
    }
  }
  errors.raise_if_any(set.name);
  return set;
}

DocumentSet parse_csv_documents(std::string_view text, std::string name) {
  DocumentSet set{std::move(name), {}};
  const auto records = csv::parse(text);
  if (records.empty()) return set;

  const auto& header = records.front().fields;
  auto column = [&](std::string_view key) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == key) return i;
    }
    return std::nullopt;
  };
  const auto id_col = column("id");
  const auto text_col = column("text");
  if (!id_col || !text_col) {
    fail(ErrorKind::kInvalidInput, "CSV header must contain 'id' and 'text' columns", set.name);
  }
  const auto ts_col = column("timestamp");
  const auto dialect_col = column("dialect");
  const auto region_col = column("region");
  const auto label_col = column("label");

  std::unordered_map<std::string, std::size_t> seen;
  RowErrors errors;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      errors.add(rec.line, "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(rec.fields.size()));
      continue;
    }
    auto opt = [&](std::optional<std::size_t> col) -> std::optional<std::string> {
      if (!col || rec.fields[*col].empty()) return std::nullopt;
      return rec.fields[*col];
    };
    try {
      Document doc;
      doc.id = rec.fields[*id_col];
      doc.text = rec.fields[*text_col];
      if (auto ts = opt(ts_col)) doc.timestamp = parse_timestamp(*ts);
      doc.dialect = opt(dialect_col);
      doc.region = opt(region_col);
      doc.label = opt(label_col);
      accept_document(std::move(doc), rec.line, seen, set.documents, errors);
    } catch (const Error& e) {
      errors.add(rec.line, e.what());
    }
  }
  errors.raise_if_any(set.name);
  return set;
}

}  // namespace

DocumentSet parse_documents(std::string_view text, DocumentFormat format, std::string name) {
  return format == DocumentFormat::kJsonl ? parse_jsonl(text, std::move(name))
                                          : parse_csv_documents(text, std::move(name));
}

DocumentSet load_documents(const fs::path& path, DocumentFormat format) {
  const std::string bytes = read_file(path);
  try {
    return parse_documents(bytes, format, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what(), path.string());
  }
}

DocumentSet load_documents(const fs::path& path) {
  const auto ext = path.extension().string();
  return load_documents(path, ext == ".csv" ? DocumentFormat::kCsv : DocumentFormat::kJsonl);
}

void save_documents(const DocumentSet& docs, const fs::path& path, DocumentFormat format) {
  std::string out;
  if (format == DocumentFormat::kJsonl) {
    for (const auto& d : docs.documents) {
      json obj = {{"id", d.id}, {"text", d.text}};
      if (d.timestamp) obj["timestamp"] = format_timestamp(*d.timestamp);
      if (d.dialect) obj["dialect"] = *d.dialect;
      if (d.region) obj["region"] = *d.region;
      if (d.label) obj["label"] = *d.label;
      out += obj.dump();
      out.push_back('\n');
    }
  } else {
    out += csv::row({"id", "text", "timestamp", "dialect", "region", "label"});
    for (const auto& d : docs.documents) {
      out += csv::row({d.id, d.text, d.timestamp ? format_timestamp(*d.timestamp) : "",
                       d.dialect.value_or(""), d.region.value_or(""), d.label.value_or("")});
    }
  }
  write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// Embeddings

void validate(const EmbeddingMatrix& m) {
  if (m.dim == 0) fail(ErrorKind::kInvalidInput, "embedding dim must be positive");
  if (m.values.size() != m.count * m.dim) {
    fail(ErrorKind::kInvalidInput, "embedding value count does not match count*dim");
  }
  if (m.doc_ids.size() != m.count) fail(ErrorKind::kInvalidInput, "embedding doc_ids not aligned to rows");
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (!std::isfinite(m.values[i])) {
      fail(ErrorKind::kInvalidInput, "non-finite embedding value at row " + std::to_string(i / m.dim));
    }
  }
}

namespace {

constexpr char kMagic[4] = {'D', 'E', 'M', 'B'};
constexpr std::uint8_t kVersion = 0x01;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  bool has(std::size_t n) const { return bytes_.size() - pos_ >= n; }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (!has(n)) fail(ErrorKind::kInvalidInput, "truncated payload");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_embeddings(const EmbeddingMatrix& m) {
  validate(m);
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  put_u32(out, static_cast<std::uint32_t>(m.count));
  put_u32(out, static_cast<std::uint32_t>(m.dim));
  for (double v : m.values) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) fail(ErrorKind::kInvalidInput, "embedding value overflows float32");
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  for (const auto& id : m.doc_ids) {
    put_u32(out, static_cast<std::uint32_t>(id.size()));
    out += id;
  }
  return out;
}

EmbeddingMatrix decode_embeddings(std::string_view bytes) {
  Reader r(bytes);
  if (!r.has(5) || std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorKind::kInvalidInput, "bad magic");
  r.take(4);
  const auto version = static_cast<std::uint8_t>(r.take(1)[0]);
  if (version != kVersion) {
    fail(ErrorKind::kInvalidInput, "unsupported version " + std::to_string(version));
  }
  EmbeddingMatrix m;
  m.count = r.u32();
  m.dim = r.u32();
  if (m.dim == 0) fail(ErrorKind::kInvalidInput, "embedding dim must be positive");
  const std::uint64_t n = static_cast<std::uint64_t>(m.count) * m.dim;
  if (!r.has(n * 4)) fail(ErrorKind::kInvalidInput, "truncated payload");
  m.values.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const float f = std::bit_cast<float>(r.u32());
    if (!std::isfinite(f)) {
      fail(ErrorKind::kInvalidInput, "non-finite value at row " + std::to_string(i / m.dim));
    }
    m.values[i] = f;
  }
  m.doc_ids.reserve(m.count);
  for (std::size_t i = 0; i < m.count; ++i) {
    const auto len = r.u32();
    m.doc_ids.emplace_back(r.take(len));
  }
  if (r.remaining() != 0) fail(ErrorKind::kInvalidInput, "trailing bytes after payload");
  return m;
}

EmbeddingMatrix load_embeddings(const fs::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_embeddings(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what(), path.string());
  }
}

void save_embeddings(const EmbeddingMatrix& m, const fs::path& path) {
  write_file_atomic(path, encode_embeddings(m));
}

EmbeddingMatrix align_embeddings(const EmbeddingMatrix& m, const DocumentSet& docs) {
  std::unordered_map<std::string_view, std::size_t> rows;
  for (std::size_t i = 0; i < m.count; ++i) rows.emplace(m.doc_ids[i], i);
  EmbeddingMatrix out;
  out.dim = m.dim;
  out.count = docs.size();
  out.values.reserve(out.count * out.dim);
  for (const auto& d : docs.documents) {
    auto it = rows.find(d.id);
    if (it == rows.end()) {
      fail(ErrorKind::kInvalidInput, "no embedding row for document '" + d.id + "'");
    }
    const auto r = m.row(it->second);
    out.values.insert(out.values.end(), r.begin(), r.end());
    out.doc_ids.push_back(d.id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Predictions

void validate(const PredictionSet& p) {
  std::unordered_set<std::string_view> ids;
  for (const auto& rec : p.records) {
    if (rec.doc_id.empty()) fail(ErrorKind::kInvalidInput, "prediction with empty doc_id");
    if (!ids.insert(rec.doc_id).second) {
      fail(ErrorKind::kInvalidInput, "duplicate prediction for '" + rec.doc_id + "'");
    }
    if (!is_class_of(p.task, rec.label)) {
      fail(ErrorKind::kInvalidInput, "label '" + rec.label + "' is not a " + std::string(to_string(p.task)) +
                                         " class");
    }
    if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0)) {
      fail(ErrorKind::kInvalidInput, "confidence out of [0,1] for '" + rec.doc_id + "'");
    }
  }
}

PredictionSet parse_predictions(std::string_view text, Task task) {
  const auto records = csv::parse(text);
  if (records.empty() || records.front().fields != std::vector<std::string>{"doc_id", "label", "confidence"}) {
    fail(ErrorKind::kInvalidInput, "prediction CSV must start with header doc_id,label,confidence");
  }
  PredictionSet p{task, {}};
  RowErrors errors;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    if (f.size() != 3) {
      errors.add(records[r].line, "expected 3 fields");
      continue;
    }
    double conf = 0;
    const auto* end = f[2].data() + f[2].size();
    auto [ptr, ec] = std::from_chars(f[2].data(), end, conf);
    if (ec != std::errc{} || ptr != end) {
      errors.add(records[r].line, "bad confidence '" + f[2] + "'");
      continue;
    }
    p.records.push_back({f[0], f[1], conf});
  }
  errors.raise_if_any({});
  validate(p);
  return p;
}

std::string encode_predictions(const PredictionSet& p) {
  validate(p);
  std::string out = "doc_id,label,confidence\n";
  for (const auto& rec : p.records) out += csv::row({rec.doc_id, rec.label, format_double(rec.confidence)});
  return out;
}

PredictionSet load_predictions(const fs::path& path, Task task) {
  const std::string bytes = read_file(path);
  try {
    return parse_predictions(bytes, task);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what(), path.string());
  }
}

void save_predictions(const PredictionSet& p, const fs::path& path) {
  write_file_atomic(path, encode_predictions(p));
}

}  // namespace di
