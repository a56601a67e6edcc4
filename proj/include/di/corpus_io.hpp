#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace di {

using Timestamp = std::chrono::sys_seconds;

enum class Task { kSentiment, kHate };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

// Sentiment: {"positive", "negative"}; hate: {"hate", "non-hate"}.
const std::vector<std::string>& class_set(Task task);
bool is_class_of(Task task, std::string_view label);

struct Document {
  std::string id;
  std::string text;
  std::optional<Timestamp> timestamp;
  std::optional<std::string> dialect;
  std::optional<std::string> region;
  std::optional<std::string> label;

  friend bool operator==(const Document&, const Document&) = default;
};

struct DocumentSet {
  std::string name;
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }

  // id -> row index
  std::unordered_map<std::string, std::size_t> index() const;

  friend bool operator==(const DocumentSet&, const DocumentSet&) = default;
};

// Row-major dense matrix. Values are held in double; the on-disk format is
// float32, so values loaded from disk round-trip exactly.
struct EmbeddingMatrix {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<std::string> doc_ids;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;
};

// Throws Error(kInvalidInput) when shape, id alignment or finiteness is broken.
void validate(const EmbeddingMatrix& m);

struct PredictionRecord {
  std::string doc_id;
  std::string label;
  double confidence = 0.0;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct PredictionSet {
  Task task = Task::kSentiment;
  std::vector<PredictionRecord> records;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

void validate(const PredictionSet& p);

enum class DocumentFormat { kJsonl, kCsv };

// Strict "YYYY-MM-DDTHH:MM:SSZ".
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);
std::string format_date(Timestamp ts);  // YYYY-MM-DD (UTC)

// All malformed rows are collected and reported together in one error
// whose message lists their line numbers. The corpus name is the file stem.
DocumentSet load_documents(const std::filesystem::path& path, DocumentFormat format);
DocumentSet load_documents(const std::filesystem::path& path);  // by extension
DocumentSet parse_documents(std::string_view text, DocumentFormat format, std::string name = {});
void save_documents(const DocumentSet& docs, const std::filesystem::path& path,
                    DocumentFormat format = DocumentFormat::kJsonl);

// DEMB binary format: "DEMB", 0x01, u32 count, u32 dim, count*dim float32,
// then count length-prefixed (u32) UTF-8 ids. All little-endian.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
EmbeddingMatrix decode_embeddings(std::string_view bytes);
std::string encode_embeddings(const EmbeddingMatrix& m);
void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);

// CSV with header "doc_id,label,confidence".
PredictionSet load_predictions(const std::filesystem::path& path, Task task);
PredictionSet parse_predictions(std::string_view text, Task task);
std::string encode_predictions(const PredictionSet& p);
void save_predictions(const PredictionSet& p, const std::filesystem::path& path);

// Reorders `m` so that row i belongs to docs.documents[i]. Throws when a
// document has no row.
EmbeddingMatrix align_embeddings(const EmbeddingMatrix& m, const DocumentSet& docs);

}  // namespace di
