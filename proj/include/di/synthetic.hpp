#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "di/corpus_io.hpp"

namespace di::synthetic {

// Portable draws from mt19937_64: the standard distributions are
// implementation-defined, so fixtures built from them would differ
// between standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform();                       // [0, 1)
  double normal(double mean, double sd);  // Box-Muller
  std::size_t index(std::size_t n);       // [0, n)

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// `per_blob` isotropic Gaussian points around each center, blob by blob.
// Row ids are "b<blob>-<index>".
EmbeddingMatrix gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double sigma,
                               std::uint64_t seed);

struct Bundle {
  DocumentSet corpus;
  EmbeddingMatrix embeddings;
};

struct BundleSpec {
  std::string name;
  std::string id_prefix;
  std::string dialect;
  Task labelled_task = Task::kSentiment;  // which label the documents carry
  std::uint64_t seed = 1;
};

// Three vocabulary-distinct topic blobs (20 documents each, embedding dim
// 16, sigma 0.05), plus two far outliers. Dimension 3 carries the
// sentiment direction and dimension 4 the hate direction (+-0.1).
// Timestamps cover 2020-03-15..19 with some documents undated.
Bundle make_bundle(const BundleSpec& spec);

// The dominant term of each blob, present in every one of its documents.
const std::vector<std::string>& dominant_terms();

inline constexpr std::size_t kBlobs = 3;
inline constexpr std::size_t kDocsPerBlob = 20;
inline constexpr std::size_t kOutliers = 2;
inline constexpr std::size_t kDim = 16;

}  // namespace di::synthetic
