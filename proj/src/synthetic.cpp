#include "di/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "di/error.hpp"

namespace di::synthetic {

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double Sampler::normal(double mean, double sd) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sd * spare_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Sampler::index(std::size_t n) {
  if (n == 0) fail(ErrorKind::kInternal, "Sampler::index on empty range");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n));
}

EmbeddingMatrix gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double sigma,
                               std::uint64_t seed) {
  EmbeddingMatrix m;
  if (centers.empty()) return m;
  m.dim = centers.front().size();
  Sampler s(seed);
  for (std::size_t b = 0; b < centers.size(); ++b) {
    if (centers[b].size() != m.dim) fail(ErrorKind::kInvalidInput, "blob centers differ in dimension");
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (double c : centers[b]) m.values.push_back(s.normal(c, sigma));
      m.doc_ids.push_back("b" + std::to_string(b) + "-" + std::to_string(i));
      ++m.count;
    }
  }
  return m;
}

namespace {

struct BlobVocab {
  std::string dominant;
  std::vector<std::string> pool;  // 8 content words
  std::string stopword;           // splits each sentence into two phrases
  std::string positive;
  std::string negative;
};

const std::vector<BlobVocab>& vocab() {
  static const std::vector<BlobVocab> kVocab{
      {"football",
       {"match", "goal", "stadium", "striker", "league", "referee", "penalty", "keeper"},
       "and",
       "brilliant",
       "awful"},
      {"vaccine",
       {"clinic", "dose", "nurse", "booster", "trial", "pharmacy", "immunity", "appointment"},
       "with",
       "hopeful",
       "scared"},
      {"القطاع",
       {"الاقتصاد", "الاسواق", "الاستثمار", "الشركات", "الصادرات", "البنوك", "التجارة", "المصانع"},
       "في",
       "رائع",
       "سيء"},
  };
  return kVocab;
}

constexpr double kSigma = 0.05;
constexpr double kCenterScale = 3.0;
constexpr double kSignal = 0.1;
constexpr std::size_t kSentimentDim = 3;
constexpr std::size_t kHateDim = 4;

std::string pad3(std::size_t n) {
  std::string s = std::to_string(n);
  return std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

}  // namespace

const std::vector<std::string>& dominant_terms() {
  static const std::vector<std::string> kTerms = [] {
    std::vector<std::string> t;
    for (const auto& v : vocab()) t.push_back(v.dominant);
    return t;
  }();
  return kTerms;
}

Bundle make_bundle(const BundleSpec& spec) {
  using namespace std::chrono;
  Sampler s(spec.seed);
  Bundle out;
  out.corpus.name = spec.name;
  out.embeddings.dim = kDim;

  std::size_t serial = 0;
  auto add_row = [&](const std::vector<double>& center) {
    for (double c : center) out.embeddings.values.push_back(s.normal(c, kSigma));
    out.embeddings.doc_ids.push_back(out.corpus.documents.back().id);
    ++out.embeddings.count;
  };

  for (std::size_t b = 0; b < kBlobs; ++b) {
    const auto& v = vocab()[b];
    for (std::size_t i = 0; i < kDocsPerBlob; ++i) {
      const bool positive = i % 2 == 0;
      const bool hate = i % 3 == 0;

      // Two or three pool words, without repetition.
      std::vector<std::string> pool = v.pool;
      const std::size_t k = 2 + (s.uniform() < 0.5 ? 1 : 0);
      std::vector<std::string> words;
      for (std::size_t w = 0; w < k; ++w) {
        const std::size_t j = s.index(pool.size());
        words.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
      }
      std::string text = v.dominant + " " + words[0] + " " + v.stopword;
      for (std::size_t w = 1; w < words.size(); ++w) text += " " + words[w];
      text += " " + (positive ? v.positive : v.negative) + ".";

      Document d;
      d.id = spec.id_prefix + pad3(++serial);
      d.text = std::move(text);
      d.dialect = spec.dialect;
      if (serial % 9 != 0) {
        const auto date = sys_days{year{2020} / March / 15} + days{(serial * 7) % 5};
        d.timestamp = time_point_cast<seconds>(date + hours{(serial * 5) % 24} + minutes{(serial * 13) % 60});
      }
      if (spec.labelled_task == Task::kSentiment) {
        d.label = positive ? "positive" : "negative";
      } else {
        d.label = hate ? "hate" : "non-hate";
      }
      out.corpus.documents.push_back(std::move(d));

      std::vector<double> center(kDim, 0.0);
      center[b] = kCenterScale;
      center[kSentimentDim] = positive ? kSignal : -kSignal;
      center[kHateDim] = hate ? kSignal : -kSignal;
      add_row(center);
    }
  }

  // Far from every blob and from each other: DBSCAN leaves them unclustered.
  const std::vector<std::string> outlier_text{"weather forecast sunny afternoon.", "train schedule delayed again."};
  for (std::size_t o = 0; o < kOutliers; ++o) {
    Document d;
    d.id = spec.id_prefix + pad3(++serial);
    d.text = outlier_text[o];
    d.dialect = spec.dialect;
    out.corpus.documents.push_back(std::move(d));
    std::vector<double> center(kDim, 0.0);
    center[5 + o] = kCenterScale;
    add_row(center);
  }
  return out;
}

}  // namespace di::synthetic
