#pragma once

// Randomized inputs shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

// Up to 20 documents of up to 15 tokens over a small vocabulary that
// includes the stopwords {"the", "of"} and the delimiters {".", "!"}.
inline std::vector<std::vector<std::string>> random_rake_corpus(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h", "the", "of", ".", "!"};
  std::uniform_int_distribution<int> ndocs(1, 20), ntok(0, 15);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::vector<std::vector<std::string>> docs(static_cast<std::size_t>(ndocs(rng)));
  for (auto& d : docs) {
    const int n = ntok(rng);
    for (int i = 0; i < n; ++i) d.push_back(vocab[pick(rng)]);
  }
  return docs;
}

// Random valid UTF-8 assembled from pieces that exercise every
// normalization rule.
inline std::string fuzz_utf8(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "a", "Z", "word", "Hello", "é", "Ω", "ж", "Д", "ب", "مرحبا", "أ", "إ", "آ", "ٱ", "ؤ", "ئ", "ى", "ـ",
      "ً", "ِ", "ٰ", "ؕ", "ٟ", "3", "٣", "2020", " ", "  ", "\t", "\n", ".", "!", "?",
      "،", "؛", "؟", ":", "…", ",", "#", "$", "(", "😀", "👍🏽", "👨‍👩", "️", "‍",
      "http://x.co/a", "https://t.co", "www.site.org", "@user_1", "@", "&amp;", "&#39;", "&", "-", "_", "'",
      "中", " ", " ", "ـمـ"};
  std::uniform_int_distribution<std::size_t> len(0, 12), pick(0, pieces.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += pieces[pick(rng)];
  return s;
}

// The diacritic table: U+0610..061A, U+064B..065F, U+0670 and tatweel.
inline bool is_listed_diacritic(char32_t cp) {
  return (cp >= 0x0610 && cp <= 0x061A) || (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 || cp == 0x0640;
}

// The hamza table sources: أ إ آ ٱ -> ا, ؤ -> و, ئ -> ي.
inline bool is_hamza_source(char32_t cp) {
  return cp == 0x0623 || cp == 0x0625 || cp == 0x0622 || cp == 0x0671 || cp == 0x0624 || cp == 0x0626;
}

}  // namespace fixtures
