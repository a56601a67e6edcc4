#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace di::textnorm {

// Topic mode removes stopwords; phrase mode keeps them and also keeps
// sentence punctuation as standalone delimiter tokens for RAKE.
enum class Mode { kTopic, kPhrase };

using StopwordSet = std::set<std::string, std::less<>>;

struct NormalizationConfig {
  Mode mode = Mode::kTopic;
  StopwordSet stopwords;
  bool lowercase = true;
  bool keep_emoji = true;
};

// Throws Error(kInvalidInput) for a topic-mode config without stopwords.
void validate(const NormalizationConfig& config);

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_id;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

struct NoiseOptions {
  bool lowercase = true;
  bool keep_emoji = true;
  // Emit phrase delimiters (see phrase_delimiters()) as separate tokens
  // instead of dropping them with the other symbols. Line breaks become ".".
  bool keep_delimiters = false;
};

// Drops U+0610..U+061A, U+064B..U+065F, U+0670 and tatweel U+0640.
std::string remove_diacritics(std::string_view text);

// أ إ آ ٱ -> ا, ؤ -> و, ئ -> ي. Alef maqsura is left alone.
std::string normalize_hamza(std::string_view text);

// Removes URLs, @-mentions, HTML entities, digits and non-alphabetic
// symbols (emoji survive when keep_emoji), lowercases Latin/Greek/Cyrillic
// letters, and collapses whitespace to single spaces.
std::string strip_noise(std::string_view text, const NoiseOptions& options = {});

// strip_noise -> remove_diacritics -> normalize_hamza -> split on spaces ->
// (topic mode) drop stopwords.
TokenSequence normalize(std::string_view text, const NormalizationConfig& config,
                        std::string source_id = {});

std::string detokenize(const TokenSequence& seq);

// Sentence punctuation used to split RAKE candidates:
// . ! ? ، ؛ ؟ : …
const std::set<std::string, std::less<>>& phrase_delimiters();
bool is_phrase_delimiter(std::string_view token);

// Applies the character-level normalization to one raw stopword entry.
std::vector<std::string> normalize_stopword_entry(std::string_view entry);

// UTF-8, one token per line, '#' starts a comment.
StopwordSet parse_stopwords(std::string_view text);
StopwordSet load_stopwords(const std::filesystem::path& path);

// Union of every *.txt under `dir` (sorted by file name).
StopwordSet load_stopword_dir(const std::filesystem::path& dir);

}  // namespace di::textnorm
