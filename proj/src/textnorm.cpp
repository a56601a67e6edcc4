#include "di/textnorm.hpp"

#include <algorithm>

#include "di/error.hpp"
#include "di/fsutil.hpp"
#include "di/utf8.hpp"

namespace di::textnorm {

namespace {

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool is_tashkeel(char32_t cp) {
  return in(cp, 0x0610, 0x061A) || in(cp, 0x064B, 0x065F) || cp == 0x0670;
}

constexpr char32_t kTatweel = 0x0640;

bool is_letter(char32_t cp) {
  if (in(cp, 'a', 'z') || in(cp, 'A', 'Z')) return true;
  if (in(cp, 0x00C0, 0x024F)) return cp != 0x00D7 && cp != 0x00F7;
  if (in(cp, 0x0386, 0x03FF)) return cp != 0x0387;              // Greek
  if (in(cp, 0x0400, 0x0481) || in(cp, 0x048A, 0x04FF)) return true;  // Cyrillic
  // Arabic letters (excluding punctuation, digits, marks).
  if (in(cp, 0x0620, 0x063F) || in(cp, 0x0641, 0x064A)) return true;
  if (in(cp, 0x066E, 0x066F) || in(cp, 0x0671, 0x06D3) || cp == 0x06D5) return true;
  if (in(cp, 0x06EE, 0x06EF) || in(cp, 0x06FA, 0x06FC) || cp == 0x06FF) return true;
  if (in(cp, 0x0750, 0x077F) || in(cp, 0x08A0, 0x08C9)) return true;
  if (in(cp, 0xFB50, 0xFBB1) || in(cp, 0xFBD3, 0xFD3D) || in(cp, 0xFD50, 0xFDFB)) return true;
  if (in(cp, 0xFE80, 0xFEFC)) return true;
  // Hebrew, CJK, kana, Hangul.
  if (in(cp, 0x05D0, 0x05EA)) return true;
  if (in(cp, 0x3041, 0x30FF) || in(cp, 0x4E00, 0x9FFF) || in(cp, 0xAC00, 0xD7A3)) return true;
  return false;
}

bool is_emoji_base(char32_t cp) {
  return in(cp, 0x1F000, 0x1FAFF) || in(cp, 0x2600, 0x27BF) || in(cp, 0x231A, 0x231B) ||
         in(cp, 0x23E9, 0x23FA) || in(cp, 0x2B05, 0x2B55);
}

// Only meaningful inside an emoji sequence.
bool is_emoji_joiner(char32_t cp) {
  return cp == 0x200D || cp == 0xFE0F || in(cp, 0xE0020, 0xE007F);
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' || cp == '\f' || cp == 0x00A0 ||
         in(cp, 0x2000, 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_line_break(char32_t cp) { return cp == '\n' || cp == '\r' || cp == 0x2028 || cp == 0x2029; }

bool is_delimiter_char(char32_t cp) {
  switch (cp) {
    case '.': case '!': case '?': case ':':
    case 0x060C:  // ،
    case 0x061B:  // ؛
    case 0x061F:  // ؟
    case 0x2026:  // …
      return true;
    default:
      return false;
  }
}

char32_t to_lower(char32_t cp) {
  if (in(cp, 'A', 'Z')) return cp + 0x20;
  if (in(cp, 0x00C0, 0x00DE) && cp != 0x00D7) return cp + 0x20;
  if (in(cp, 0x0391, 0x03AB) && cp != 0x03A2) return cp + 0x20;
  if (in(cp, 0x0410, 0x042F)) return cp + 0x20;
  if (in(cp, 0x0400, 0x040F)) return cp + 0x50;
  return cp;
}

bool is_word_char(char32_t cp) {
  return is_letter(cp) || in(cp, '0', '9') || cp == '_' || is_tashkeel(cp) || cp == kTatweel;
}

bool starts_with_ci(const std::vector<char32_t>& cps, std::size_t at, std::string_view prefix) {
  if (at + prefix.size() > cps.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (to_lower(cps[at + k]) != static_cast<char32_t>(prefix[k])) return false;
  }
  return true;
}

// Length of an HTML entity starting at `at` ("&amp;", "&#39;", "&#x27;"), 0 if none.
std::size_t entity_length(const std::vector<char32_t>& cps, std::size_t at) {
  if (cps[at] != '&') return 0;
  std::size_t j = at + 1;
  if (j < cps.size() && cps[j] == '#') {
    ++j;
    if (j < cps.size() && (cps[j] == 'x' || cps[j] == 'X')) ++j;
    const std::size_t digits_start = j;
    while (j < cps.size() && j - digits_start < 8 &&
           (in(cps[j], '0', '9') || in(cps[j], 'a', 'f') || in(cps[j], 'A', 'F'))) {
      ++j;
    }
    if (j == digits_start) return 0;
  } else {
    const std::size_t name_start = j;
    while (j < cps.size() && j - name_start < 10 && (in(cps[j], 'a', 'z') || in(cps[j], 'A', 'Z'))) ++j;
    if (j - name_start < 2) return 0;
  }
  if (j < cps.size() && cps[j] == ';') return j + 1 - at;
  return 0;
}

}  // namespace

void validate(const NormalizationConfig& config) {
  if (config.mode == Mode::kTopic && config.stopwords.empty()) {
    fail(ErrorKind::kInvalidInput, "topic-mode normalization requires a non-empty stopword set");
  }
}

std::string remove_diacritics(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode(text)) {
    if (is_tashkeel(cp) || cp == kTatweel) continue;
    utf8::append(out, cp);
  }
  return out;
}

std::string normalize_hamza(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : utf8::decode(text)) {
    switch (cp) {
      case 0x0623: case 0x0625: case 0x0622: case 0x0671:
        cp = 0x0627;
        break;
      case 0x0624:
        cp = 0x0648;
        break;
      case 0x0626:
        cp = 0x064A;
        break;
      default:
        break;
    }
    utf8::append(out, cp);
  }
  return out;
}

std::string strip_noise(std::string_view text, const NoiseOptions& options) {
  const std::vector<char32_t> cps = utf8::decode(text);
  std::vector<char32_t> out;
  out.reserve(cps.size());

  enum class Last { kSpace, kWord, kEmoji, kDelimiter };
  Last last = Last::kSpace;
  auto space = [&] {
    if (last != Last::kSpace) {
      out.push_back(' ');
      last = Last::kSpace;
    }
  };
  auto token_start = [&](std::size_t i) { return i == 0 || is_space(cps[i - 1]); };

  for (std::size_t i = 0; i < cps.size();) {
    const char32_t cp = cps[i];

    // URL tokens are dropped up to the next whitespace.
    if (token_start(i) && (starts_with_ci(cps, i, "http://") || starts_with_ci(cps, i, "https://") ||
                           starts_with_ci(cps, i, "www."))) {
      while (i < cps.size() && !is_space(cps[i])) ++i;
      space();
      continue;
    }
    if (cp == '@' && token_start(i)) {
      ++i;
      while (i < cps.size() && is_word_char(cps[i])) ++i;
      space();
      continue;
    }
    if (const std::size_t n = entity_length(cps, i)) {
      i += n;
      space();
      continue;
    }

    if (is_letter(cp) || is_tashkeel(cp) || cp == kTatweel) {
      if (last == Last::kEmoji || last == Last::kDelimiter) space();
      out.push_back(options.lowercase ? to_lower(cp) : cp);
      last = Last::kWord;
    } else if (options.keep_emoji && is_emoji_base(cp)) {
      if (last == Last::kWord || last == Last::kDelimiter) space();
      out.push_back(cp);
      last = Last::kEmoji;
    } else if (options.keep_emoji && is_emoji_joiner(cp) && last == Last::kEmoji) {
      out.push_back(cp);
    } else if (options.keep_delimiters && (is_delimiter_char(cp) || is_line_break(cp))) {
      const char32_t d = is_line_break(cp) ? U'.' : cp;
      if (last != Last::kDelimiter) {
        space();
        out.push_back(d);
        last = Last::kDelimiter;
      }
    } else {
      space();
    }
    ++i;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return utf8::encode(out);
}

TokenSequence normalize(std::string_view text, const NormalizationConfig& config, std::string source_id) {
  NoiseOptions opts;
  opts.lowercase = config.lowercase;
  opts.keep_emoji = config.keep_emoji;
  opts.keep_delimiters = config.mode == Mode::kPhrase;
  const std::string cleaned = normalize_hamza(remove_diacritics(strip_noise(text, opts)));

  TokenSequence seq;
  seq.source_id = std::move(source_id);
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    auto sp = cleaned.find(' ', pos);
    if (sp == std::string::npos) sp = cleaned.size();
    if (sp > pos) {
      std::string tok = cleaned.substr(pos, sp - pos);
      if (config.mode == Mode::kPhrase || !config.stopwords.contains(tok)) seq.tokens.push_back(std::move(tok));
    }
    pos = sp + 1;
  }
  return seq;
}

std::string detokenize(const TokenSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += seq.tokens[i];
  }
  return out;
}

const std::set<std::string, std::less<>>& phrase_delimiters() {
  static const std::set<std::string, std::less<>> delims{".", "!", "?", ":", "،", "؛", "؟", "…"};
  return delims;
}

bool is_phrase_delimiter(std::string_view token) { return phrase_delimiters().contains(token); }

std::vector<std::string> normalize_stopword_entry(std::string_view entry) {
  NormalizationConfig cfg;
  cfg.mode = Mode::kPhrase;
  auto seq = normalize(entry, cfg);
  std::erase_if(seq.tokens, [](const std::string& t) { return is_phrase_delimiter(t); });
  return seq.tokens;
}

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (auto& tok : normalize_stopword_entry(line)) out.insert(std::move(tok));
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) { return parse_stopwords(read_file(path)); }

StopwordSet load_stopword_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    fail(ErrorKind::kMissingFile, "stopword directory not found: " + dir.string(), dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  StopwordSet out;
  for (const auto& f : files) out.merge(load_stopwords(f));
  return out;
}

}  // namespace di::textnorm
