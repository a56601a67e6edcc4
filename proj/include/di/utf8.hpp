#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace di::utf8 {

// Decodes UTF-8 into code points. Invalid or truncated sequences are
// skipped byte by byte, so the function is total.
std::vector<char32_t> decode(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

// Number of code points (invalid bytes not counted).
std::size_t length(std::string_view text);

bool is_valid(std::string_view text);

}  // namespace di::utf8
