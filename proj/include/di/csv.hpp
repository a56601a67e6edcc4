#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace di::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Accepts LF or CRLF. Blank lines are skipped. Throws
// Error(kInvalidInput) on an unterminated quote.
std::vector<Record> parse(std::string_view text);

std::string escape(std::string_view field);

// Joins escaped fields with commas and terminates with '\n'.
std::string row(const std::vector<std::string>& fields);

}  // namespace di::csv
