#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace di {

enum class ErrorKind {
  kInvalidInput,  // malformed data, bad config, contract violation by caller
  kMissingFile,
  kIo,            // read/write failure on an existing path
  kNumeric,       // non-finite values produced during computation
  kInternal,
};

std::string_view to_string(ErrorKind kind);

// Single error type thrown by every module. `path` is set when the failure
// is tied to a file so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string path = {})
      : std::runtime_error(message), kind_(kind), path_(std::move(path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorKind kind_;
  std::string path_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              std::string path = {}) {
  throw Error(kind, message, std::move(path));
}

}  // namespace di
