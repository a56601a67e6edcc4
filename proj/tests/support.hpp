#pragma once

// Shared helpers for the test executables.

#include <filesystem>
#include <random>
#include <string>

#include "di/error.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("di_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Runs `f`, returning the di::Error it throws (or a kInternal error noting
// that nothing was thrown).
template <typename F>
di::Error catch_error(F&& f) {
  try {
    f();
  } catch (const di::Error& e) {
    return e;
  }
  return di::Error(di::ErrorKind::kInternal, "no error thrown");
}

inline std::filesystem::path data_dir() { return DI_TEST_DATA_DIR; }

}  // namespace testing
