#ifndef NYSREG_TESTS_TMPDIR_HPP
#define NYSREG_TESTS_TMPDIR_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace testutil {

/// Scratch directory for files written by a test binary.
inline std::filesystem::path scratch_dir() {
  const char* env = std::getenv("NYSREG_TEST_TMP");
  std::filesystem::path dir = env != nullptr ? env : std::filesystem::temp_directory_path() / "nysreg_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string scratch(const std::string& name) { return (scratch_dir() / name).string(); }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil

#endif  // NYSREG_TESTS_TMPDIR_HPP
