// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the unit tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "loopmorph/gen.hpp"
#include "loopmorph/parse.hpp"
#include "loopmorph/semantics.hpp"

namespace lmtest {

/// Full MiniC translation unit from globals and the body of main.
inline std::string minic(const std::string& globals, const std::string& main_body) {
  return loopmorph::safe_ops_prelude() + globals + "\n\nint main(void) {\n" + main_body +
         "\n  printf(\"checksum = %llX\\n\", (unsigned long long)lm_checksum);\n  return 0;\n}\n";
}

inline loopmorph::Program program(const std::string& globals, const std::string& main_body) {
  return loopmorph::parse_minic(minic(globals, main_body));
}

inline loopmorph::Program seed_program(std::uint64_t seed) {
  loopmorph::GenConfig cfg;
  cfg.seed = seed;
  return loopmorph::generate_seed(cfg);
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() / ("lm-unit-" + name);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace lmtest
