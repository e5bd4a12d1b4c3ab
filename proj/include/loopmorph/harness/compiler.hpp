// SPDX-License-Identifier: Apache-2.0
//
// Compiler invocation and binary execution with timeouts. Executables named
// "builtin:<backend>" are in-process reference backends (see backend.hpp).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace loopmorph {

struct CompilerSpec {
  std::string id;
  std::string executable;
  std::vector<std::string> base_flags;
  std::vector<std::string> flag_pool;
  int timeout_compile = 30;  // seconds
  int timeout_run = 10;      // seconds

  bool is_builtin() const { return executable.starts_with("builtin:"); }
};

nlohmann::json to_json(const CompilerSpec& cc);
CompilerSpec compiler_from_json(const nlohmann::json& j);

/// Resolves `executable` to an absolute path (builtins resolve to
/// themselves). Throws ToolNotFound.
std::string resolve_executable(const CompilerSpec& cc);

enum class OptLevel : std::uint8_t { O0, O1, O2, O3, Os };
inline constexpr OptLevel kAllLevels[] = {OptLevel::O0, OptLevel::O1, OptLevel::O2,
                                          OptLevel::O3, OptLevel::Os};
std::string_view level_flag(OptLevel l);
std::optional<OptLevel> level_from_flag(std::string_view flag);

struct OptConfig {
  OptLevel level = OptLevel::O0;
  std::vector<std::string> extra_flags;
  std::uint64_t rng_seed = 0;
  friend bool operator==(const OptConfig&, const OptConfig&) = default;

  /// Level followed by the extra flags, space separated.
  std::string str() const;
};

nlohmann::json to_json(const OptConfig& o);
OptConfig opt_from_json(const nlohmann::json& j);

/// Uniform level; each pool flag included independently with probability 1/2.
OptConfig sample_opt_config(const CompilerSpec& cc, std::uint64_t seed);

/// argv of the compile step.
std::vector<std::string> compile_command(const CompilerSpec& cc, const OptConfig& opt,
                                         const std::string& src, const std::string& out);

struct CompileResult {
  bool ok = false;
  bool ice = false;
  bool timed_out = false;
  int exit_code = 0;
  int signal = 0;
  double wall_seconds = 0;
  std::string log;
  std::filesystem::path binary;
  std::vector<std::string> command;
};

/// Writes `src` into `workdir` and compiles it. Throws ToolNotFound.
CompileResult compile(const std::string& src, const CompilerSpec& cc, const OptConfig& opt,
                      const std::filesystem::path& workdir, const std::string& stem = "prog");

struct ExecRecord {
  std::string stdout_bytes;
  int exit_code = 0;
  int signal = 0;
  bool timed_out = false;
  double wall_seconds = 0;
  friend bool operator==(const ExecRecord&, const ExecRecord&) = default;
};

nlohmann::json to_json(const ExecRecord& r);
ExecRecord exec_record_from_json(const nlohmann::json& j);

/// Runs with empty stdin; stdout captured exactly.
ExecRecord run_binary(const std::filesystem::path& bin, int timeout_seconds);

/// Markers identifying an internal compiler error in a compile log.
bool looks_like_ice(const std::string& log);

// ---------------------------------------------------------------------------
// Subprocess plumbing

struct ProcessResult {
  int exit_code = 0;
  int signal = 0;
  bool timed_out = false;
  double wall_seconds = 0;
};

/// Spawns argv[0] (absolute path) in its own process group with stdin from
/// /dev/null and stdout/stderr sent to the given files; kills the group on
/// timeout.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& stdout_file,
                          const std::filesystem::path& stderr_file, double timeout_seconds);

}  // namespace loopmorph
