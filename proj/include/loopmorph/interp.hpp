// SPDX-License-Identifier: Apache-2.0
//
// Reference evaluator for MiniC with UB traps and loop instrumentation.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "loopmorph/ast.hpp"
#include "loopmorph/semantics.hpp"

namespace loopmorph {

struct Limits {
  std::uint64_t max_steps = 50'000'000;
  int max_call_depth = 64;
};

enum class ExecStatus : std::uint8_t { ok, trap, step_budget_exhausted };
std::string_view status_name(ExecStatus s);

/// Per-entry statistics of one loop: how often the loop statement was
/// reached and the iteration counts seen per entry.
struct LoopEntries {
  std::uint64_t entries = 0;
  std::uint64_t min_trips = 0;
  std::uint64_t max_trips = 0;
  friend bool operator==(const LoopEntries&, const LoopEntries&) = default;
};

struct LoopProfile {
  /// Total iterations per loop id, summed over all entries.
  std::map<std::string, std::uint64_t> trip_counts;
  /// Executions per statement path; every statement of the program appears.
  std::map<std::string, std::uint64_t> stmt_exec;
  std::map<std::string, LoopEntries> entries;
  friend bool operator==(const LoopProfile&, const LoopProfile&) = default;

  /// Iterations per entry when every entry ran the same count.
  std::optional<std::uint64_t> uniform_trips(const std::string& loop_id) const;
};

struct ExecOutcome {
  ExecStatus status = ExecStatus::ok;
  std::optional<TrapKind> trap;
  std::string trap_path;
  /// Meaningful only when status is ok.
  std::string stdout_bytes;
  std::uint64_t checksum = 0;
  std::uint64_t steps = 0;
  LoopProfile profile;
  friend bool operator==(const ExecOutcome&, const ExecOutcome&) = default;
};

/// Deterministic execution with C semantics on an LP64 target.
/// Throws InvalidProgram if `p` does not validate.
ExecOutcome execute(const Program& p, const Limits& lim = {});

/// Throws ProfileUnavailable unless execution ends with status ok.
LoopProfile profile_loops(const Program& p, const Limits& lim = {});

std::string describe(const ExecOutcome& o);

}  // namespace loopmorph
