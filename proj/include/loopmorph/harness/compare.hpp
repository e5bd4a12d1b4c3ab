// SPDX-License-Identifier: Apache-2.0
//
// Classifies an original/transformed pair built with one compiler
// configuration.

#pragma once

#include <string>

#include "json.hpp"
#include "loopmorph/harness/compiler.hpp"

namespace loopmorph {

/// Compile and run record of one side of a pair.
struct SideOutcome {
  bool compiled = false;
  bool compile_crash = false;    // ICE marker or compiler killed by a signal
  bool compile_timeout = false;
  int compile_exit = 0;
  int compile_signal = 0;
  std::string compile_log;
  ExecRecord run;                // meaningful only when compiled
};

nlohmann::json to_json(const SideOutcome& s);
SideOutcome side_from_json(const nlohmann::json& j);
SideOutcome side_from(const CompileResult& c);

/// Severity increases left to right except agree.
enum class VerdictKind : std::uint8_t { agree, wrong_code, timeout, run_crash, compile_crash };
std::string_view verdict_name(VerdictKind k);
std::optional<VerdictKind> verdict_from_name(std::string_view name);

enum class Side : std::uint8_t { none, original, transformed, both };
std::string_view side_name(Side s);

struct Verdict {
  VerdictKind kind = VerdictKind::agree;
  Side side = Side::none;
  std::string phase;       // "compile" or "run" for timeouts and crashes
  std::string diff_class;  // stable description used in signatures
  SideOutcome original;
  SideOutcome transformed;
};

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

/// agree iff both sides compiled and ran, stdout bytes and exit codes equal;
/// otherwise the most severe of compile_crash > run_crash > timeout > wrong_code.
/// A compile failure without crash markers counts as compile_crash.
Verdict compare_outcomes(const SideOutcome& orig, const SideOutcome& trans);

}  // namespace loopmorph
