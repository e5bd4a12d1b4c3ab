// SPDX-License-Identifier: Apache-2.0
//
// Entry gate: admits only valid, defined, terminating, compilable seeds.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "loopmorph/harness/compiler.hpp"
#include "loopmorph/interp.hpp"

namespace loopmorph {

enum class FilterReason : std::uint8_t {
  ok,
  ub_trap,
  nonterminating,
  compile_failure,
  validation_failure,
};
std::string_view reason_name(FilterReason r);

struct FilterVerdict {
  bool admitted = false;
  FilterReason reason = FilterReason::validation_failure;
  std::optional<TrapKind> trap;
  std::string trap_path;
  std::uint64_t step_budget = 0;
  std::string compiler_id;
  /// Compile log excerpt or validation diagnostics.
  std::string detail;
};

nlohmann::json to_json(const FilterVerdict& v);

/// Admitted iff the program validates, executes to completion within `lim`,
/// and compiles at -O0 with every listed compiler. An empty compiler list
/// skips the compile check.
FilterVerdict filter_seed(const Program& p, const Limits& lim = {},
                          const std::vector<CompilerSpec>& compilers = {});

}  // namespace loopmorph
