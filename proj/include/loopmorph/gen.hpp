// SPDX-License-Identifier: Apache-2.0
//
// Random UB-free MiniC seed programs with loop-heavy shape.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"
#include "loopmorph/ast.hpp"

namespace loopmorph {

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct GenConfig {
  int max_functions = 2;
  int max_stmts_per_block = 4;
  int max_loop_depth = 2;
  int max_expr_depth = 3;
  int max_globals = 5;
  IntRange loop_trip_range{1, 16};
  IntRange array_len_range{4, 16};
  std::map<IntKind, double> type_weights = {
      {IntKind::i8, 1}, {IntKind::i16, 1}, {IntKind::i32, 3}, {IntKind::i64, 2},
      {IntKind::u8, 1}, {IntKind::u16, 1}, {IntKind::u32, 3}, {IntKind::u64, 2},
  };
  /// Fraction of programs forced to hold at least two top-level loops.
  double multi_loop_fraction = 0.8;
  std::uint64_t seed = 0;

  /// Throws ConfigError describing the first violated constraint.
  void check() const;
  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

nlohmann::json to_json(const GenConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
GenConfig gen_config_from_json(const nlohmann::json& j);

/// C text of the safe-op library and checksum helpers.
std::string emit_safe_ops_prelude();

/// Deterministic in cfg.seed. Throws GenerationBudgetExceeded when no valid
/// program is found within the retry budget.
Program generate_seed(const GenConfig& cfg);

}  // namespace loopmorph
