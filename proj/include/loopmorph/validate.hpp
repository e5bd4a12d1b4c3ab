// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopmorph/ast.hpp"

namespace loopmorph {

struct Diagnostic {
  std::string path;
  std::string reason;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

struct ValidateOptions {
  int max_call_depth = 16;
};

/// Empty iff every type and shape invariant of MiniC holds.
Diagnostics validate_program(const Program& p, const ValidateOptions& opts = {});

/// Throws InvalidProgram listing the diagnostics when validation fails.
void require_valid(const Program& p, const ValidateOptions& opts = {});

std::string format_diagnostics(const Diagnostics& d);

// ---------------------------------------------------------------------------
// Scopes and static types

struct VarInfo {
  TypeSpec type;
  bool initialized = true;
  bool global = false;
  bool param = false;
  bool loop_index = false;
};

using VarTable = std::map<std::string, VarInfo, std::less<>>;

/// Static result type of `e`; nullopt when ill-typed or referring to unknown
/// names.
std::optional<IntKind> kind_of(const Expr& e, const VarTable& vars, const Program& p);

/// Variables visible immediately before the statement at `path`.
VarTable scope_at(const Program& p, const StmtPath& path);

/// Names nothing in a program may declare (keywords, scaffold helpers).
bool is_reserved_name(std::string_view name);
bool is_identifier(std::string_view name);
bool is_valid_loop_id(std::string_view id);

/// Loop is in canonical form: its body never writes the index (not even the
/// interleaved step updates an unrolled loop carries).
bool is_canonical(const ForLoop& loop);

}  // namespace loopmorph
