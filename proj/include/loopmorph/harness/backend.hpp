// SPDX-License-Identifier: Apache-2.0
//
// In-process reference backends. "Compiling" parses the MiniC source and,
// for mutant backends at any level above -O0, applies a deliberate
// miscompilation; "running" interprets the result.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "loopmorph/ast.hpp"
#include "loopmorph/harness/compiler.hpp"

namespace loopmorph {

enum class Mutation : std::uint8_t { none, licm, unswitch, fusion };

/// Backend name after "builtin:"; nullopt if unknown.
std::optional<Mutation> builtin_backend(std::string_view executable);

/// licm: a declaration directly before a loop that reads it gets `init ^ 1`.
/// unswitch: in `if (c) { for } else { for }` the else loop is dropped.
/// fusion: in a loop body, a statement reading array X right after one
/// writing X is swapped with it.
Program apply_mutation(const Program& p, Mutation m);

CompileResult builtin_compile(const std::string& src, const CompilerSpec& cc,
                              const OptConfig& opt, const std::filesystem::path& out);

/// True if `bin` was produced by builtin_compile.
bool is_builtin_binary(const std::filesystem::path& bin);
ExecRecord builtin_run(const std::filesystem::path& bin, int timeout_seconds);

}  // namespace loopmorph
