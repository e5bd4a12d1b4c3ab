// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "loopmorph/ast.hpp"

namespace loopmorph {

/// Parses the MiniC subset (docs/minic-grammar.md). Throws ParseError for
/// malformed text, SubsetViolation for C outside the subset, InvalidProgram
/// when the parsed tree fails validation.
Program parse_minic(std::string_view src);

/// Parses a single expression in the canonical expression syntax.
Expr parse_expr(std::string_view src);

}  // namespace loopmorph
