// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "loopmorph/ast.hpp"

namespace loopmorph {

/// Self-contained C11 translation unit for a valid program. Output is a pure
/// function of the tree. Throws InvalidProgram if `p` fails validation.
std::string emit_c(const Program& p);

/// Canonical spelling of an expression (as it appears at statement level).
std::string emit_expr(const Expr& e);

/// Canonical spelling of a literal value of the given kind.
std::string emit_literal(const IntLit& lit);

std::string wide_to_string(Wide v);

}  // namespace loopmorph
