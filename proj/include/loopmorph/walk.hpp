// SPDX-License-Identifier: Apache-2.0
//
// Generic traversals over MiniC trees.

#pragma once

#include <functional>
#include <set>
#include <string>

#include "loopmorph/ast.hpp"

namespace loopmorph {

/// Pre-order visit of `e` and all its subexpressions.
void walk_expr(const Expr& e, const std::function<void(const Expr&)>& fn);
void walk_expr(Expr& e, const std::function<void(Expr&)>& fn);

/// Pre-order visit of every statement in `block` (recursively), with its path.
void walk_stmts(const Block& block, const StmtPath& base,
                const std::function<void(const Stmt&, const StmtPath&)>& fn);
void walk_program(const Program& p, const std::function<void(const Stmt&, const StmtPath&)>& fn);

/// Every expression directly owned by a statement (not descending into
/// sub-blocks): initializers, lvalue index, rhs, conditions, loop header.
void stmt_exprs(const Stmt& s, const std::function<void(const Expr&)>& fn);
void stmt_exprs(Stmt& s, const std::function<void(Expr&)>& fn);

/// Variables and arrays named by `e`.
std::set<std::string> names_read(const Expr& e);
/// Names read anywhere inside `block`, including loop headers.
std::set<std::string> names_read(const Block& block);
/// Base names of every assignment target inside `block`, recursively.
std::set<std::string> names_written(const Block& block);
/// Names declared inside `block` (Decls and loop indices), recursively.
std::set<std::string> names_declared(const Block& block);
std::set<std::string> callees(const Expr& e);

bool contains_fold(const Block& block);
bool contains_loop(const Block& block);
std::size_t count_loops(const Block& block);
std::size_t count_stmts(const Block& block);

/// Renames references (reads and writes) of variable `from` to `to`.
void rename_var(Block& block, const std::string& from, const std::string& to);
void rename_var(Expr& e, const std::string& from, const std::string& to);

/// Appends `suffix` to the loop_id of every loop in `block`.
void suffix_loop_ids(Block& block, const std::string& suffix);

/// Every identifier in the program: globals, functions, params, locals, loop
/// indices, and referenced names.
std::set<std::string> all_identifiers(const Program& p);
std::set<std::string> all_loop_ids(const Program& p);

/// `prefix` followed by the smallest counter not already taken.
std::string fresh_name(const std::set<std::string>& taken, const std::string& prefix);

}  // namespace loopmorph
