// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/walk.hpp"

namespace loopmorph {

void walk_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ArrayRef>) {
          walk_expr(*n.index, fn);
        } else if constexpr (std::is_same_v<T, Unary> || std::is_same_v<T, Cast>) {
          walk_expr(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk_expr(*n.lhs, fn);
          walk_expr(*n.rhs, fn);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : n.args) walk_expr(a, fn);
        }
      },
      e.node);
}

void walk_expr(Expr& e, const std::function<void(Expr&)>& fn) {
  fn(e);
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ArrayRef>) {
          walk_expr(*n.index, fn);
        } else if constexpr (std::is_same_v<T, Unary> || std::is_same_v<T, Cast>) {
          walk_expr(*n.operand, fn);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk_expr(*n.lhs, fn);
          walk_expr(*n.rhs, fn);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (auto& a : n.args) walk_expr(a, fn);
        }
      },
      e.node);
}

void walk_stmts(const Block& block, const StmtPath& base,
                const std::function<void(const Stmt&, const StmtPath&)>& fn) {
  for (std::uint32_t i = 0; i < block.stmts.size(); ++i) {
    StmtPath here = base;
    here.steps.push_back(i);
    fn(block.stmts[i], here);
    for (auto [sel, sub] : sub_blocks(block.stmts[i])) {
      StmtPath inner = here;
      inner.steps.push_back(sel);
      walk_stmts(*sub, inner, fn);
    }
  }
}

void walk_program(const Program& p,
                  const std::function<void(const Stmt&, const StmtPath&)>& fn) {
  for (const auto& f : p.functions) walk_stmts(f.body, StmtPath{f.name, {}}, fn);
}

template <class S, class F>
static void stmt_exprs_impl(S& s, F&& fn) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Decl>) {
          if (n.init) fn(*n.init);
          for (auto& e : n.array_init) fn(e);
        } else if constexpr (std::is_same_v<T, Assign>) {
          if (n.target.index) fn(*n.target.index);
          fn(n.rhs);
        } else if constexpr (std::is_same_v<T, If>) {
          fn(n.cond);
        } else if constexpr (std::is_same_v<T, ForLoop>) {
          fn(n.init);
          fn(n.bound);
          fn(n.step);
        } else if constexpr (std::is_same_v<T, ChecksumFold> || std::is_same_v<T, Return>) {
          fn(n.value);
        }
      },
      s.node);
}

void stmt_exprs(const Stmt& s, const std::function<void(const Expr&)>& fn) {
  stmt_exprs_impl(s, fn);
}
void stmt_exprs(Stmt& s, const std::function<void(Expr&)>& fn) { stmt_exprs_impl(s, fn); }

std::set<std::string> names_read(const Expr& e) {
  std::set<std::string> out;
  walk_expr(e, [&](const Expr& x) {
    if (auto* v = std::get_if<VarRef>(&x.node)) out.insert(v->name);
    if (auto* a = std::get_if<ArrayRef>(&x.node)) out.insert(a->name);
  });
  return out;
}

std::set<std::string> names_read(const Block& block) {
  std::set<std::string> out;
  walk_stmts(block, StmtPath{"_", {}}, [&](const Stmt& s, const StmtPath&) {
    stmt_exprs(s, [&](const Expr& e) { out.merge(names_read(e)); });
    if (auto* a = std::get_if<Assign>(&s.node)) {
      // Compound assignment also reads its target.
      if (a->op != AssignOp::set) out.insert(a->target.name);
    }
    if (auto* f = std::get_if<ForLoop>(&s.node)) out.insert(f->index_var);
  });
  return out;
}

std::set<std::string> names_written(const Block& block) {
  std::set<std::string> out;
  walk_stmts(block, StmtPath{"_", {}}, [&](const Stmt& s, const StmtPath&) {
    if (auto* a = std::get_if<Assign>(&s.node)) out.insert(a->target.name);
  });
  return out;
}

std::set<std::string> names_declared(const Block& block) {
  std::set<std::string> out;
  walk_stmts(block, StmtPath{"_", {}}, [&](const Stmt& s, const StmtPath&) {
    if (auto* d = std::get_if<Decl>(&s.node)) out.insert(d->name);
    if (auto* f = std::get_if<ForLoop>(&s.node)) out.insert(f->index_var);
  });
  return out;
}

std::set<std::string> callees(const Expr& e) {
  std::set<std::string> out;
  walk_expr(e, [&](const Expr& x) {
    if (auto* c = std::get_if<Call>(&x.node)) out.insert(c->callee);
  });
  return out;
}

bool contains_fold(const Block& block) {
  bool found = false;
  walk_stmts(block, StmtPath{"_", {}}, [&](const Stmt& s, const StmtPath&) {
    found = found || std::holds_alternative<ChecksumFold>(s.node);
  });
  return found;
}

std::size_t count_loops(const Block& block) {
  std::size_t n = 0;
  walk_stmts(block, StmtPath{"_", {}}, [&](const Stmt& s, const StmtPath&) {
    if (std::holds_alternative<ForLoop>(s.node)) ++n;
  });
  return n;
}

bool contains_loop(const Block& block) { return count_loops(block) > 0; }

std::size_t count_stmts(const Block& block) {
  std::size_t n = 0;
  walk_stmts(block, StmtPath{"_", {}}, [&](const Stmt&, const StmtPath&) { ++n; });
  return n;
}

void rename_var(Expr& e, const std::string& from, const std::string& to) {
  walk_expr(e, [&](Expr& x) {
    if (auto* v = std::get_if<VarRef>(&x.node); v && v->name == from) v->name = to;
    if (auto* a = std::get_if<ArrayRef>(&x.node); a && a->name == from) a->name = to;
  });
}

void rename_var(Block& block, const std::string& from, const std::string& to) {
  for (auto& s : block.stmts) {
    stmt_exprs(s, [&](Expr& e) { rename_var(e, from, to); });
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) {
            if (n.target.name == from) n.target.name = to;
          } else if constexpr (std::is_same_v<T, Decl>) {
            if (n.name == from) n.name = to;
          } else if constexpr (std::is_same_v<T, ForLoop>) {
            if (n.index_var == from) n.index_var = to;
          }
        },
        s.node);
    for (auto [sel, sub] : sub_blocks(s)) rename_var(*sub, from, to);
  }
}

void suffix_loop_ids(Block& block, const std::string& suffix) {
  for (auto& s : block.stmts) {
    if (auto* f = std::get_if<ForLoop>(&s.node)) f->loop_id += suffix;
    for (auto [sel, sub] : sub_blocks(s)) suffix_loop_ids(*sub, suffix);
  }
}

std::set<std::string> all_identifiers(const Program& p) {
  std::set<std::string> out;
  for (const auto& g : p.globals) out.insert(g.name);
  for (const auto& f : p.functions) {
    out.insert(f.name);
    for (const auto& prm : f.params) out.insert(prm.name);
    out.merge(names_declared(f.body));
    out.merge(names_read(f.body));
  }
  return out;
}

std::set<std::string> all_loop_ids(const Program& p) {
  auto ids = loop_ids(p);
  return {ids.begin(), ids.end()};
}

std::string fresh_name(const std::set<std::string>& taken, const std::string& prefix) {
  for (std::size_t i = 0;; ++i) {
    std::string candidate = prefix + std::to_string(i);
    if (!taken.contains(candidate)) return candidate;
  }
}

}  // namespace loopmorph
