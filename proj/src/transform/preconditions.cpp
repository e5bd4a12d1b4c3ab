// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/errors.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/transform.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

nlohmann::json to_json(const PreconditionReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations) v.push_back({{"rule", x.rule}, {"path", x.path}});
  return {{"kind", std::string(transform_name(r.kind))}, {"satisfied", r.satisfied}, {"violations", v}};
}

namespace {

struct LoopRef {
  StmtPath path;
  const ForLoop* loop;
};

LoopRef require_loop(const Program& p, const std::string& id) {
  auto path = find_loop(p, id);
  if (!path) throw RecipeMismatch("recipe names missing loop " + id);
  return {*path, as_loop(stmt_at(p, *path))};
}

StmtPath require_path(const std::string& text) {
  auto path = StmtPath::parse(text);
  if (!path) throw RecipeMismatch("malformed statement path " + text);
  return *path;
}

/// True if `inner` is a direct child of loop `outer`'s body.
bool direct_child(const StmtPath& outer, const StmtPath& inner) {
  auto parent = inner.parent();
  return parent && *parent == outer && inner.steps.size() == outer.steps.size() + 2 &&
         inner.steps[outer.steps.size()] == 0;
}

/// Names a loop-invariant expression must not read: everything the loop
/// writes or declares, including its index.
std::set<std::string> varying_names(const ForLoop& f) {
  auto out = names_written(f.body);
  out.merge(names_declared(f.body));
  out.insert(f.index_var);
  return out;
}

/// Reads a hidden dependence: a call that is not a safe-op wrapper.
bool calls_user_function(const Expr& e) {
  for (const auto& c : callees(e))
    if (!parse_safe_fn(c)) return true;
  return false;
}

bool reads_any(const Expr& e, const std::set<std::string>& names) {
  for (const auto& n : names_read(e))
    if (names.contains(n)) return true;
  return false;
}

std::size_t count_decls(const Block& b, const std::string& name) {
  std::size_t n = 0;
  walk_stmts(b, StmtPath{"_", {}}, [&](const Stmt& s, const StmtPath&) {
    if (const auto* d = std::get_if<Decl>(&s.node); d && d->name == name) ++n;
  });
  return n;
}

void check_licm(const Program& p, const ConstructRecipe& r, PreconditionReport& rep) {
  if (r.inserted_paths.empty()) throw RecipeMismatch("licm recipe has no inserted paths");
  LoopRef L = require_loop(p, r.loop_ids.at(0));
  StmtPath dpath = require_path(r.inserted_paths[0]);
  const Stmt* s = stmt_at(p, dpath);
  const Decl* d = s ? std::get_if<Decl>(&s->node) : nullptr;
  if (!d || !d->init || d->type.is_array() || !direct_child(L.path, dpath))
    throw RecipeMismatch("licm recipe path " + dpath.str() + " is not a declaration in loop " +
                         L.loop->loop_id);
  if (r.invariant_expr && !(*r.invariant_expr == *d->init))
    throw RecipeMismatch("licm recipe expression does not match " + dpath.str());
  const std::string where = dpath.str();
  if (reads_any(*d->init, varying_names(*L.loop)) || calls_user_function(*d->init))
    rep.violations.push_back({"licm.1", where});
  if (names_written(L.loop->body).contains(d->name)) rep.violations.push_back({"licm.2", where});
  const Block* outer = enclosing_block(p, L.path);
  if (!outer || count_decls(*outer, d->name) != 1) rep.violations.push_back({"licm.3", where});
}

void check_unswitch(const Program& p, const ConstructRecipe& r, PreconditionReport& rep) {
  if (r.inserted_paths.empty()) throw RecipeMismatch("unswitch recipe has no inserted paths");
  LoopRef L = require_loop(p, r.loop_ids.at(0));
  StmtPath ipath = require_path(r.inserted_paths[0]);
  const Stmt* s = stmt_at(p, ipath);
  const If* i = s ? std::get_if<If>(&s->node) : nullptr;
  if (!i || !i->else_block || !direct_child(L.path, ipath) ||
      ipath.steps.back() + 1 != L.loop->body.stmts.size())
    throw RecipeMismatch("unswitch recipe path " + ipath.str() +
                         " is not the trailing if/else of loop " + L.loop->loop_id);
  if (r.invariant_expr && !(*r.invariant_expr == i->cond))
    throw RecipeMismatch("unswitch recipe condition does not match " + ipath.str());
  if (reads_any(i->cond, varying_names(*L.loop)) || calls_user_function(i->cond))
    rep.violations.push_back({"unswitch.invariant_cond", ipath.str()});
}

/// Index forms a fused consumer may use: the current iteration or element 0.
bool forward_index(const Expr& idx, const ForLoop& consumer) {
  try {
    if (idx == normalized_index(consumer, var(consumer.index_var))) return true;
  } catch (const NonCanonicalLoop&) {
    return false;
  }
  auto v = const_eval(idx);
  return v && v->v == 0;
}

void check_fusion(const Program& p, const ConstructRecipe& r, PreconditionReport& rep) {
  if (r.loop_ids.size() != 2) throw RecipeMismatch("fusion recipe must name two loops");
  LoopRef A = require_loop(p, r.loop_ids[0]);
  LoopRef B = require_loop(p, r.loop_ids[1]);
  const ForLoop& l1 = *A.loop;
  const ForLoop& l2 = *B.loop;
  if (!same_header(l1, l2)) rep.violations.push_back({"fusion.same_header", B.path.str()});

  auto w1 = names_written(l1.body);
  auto w2 = names_written(l2.body);
  auto r1 = names_read(l1.body);
  bool ok = is_canonical(l1) && is_canonical(l2);
  for (const auto& n : w2)
    if (w1.contains(n) || r1.contains(n)) ok = false;
  for (const Expr* h : {&l1.init, &l1.bound, &l1.step})
    if (reads_any(*h, w1) || reads_any(*h, w2)) ok = false;

  // Producer writes: every write to an array the consumer reads must target
  // the producer's own iteration.
  std::set<std::string> shared;
  for (const auto& n : names_read(l2.body))
    if (w1.contains(n)) shared.insert(n);
  Expr own;
  try {
    own = normalized_index(l1, var(l1.index_var));
  } catch (const NonCanonicalLoop&) {
    if (!shared.empty()) ok = false;
  }
  walk_stmts(l1.body, A.path.child(0, 0), [&](const Stmt& s, const StmtPath&) {
    const auto* a = std::get_if<Assign>(&s.node);
    if (a && shared.contains(a->target.name) && (!a->target.index || !(*a->target.index == own)))
      ok = false;
  });
  // Consumer reads of shared names: array elements at the same or an earlier
  // position only; shared scalars are never fusable.
  walk_stmts(l2.body, B.path.child(0, 0), [&](const Stmt& s, const StmtPath&) {
    auto visit = [&](const Expr& e) {
      walk_expr(e, [&](const Expr& x) {
        if (const auto* v = std::get_if<VarRef>(&x.node); v && shared.contains(v->name)) ok = false;
        if (const auto* ar = std::get_if<ArrayRef>(&x.node);
            ar && shared.contains(ar->name) && !forward_index(*ar->index, l2))
          ok = false;
      });
    };
    stmt_exprs(s, visit);
    if (const auto* a = std::get_if<Assign>(&s.node);
        a && a->op != AssignOp::set && shared.contains(a->target.name))
      ok = false;
  });
  if (!ok) rep.violations.push_back({"fusion.forward_dep", B.path.str()});
}

}  // namespace

PreconditionReport check_preconditions(const Program& p, const ConstructRecipe& recipe) {
  PreconditionReport rep;
  rep.kind = recipe.kind;
  if (recipe.loop_ids.empty()) throw RecipeMismatch("recipe names no loop");
  switch (recipe.kind) {
    case TransformKind::licm: check_licm(p, recipe, rep); break;
    case TransformKind::unswitch: check_unswitch(p, recipe, rep); break;
    case TransformKind::fusion: check_fusion(p, recipe, rep); break;
    case TransformKind::unroll: {
      LoopRef L = require_loop(p, recipe.loop_ids[0]);
      if (!is_canonical(*L.loop)) rep.violations.push_back({"unroll.canonical", L.path.str()});
      break;
    }
  }
  rep.satisfied = rep.violations.empty();
  return rep;
}

}  // namespace loopmorph
