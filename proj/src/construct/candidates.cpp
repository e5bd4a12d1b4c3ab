// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/errors.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"
#include "loopmorph/construct.hpp"

namespace loopmorph {

std::string_view transform_name(TransformKind k) {
  switch (k) {
    case TransformKind::licm: return "licm";
    case TransformKind::unswitch: return "unswitch";
    case TransformKind::fusion: return "fusion";
    case TransformKind::unroll: return "unroll";
  }
  return "?";
}

std::optional<TransformKind> transform_from_name(std::string_view name) {
  for (auto k : kAllTransforms)
    if (transform_name(k) == name) return k;
  if (name == "unroll_passthrough") return TransformKind::unroll;
  return std::nullopt;
}

std::vector<LoopCandidate> find_candidate_loops(const Program& p, const LoopProfile& prof) {
  std::vector<LoopCandidate> out;
  walk_program(p, [&](const Stmt& s, const StmtPath& path) {
    const auto* f = std::get_if<ForLoop>(&s.node);
    if (!f || !is_canonical(*f)) return;
    auto n = prof.uniform_trips(f->loop_id);
    if (!n || *n == 0) return;
    LoopCandidate c{f->loop_id, *n, {}, path};
    auto written = names_written(f->body);
    for (const auto& [name, info] : scope_at(p, path)) {
      if (info.type.is_array() || !info.initialized || written.contains(name)) continue;
      if (name == f->index_var) continue;
      c.invariant_vars.insert(name);
    }
    out.push_back(std::move(c));
  });
  return out;
}

Expr normalized_index(const ForLoop& f, Expr index) {
  auto init = const_eval(f.init);
  auto step = const_eval(f.step);
  if (!init || !step || step->v == 0)
    throw NonCanonicalLoop("loop " + f.loop_id + " has a non-constant header");
  const auto k = IntKind::i64;
  Expr i = cast(k, std::move(index));
  Expr base = lit(k, init->v);
  Expr diff = f.step_op == StepOp::add ? call(safe_fn_name(SafeOp::sub, k), {std::move(i), std::move(base)})
                                       : call(safe_fn_name(SafeOp::sub, k), {std::move(base), std::move(i)});
  if (step->v == 1) return diff;
  return call(safe_fn_name(SafeOp::div, k), {std::move(diff), lit(k, step->v)});
}

}  // namespace loopmorph
