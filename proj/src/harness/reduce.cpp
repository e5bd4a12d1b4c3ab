// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/harness/reduce.hpp"

#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/filter.hpp"
#include "loopmorph/harness/pipeline.hpp"
#include "loopmorph/parse.hpp"
#include "loopmorph/transform.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

namespace fs = std::filesystem;

namespace {

/// Name of the declaration the licm recipe hoists.
std::optional<std::string> licm_temp(const Program& p, const ConstructRecipe& r) {
  if (r.kind != TransformKind::licm || r.inserted_paths.empty()) return std::nullopt;
  auto path = StmtPath::parse(r.inserted_paths[0]);
  const Stmt* s = path ? stmt_at(p, *path) : nullptr;
  const Decl* d = s ? std::get_if<Decl>(&s->node) : nullptr;
  return d ? std::optional<std::string>(d->name) : std::nullopt;
}

/// Recomputes recipe paths after statements moved. nullopt if the recipe no
/// longer fits the program.
std::optional<ConstructRecipe> rebase(const Program& p, ConstructRecipe r,
                                      const std::optional<std::string>& temp) {
  for (const auto& id : r.loop_ids)
    if (!find_loop(p, id)) return std::nullopt;
  StmtPath loop = *find_loop(p, r.loop_ids[0]);
  const ForLoop& f = *as_loop(stmt_at(p, loop));
  switch (r.kind) {
    case TransformKind::licm: {
      r.inserted_paths.clear();
      for (std::uint32_t i = 0; i < f.body.stmts.size(); ++i) {
        const auto* d = std::get_if<Decl>(&f.body.stmts[i].node);
        if (d && temp && d->name == *temp) {
          r.inserted_paths.push_back(loop.child(0, i).str());
          if (d->init) r.invariant_expr = *d->init;
        }
      }
      if (r.inserted_paths.size() != 1) return std::nullopt;
      break;
    }
    case TransformKind::unswitch:
      if (f.body.stmts.empty() || !std::holds_alternative<If>(f.body.stmts.back().node))
        return std::nullopt;
      r.inserted_paths = {loop.child(0, static_cast<std::uint32_t>(f.body.stmts.size() - 1)).str()};
      r.invariant_expr = std::get<If>(f.body.stmts.back().node).cond;
      break;
    case TransformKind::fusion: {
      r.inserted_paths.clear();
      walk_program(p, [&](const Stmt& s, const StmtPath& path) {
        const auto* d = std::get_if<Decl>(&s.node);
        if (d && r.arrays && (d->name == r.arrays->first || d->name == r.arrays->second))
          r.inserted_paths.push_back(path.str());
      });
      r.inserted_paths.push_back(find_loop(p, r.loop_ids[1])->str());
      break;
    }
    case TransformKind::unroll:
      break;
  }
  return r;
}

/// Statements whose removal would orphan the recipe.
bool protected_stmt(const Stmt& s, const ConstructRecipe& r, const std::optional<std::string>& temp) {
  if (std::holds_alternative<Return>(s.node)) return true;
  if (const auto* d = std::get_if<Decl>(&s.node)) {
    if (temp && d->name == *temp) return true;
    if (r.arrays && (d->name == r.arrays->first || d->name == r.arrays->second)) return true;
  }
  Block holder;
  holder.stmts.push_back(s);
  auto ids = all_loop_ids(Program{{}, {Function{"main", {}, std::nullopt, holder}}});
  for (const auto& id : r.loop_ids)
    if (ids.contains(id)) return true;
  return false;
}

struct Attempt {
  Program original;
  ConstructRecipe recipe;
  TransformVariant variant;
  SoundnessCheck gate;
};

std::vector<StmtPath> all_paths(const Program& p) {
  std::vector<StmtPath> out;
  walk_program(p, [&](const Stmt&, const StmtPath& path) { out.push_back(path); });
  return out;
}

}  // namespace

Finding reduce_finding(const Finding& f, std::size_t budget, const fs::path& workdir,
                       ReduceStats* stats) {
  ReduceStats local;
  ReduceStats& st = stats ? *stats : local;
  Verdict base = repro_finding(f, workdir / "base");
  if (budget == 0) return f;

  Program cur = parse_minic(f.original_src);
  const auto temp = licm_temp(cur, f.recipe);
  ConstructRecipe cur_recipe = f.recipe;
  Finding best = f;
  std::size_t best_size = f.original_src.size();

  // Builds and checks a candidate original; nullopt when it no longer
  // yields the same variant or fails a gate.
  auto prepare = [&](const Program& cand) -> std::optional<Attempt> {
    auto r = rebase(cand, cur_recipe, temp);
    if (!r) return std::nullopt;
    try {
      if (!filter_seed(cand).admitted) return std::nullopt;
      if (!check_preconditions(cand, *r).satisfied) return std::nullopt;
      for (auto& v : transform_all(cand, *r)) {
        if (v.name != f.variant) continue;
        SoundnessCheck gate = soundness_gate(cand, v.program);
        if (!gate.sound) return std::nullopt;
        return Attempt{cand, *r, std::move(v), gate};
      }
    } catch (const Error&) {
    }
    return std::nullopt;
  };

  auto try_accept = [&](const Program& cand) -> bool {
    if (st.attempts >= budget) return false;
    if (!validate_program(cand).empty()) return false;
    std::string src = emit_c(cand);
    if (src.size() > best_size) return false;
    auto a = prepare(cand);
    if (!a) return false;
    ++st.attempts;
    std::string tsrc = emit_c(a->variant.program);
    Verdict v = evaluate_pair(src, tsrc, f.compiler, f.opt, workdir / ("try" + std::to_string(st.attempts)));
    if (v.kind != base.kind) return false;
    ++st.accepted;
    cur = a->original;
    cur_recipe = a->recipe;
    best.original_src = src;
    best.transformed_src = tsrc;
    best.recipe = a->recipe;
    best.plan = a->variant.plan;
    best.verdict = v;
    best.original_checksum = a->gate.original_checksum;
    best.transformed_checksum = a->gate.transformed_checksum;
    best_size = src.size();
    return true;
  };

  bool progress = true;
  while (progress && st.attempts < budget) {
    progress = false;
    // Statement deletions, outermost first.
    for (const auto& path : all_paths(cur)) {
      if (st.attempts >= budget) break;
      const Stmt* s = stmt_at(cur, path);
      if (!s || protected_stmt(*s, cur_recipe, temp)) continue;
      Program cand = cur;
      Block* b = enclosing_block(cand, path);
      b->stmts.erase(b->stmts.begin() + path.steps.back());
      if (try_accept(cand)) {
        progress = true;
        break;
      }
    }
    if (progress) continue;
    // Simplify the constructed expression to one of its subexpressions.
    if (cur_recipe.kind == TransformKind::licm || cur_recipe.kind == TransformKind::unswitch) {
      auto path = StmtPath::parse(cur_recipe.inserted_paths.at(0));
      std::vector<Expr> subs;
      const Stmt* s = stmt_at(cur, *path);
      const Expr& root = cur_recipe.kind == TransformKind::licm ? *std::get<Decl>(s->node).init
                                                                 : std::get<If>(s->node).cond;
      walk_expr(root, [&](const Expr& e) {
        if (&e != &root && !names_read(e).empty()) subs.push_back(e);
      });
      for (const auto& sub : subs) {
        if (st.attempts >= budget) break;
        Program cand = cur;
        Stmt* cs = stmt_at(cand, *path);
        if (auto* d = std::get_if<Decl>(&cs->node))
          d->init = cast(d->type.kind, sub);
        else
          std::get<If>(cs->node).cond = binary(BinaryOp::ne, sub, lit_i32(0));
        if (try_accept(cand)) {
          progress = true;
          break;
        }
      }
    }
  }
  if (st.accepted > 0) {
    best.id = f.id + "-reduced";
    best.signature = finding_signature(best);
    best.created_at = utc_timestamp();
  }
  return best;
}

}  // namespace loopmorph
