// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/errors.hpp"
#include "loopmorph/transform.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

namespace {

void require_satisfied(const Program& p, const ConstructRecipe& r) {
  PreconditionReport rep = check_preconditions(p, r);
  if (!rep.satisfied)
    throw PreconditionViolated(std::string(transform_name(r.kind)) + " preconditions violated: " +
                               to_json(rep).dump());
}

std::string unique_id(const std::set<std::string>& taken, const std::string& want) {
  return taken.contains(want) ? fresh_name(taken, want) : want;
}

}  // namespace

Program apply_licm(const Program& p, const ConstructRecipe& recipe) {
  if (recipe.kind != TransformKind::licm) throw RecipeMismatch("not a licm recipe");
  require_satisfied(p, recipe);
  Program out = p;
  StmtPath loop_path = *find_loop(out, recipe.loop_ids[0]);
  StmtPath decl_path = *StmtPath::parse(recipe.inserted_paths[0]);
  Block& body = as_loop(stmt_at(out, loop_path))->body;
  Stmt decl = std::move(body.stmts[decl_path.steps.back()]);
  body.stmts.erase(body.stmts.begin() + decl_path.steps.back());
  Block* outer = enclosing_block(out, loop_path);
  outer->stmts.insert(outer->stmts.begin() + loop_path.steps.back(), std::move(decl));
  require_valid(out);
  return out;
}

Program apply_unswitch(const Program& p, const ConstructRecipe& recipe) {
  if (recipe.kind != TransformKind::unswitch) throw RecipeMismatch("not an unswitch recipe");
  require_satisfied(p, recipe);
  Program out = p;
  StmtPath loop_path = *find_loop(out, recipe.loop_ids[0]);
  Stmt& slot = *stmt_at(out, loop_path);
  ForLoop loop = std::get<ForLoop>(slot.node);
  If branch = std::get<If>(loop.body.stmts.back().node);
  loop.body.stmts.pop_back();

  auto ids = all_loop_ids(out);
  auto clone = [&](Block tail, const std::string& suffix) {
    ForLoop c = loop;
    c.loop_id = unique_id(ids, loop.loop_id + suffix);
    ids.insert(c.loop_id);
    for (auto& s : tail.stmts) c.body.stmts.push_back(std::move(s));
    suffix_loop_ids(c.body, suffix);
    Block b;
    b.stmts.push_back(Stmt{std::move(c)});
    return b;
  };
  Block then_block = clone(std::move(branch.then_block), ".t");
  Block else_block = clone(std::move(*branch.else_block), ".e");
  slot = Stmt{If{std::move(branch.cond), std::move(then_block), std::move(else_block)}};
  require_valid(out);
  return out;
}

Program apply_fusion(const Program& p, const ConstructRecipe& recipe) {
  if (recipe.kind != TransformKind::fusion) throw RecipeMismatch("not a fusion recipe");
  require_satisfied(p, recipe);
  Program out = p;
  StmtPath first = *find_loop(out, recipe.loop_ids[0]);
  StmtPath second = *find_loop(out, recipe.loop_ids[1]);
  StmtPath expect = first;
  expect.steps.back() += 1;
  if (second != expect)
    throw NotAdjacent("loops " + recipe.loop_ids[0] + " and " + recipe.loop_ids[1] +
                      " are not adjacent");
  Block* block = enclosing_block(out, first);
  ForLoop consumer = std::get<ForLoop>(block->stmts[second.steps.back()].node);
  ForLoop& producer = std::get<ForLoop>(block->stmts[first.steps.back()].node);
  rename_var(consumer.body, consumer.index_var, producer.index_var);
  for (auto& s : consumer.body.stmts) producer.body.stmts.push_back(std::move(s));
  block->stmts.erase(block->stmts.begin() + second.steps.back());
  require_valid(out);
  return out;
}

std::vector<TransformVariant> transform_all(const Program& original, const ConstructRecipe& recipe,
                                            const Limits& lim, std::uint64_t k_max) {
  std::vector<TransformVariant> out;
  nlohmann::json base = {{"kind", std::string(transform_name(recipe.kind))},
                         {"recipe", to_json(recipe)}};
  switch (recipe.kind) {
    case TransformKind::unroll: {
      const std::string& id = recipe.loop_ids.at(0);
      if (!find_loop(original, id)) throw RecipeMismatch("recipe names missing loop " + id);
      auto n = profile_loops(original, lim).uniform_trips(id);
      if (!n) throw PlanMismatch("loop " + id + " has no uniform trip count");
      for (UnrollPlan plan : plan_unroll(*n, k_max)) {
        plan.loop_id = id;
        nlohmann::json j = base;
        j["unroll"] = to_json(plan);
        out.push_back({plan.variant(), apply_unroll(original, plan, lim), std::move(j)});
      }
      return out;
    }
    case TransformKind::licm:
    case TransformKind::unswitch:
    case TransformKind::fusion: {
      nlohmann::json j = base;
      j["preconditions"] = to_json(check_preconditions(original, recipe));
      Program t = recipe.kind == TransformKind::licm       ? apply_licm(original, recipe)
                  : recipe.kind == TransformKind::unswitch ? apply_unswitch(original, recipe)
                                                           : apply_fusion(original, recipe);
      out.push_back({"0", std::move(t), std::move(j)});
      return out;
    }
  }
  return out;
}

}  // namespace loopmorph
