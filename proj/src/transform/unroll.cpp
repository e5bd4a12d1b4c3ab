// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/errors.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/transform.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

std::string UnrollPlan::variant() const {
  std::string out = "k" + std::to_string(k);
  if (split) out += "_split" + std::to_string(split->m);
  return out;
}

nlohmann::json to_json(const UnrollPlan& p) {
  nlohmann::json j = {{"loop_id", p.loop_id}, {"n", p.n}, {"k", p.k}};
  j["split"] = p.split ? nlohmann::json{{"m", p.split->m}, {"boundary", p.split->boundary}}
                       : nlohmann::json();
  return j;
}

UnrollPlan unroll_plan_from_json(const nlohmann::json& j) {
  UnrollPlan p;
  try {
    p.loop_id = j.at("loop_id").get<std::string>();
    p.n = j.at("n").get<std::uint64_t>();
    p.k = j.at("k").get<std::uint64_t>();
    if (j.contains("split") && !j["split"].is_null())
      p.split = UnrollSplit{j["split"].at("m").get<std::uint64_t>(),
                            j["split"].at("boundary").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw PlanMismatch(std::string("malformed unroll plan: ") + e.what());
  }
  return p;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<std::uint64_t> largest_composite_below(std::uint64_t n) {
  for (std::uint64_t m = n; m-- > 4;)
    if (!is_prime(m)) return m;
  return std::nullopt;
}

std::vector<UnrollPlan> plan_unroll(std::uint64_t n, std::uint64_t k_max) {
  std::vector<UnrollPlan> out;
  if (n <= 3 || k_max < 2) return out;
  if (!is_prime(n)) {
    for (std::uint64_t k = 2; k <= std::min(n, k_max); ++k)
      if (n % k == 0) out.push_back({"", n, k, std::nullopt});
    return out;
  }
  auto m = largest_composite_below(n);
  if (!m) return out;
  for (std::uint64_t k = 2; k <= std::min(*m, k_max); ++k)
    if (*m % k == 0) out.push_back({"", n, k, UnrollSplit{*m, n - *m}});
  return out;
}

namespace {

void check_plan(const UnrollPlan& plan) {
  auto bad = [&](const std::string& why) {
    throw PlanMismatch("invalid unroll plan " + plan.variant() + " for n=" +
                       std::to_string(plan.n) + ": " + why);
  };
  if (!plan.split) {
    if (plan.k < 2 || plan.k > plan.n || plan.n % plan.k != 0) bad("k must divide n");
    if (is_prime(plan.n)) bad("prime trip counts need a split");
    return;
  }
  if (!is_prime(plan.n)) bad("split requires a prime trip count");
  auto m = largest_composite_below(plan.n);
  if (!m || plan.split->m != *m) bad("m must be the largest composite below n");
  if (plan.k < 2 || plan.k > *m || *m % plan.k != 0) bad("k must divide m");
  if (plan.split->boundary != plan.n - *m) bad("boundary must equal n - m");
}

Expr index_literal(IntKind k, Wide v) {
  if (k == IntKind::i32 || k == IntKind::u32 || k == IntKind::i64 || k == IntKind::u64)
    return lit(k, v);
  return cast(k, lit_i32(static_cast<std::int64_t>(v)));
}

std::string unique_id(const std::set<std::string>& taken, const std::string& want) {
  return taken.contains(want) ? fresh_name(taken, want) : want;
}

}  // namespace

Program apply_unroll(const Program& p, const UnrollPlan& plan, const Limits& lim) {
  check_plan(plan);
  auto path = find_loop(p, plan.loop_id);
  if (!path) throw PlanMismatch("no loop " + plan.loop_id);
  const ForLoop& orig = *as_loop(stmt_at(p, *path));
  if (!is_canonical(orig)) throw NonCanonicalLoop("loop " + plan.loop_id + " writes its index");
  auto written = names_written(orig.body);
  for (const Expr* h : {&orig.init, &orig.bound, &orig.step})
    for (const auto& name : names_read(*h))
      if (written.contains(name))
        throw NonCanonicalLoop("loop " + plan.loop_id + " header depends on its body");
  auto measured = profile_loops(p, lim).uniform_trips(plan.loop_id);
  if (!measured || *measured != plan.n)
    throw PlanMismatch("loop " + plan.loop_id + " measured " +
                       (measured ? std::to_string(*measured) : std::string("non-uniform")) +
                       " iterations, plan expects " + std::to_string(plan.n));

  Program out = p;
  ForLoop& f = *as_loop(stmt_at(out, *path));
  Block body;
  for (std::uint64_t c = 0; c < plan.k; ++c) {
    if (c > 0)
      body.stmts.push_back(
          Stmt{Assign{LValue{f.index_var, std::nullopt}, to_assign(f.step_op), f.step}});
    Block copy = orig.body;
    if (c > 0) suffix_loop_ids(copy, ".c" + std::to_string(c));
    body.stmts.push_back(Stmt{std::move(copy)});
  }
  f.body = std::move(body);

  if (plan.split) {
    auto init = const_eval(orig.init);
    auto step = const_eval(orig.step);
    if (!init || !step) throw NonCanonicalLoop("loop " + plan.loop_id + " has a non-constant header");
    Wide delta = static_cast<Wide>(plan.split->m) * step->v;
    Wide exit = orig.step_op == StepOp::add ? init->v + delta : init->v - delta;
    if (!fits(orig.index_kind, exit))
      throw NonCanonicalLoop("loop " + plan.loop_id + " split point out of index range");
    bool up = (orig.step_op == StepOp::add) == (step->v > 0);
    f.rel = up ? RelOp::lt : RelOp::gt;
    f.bound = index_literal(orig.index_kind, exit);

    ForLoop boundary = orig;
    boundary.loop_id = unique_id(all_loop_ids(out), orig.loop_id + ".b");
    boundary.init = index_literal(orig.index_kind, exit);
    suffix_loop_ids(boundary.body, ".b");
    Block* block = enclosing_block(out, *path);
    block->stmts.insert(block->stmts.begin() + path->steps.back() + 1, Stmt{std::move(boundary)});
  }
  require_valid(out);
  return out;
}

}  // namespace loopmorph
