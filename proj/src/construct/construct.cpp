// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/construct.hpp"

#include <algorithm>

#include "loopmorph/errors.hpp"
#include "loopmorph/filter.hpp"
#include "loopmorph/rng.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/transform.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

namespace {

struct Leaf {
  Expr e;
  IntKind k;
};

bool spellable(IntKind k) {
  return k == IntKind::i32 || k == IntKind::u32 || k == IntKind::i64 || k == IntKind::u64;
}

Expr typed_lit(IntKind k, Wide v) {
  v = wrap(k, v);
  if (spellable(k)) return lit(k, v);
  return cast(k, lit_i32(static_cast<std::int64_t>(v)));
}

Expr as_kind(const Leaf& l, IntKind k) { return l.k == k ? l.e : cast(k, l.e); }

/// Random expression of type `k` over `leaves` and literals using
/// {+,-,*,&,|,^,safe_shl,safe_shr}; arithmetic goes through safe wrappers.
class ExprBuilder {
 public:
  ExprBuilder(Rng& rng, std::vector<Leaf> leaves) : rng_(rng), leaves_(std::move(leaves)) {}

  Expr build(IntKind k, int depth) {
    Expr e = node(k, depth);
    if (!leaves_.empty() && !reads_leaf(e))
      e = call(safe_fn_name(SafeOp::add, k), {std::move(e), as_kind(rng_.pick(leaves_), k)});
    return e;
  }

  Expr literal(IntKind k) {
    switch (rng_.index(4)) {
      case 0: return typed_lit(k, rng_.uniform(0, 7));
      case 1: return typed_lit(k, rng_.uniform(-128, 127));
      case 2: return typed_lit(k, rng_.uniform(-100000, 100000));
      default: return typed_lit(k, static_cast<Wide>(rng_.next()));
    }
  }

 private:
  Rng& rng_;
  std::vector<Leaf> leaves_;

  bool reads_leaf(const Expr& e) const {
    auto read = names_read(e);
    return std::any_of(leaves_.begin(), leaves_.end(), [&](const Leaf& l) {
      auto names = names_read(l.e);
      return std::any_of(names.begin(), names.end(), [&](const auto& n) { return read.contains(n); });
    });
  }

  Expr node(IntKind k, int depth) {
    if (depth <= 1 || rng_.chance(0.25)) {
      if (!leaves_.empty() && rng_.chance(0.75)) return as_kind(rng_.pick(leaves_), k);
      return literal(k);
    }
    switch (rng_.index(8)) {
      case 0: return call(safe_fn_name(SafeOp::add, k), {node(k, depth - 1), node(k, depth - 1)});
      case 1: return call(safe_fn_name(SafeOp::sub, k), {node(k, depth - 1), node(k, depth - 1)});
      case 2: return call(safe_fn_name(SafeOp::mul, k), {node(k, depth - 1), node(k, depth - 1)});
      case 3: return cast(k, binary(BinaryOp::band, node(k, depth - 1), node(k, depth - 1)));
      case 4: return cast(k, binary(BinaryOp::bor, node(k, depth - 1), node(k, depth - 1)));
      case 5: return cast(k, binary(BinaryOp::bxor, node(k, depth - 1), node(k, depth - 1)));
      case 6:
        return call(safe_fn_name(SafeOp::shl, k),
                    {node(k, depth - 1), typed_lit(k, rng_.uniform(0, bit_width(k) - 1))});
      default:
        return call(safe_fn_name(SafeOp::shr, k),
                    {node(k, depth - 1), typed_lit(k, rng_.uniform(0, bit_width(k) - 1))});
    }
  }
};

IntKind pick_kind(Rng& rng) { return kAllKinds[rng.index(std::size(kAllKinds))]; }

std::vector<Leaf> invariant_leaves(const Program& p, const LoopCandidate& c) {
  VarTable scope = scope_at(p, c.body_path);
  std::vector<Leaf> out;
  for (const auto& name : c.invariant_vars) {
    auto it = scope.find(name);
    if (it != scope.end() && !it->second.type.is_array()) out.push_back({var(name), it->second.type.kind});
  }
  return out;
}

ForLoop& loop_at(Program& p, const LoopCandidate& c) {
  ForLoop* f = as_loop(stmt_at(p, c.body_path));
  if (!f || f->loop_id != c.loop_id)
    throw InsertionFailed("candidate " + c.loop_id + " not found at " + c.body_path.str());
  return *f;
}

void require_admitted(const Program& p, const ConstructConfig& cfg, const char* what) {
  FilterVerdict v = filter_seed(p, cfg.limits);
  if (!v.admitted)
    throw InsertionFailed(std::string(what) + " construction not admitted: " +
                          to_json(v).dump());
}

/// Scalar targets of the else branch: visible at the suffix start and not
/// declared inside the suffix.
std::vector<Stmt> else_branch(Rng& rng, const Program& p, const StmtPath& at,
                              const Block& suffix, ExprBuilder& eb) {
  VarTable scope = scope_at(p, at);
  auto declared = names_declared(suffix);
  std::vector<std::pair<LValue, IntKind>> targets;
  for (const auto& name : names_written(suffix)) {
    auto it = scope.find(name);
    if (it == scope.end() || declared.contains(name) || it->second.loop_index) continue;
    if (!it->second.type.is_array()) targets.push_back({LValue{name, std::nullopt}, it->second.type.kind});
  }
  for (const auto& s : suffix.stmts) {
    const auto* a = std::get_if<Assign>(&s.node);
    if (!a || !a->target.index || declared.contains(a->target.name)) continue;
    auto reads = names_read(*a->target.index);
    if (std::any_of(reads.begin(), reads.end(), [&](const auto& n) { return declared.contains(n); }))
      continue;
    auto it = scope.find(a->target.name);
    if (it != scope.end()) targets.push_back({a->target, it->second.type.kind});
  }
  if (targets.empty()) return {};
  std::vector<Stmt> out;
  std::size_t count = 1 + rng.index(2);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& [lv, k] = rng.pick(targets);
    AssignOp op = rng.chance(0.5) ? AssignOp::bxor : AssignOp::bor;
    out.push_back(Stmt{Assign{lv, op, eb.build(k, 2)}});
  }
  return out;
}

}  // namespace

std::pair<Program, ConstructRecipe> construct_licm_original(const Program& p,
                                                            const LoopCandidate& c,
                                                            std::uint64_t seed,
                                                            const ConstructConfig& cfg) {
  auto leaves = invariant_leaves(p, c);
  if (leaves.empty()) throw NoInvariantVars("loop " + c.loop_id + " has no invariant scalars");
  Rng rng(seed);
  Program out = p;
  ForLoop& f = loop_at(out, c);
  IntKind k = pick_kind(rng);
  ExprBuilder eb(rng, leaves);
  Expr e = eb.build(k, cfg.expr_depth);
  std::string t = fresh_name(all_identifiers(out), "t");

  auto& body = f.body.stmts;
  std::size_t pos = rng.index(body.size() + 1);
  std::vector<std::size_t> uses;
  for (std::size_t j = pos; j < body.size(); ++j) {
    const auto* a = std::get_if<Assign>(&body[j].node);
    if (a && a->target.name != f.index_var) uses.push_back(j);
  }
  ConstructRecipe r{TransformKind::licm, {c.loop_id}, {}, e, std::nullopt, seed};
  bool fold = uses.empty() || rng.chance(0.5);
  if (!fold) {
    std::size_t j = rng.pick(uses);
    StmtPath use_path = c.body_path.child(0, static_cast<std::uint32_t>(j));
    auto& a = std::get<Assign>(body[j].node);
    auto rk = kind_of(a.rhs, scope_at(out, use_path), out);
    if (!rk) throw InsertionFailed("cannot type use site " + use_path.str());
    a.rhs = binary(BinaryOp::bxor, std::move(a.rhs), cast(*rk, var(t)));
  }
  body.insert(body.begin() + static_cast<std::ptrdiff_t>(pos),
              Stmt{Decl{t, TypeSpec::scalar(k), e, {}}});
  r.inserted_paths.push_back(c.body_path.child(0, static_cast<std::uint32_t>(pos)).str());
  if (fold) {
    body.insert(body.begin() + static_cast<std::ptrdiff_t>(pos + 1), Stmt{ChecksumFold{var(t)}});
    r.inserted_paths.push_back(c.body_path.child(0, static_cast<std::uint32_t>(pos + 1)).str());
  }
  require_admitted(out, cfg, "licm");
  return {std::move(out), std::move(r)};
}

std::pair<Program, ConstructRecipe> construct_unswitch_original(const Program& p,
                                                                const LoopCandidate& c,
                                                                std::uint64_t seed,
                                                                const ConstructConfig& cfg) {
  auto leaves = invariant_leaves(p, c);
  if (leaves.empty()) throw NoInvariantVars("loop " + c.loop_id + " has no invariant scalars");
  Rng rng(seed);
  Program out = p;
  ForLoop& f = loop_at(out, c);
  auto& body = f.body.stmts;
  if (body.empty()) throw InsertionFailed("loop " + c.loop_id + " has an empty body");

  ExprBuilder eb(rng, leaves);
  IntKind k = pick_kind(rng);
  Expr cond;
  if (rng.chance(0.5)) {
    Expr m = call(safe_fn_name(SafeOp::mod, k), {eb.build(k, cfg.expr_depth), typed_lit(k, rng.uniform(2, 5))});
    cond = binary(rng.chance(0.5) ? BinaryOp::eq : BinaryOp::ne, std::move(m), typed_lit(k, 0));
  } else {
    static constexpr BinaryOp kCmp[] = {BinaryOp::lt, BinaryOp::le, BinaryOp::gt,
                                        BinaryOp::ge, BinaryOp::eq, BinaryOp::ne};
    BinaryOp op = kCmp[rng.index(std::size(kCmp))];
    Expr rhs = rng.chance(0.5) ? eb.build(k, cfg.expr_depth - 1) : eb.literal(k);
    cond = binary(op, eb.build(k, cfg.expr_depth), std::move(rhs));
  }

  // Try suffix starts from the random choice onwards, wrapping around.
  std::size_t first = rng.index(body.size());
  for (std::size_t attempt = 0; attempt < body.size(); ++attempt) {
    std::size_t s = (first + attempt) % body.size();
    Block suffix;
    suffix.stmts.assign(body.begin() + static_cast<std::ptrdiff_t>(s), body.end());
    StmtPath at = c.body_path.child(0, static_cast<std::uint32_t>(s));
    std::vector<Stmt> alt = else_branch(rng, out, at, suffix, eb);
    if (alt.empty()) continue;
    body.erase(body.begin() + static_cast<std::ptrdiff_t>(s), body.end());
    body.push_back(Stmt{If{cond, std::move(suffix), Block{std::move(alt)}}});
    ConstructRecipe r{TransformKind::unswitch, {c.loop_id}, {at.str()}, cond, std::nullopt, seed};
    require_admitted(out, cfg, "unswitch");
    return {std::move(out), std::move(r)};
  }
  throw InsertionFailed("loop " + c.loop_id + " writes nothing an else branch could reuse");
}

std::pair<Program, ConstructRecipe> construct_fusion_original(const Program& p,
                                                              const LoopCandidate& c,
                                                              const LoopProfile& prof,
                                                              std::uint64_t seed,
                                                              const ConstructConfig& cfg) {
  auto measured = prof.uniform_trips(c.loop_id);
  std::uint64_t n = measured.value_or(c.trip_count);
  if (n == 0) throw InsertionFailed("loop " + c.loop_id + " runs zero iterations");
  if (n > cfg.max_fusion_trip)
    throw TripTooLarge("loop " + c.loop_id + " runs " + std::to_string(n) + " iterations");
  Rng rng(seed);
  Program out = p;
  ForLoop& f = loop_at(out, c);
  if (!is_canonical(f)) throw NonCanonicalLoop("loop " + c.loop_id + " writes its index");
  auto written = names_written(f.body);
  for (const Expr* h : {&f.init, &f.bound, &f.step})
    for (const auto& name : names_read(*h))
      if (written.contains(name))
        throw NonCanonicalLoop("loop " + c.loop_id + " header depends on its body");
  (void)normalized_index(f, var(f.index_var));

  auto taken = all_identifiers(out);
  std::string a = fresh_name(taken, "fa");
  taken.insert(a);
  std::string b = fresh_name(taken, "fb");
  taken.insert(b);
  std::string j = fresh_name(taken, "j");
  taken.insert(j);
  std::string s = fresh_name(taken, "s");
  auto ids = all_loop_ids(out);
  std::string id2 = ids.contains(c.loop_id + ".f") ? fresh_name(ids, c.loop_id + ".f") : c.loop_id + ".f";
  ids.insert(id2);
  std::string id3 = ids.contains(c.loop_id + ".s") ? fresh_name(ids, c.loop_id + ".s") : c.loop_id + ".s";

  IntKind k = pick_kind(rng);
  auto len = static_cast<std::uint32_t>(n);
  auto leaves = invariant_leaves(p, c);

  std::vector<Leaf> first_leaves = leaves;
  first_leaves.push_back({var(f.index_var), f.index_kind});
  ExprBuilder eb1(rng, first_leaves);
  Expr rhs1 = eb1.build(k, cfg.expr_depth);
  f.body.stmts.push_back(Stmt{Assign{LValue{a, normalized_index(f, var(f.index_var))}, AssignOp::set, rhs1}});
  auto appended_index = static_cast<std::uint32_t>(f.body.stmts.size() - 1);

  std::vector<Leaf> second_leaves = leaves;
  second_leaves.push_back({index_of(a, lit_i32(0)), k});
  ExprBuilder eb2(rng, second_leaves);
  Expr dep = index_of(a, normalized_index(f, var(j)));
  static constexpr SafeOp kCombine[] = {SafeOp::add, SafeOp::sub, SafeOp::mul};
  Expr rhs2 = rng.chance(0.25)
                  ? cast(k, binary(BinaryOp::bxor, dep, eb2.build(k, cfg.expr_depth - 1)))
                  : call(safe_fn_name(kCombine[rng.index(3)], k), {dep, eb2.build(k, cfg.expr_depth - 1)});

  ForLoop second{id2, j, f.index_kind, f.init, f.rel, f.bound, f.step_op, f.step, {}};
  second.body.stmts.push_back(Stmt{Assign{LValue{b, normalized_index(f, var(j))}, AssignOp::set, rhs2}});
  ForLoop folds{id3, s, IntKind::i32, lit_i32(0), RelOp::lt, lit_i32(len), StepOp::add, lit_i32(1), {}};
  folds.body.stmts.push_back(Stmt{ChecksumFold{index_of(b, var(s))}});

  std::vector<Stmt> decls;
  decls.push_back(Stmt{Decl{a, TypeSpec::array(k, len), std::nullopt, {lit_i32(0)}}});
  decls.push_back(Stmt{Decl{b, TypeSpec::array(k, len), std::nullopt, {lit_i32(0)}}});

  Block* block = enclosing_block(out, c.body_path);
  if (!block) throw InsertionFailed("no block encloses " + c.body_path.str());
  std::uint32_t idx = c.body_path.steps.back();
  auto at = [&](std::uint32_t i) {
    StmtPath q = c.body_path;
    q.steps.back() = i;
    return q;
  };
  block->stmts.insert(block->stmts.begin() + idx + 1, Stmt{std::move(folds)});
  block->stmts.insert(block->stmts.begin() + idx + 1, Stmt{std::move(second)});
  block->stmts.insert(block->stmts.begin() + idx, decls.begin(), decls.end());

  StmtPath appended = at(idx + 2).child(0, appended_index);
  ConstructRecipe r{TransformKind::fusion, {c.loop_id, id2}, {}, std::nullopt, std::make_pair(a, b), seed};
  r.inserted_paths = {at(idx).str(), at(idx + 1).str(), appended.str(), at(idx + 3).str(),
                      at(idx + 4).str()};
  require_admitted(out, cfg, "fusion");
  return {std::move(out), std::move(r)};
}

std::pair<Program, ConstructRecipe> construct_unroll_passthrough(const Program& p,
                                                                 const LoopCandidate& c,
                                                                 std::uint64_t seed) {
  return {p, ConstructRecipe{TransformKind::unroll, {c.loop_id}, {}, std::nullopt, std::nullopt, seed}};
}

std::pair<Program, ConstructRecipe> construct_original(const Program& p, TransformKind kind,
                                                       std::uint64_t seed,
                                                       const ConstructConfig& cfg) {
  LoopProfile prof = profile_loops(p, cfg.limits);
  auto cands = find_candidate_loops(p, prof);
  Rng pick(derive_seed(seed, 1));
  for (std::size_t i = cands.size(); i > 1; --i) std::swap(cands[i - 1], cands[pick.index(i)]);
  std::uint64_t build_seed = derive_seed(seed, 2);
  std::string last = "no candidate loops";
  for (const auto& c : cands) {
    try {
      switch (kind) {
        case TransformKind::licm: return construct_licm_original(p, c, build_seed, cfg);
        case TransformKind::unswitch: return construct_unswitch_original(p, c, build_seed, cfg);
        case TransformKind::fusion: return construct_fusion_original(p, c, prof, build_seed, cfg);
        case TransformKind::unroll:
          if (plan_unroll(c.trip_count).empty()) {
            last = "no unroll plan for loop " + c.loop_id;
            continue;
          }
          return construct_unroll_passthrough(p, c, build_seed);
      }
    } catch (const NoInvariantVars& e) {
      last = e.what();
    } catch (const InsertionFailed& e) {
      last = e.what();
    } catch (const TripTooLarge& e) {
      last = e.what();
    } catch (const NonCanonicalLoop& e) {
      last = e.what();
    }
  }
  throw InsertionFailed(std::string(transform_name(kind)) + ": " + last);
}

}  // namespace loopmorph
