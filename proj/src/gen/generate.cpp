// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "loopmorph/emit.hpp"
#include "loopmorph/errors.hpp"
#include "loopmorph/gen.hpp"
#include "loopmorph/rng.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/validate.hpp"

namespace loopmorph {

namespace {

struct VarEntry {
  std::string name;
  TypeSpec type;
  bool loop_index = false;
  std::int64_t lo = 0;  // value range of a loop index
  std::int64_t hi = 0;
};

struct Gen {
  Expr e;
  IntKind k;
};

bool spellable(IntKind k) {
  return k == IntKind::i32 || k == IntKind::u32 || k == IntKind::i64 || k == IntKind::u64;
}

class Generator {
 public:
  Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

  Program run() {
    globals();
    int nfun = static_cast<int>(rng_.uniform(0, cfg_.max_functions));
    for (int i = 0; i < nfun; ++i) helper_function();
    main_function();
    return std::move(prog_);
  }

 private:
  const GenConfig& cfg_;
  Rng rng_;
  Program prog_;
  std::vector<std::vector<VarEntry>> scopes_;
  bool in_helper_ = false;
  int names_ = 0;
  int loops_ = 0;

  std::string fresh(const char* prefix) { return prefix + std::to_string(names_++); }

  IntKind pick_kind() {
    std::vector<double> w;
    std::vector<IntKind> ks;
    for (const auto& [k, x] : cfg_.type_weights) {
      ks.push_back(k);
      w.push_back(x);
    }
    return ks[rng_.weighted(w)];
  }

  // -- literals -------------------------------------------------------------

  Expr literal_in(IntKind k) {
    Wide v;
    if (rng_.chance(0.7)) {
      v = rng_.uniform(is_signed(k) ? -16 : 0, 64);
    } else {
      v = wrap(k, static_cast<Wide>(rng_.next()));
    }
    v = std::clamp(v, min_value(k), max_value(k));
    return lit(spellable(k) ? k : IntKind::i32, v);
  }

  // -- scope ----------------------------------------------------------------

  std::vector<const VarEntry*> visible(bool scalars, bool arrays, bool indices = true) const {
    std::vector<const VarEntry*> out;
    for (const auto& s : scopes_)
      for (const auto& v : s) {
        if (v.loop_index && !indices) continue;
        if (v.type.is_array() ? arrays : scalars) out.push_back(&v);
      }
    return out;
  }

  std::vector<const VarEntry*> loop_indices() const {
    std::vector<const VarEntry*> out;
    for (const auto& s : scopes_)
      for (const auto& v : s)
        if (v.loop_index) out.push_back(&v);
    return out;
  }

  /// Assignable targets: no loop indices; helpers may write only locals.
  std::vector<const VarEntry*> targets(bool arrays) const {
    std::vector<const VarEntry*> out;
    for (std::size_t d = in_helper_ ? 1 : 0; d < scopes_.size(); ++d)
      for (const auto& v : scopes_[d])
        if (!v.loop_index && v.type.is_array() == arrays) out.push_back(&v);
    return out;
  }

  // -- expressions ----------------------------------------------------------

  Expr array_index(std::uint32_t len) {
    auto idx = loop_indices();
    if (idx.empty() || rng_.chance(0.15))
      return lit_i32(rng_.uniform(0, static_cast<std::int64_t>(len) - 1));
    const VarEntry* v = rng_.pick(idx);
    if (v->hi - v->lo < static_cast<std::int64_t>(len) && rng_.chance(0.8)) {
      std::int64_t c = rng_.uniform(-v->lo, static_cast<std::int64_t>(len) - 1 - v->hi);
      if (c == 0) return var(v->name);
      if (c > 0) return binary(BinaryOp::add, var(v->name), lit_i32(c));
      return binary(BinaryOp::sub, var(v->name), lit_i32(-c));
    }
    return call(safe_fn_name(SafeOp::mod, IntKind::u32),
                {var(v->name), lit_i32(static_cast<std::int64_t>(len))});
  }

  Gen leaf() {
    auto arrays = visible(false, true);
    auto scalars = visible(true, false);
    if (!arrays.empty() && (scalars.empty() || rng_.chance(0.3))) {
      const VarEntry* a = rng_.pick(arrays);
      return {index_of(a->name, array_index(*a->type.array_len)), a->type.kind};
    }
    const VarEntry* v = rng_.pick(scalars);
    return {var(v->name), v->type.kind};
  }

  /// A non-constant expression; never a comparison or logical result.
  Gen value(int depth) {
    if (depth <= 0 || rng_.chance(0.3)) return leaf();
    std::vector<double> w = {40, 12, 12, 10, 10, 8};
    std::vector<const Function*> helpers;
    for (const auto& f : prog_.functions)
      if (f.name != current_function_) helpers.push_back(&f);
    w.push_back(helpers.empty() ? 0 : 8);
    switch (rng_.weighted(w)) {
      case 0: {
        IntKind k = pick_kind();
        SafeOp op = kAllSafeOps[rng_.index(std::size(kAllSafeOps))];
        Gen a = value(depth - 1);
        Expr b = arg(k, depth - 1);
        std::vector<Expr> args;
        if (rng_.chance(0.5)) args = {std::move(a.e), std::move(b)};
        else args = {std::move(b), std::move(a.e)};
        return {call(safe_fn_name(op, k), std::move(args)), k};
      }
      case 1: {
        static constexpr BinaryOp ops[] = {BinaryOp::band, BinaryOp::bor, BinaryOp::bxor};
        BinaryOp op = ops[rng_.index(3)];
        Gen a = value(depth - 1);
        Gen b = rng_.chance(0.3) ? Gen{lit_i32(rng_.uniform(0, 255)), IntKind::i32}
                                 : value(depth - 1);
        IntKind k = binary_result_kind(op, a.k, b.k);
        return {binary(op, std::move(a.e), std::move(b.e)), k};
      }
      case 2: {
        IntKind k = pick_kind();
        return {cast(k, value(depth - 1).e), k};
      }
      case 3: {
        Gen a = value(depth - 1);
        bool is_not = std::holds_alternative<Unary>(a.e.node) &&
                      std::get<Unary>(a.e.node).op == UnaryOp::lognot;
        UnaryOp op = UnaryOp::bitnot;
        double r = static_cast<double>(rng_.uniform(0, 99));
        bool neg_ok = !is_signed(a.k) || bit_width(a.k) < 32;
        if (r < 40 && neg_ok) op = UnaryOp::neg;
        else if (r < 60) op = UnaryOp::lognot;
        if (op == UnaryOp::bitnot && is_not) op = UnaryOp::lognot;
        if (op == UnaryOp::lognot && std::holds_alternative<Binary>(a.e.node)) op = UnaryOp::bitnot;
        IntKind k = unary_result_kind(op, a.k);
        return {unary(op, std::move(a.e)), k};
      }
      case 4: {
        IntKind k = rng_.chance(0.5) ? IntKind::u32 : IntKind::u64;
        static constexpr BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul};
        BinaryOp op = ops[rng_.index(3)];
        Expr a = cast(k, value(depth - 1).e);
        Expr b = cast(k, value(depth - 1).e);
        return {binary(op, std::move(a), std::move(b)), k};
      }
      case 5:
        return leaf();
      default: {
        const Function* f = helpers[rng_.index(helpers.size())];
        std::vector<Expr> args;
        for (const auto& prm : f->params) args.push_back(arg(prm.kind, depth - 1));
        return {call(f->name, std::move(args)), *f->return_kind};
      }
    }
  }

  /// Argument for a parameter of kind `k`: a subexpression or an in-range literal.
  Expr arg(IntKind k, int depth) {
    if (rng_.chance(0.3)) return literal_in(k);
    return value(depth).e;
  }

  Expr comparison(int depth) {
    static constexpr BinaryOp ops[] = {BinaryOp::lt, BinaryOp::le, BinaryOp::gt,
                                       BinaryOp::ge, BinaryOp::eq, BinaryOp::ne};
    IntKind k = rng_.pick(std::vector<IntKind>{IntKind::i32, IntKind::u32, IntKind::i64,
                                               IntKind::u64});
    for (int attempt = 0;; ++attempt) {
      Expr a = cast(k, value(depth).e);
      Expr b = cast(k, value(depth).e);
      if (!(a == b) || attempt > 8) return binary(ops[rng_.index(6)], std::move(a), std::move(b));
    }
  }

  Expr condition() {
    int depth = std::max(1, cfg_.max_expr_depth - 1);
    Expr c = comparison(depth);
    double r = static_cast<double>(rng_.uniform(0, 99));
    if (r < 20) return binary(BinaryOp::land, std::move(c), comparison(depth));
    if (r < 35) return binary(BinaryOp::lor, std::move(c), comparison(depth));
    if (r < 45) return unary(UnaryOp::lognot, std::move(c));
    return c;
  }

  // -- statements -----------------------------------------------------------

  std::string current_function_;

  Stmt assignment() {
    auto arrays = targets(true);
    auto scalars = targets(false);
    bool use_array = !arrays.empty() && (scalars.empty() || rng_.chance(0.4));
    if (!use_array && scalars.empty()) return fold_or_noop();
    const VarEntry* t = use_array ? rng_.pick(arrays) : rng_.pick(scalars);
    Assign a;
    a.target.name = t->name;
    if (use_array) a.target.index = array_index(*t->type.array_len);
    IntKind k = t->type.kind;
    double r = static_cast<double>(rng_.uniform(0, 99));
    bool wide_unsigned = k == IntKind::u32 || k == IntKind::u64;
    if (r < 15 && wide_unsigned) {
      static constexpr AssignOp ops[] = {AssignOp::add, AssignOp::sub, AssignOp::mul};
      a.op = ops[rng_.index(3)];
      a.rhs = cast(k, value(cfg_.max_expr_depth - 1).e);
    } else if (r < 30) {
      static constexpr AssignOp ops[] = {AssignOp::band, AssignOp::bor, AssignOp::bxor};
      a.op = ops[rng_.index(3)];
      a.rhs = value(cfg_.max_expr_depth).e;
    } else if (r < 38) {
      a.rhs = literal_in(k);
    } else {
      a.rhs = value(cfg_.max_expr_depth).e;
    }
    if (!use_array && a.rhs == var(t->name))
      a.rhs = unary(UnaryOp::bitnot, std::move(a.rhs));
    return Stmt{std::move(a)};
  }

  Stmt fold_or_noop() { return Stmt{ChecksumFold{value(cfg_.max_expr_depth).e}}; }

  Stmt declaration(std::vector<VarEntry>& scope) {
    IntKind k = pick_kind();
    Decl d;
    d.name = fresh(rng_.chance(0.2) && !in_helper_ ? "la" : "l");
    if (d.name.starts_with("la")) {
      auto len = static_cast<std::uint32_t>(
          rng_.uniform(cfg_.array_len_range.lo, cfg_.array_len_range.hi));
      d.type = TypeSpec::array(k, len);
      auto n = rng_.uniform(1, std::min<std::int64_t>(len, 4));
      for (std::int64_t i = 0; i < n; ++i) d.array_init.push_back(literal_in(k));
    } else {
      d.type = TypeSpec::scalar(k);
      d.init = rng_.chance(0.2) ? literal_in(k) : value(cfg_.max_expr_depth).e;
    }
    scope.push_back({d.name, d.type});
    return Stmt{std::move(d)};
  }

  Stmt if_stmt(int loop_depth) {
    If s;
    s.cond = condition();
    s.then_block = block(loop_depth, false, static_cast<int>(rng_.uniform(1, cfg_.max_stmts_per_block)));
    if (rng_.chance(0.5))
      s.else_block = block(loop_depth, false, static_cast<int>(rng_.uniform(1, cfg_.max_stmts_per_block)));
    return Stmt{std::move(s)};
  }

  Stmt loop(int loop_depth) {
    ForLoop f;
    f.loop_id = "L" + std::to_string(loops_++);
    f.index_var = fresh("i");
    f.index_kind = IntKind::i32;
    std::int64_t n = rng_.uniform(cfg_.loop_trip_range.lo, cfg_.loop_trip_range.hi);
    static const std::vector<std::int64_t> steps = {1, 1, 1, 1, 2, 3, 4};
    std::int64_t s = rng_.pick(steps);
    std::int64_t init = rng_.uniform(-8, 16);
    bool up = rng_.chance(0.7);
    bool strict = rng_.chance(0.6);
    std::int64_t bound;
    std::int64_t lo, hi;
    if (up) {
      f.step_op = StepOp::add;
      f.rel = strict ? RelOp::lt : RelOp::le;
      if (n == 0) bound = strict ? init - rng_.uniform(0, 3) : init - 1 - rng_.uniform(0, 3);
      else bound = init + (n - 1) * s + (strict ? rng_.uniform(1, s) : rng_.uniform(0, s - 1));
      lo = init;
      hi = init + std::max<std::int64_t>(n - 1, 0) * s;
    } else {
      f.step_op = StepOp::sub;
      f.rel = strict ? RelOp::gt : RelOp::ge;
      if (n == 0) bound = strict ? init + rng_.uniform(0, 3) : init + 1 + rng_.uniform(0, 3);
      else bound = init - (n - 1) * s - (strict ? rng_.uniform(1, s) : rng_.uniform(0, s - 1));
      hi = init;
      lo = init - std::max<std::int64_t>(n - 1, 0) * s;
    }
    f.init = lit_i32(init);
    f.bound = lit_i32(bound);
    f.step = lit_i32(s);
    scopes_.push_back({VarEntry{f.index_var, TypeSpec::scalar(IntKind::i32), true, lo, hi}});
    f.body = block(loop_depth + 1, true,
                   static_cast<int>(rng_.uniform(1, cfg_.max_stmts_per_block)));
    scopes_.pop_back();
    return Stmt{std::move(f)};
  }

  /// Folds of every local declared in `scope`, so each one is observed.
  void fold_locals(Block& b, const std::vector<VarEntry>& scope) {
    for (const auto& v : scope) {
      if (v.loop_index) continue;
      if (v.type.is_array()) {
        for (std::uint32_t i = 0; i < *v.type.array_len; ++i)
          b.stmts.push_back(Stmt{ChecksumFold{index_of(v.name, lit_i32(i))}});
      } else {
        b.stmts.push_back(Stmt{ChecksumFold{var(v.name)}});
      }
    }
  }

  Block block(int loop_depth, bool loops_allowed, int n, int min_loops = 0) {
    Block b;
    scopes_.emplace_back();
    int loops = 0;
    for (int i = 0; i < n || loops < min_loops; ++i) {
      bool can_loop = loops_allowed && loop_depth < cfg_.max_loop_depth;
      bool force_loop = i >= n;
      // Helper blocks neither declare nor fold.
      std::vector<double> w = {35, in_helper_ ? 0.0 : 15, in_helper_ ? 0.0 : 15, 10,
                               can_loop ? 25.0 : 0.0};
      std::size_t pick = force_loop ? 4 : rng_.weighted(w);
      switch (pick) {
        case 0: b.stmts.push_back(assignment()); break;
        case 1: b.stmts.push_back(declaration(scopes_.back())); break;
        case 2: b.stmts.push_back(fold_or_noop()); break;
        case 3: b.stmts.push_back(if_stmt(loop_depth)); break;
        default:
          b.stmts.push_back(loop(loop_depth));
          ++loops;
          break;
      }
    }
    fold_locals(b, scopes_.back());
    scopes_.pop_back();
    return b;
  }

  // -- top level ------------------------------------------------------------

  void globals() {
    scopes_.emplace_back();
    int scalars = static_cast<int>(rng_.uniform(1, cfg_.max_globals));
    int arrays = static_cast<int>(rng_.uniform(1, std::max(1, cfg_.max_globals / 2)));
    for (int i = 0; i < scalars; ++i) {
      IntKind k = pick_kind();
      Decl d{fresh("g"), TypeSpec::scalar(k), literal_in(k), {}};
      scopes_.back().push_back({d.name, d.type});
      prog_.globals.push_back(std::move(d));
    }
    for (int i = 0; i < arrays; ++i) {
      IntKind k = pick_kind();
      auto len = static_cast<std::uint32_t>(
          rng_.uniform(cfg_.array_len_range.lo, cfg_.array_len_range.hi));
      Decl d{fresh("a"), TypeSpec::array(k, len), std::nullopt, {}};
      auto n = rng_.uniform(0, std::min<std::int64_t>(len, 4));
      for (std::int64_t j = 0; j < n; ++j) d.array_init.push_back(literal_in(k));
      scopes_.back().push_back({d.name, d.type});
      prog_.globals.push_back(std::move(d));
    }
  }

  void helper_function() {
    Function f;
    f.name = fresh("f");
    f.return_kind = pick_kind();
    current_function_ = f.name;
    in_helper_ = true;
    scopes_.emplace_back();
    int np = static_cast<int>(rng_.uniform(1, 3));
    for (int i = 0; i < np; ++i) {
      Param prm{fresh("p"), pick_kind()};
      scopes_.back().push_back({prm.name, TypeSpec::scalar(prm.kind)});
      f.params.push_back(prm);
    }
    // Body: result local, a few updates, then return.
    scopes_.emplace_back();
    std::string r = fresh("r");
    f.body.stmts.push_back(
        Stmt{Decl{r, TypeSpec::scalar(*f.return_kind), value(cfg_.max_expr_depth).e, {}}});
    scopes_.back().push_back({r, TypeSpec::scalar(*f.return_kind)});
    int n = static_cast<int>(rng_.uniform(0, cfg_.max_stmts_per_block));
    for (int i = 0; i < n; ++i) {
      double c = static_cast<double>(rng_.uniform(0, 99));
      if (c < 35) {
        Stmt d = declaration(scopes_.back());
        f.body.stmts.push_back(std::move(d));
      } else if (c < 80) {
        f.body.stmts.push_back(assignment());
      } else {
        f.body.stmts.push_back(if_stmt(cfg_.max_loop_depth));
      }
    }
    // Mix every parameter and local into the result so none is unused.
    std::vector<VarEntry> mixed = scopes_[scopes_.size() - 2];
    mixed.insert(mixed.end(), scopes_.back().begin(), scopes_.back().end());
    for (const auto& v : mixed) {
      if (v.name == r || v.type.is_array()) continue;
      f.body.stmts.push_back(
          Stmt{Assign{LValue{r, std::nullopt}, AssignOp::bxor, cast(*f.return_kind, var(v.name))}});
    }
    f.body.stmts.push_back(Stmt{Return{var(r)}});
    scopes_.pop_back();
    scopes_.pop_back();
    in_helper_ = false;
    current_function_.clear();
    prog_.functions.push_back(std::move(f));
  }

  void main_function() {
    Function m;
    m.name = "main";
    current_function_ = "main";
    int min_loops = rng_.chance(cfg_.multi_loop_fraction) ? 2 : 0;
    int n = static_cast<int>(rng_.uniform(1, cfg_.max_stmts_per_block + 2));
    m.body = block(0, true, n, min_loops);
    for (const auto& g : prog_.globals) {
      if (g.type.is_array()) {
        for (std::uint32_t i = 0; i < *g.type.array_len; ++i)
          m.body.stmts.push_back(Stmt{ChecksumFold{index_of(g.name, lit_i32(i))}});
      } else {
        m.body.stmts.push_back(Stmt{ChecksumFold{var(g.name)}});
      }
    }
    prog_.functions.push_back(std::move(m));
  }
};

}  // namespace

Program generate_seed(const GenConfig& cfg) {
  cfg.check();
  constexpr int kAttempts = 16;
  std::string last;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Program p = Generator(cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(attempt))).run();
    auto diags = validate_program(p);
    if (diags.empty()) return p;
    last = format_diagnostics(diags);
  }
  throw GenerationBudgetExceeded("no valid program after " + std::to_string(kAttempts) +
                                 " attempts; last diagnostics:\n" + last);
}

}  // namespace loopmorph
