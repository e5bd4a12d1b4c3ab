// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/interp.hpp"

#include <algorithm>
#include <map>

#include "loopmorph/errors.hpp"
#include "loopmorph/validate.hpp"

namespace loopmorph {

std::string_view status_name(ExecStatus s) {
  switch (s) {
    case ExecStatus::ok: return "ok";
    case ExecStatus::trap: return "trap";
    case ExecStatus::step_budget_exhausted: return "step_budget_exhausted";
  }
  return "?";
}

std::optional<std::uint64_t> LoopProfile::uniform_trips(const std::string& loop_id) const {
  auto it = entries.find(loop_id);
  if (it == entries.end() || it->second.entries == 0) return std::nullopt;
  if (it->second.min_trips != it->second.max_trips) return std::nullopt;
  return it->second.min_trips;
}

std::string describe(const ExecOutcome& o) {
  std::string out(status_name(o.status));
  if (o.trap) out += "(" + std::string(trap_name(*o.trap)) + " at " + o.trap_path + ")";
  if (o.status == ExecStatus::ok) {
    std::string line = checksum_line(o.checksum);
    out += " " + line.substr(0, line.size() - 1);
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Resolved form: names become frame slots, statements get dense ids.

struct SlotRef {
  bool global = false;
  int index = -1;
};

struct RExpr {
  enum class Tag : std::uint8_t { lit, var, arr, unary, binary, cast, safe, call } tag;
  IntKind kind = IntKind::i32;
  Wide value = 0;
  SlotRef slot;
  int function = -1;
  UnaryOp uop{};
  BinaryOp bop{};
  SafeOp sop{};
  std::vector<RExpr> kids;
};

struct RStmt {
  enum class Tag : std::uint8_t { decl, assign, branch, loop, block, fold, ret } tag;
  int id = 0;
  SlotRef slot;
  IntKind kind = IntKind::i32;  // declared/target/index kind
  std::uint32_t array_len = 0;
  bool is_array = false;
  bool has_init = false;
  bool has_else = false;
  bool has_index = false;
  AssignOp aop = AssignOp::set;
  RelOp rel = RelOp::lt;
  StepOp step_op = StepOp::add;
  int loop = -1;
  std::vector<RExpr> exprs;  // role depends on tag
  std::vector<RStmt> body;
  std::vector<RStmt> else_body;
};

struct RFunction {
  std::vector<IntKind> params;
  std::optional<IntKind> ret;
  int frame_size = 0;
  std::vector<RStmt> body;
};

struct Slot {
  IntKind kind = IntKind::i32;
  bool init = false;
  Wide v = 0;
  std::vector<Wide> elems;
  std::vector<std::uint8_t> elems_init;
};

struct Resolved {
  std::vector<Slot> globals;
  std::vector<RFunction> functions;
  std::vector<std::string> stmt_paths;
  std::vector<std::string> loop_ids;
  int main_index = -1;
};

class Resolver {
 public:
  explicit Resolver(const Program& p) : p_(p) {}

  Resolved run() {
    for (std::size_t i = 0; i < p_.globals.size(); ++i) {
      const Decl& g = p_.globals[i];
      Slot s;
      s.kind = g.type.kind;
      s.init = true;
      if (g.type.is_array()) {
        s.elems.assign(*g.type.array_len, 0);
        s.elems_init.assign(*g.type.array_len, 1);
        for (std::size_t k = 0; k < g.array_init.size(); ++k)
          s.elems[k] = convert(*const_eval(g.array_init[k], false), g.type.kind).v;
      } else if (g.init) {
        s.v = convert(*const_eval(*g.init, false), g.type.kind).v;
      }
      out_.globals.push_back(std::move(s));
      global_names_[g.name] = {static_cast<int>(i), g.type};
    }
    for (std::size_t i = 0; i < p_.functions.size(); ++i) {
      function_index_[p_.functions[i].name] = static_cast<int>(i);
    }
    for (const auto& f : p_.functions) out_.functions.push_back(function(f));
    out_.main_index = function_index_.at("main");
    return std::move(out_);
  }

 private:
  struct Local {
    int slot;
    TypeSpec type;
  };

  const Program& p_;
  Resolved out_;
  std::map<std::string, std::pair<int, TypeSpec>, std::less<>> global_names_;
  std::map<std::string, int, std::less<>> function_index_;
  std::vector<std::map<std::string, Local, std::less<>>> scopes_;
  int frame_size_ = 0;

  RFunction function(const Function& f) {
    RFunction rf;
    rf.ret = f.return_kind;
    frame_size_ = 0;
    scopes_.assign(1, {});
    for (const auto& prm : f.params) {
      rf.params.push_back(prm.kind);
      scopes_.back()[prm.name] = {frame_size_++, TypeSpec::scalar(prm.kind)};
    }
    rf.body = block(f.body, StmtPath{f.name, {}});
    rf.frame_size = frame_size_;
    return rf;
  }

  std::pair<SlotRef, TypeSpec> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return {{false, f->second.slot}, f->second.type};
    }
    auto g = global_names_.find(name);
    return {{true, g->second.first}, g->second.second};
  }

  RExpr expr(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> RExpr {
          using T = std::decay_t<decltype(n)>;
          RExpr r{};
          if constexpr (std::is_same_v<T, IntLit>) {
            r.tag = RExpr::Tag::lit;
            r.kind = n.kind;
            r.value = n.value;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            auto [slot, type] = lookup(n.name);
            r.tag = RExpr::Tag::var;
            r.slot = slot;
            r.kind = type.kind;
          } else if constexpr (std::is_same_v<T, ArrayRef>) {
            auto [slot, type] = lookup(n.name);
            r.tag = RExpr::Tag::arr;
            r.slot = slot;
            r.kind = type.kind;
            r.kids.push_back(expr(*n.index));
          } else if constexpr (std::is_same_v<T, Unary>) {
            r.tag = RExpr::Tag::unary;
            r.uop = n.op;
            r.kids.push_back(expr(*n.operand));
            r.kind = unary_result_kind(n.op, r.kids[0].kind);
          } else if constexpr (std::is_same_v<T, Binary>) {
            r.tag = RExpr::Tag::binary;
            r.bop = n.op;
            r.kids.push_back(expr(*n.lhs));
            r.kids.push_back(expr(*n.rhs));
            r.kind = binary_result_kind(n.op, r.kids[0].kind, r.kids[1].kind);
          } else if constexpr (std::is_same_v<T, Cast>) {
            r.tag = RExpr::Tag::cast;
            r.kind = n.kind;
            r.kids.push_back(expr(*n.operand));
          } else {
            for (const auto& a : n.args) r.kids.push_back(expr(a));
            if (auto fn = parse_safe_fn(n.callee)) {
              r.tag = RExpr::Tag::safe;
              r.sop = fn->op;
              r.kind = fn->kind;
            } else {
              r.tag = RExpr::Tag::call;
              r.function = function_index_.at(n.callee);
              r.kind = *p_.functions[r.function].return_kind;
            }
          }
          return r;
        },
        e.node);
  }

  int new_id(const StmtPath& path) {
    out_.stmt_paths.push_back(path.str());
    return static_cast<int>(out_.stmt_paths.size() - 1);
  }

  std::vector<RStmt> block(const Block& b, const StmtPath& base) {
    scopes_.emplace_back();
    std::vector<RStmt> out;
    for (std::uint32_t i = 0; i < b.stmts.size(); ++i) {
      StmtPath here = base;
      here.steps.push_back(i);
      out.push_back(stmt(b.stmts[i], here));
    }
    scopes_.pop_back();
    return out;
  }

  RStmt stmt(const Stmt& s, const StmtPath& path) {
    RStmt r{};
    r.id = new_id(path);
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Decl>) {
            r.tag = RStmt::Tag::decl;
            r.kind = n.type.kind;
            r.is_array = n.type.is_array();
            r.array_len = n.type.array_len.value_or(0);
            r.has_init = n.has_initializer();
            if (n.init) r.exprs.push_back(expr(*n.init));
            for (const auto& e : n.array_init) r.exprs.push_back(expr(e));
            int slot = frame_size_++;
            scopes_.back()[n.name] = {slot, n.type};
            r.slot = {false, slot};
          } else if constexpr (std::is_same_v<T, Assign>) {
            r.tag = RStmt::Tag::assign;
            auto [slot, type] = lookup(n.target.name);
            r.slot = slot;
            r.kind = type.kind;
            r.aop = n.op;
            r.has_index = n.target.index.has_value();
            r.array_len = type.array_len.value_or(0);
            r.exprs.push_back(expr(n.rhs));
            if (n.target.index) r.exprs.push_back(expr(*n.target.index));
          } else if constexpr (std::is_same_v<T, If>) {
            r.tag = RStmt::Tag::branch;
            r.exprs.push_back(expr(n.cond));
            r.body = block(n.then_block, with_selector(path, 0));
            if (n.else_block) {
              r.has_else = true;
              r.else_body = block(*n.else_block, with_selector(path, 1));
            }
          } else if constexpr (std::is_same_v<T, ForLoop>) {
            r.tag = RStmt::Tag::loop;
            r.kind = n.index_kind;
            r.rel = n.rel;
            r.step_op = n.step_op;
            r.loop = static_cast<int>(out_.loop_ids.size());
            out_.loop_ids.push_back(n.loop_id);
            r.exprs.push_back(expr(n.init));
            int slot = frame_size_++;
            scopes_.emplace_back();
            scopes_.back()[n.index_var] = {slot, TypeSpec::scalar(n.index_kind)};
            r.slot = {false, slot};
            r.exprs.push_back(expr(n.bound));
            r.exprs.push_back(expr(n.step));
            r.body = block(n.body, with_selector(path, 0));
            scopes_.pop_back();
          } else if constexpr (std::is_same_v<T, Block>) {
            r.tag = RStmt::Tag::block;
            r.body = block(n, with_selector(path, 0));
          } else if constexpr (std::is_same_v<T, ChecksumFold>) {
            r.tag = RStmt::Tag::fold;
            r.exprs.push_back(expr(n.value));
          } else if constexpr (std::is_same_v<T, Return>) {
            r.tag = RStmt::Tag::ret;
            r.exprs.push_back(expr(n.value));
          }
        },
        s.node);
    return r;
  }

  static StmtPath with_selector(const StmtPath& p, std::uint32_t sel) {
    StmtPath out = p;
    out.steps.push_back(sel);
    return out;
  }
};

// ---------------------------------------------------------------------------

struct BudgetExhausted {};

class Machine {
 public:
  Machine(const Resolved& r, const Limits& lim) : r_(r), lim_(lim) {
    globals_ = r.globals;
    stmt_counts_.assign(r.stmt_paths.size(), 0);
    trips_.assign(r.loop_ids.size(), 0);
    entries_.assign(r.loop_ids.size(), {});
  }

  ExecOutcome run() {
    ExecOutcome out;
    try {
      std::vector<Slot> frame(r_.functions[r_.main_index].frame_size);
      frames_.push_back(&frame);
      exec_block(r_.functions[r_.main_index].body);
      frames_.pop_back();
      out.status = ExecStatus::ok;
      out.checksum = acc_;
      out.stdout_bytes = checksum_line(acc_);
    } catch (const Trap& t) {
      out.status = ExecStatus::trap;
      out.trap = t.kind;
      out.trap_path = r_.stmt_paths[current_];
    } catch (const BudgetExhausted&) {
      out.status = ExecStatus::step_budget_exhausted;
    }
    out.steps = steps_;
    for (std::size_t i = 0; i < r_.stmt_paths.size(); ++i)
      out.profile.stmt_exec[r_.stmt_paths[i]] = stmt_counts_[i];
    for (std::size_t i = 0; i < r_.loop_ids.size(); ++i) {
      out.profile.trip_counts[r_.loop_ids[i]] = trips_[i];
      out.profile.entries[r_.loop_ids[i]] = entries_[i];
    }
    return out;
  }

 private:
  const Resolved& r_;
  const Limits& lim_;
  std::vector<Slot> globals_;
  std::vector<std::vector<Slot>*> frames_;
  std::vector<std::uint64_t> stmt_counts_;
  std::vector<std::uint64_t> trips_;
  std::vector<LoopEntries> entries_;
  std::uint64_t steps_ = 0;
  std::uint64_t acc_ = kChecksumInit;
  int current_ = 0;

  Slot& slot(SlotRef s) { return s.global ? globals_[s.index] : (*frames_.back())[s.index]; }

  void tick() {
    if (++steps_ > lim_.max_steps) throw BudgetExhausted{};
  }

  static std::size_t checked_index(const Value& idx, std::size_t len) {
    if (idx.v < 0 || idx.v >= static_cast<Wide>(len)) throw Trap{TrapKind::oob_index};
    return static_cast<std::size_t>(idx.v);
  }

  Value eval(const RExpr& e) {
    switch (e.tag) {
      case RExpr::Tag::lit:
        return {e.kind, e.value};
      case RExpr::Tag::var: {
        Slot& s = slot(e.slot);
        if (!s.init) throw Trap{TrapKind::uninitialized_read};
        return {s.kind, s.v};
      }
      case RExpr::Tag::arr: {
        Value idx = eval(e.kids[0]);
        Slot& s = slot(e.slot);
        std::size_t k = checked_index(idx, s.elems.size());
        if (!s.elems_init[k]) throw Trap{TrapKind::uninitialized_read};
        return {s.kind, s.elems[k]};
      }
      case RExpr::Tag::unary:
        return apply_unary(e.uop, eval(e.kids[0]));
      case RExpr::Tag::binary: {
        if (e.bop == BinaryOp::land || e.bop == BinaryOp::lor) {
          Value a = eval(e.kids[0]);
          bool av = a.v != 0;
          if (e.bop == BinaryOp::land && !av) return {IntKind::i32, 0};
          if (e.bop == BinaryOp::lor && av) return {IntKind::i32, 1};
          Value b = eval(e.kids[1]);
          return {IntKind::i32, b.v != 0 ? 1 : 0};
        }
        Value a = eval(e.kids[0]);
        Value b = eval(e.kids[1]);
        return apply_binary(e.bop, a, b);
      }
      case RExpr::Tag::cast:
        return convert(eval(e.kids[0]), e.kind);
      case RExpr::Tag::safe: {
        Value a = convert(eval(e.kids[0]), e.kind);
        Value b = convert(eval(e.kids[1]), e.kind);
        return apply_safe(e.sop, e.kind, a, b);
      }
      case RExpr::Tag::call:
        return call(e);
    }
    return {};
  }

  Value call(const RExpr& e) {
    const RFunction& f = r_.functions[e.function];
    std::vector<Slot> frame(f.frame_size);
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
      Value v = convert(eval(e.kids[i]), f.params[i]);
      frame[i].kind = f.params[i];
      frame[i].init = true;
      frame[i].v = v.v;
    }
    if (static_cast<int>(frames_.size()) >= lim_.max_call_depth) throw BudgetExhausted{};
    int saved = current_;
    frames_.push_back(&frame);
    Value result{};
    for (const auto& st : f.body) {
      if (st.tag == RStmt::Tag::ret) {
        current_ = st.id;
        tick();
        ++stmt_counts_[st.id];
        result = eval(st.exprs[0]);
        break;
      }
      exec(st);
    }
    frames_.pop_back();
    current_ = saved;
    return convert(result, *f.ret);
  }

  void exec_block(const std::vector<RStmt>& body) {
    for (const auto& s : body) exec(s);
  }

  void exec(const RStmt& s) {
    current_ = s.id;
    tick();
    ++stmt_counts_[s.id];
    switch (s.tag) {
      case RStmt::Tag::decl: {
        Slot& d = slot(s.slot);
        d.kind = s.kind;
        if (s.is_array) {
          d.elems.assign(s.array_len, 0);
          d.elems_init.assign(s.array_len, s.has_init ? 1 : 0);
          for (std::size_t k = 0; k < s.exprs.size(); ++k)
            d.elems[k] = convert(eval(s.exprs[k]), s.kind).v;
          d.init = true;
        } else {
          d.init = false;
          if (s.has_init) {
            d.v = convert(eval(s.exprs[0]), s.kind).v;
            d.init = true;
          }
        }
        return;
      }
      case RStmt::Tag::assign: {
        Slot& t = slot(s.slot);
        Wide* cell;
        std::uint8_t* cell_init = nullptr;
        if (s.has_index) {
          Value idx = eval(s.exprs[1]);
          std::size_t k = checked_index(idx, t.elems.size());
          cell = &t.elems[k];
          cell_init = &t.elems_init[k];
        } else {
          cell = &t.v;
        }
        Value rhs = eval(s.exprs[0]);
        Value result;
        if (auto bop = compound_binary(s.aop)) {
          bool init = cell_init ? *cell_init != 0 : t.init;
          if (!init) throw Trap{TrapKind::uninitialized_read};
          result = convert(apply_binary(*bop, Value{s.kind, *cell}, rhs), s.kind);
        } else {
          result = convert(rhs, s.kind);
        }
        *cell = result.v;
        if (cell_init) *cell_init = 1;
        else t.init = true;
        return;
      }
      case RStmt::Tag::branch: {
        Value c = eval(s.exprs[0]);
        if (c.v != 0) exec_block(s.body);
        else if (s.has_else) exec_block(s.else_body);
        return;
      }
      case RStmt::Tag::loop: {
        Value init = convert(eval(s.exprs[0]), s.kind);
        {
          Slot& idx = slot(s.slot);
          idx.kind = s.kind;
          idx.v = init.v;
          idx.init = true;
        }
        std::uint64_t n = 0;
        BinaryOp rel = to_binary(s.rel);
        BinaryOp step = s.step_op == StepOp::add ? BinaryOp::add : BinaryOp::sub;
        for (;;) {
          current_ = s.id;
          Slot& idx = slot(s.slot);
          Value cond = apply_binary(rel, Value{s.kind, idx.v}, eval(s.exprs[1]));
          if (cond.v == 0) break;
          tick();
          ++n;
          ++trips_[s.loop];
          exec_block(s.body);
          current_ = s.id;
          Slot& idx2 = slot(s.slot);
          idx2.v = convert(apply_binary(step, Value{s.kind, idx2.v}, eval(s.exprs[2])), s.kind).v;
        }
        LoopEntries& le = entries_[s.loop];
        if (le.entries == 0) {
          le.min_trips = le.max_trips = n;
        } else {
          le.min_trips = std::min(le.min_trips, n);
          le.max_trips = std::max(le.max_trips, n);
        }
        ++le.entries;
        return;
      }
      case RStmt::Tag::block:
        exec_block(s.body);
        return;
      case RStmt::Tag::fold: {
        Value v = eval(s.exprs[0]);
        acc_ = checksum_mix(acc_, bits_of(v));
        return;
      }
      case RStmt::Tag::ret:
        // Only reached as the last statement of a callee, handled in call().
        return;
    }
  }
};

}  // namespace

ExecOutcome execute(const Program& p, const Limits& lim) {
  require_valid(p);
  Resolved r = Resolver(p).run();
  return Machine(r, lim).run();
}

LoopProfile profile_loops(const Program& p, const Limits& lim) {
  ExecOutcome o = execute(p, lim);
  if (o.status != ExecStatus::ok) throw ProfileUnavailable("profile unavailable: " + describe(o));
  return std::move(o.profile);
}

}  // namespace loopmorph
