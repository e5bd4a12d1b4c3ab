// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/validate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "loopmorph/errors.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

namespace {

const std::set<std::string, std::less<>>& reserved_names() {
  static const std::set<std::string, std::less<>> names = {
      "auto",     "break",    "case",     "char",     "const",    "continue", "default",
      "do",       "double",   "else",     "enum",     "extern",   "float",    "for",
      "goto",     "if",       "inline",   "int",      "long",     "register", "restrict",
      "return",   "short",    "signed",   "sizeof",   "static",   "struct",   "switch",
      "typedef",  "union",    "unsigned", "void",     "volatile", "while",    "_Bool",
      "main",     "printf",   "INT64_C",  "UINT64_C", "INT32_MIN", "INT64_MIN",
      "lm_checksum", "int8_t", "int16_t", "int32_t",  "int64_t",  "uint8_t",  "uint16_t",
      "uint32_t", "uint64_t",
  };
  return names;
}

}  // namespace

bool is_reserved_name(std::string_view name) {
  if (reserved_names().contains(name)) return true;
  if (parse_safe_fn(name) || parse_fold_fn(name)) return true;
  return false;
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

bool is_valid_loop_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.';
  });
}

bool is_canonical(const ForLoop& loop) {
  return !names_written(loop.body).contains(loop.index_var);
}

std::optional<IntKind> kind_of(const Expr& e, const VarTable& vars, const Program& p) {
  return std::visit(
      [&](const auto& n) -> std::optional<IntKind> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return n.kind;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          auto it = vars.find(n.name);
          if (it == vars.end() || it->second.type.is_array()) return std::nullopt;
          return it->second.type.kind;
        } else if constexpr (std::is_same_v<T, ArrayRef>) {
          auto it = vars.find(n.name);
          if (it == vars.end() || !it->second.type.is_array()) return std::nullopt;
          if (!kind_of(*n.index, vars, p)) return std::nullopt;
          return it->second.type.kind;
        } else if constexpr (std::is_same_v<T, Unary>) {
          auto k = kind_of(*n.operand, vars, p);
          if (!k) return std::nullopt;
          return unary_result_kind(n.op, *k);
        } else if constexpr (std::is_same_v<T, Binary>) {
          auto a = kind_of(*n.lhs, vars, p);
          auto b = kind_of(*n.rhs, vars, p);
          if (!a || !b) return std::nullopt;
          return binary_result_kind(n.op, *a, *b);
        } else if constexpr (std::is_same_v<T, Cast>) {
          if (!kind_of(*n.operand, vars, p)) return std::nullopt;
          return n.kind;
        } else {
          for (const auto& a : n.args)
            if (!kind_of(a, vars, p)) return std::nullopt;
          if (auto fn = parse_safe_fn(n.callee)) return fn->kind;
          if (auto* f = p.find_function(n.callee)) return f->return_kind;
          return std::nullopt;
        }
      },
      e.node);
}

namespace {

void add_decl(VarTable& vars, const Decl& d, bool global) {
  VarInfo info;
  info.type = d.type;
  info.global = global;
  // Statics are zero-initialized; locals without an initializer are poison.
  info.initialized = global || d.has_initializer();
  vars[d.name] = info;
}

}  // namespace

VarTable scope_at(const Program& p, const StmtPath& path) {
  VarTable vars;
  for (const auto& g : p.globals) add_decl(vars, g, true);
  const Function* fn = p.find_function(path.function);
  if (!fn) return vars;
  for (const auto& prm : fn->params) {
    VarInfo info;
    info.type = TypeSpec::scalar(prm.kind);
    info.param = true;
    vars[prm.name] = info;
  }
  const Block* block = &fn->body;
  for (std::size_t depth = 0; depth < path.steps.size(); depth += 2) {
    std::uint32_t idx = path.steps[depth];
    for (std::uint32_t i = 0; i < idx && i < block->stmts.size(); ++i)
      if (auto* d = std::get_if<Decl>(&block->stmts[i].node)) add_decl(vars, *d, false);
    if (depth + 1 >= path.steps.size() || idx >= block->stmts.size()) break;
    const Stmt& s = block->stmts[idx];
    std::uint32_t sel = path.steps[depth + 1];
    if (auto* f = std::get_if<ForLoop>(&s.node)) {
      VarInfo info;
      info.type = TypeSpec::scalar(f->index_kind);
      info.loop_index = true;
      vars[f->index_var] = info;
    }
    const Block* next = nullptr;
    for (auto [sl, sub] : sub_blocks(s))
      if (sl == sel) next = sub;
    if (!next) break;
    block = next;
  }
  return vars;
}

// ---------------------------------------------------------------------------

namespace {

struct LoopFrame {
  const ForLoop* loop;
  std::size_t body_depth;  // scope depth of the loop body
};

class Validator {
 public:
  Validator(const Program& p, const ValidateOptions& opts) : p_(p), opts_(opts) {}

  Diagnostics run() {
    check_globals();
    check_functions();
    return std::move(diags_);
  }

 private:
  const Program& p_;
  const ValidateOptions& opts_;
  Diagnostics diags_;

  std::vector<VarTable> scopes_;
  std::vector<LoopFrame> loops_;
  std::set<std::string> loop_ids_;
  std::set<std::string> defined_functions_;
  const Function* current_ = nullptr;

  void diag(std::string path, std::string reason) {
    diags_.push_back({std::move(path), std::move(reason)});
  }

  const VarInfo* lookup(std::string_view name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  VarTable flat() const {
    VarTable out;
    for (const auto& s : scopes_)
      for (const auto& [k, v] : s) out[k] = v;
    return out;
  }

  bool in_main() const { return current_ && current_->name == "main"; }

  void declare(const std::string& path, const std::string& name, VarInfo info) {
    if (!is_identifier(name) || is_reserved_name(name)) {
      diag(path, "invalid identifier '" + name + "'");
    } else if (lookup(name) || p_.find_function(name)) {
      diag(path, "redeclared identifier '" + name + "'");
    }
    scopes_.back()[name] = info;
  }

  // -- expressions ----------------------------------------------------------

  std::optional<IntKind> expr(const Expr& e, const std::string& path) {
    return std::visit(
        [&](const auto& n) -> std::optional<IntKind> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            bool spellable = n.kind == IntKind::i32 || n.kind == IntKind::u32 ||
                             n.kind == IntKind::i64 || n.kind == IntKind::u64;
            if (!spellable) diag(path, "literal kind must be i32, u32, i64 or u64");
            if (!fits(n.kind, n.value)) diag(path, "literal out of range");
            return n.kind;
          } else if constexpr (std::is_same_v<T, VarRef>) {
            const VarInfo* v = lookup(n.name);
            if (!v) {
              diag(path, "undeclared identifier '" + n.name + "'");
              return std::nullopt;
            }
            if (v->type.is_array()) {
              diag(path, "array '" + n.name + "' used as scalar");
              return std::nullopt;
            }
            return v->type.kind;
          } else if constexpr (std::is_same_v<T, ArrayRef>) {
            const VarInfo* v = lookup(n.name);
            auto ik = expr(*n.index, path + ".0");
            if (!v) {
              diag(path, "undeclared identifier '" + n.name + "'");
              return std::nullopt;
            }
            if (!v->type.is_array()) {
              diag(path, "subscript of non-array '" + n.name + "'");
              return std::nullopt;
            }
            if (!ik) return std::nullopt;
            return v->type.kind;
          } else if constexpr (std::is_same_v<T, Unary>) {
            auto k = expr(*n.operand, path + ".0");
            if (!k) return std::nullopt;
            return unary_result_kind(n.op, *k);
          } else if constexpr (std::is_same_v<T, Binary>) {
            auto a = expr(*n.lhs, path + ".0");
            auto b = expr(*n.rhs, path + ".1");
            if (!a || !b) return std::nullopt;
            return binary_result_kind(n.op, *a, *b);
          } else if constexpr (std::is_same_v<T, Cast>) {
            if (!expr(*n.operand, path + ".0")) return std::nullopt;
            return n.kind;
          } else {
            bool ok = true;
            for (std::size_t i = 0; i < n.args.size(); ++i)
              ok = expr(n.args[i], path + "." + std::to_string(i)).has_value() && ok;
            if (auto fn = parse_safe_fn(n.callee)) {
              if (n.args.size() != 2) {
                diag(path, "wrong argument count for '" + n.callee + "'");
                return std::nullopt;
              }
              return ok ? std::optional<IntKind>(fn->kind) : std::nullopt;
            }
            const Function* f = p_.find_function(n.callee);
            if (!f || f->name == "main") {
              diag(path, "call to undeclared function '" + n.callee + "'");
              return std::nullopt;
            }
            if (!defined_functions_.contains(n.callee)) {
              diag(path, "call to '" + n.callee + "' before its definition");
              return std::nullopt;
            }
            if (f->params.size() != n.args.size()) {
              diag(path, "wrong argument count for '" + n.callee + "'");
              return std::nullopt;
            }
            return ok ? f->return_kind : std::nullopt;
          }
        },
        e.node);
  }

  // -- statements -----------------------------------------------------------

  void block(const Block& b, const StmtPath& base, std::optional<VarInfo> index = {},
             const std::string& index_name = {}) {
    scopes_.emplace_back();
    if (index) scopes_.back()[index_name] = *index;
    for (std::uint32_t i = 0; i < b.stmts.size(); ++i) {
      StmtPath here = base;
      here.steps.push_back(i);
      stmt(b.stmts[i], here, b, i);
    }
    scopes_.pop_back();
  }

  void stmt(const Stmt& s, const StmtPath& path, const Block& parent, std::uint32_t index) {
    const std::string ps = path.str();
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Decl>) {
            decl(n, ps, false);
          } else if constexpr (std::is_same_v<T, Assign>) {
            assign(n, path, ps);
          } else if constexpr (std::is_same_v<T, If>) {
            expr(n.cond, ps + ":cond");
            block(n.then_block, with_selector(path, 0));
            if (n.else_block) block(*n.else_block, with_selector(path, 1));
          } else if constexpr (std::is_same_v<T, ForLoop>) {
            loop(n, path, ps);
          } else if constexpr (std::is_same_v<T, Block>) {
            block(n, with_selector(path, 0));
          } else if constexpr (std::is_same_v<T, ChecksumFold>) {
            if (!in_main()) diag(ps, "checksum fold outside main");
            expr(n.value, ps + ":value");
          } else if constexpr (std::is_same_v<T, Return>) {
            bool last_top_level =
                path.steps.size() == 1 && index + 1 == parent.stmts.size();
            if (in_main() || !last_top_level) diag(ps, "misplaced return");
            expr(n.value, ps + ":value");
          }
        },
        s.node);
  }

  static StmtPath with_selector(const StmtPath& p, std::uint32_t sel) {
    StmtPath out = p;
    out.steps.push_back(sel);
    return out;
  }

  void decl(const Decl& d, const std::string& ps, bool global) {
    if (d.type.array_len && *d.type.array_len < 1) diag(ps, "array length must be >= 1");
    if (d.type.is_array()) {
      if (d.init) diag(ps, "array initialized with scalar");
      if (d.array_init.size() > d.type.array_len.value_or(0))
        diag(ps, "too many array initializers");
      for (std::size_t i = 0; i < d.array_init.size(); ++i) {
        expr(d.array_init[i], ps + ":init." + std::to_string(i));
        if (global && !const_eval(d.array_init[i], false))
          diag(ps, "global initializer is not constant");
      }
    } else {
      if (!d.array_init.empty()) diag(ps, "scalar initialized with list");
      if (d.init) {
        expr(*d.init, ps + ":init");
        if (global && !const_eval(*d.init, false))
          diag(ps, "global initializer is not constant");
      }
    }
    VarInfo info;
    info.type = d.type;
    info.global = global;
    info.initialized = global || d.has_initializer();
    declare(ps, d.name, info);
  }

  void assign(const Assign& a, const StmtPath& path, const std::string& ps) {
    const VarInfo* target = lookup(a.target.name);
    if (!target) {
      diag(ps + ":target", "undeclared identifier '" + a.target.name + "'");
    } else {
      if (target->type.is_array() != a.target.index.has_value())
        diag(ps + ":target", "assignment target shape mismatch");
      if (target->global && !in_main())
        diag(ps, "function '" + current_->name + "' writes global '" + a.target.name + "'");
    }
    if (a.target.index) expr(*a.target.index, ps + ":target.0");
    expr(a.rhs, ps + ":rhs");

    for (const auto& frame : loops_) {
      if (frame.loop->index_var != a.target.name) continue;
      // An unrolled body carries `index step_op= step` between its copies.
      bool step_update = path.steps.size() == frame.body_depth &&
                         !a.target.index && a.op == to_assign(frame.loop->step_op) &&
                         a.rhs == frame.loop->step && &frame == &loops_.back();
      if (!step_update) diag(ps, "loop index written in body");
    }
  }

  void loop(const ForLoop& f, const StmtPath& path, const std::string& ps) {
    if (!is_valid_loop_id(f.loop_id)) diag(ps, "invalid loop id '" + f.loop_id + "'");
    else if (!loop_ids_.insert(f.loop_id).second)
      diag(ps, "duplicate loop id '" + f.loop_id + "'");
    expr(f.init, ps + ":init");
    if (!is_identifier(f.index_var) || is_reserved_name(f.index_var))
      diag(ps, "invalid identifier '" + f.index_var + "'");
    else if (lookup(f.index_var) || p_.find_function(f.index_var))
      diag(ps, "redeclared identifier '" + f.index_var + "'");
    if (names_read(f.bound).contains(f.index_var) || names_read(f.step).contains(f.index_var))
      diag(ps, "loop header references its index");
    VarInfo info;
    info.type = TypeSpec::scalar(f.index_kind);
    info.loop_index = true;
    scopes_.emplace_back();
    scopes_.back()[f.index_var] = info;
    expr(f.bound, ps + ":bound");
    expr(f.step, ps + ":step");
    scopes_.pop_back();
    auto step = const_eval(f.step);
    if (!step || step->v == 0) diag(ps, "loop step is not a nonzero constant");

    StmtPath body_base = with_selector(path, 0);
    loops_.push_back({&f, body_base.steps.size() + 1});
    block(f.body, body_base, info, f.index_var);
    loops_.pop_back();
  }

  // -- top level ------------------------------------------------------------

  void check_globals() {
    scopes_.emplace_back();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < p_.globals.size(); ++i)
      decl(p_.globals[i], "@globals/" + std::to_string(i), true);
  }

  void check_functions() {
    std::size_t mains = 0;
    std::set<std::string> names;
    for (std::size_t i = 0; i < p_.functions.size(); ++i) {
      const Function& f = p_.functions[i];
      const std::string ps = f.name;
      if (f.name == "main") {
        ++mains;
        if (i + 1 != p_.functions.size()) diag(ps, "main must be the last function");
        if (!f.params.empty() || f.return_kind) diag(ps, "main takes no parameters");
      } else {
        if (!is_identifier(f.name) || is_reserved_name(f.name))
          diag(ps, "invalid function name '" + f.name + "'");
        if (!f.return_kind) diag(ps, "function without return type");
        if (f.body.stmts.empty() || !std::holds_alternative<Return>(f.body.stmts.back().node))
          diag(ps, "missing return");
      }
      if (!names.insert(f.name).second) diag(ps, "duplicate function '" + f.name + "'");
      if (lookup(f.name)) diag(ps, "function name collides with global '" + f.name + "'");

      current_ = &f;
      scopes_.emplace_back();
      for (const auto& prm : f.params) {
        VarInfo info;
        info.type = TypeSpec::scalar(prm.kind);
        info.param = true;
        declare(ps, prm.name, info);
      }
      block(f.body, StmtPath{f.name, {}});
      scopes_.pop_back();
      defined_functions_.insert(f.name);
    }
    if (mains != 1) diag("main", "program must define exactly one main");
    check_call_depth();
  }

  void check_call_depth() {
    std::map<std::string, int> depth;
    for (const auto& f : p_.functions) {
      int d = 1;
      walk_stmts(f.body, StmtPath{f.name, {}}, [&](const Stmt& s, const StmtPath&) {
        stmt_exprs(s, [&](const Expr& e) {
          for (const auto& c : callees(e)) {
            auto it = depth.find(c);
            if (it != depth.end()) d = std::max(d, it->second + 1);
          }
        });
      });
      depth[f.name] = d;
      if (d > opts_.max_call_depth) diag(f.name, "call depth exceeds limit");
    }
  }
};

}  // namespace

Diagnostics validate_program(const Program& p, const ValidateOptions& opts) {
  return Validator(p, opts).run();
}

std::string format_diagnostics(const Diagnostics& d) {
  std::ostringstream os;
  for (const auto& x : d) os << x.path << ": " << x.reason << "\n";
  return os.str();
}

void require_valid(const Program& p, const ValidateOptions& opts) {
  auto d = validate_program(p, opts);
  if (!d.empty()) throw InvalidProgram("invalid program:\n" + format_diagnostics(d));
}

}  // namespace loopmorph
