// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/ast.hpp"

#include <charconv>
#include <stdexcept>

namespace loopmorph {

int bit_width(IntKind k) {
  switch (k) {
    case IntKind::i8: case IntKind::u8: return 8;
    case IntKind::i16: case IntKind::u16: return 16;
    case IntKind::i32: case IntKind::u32: return 32;
    case IntKind::i64: case IntKind::u64: return 64;
  }
  return 32;
}

bool is_signed(IntKind k) {
  return k == IntKind::i8 || k == IntKind::i16 || k == IntKind::i32 || k == IntKind::i64;
}

Wide min_value(IntKind k) {
  if (!is_signed(k)) return 0;
  return -(Wide{1} << (bit_width(k) - 1));
}

Wide max_value(IntKind k) {
  int w = bit_width(k);
  if (is_signed(k)) return (Wide{1} << (w - 1)) - 1;
  return (Wide{1} << w) - 1;
}

bool fits(IntKind k, Wide v) { return v >= min_value(k) && v <= max_value(k); }

std::string_view kind_name(IntKind k) {
  switch (k) {
    case IntKind::i8: return "i8";
    case IntKind::i16: return "i16";
    case IntKind::i32: return "i32";
    case IntKind::i64: return "i64";
    case IntKind::u8: return "u8";
    case IntKind::u16: return "u16";
    case IntKind::u32: return "u32";
    case IntKind::u64: return "u64";
  }
  return "?";
}

std::string_view c_type_name(IntKind k) {
  switch (k) {
    case IntKind::i8: return "int8_t";
    case IntKind::i16: return "int16_t";
    case IntKind::i32: return "int32_t";
    case IntKind::i64: return "int64_t";
    case IntKind::u8: return "uint8_t";
    case IntKind::u16: return "uint16_t";
    case IntKind::u32: return "uint32_t";
    case IntKind::u64: return "uint64_t";
  }
  return "?";
}

std::optional<IntKind> kind_from_name(std::string_view name) {
  for (IntKind k : kAllKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::optional<IntKind> kind_from_c_type(std::string_view name) {
  for (IntKind k : kAllKinds)
    if (c_type_name(k) == name) return k;
  return std::nullopt;
}

IntKind unsigned_of(IntKind k) {
  switch (k) {
    case IntKind::i8: return IntKind::u8;
    case IntKind::i16: return IntKind::u16;
    case IntKind::i32: return IntKind::u32;
    case IntKind::i64: return IntKind::u64;
    default: return k;
  }
}

std::string_view op_token(UnaryOp op) {
  switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::bitnot: return "~";
    case UnaryOp::lognot: return "!";
  }
  return "?";
}

std::string_view op_token(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::mod: return "%";
    case BinaryOp::band: return "&";
    case BinaryOp::bor: return "|";
    case BinaryOp::bxor: return "^";
    case BinaryOp::shl: return "<<";
    case BinaryOp::shr: return ">>";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::land: return "&&";
    case BinaryOp::lor: return "||";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::lt: case BinaryOp::le: case BinaryOp::gt:
    case BinaryOp::ge: case BinaryOp::eq: case BinaryOp::ne:
      return true;
    default:
      return false;
  }
}

bool is_logical(BinaryOp op) { return op == BinaryOp::land || op == BinaryOp::lor; }

std::string_view op_token(AssignOp op) {
  switch (op) {
    case AssignOp::set: return "=";
    case AssignOp::add: return "+=";
    case AssignOp::sub: return "-=";
    case AssignOp::mul: return "*=";
    case AssignOp::band: return "&=";
    case AssignOp::bor: return "|=";
    case AssignOp::bxor: return "^=";
  }
  return "?";
}

std::optional<BinaryOp> compound_binary(AssignOp op) {
  switch (op) {
    case AssignOp::set: return std::nullopt;
    case AssignOp::add: return BinaryOp::add;
    case AssignOp::sub: return BinaryOp::sub;
    case AssignOp::mul: return BinaryOp::mul;
    case AssignOp::band: return BinaryOp::band;
    case AssignOp::bor: return BinaryOp::bor;
    case AssignOp::bxor: return BinaryOp::bxor;
  }
  return std::nullopt;
}

std::string_view op_token(RelOp op) {
  switch (op) {
    case RelOp::lt: return "<";
    case RelOp::le: return "<=";
    case RelOp::gt: return ">";
    case RelOp::ge: return ">=";
  }
  return "?";
}

std::string_view op_token(StepOp op) { return op == StepOp::add ? "+=" : "-="; }

BinaryOp to_binary(RelOp op) {
  switch (op) {
    case RelOp::lt: return BinaryOp::lt;
    case RelOp::le: return BinaryOp::le;
    case RelOp::gt: return BinaryOp::gt;
    case RelOp::ge: return BinaryOp::ge;
  }
  return BinaryOp::lt;
}

AssignOp to_assign(StepOp op) { return op == StepOp::add ? AssignOp::add : AssignOp::sub; }

Expr lit(IntKind kind, Wide value) { return Expr{IntLit{kind, value}}; }
Expr lit_i32(std::int64_t value) { return lit(IntKind::i32, value); }
Expr var(std::string name) { return Expr{VarRef{std::move(name)}}; }
Expr index_of(std::string array, Expr index) {
  return Expr{ArrayRef{std::move(array), Box<Expr>(std::move(index))}};
}
Expr unary(UnaryOp op, Expr operand) { return Expr{Unary{op, Box<Expr>(std::move(operand))}}; }
Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr{Binary{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}
Expr cast(IntKind kind, Expr operand) { return Expr{Cast{kind, Box<Expr>(std::move(operand))}}; }
Expr call(std::string callee, std::vector<Expr> args) {
  return Expr{Call{std::move(callee), std::move(args)}};
}

bool same_header(const ForLoop& a, const ForLoop& b) {
  return a.index_kind == b.index_kind && a.init == b.init && a.rel == b.rel &&
         a.bound == b.bound && a.step_op == b.step_op && a.step == b.step;
}

const Function* Program::find_function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

Function* Program::find_function(std::string_view name) {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Paths

std::string StmtPath::str() const {
  std::string out = function;
  for (auto s : steps) {
    out += '/';
    out += std::to_string(s);
  }
  return out;
}

std::optional<StmtPath> StmtPath::parse(std::string_view text) {
  StmtPath path;
  auto slash = text.find('/');
  path.function = std::string(text.substr(0, slash));
  if (path.function.empty()) return std::nullopt;
  while (slash != std::string_view::npos) {
    text.remove_prefix(slash + 1);
    slash = text.find('/');
    auto piece = text.substr(0, slash);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc{} || ptr != piece.data() + piece.size()) return std::nullopt;
    path.steps.push_back(v);
  }
  return path;
}

StmtPath StmtPath::child(std::uint32_t selector, std::uint32_t index) const {
  StmtPath out = *this;
  out.steps.push_back(selector);
  out.steps.push_back(index);
  return out;
}

std::optional<StmtPath> StmtPath::parent() const {
  if (steps.size() < 3) return std::nullopt;
  StmtPath out = *this;
  out.steps.resize(steps.size() - 2);
  return out;
}

bool StmtPath::is_prefix_of(const StmtPath& other) const {
  if (function != other.function || steps.size() > other.steps.size()) return false;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i] != other.steps[i]) return false;
  return true;
}

std::vector<std::pair<std::uint32_t, const Block*>> sub_blocks(const Stmt& s) {
  std::vector<std::pair<std::uint32_t, const Block*>> out;
  if (auto* f = std::get_if<ForLoop>(&s.node)) {
    out.emplace_back(0, &f->body);
  } else if (auto* i = std::get_if<If>(&s.node)) {
    out.emplace_back(0, &i->then_block);
    if (i->else_block) out.emplace_back(1, &*i->else_block);
  } else if (auto* b = std::get_if<Block>(&s.node)) {
    out.emplace_back(0, b);
  }
  return out;
}

std::vector<std::pair<std::uint32_t, Block*>> sub_blocks(Stmt& s) {
  std::vector<std::pair<std::uint32_t, Block*>> out;
  if (auto* f = std::get_if<ForLoop>(&s.node)) {
    out.emplace_back(0, &f->body);
  } else if (auto* i = std::get_if<If>(&s.node)) {
    out.emplace_back(0, &i->then_block);
    if (i->else_block) out.emplace_back(1, &*i->else_block);
  } else if (auto* b = std::get_if<Block>(&s.node)) {
    out.emplace_back(0, b);
  }
  return out;
}

namespace {

template <class P, class B>
B* block_for_prefix(P& program, const StmtPath& path, std::size_t depth) {
  auto* fn = program.find_function(path.function);
  if (!fn) return nullptr;
  B* block = &fn->body;
  // depth counts how many (stmt, selector) pairs to descend.
  for (std::size_t i = 0; i < depth; ++i) {
    auto idx = path.steps[2 * i];
    auto sel = path.steps[2 * i + 1];
    if (idx >= block->stmts.size()) return nullptr;
    B* next = nullptr;
    for (auto [s, b] : sub_blocks(block->stmts[idx]))
      if (s == sel) next = b;
    if (!next) return nullptr;
    block = next;
  }
  return block;
}

}  // namespace

const Block* enclosing_block(const Program& p, const StmtPath& path) {
  if (path.steps.empty() || path.steps.size() % 2 == 0) return nullptr;
  return block_for_prefix<const Program, const Block>(p, path, path.steps.size() / 2);
}

Block* enclosing_block(Program& p, const StmtPath& path) {
  if (path.steps.empty() || path.steps.size() % 2 == 0) return nullptr;
  return block_for_prefix<Program, Block>(p, path, path.steps.size() / 2);
}

const Stmt* stmt_at(const Program& p, const StmtPath& path) {
  const Block* b = enclosing_block(p, path);
  if (!b || path.steps.back() >= b->stmts.size()) return nullptr;
  return &b->stmts[path.steps.back()];
}

Stmt* stmt_at(Program& p, const StmtPath& path) {
  Block* b = enclosing_block(p, path);
  if (!b || path.steps.back() >= b->stmts.size()) return nullptr;
  return &b->stmts[path.steps.back()];
}

namespace {

void collect_loops(const Block& block, const StmtPath& base, bool top,
                   std::vector<std::pair<std::string, StmtPath>>& out) {
  for (std::uint32_t i = 0; i < block.stmts.size(); ++i) {
    StmtPath here = base;
    here.steps.push_back(i);
    const Stmt& s = block.stmts[i];
    if (auto* f = std::get_if<ForLoop>(&s.node)) out.emplace_back(f->loop_id, here);
    for (auto [sel, sub] : sub_blocks(s)) {
      StmtPath inner = here;
      inner.steps.push_back(sel);
      collect_loops(*sub, inner, false, out);
    }
  }
  (void)top;
}

std::vector<std::pair<std::string, StmtPath>> all_loops(const Program& p) {
  std::vector<std::pair<std::string, StmtPath>> out;
  for (const auto& fn : p.functions) collect_loops(fn.body, StmtPath{fn.name, {}}, true, out);
  return out;
}

}  // namespace

std::optional<StmtPath> find_loop(const Program& p, std::string_view loop_id) {
  for (auto& [id, path] : all_loops(p))
    if (id == loop_id) return path;
  return std::nullopt;
}

std::vector<std::string> loop_ids(const Program& p) {
  std::vector<std::string> out;
  for (auto& [id, path] : all_loops(p)) out.push_back(id);
  return out;
}

}  // namespace loopmorph
