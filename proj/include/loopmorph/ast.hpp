// SPDX-License-Identifier: Apache-2.0
//
// MiniC abstract syntax. Every pipeline stage produces and consumes these
// values; rewrites copy and rebuild rather than mutate shared trees.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace loopmorph {

using Wide = __int128;

enum class IntKind : std::uint8_t { i8, i16, i32, i64, u8, u16, u32, u64 };

inline constexpr IntKind kAllKinds[] = {IntKind::i8,  IntKind::i16, IntKind::i32,
                                        IntKind::i64, IntKind::u8,  IntKind::u16,
                                        IntKind::u32, IntKind::u64};

int bit_width(IntKind k);
bool is_signed(IntKind k);
Wide min_value(IntKind k);
Wide max_value(IntKind k);
bool fits(IntKind k, Wide v);
/// "i8", "u64", ...
std::string_view kind_name(IntKind k);
/// "int8_t", "uint64_t", ...
std::string_view c_type_name(IntKind k);
std::optional<IntKind> kind_from_name(std::string_view name);
std::optional<IntKind> kind_from_c_type(std::string_view name);
IntKind unsigned_of(IntKind k);

struct TypeSpec {
  IntKind kind = IntKind::i32;
  std::optional<std::uint32_t> array_len;

  bool is_array() const { return array_len.has_value(); }
  static TypeSpec scalar(IntKind k) { return {k, std::nullopt}; }
  static TypeSpec array(IntKind k, std::uint32_t n) { return {k, n}; }
  friend bool operator==(const TypeSpec&, const TypeSpec&) = default;
};

/// Owning pointer with value semantics; lets the variant-based tree recurse.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;

enum class UnaryOp : std::uint8_t { neg, bitnot, lognot };

enum class BinaryOp : std::uint8_t {
  add, sub, mul, div, mod,
  band, bor, bxor, shl, shr,
  lt, le, gt, ge, eq, ne,
  land, lor,
};

std::string_view op_token(UnaryOp op);
std::string_view op_token(BinaryOp op);
bool is_comparison(BinaryOp op);
bool is_logical(BinaryOp op);

/// Literal forms the emitter can spell exactly: i32, u32, i64, u64.
struct IntLit {
  IntKind kind = IntKind::i32;
  Wide value = 0;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};

struct VarRef {
  std::string name;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct ArrayRef {
  std::string name;
  Box<Expr> index;
  friend bool operator==(const ArrayRef&, const ArrayRef&) = default;
};

struct Unary {
  UnaryOp op;
  Box<Expr> operand;
  friend bool operator==(const Unary&, const Unary&) = default;
};

struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary&, const Binary&) = default;
};

struct Cast {
  IntKind kind;
  Box<Expr> operand;
  friend bool operator==(const Cast&, const Cast&) = default;
};

struct Call {
  std::string callee;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&);
};

struct Expr {
  std::variant<IntLit, VarRef, ArrayRef, Unary, Binary, Cast, Call> node;
  friend bool operator==(const Expr&, const Expr&) = default;
};

inline bool operator==(const Call& a, const Call& b) {
  return a.callee == b.callee && a.args == b.args;
}

// Construction helpers.
Expr lit(IntKind kind, Wide value);
Expr lit_i32(std::int64_t value);
Expr var(std::string name);
Expr index_of(std::string array, Expr index);
Expr unary(UnaryOp op, Expr operand);
Expr binary(BinaryOp op, Expr lhs, Expr rhs);
Expr cast(IntKind kind, Expr operand);
Expr call(std::string callee, std::vector<Expr> args);

// ---------------------------------------------------------------------------
// Statements

struct Stmt;

struct Block {
  std::vector<Stmt> stmts;
  friend bool operator==(const Block&, const Block&);
};

/// Scalar declarations use `init`; arrays use `array_init` (possibly partial,
/// remaining elements zero). A local without any initializer is poison.
struct Decl {
  std::string name;
  TypeSpec type;
  std::optional<Expr> init;
  std::vector<Expr> array_init;
  bool has_initializer() const { return init.has_value() || !array_init.empty(); }
  friend bool operator==(const Decl&, const Decl&) = default;
};

enum class AssignOp : std::uint8_t { set, add, sub, mul, band, bor, bxor };
std::string_view op_token(AssignOp op);
/// The binary operator a compound assignment applies; nullopt for plain `=`.
std::optional<BinaryOp> compound_binary(AssignOp op);

struct LValue {
  std::string name;
  std::optional<Expr> index;
  friend bool operator==(const LValue&, const LValue&) = default;
};

struct Assign {
  LValue target;
  AssignOp op = AssignOp::set;
  Expr rhs;
  friend bool operator==(const Assign&, const Assign&) = default;
};

struct If {
  Expr cond;
  Block then_block;
  std::optional<Block> else_block;
  friend bool operator==(const If&, const If&);
};

enum class RelOp : std::uint8_t { lt, le, gt, ge };
enum class StepOp : std::uint8_t { add, sub };
std::string_view op_token(RelOp op);
std::string_view op_token(StepOp op);
BinaryOp to_binary(RelOp op);
AssignOp to_assign(StepOp op);

struct ForLoop {
  std::string loop_id;
  std::string index_var;
  IntKind index_kind = IntKind::i32;
  Expr init;
  RelOp rel = RelOp::lt;
  Expr bound;
  StepOp step_op = StepOp::add;
  Expr step;
  Block body;
  friend bool operator==(const ForLoop&, const ForLoop&);
};

struct ChecksumFold {
  Expr value;
  friend bool operator==(const ChecksumFold&, const ChecksumFold&) = default;
};

struct Return {
  Expr value;
  friend bool operator==(const Return&, const Return&) = default;
};

struct Stmt {
  std::variant<Decl, Assign, If, ForLoop, Block, ChecksumFold, Return> node;
  friend bool operator==(const Stmt&, const Stmt&) = default;
};

inline bool operator==(const Block& a, const Block& b) { return a.stmts == b.stmts; }
inline bool operator==(const If& a, const If& b) {
  return a.cond == b.cond && a.then_block == b.then_block && a.else_block == b.else_block;
}
inline bool operator==(const ForLoop& a, const ForLoop& b) {
  return a.loop_id == b.loop_id && a.index_var == b.index_var &&
         a.index_kind == b.index_kind && a.init == b.init && a.rel == b.rel &&
         a.bound == b.bound && a.step_op == b.step_op && a.step == b.step &&
         a.body == b.body;
}

/// Loop header fields only (init, rel, bound, step_op, step, index kind).
bool same_header(const ForLoop& a, const ForLoop& b);

// ---------------------------------------------------------------------------
// Program

struct Param {
  std::string name;
  IntKind kind;
  friend bool operator==(const Param&, const Param&) = default;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  std::optional<IntKind> return_kind;  // nullopt only for main
  Block body;
  friend bool operator==(const Function&, const Function&) = default;
};

/// `functions` are in definition order; `main` is the last one.
struct Program {
  std::vector<Decl> globals;
  std::vector<Function> functions;
  friend bool operator==(const Program&, const Program&) = default;

  const Function* find_function(std::string_view name) const;
  Function* find_function(std::string_view name);
};

// ---------------------------------------------------------------------------
// Statement paths: function name followed by block coordinates. The first
// step indexes the function body; after that steps come in pairs of
// (sub-block selector, statement index). Selectors: for-body 0, if-then 0,
// if-else 1, nested block 0. Printed as "main/3/0/2".

struct StmtPath {
  std::string function;
  std::vector<std::uint32_t> steps;

  std::string str() const;
  static std::optional<StmtPath> parse(std::string_view text);
  StmtPath child(std::uint32_t selector, std::uint32_t index) const;
  std::optional<StmtPath> parent() const;
  bool is_prefix_of(const StmtPath& other) const;
  friend bool operator==(const StmtPath&, const StmtPath&) = default;
  friend auto operator<=>(const StmtPath&, const StmtPath&) = default;
};

const Stmt* stmt_at(const Program& p, const StmtPath& path);
Stmt* stmt_at(Program& p, const StmtPath& path);
/// Block holding the statement at `path`, or null if the path is invalid.
Block* enclosing_block(Program& p, const StmtPath& path);
const Block* enclosing_block(const Program& p, const StmtPath& path);

/// Sub-blocks of a compound statement, paired with their selector.
std::vector<std::pair<std::uint32_t, const Block*>> sub_blocks(const Stmt& s);
std::vector<std::pair<std::uint32_t, Block*>> sub_blocks(Stmt& s);

std::optional<StmtPath> find_loop(const Program& p, std::string_view loop_id);
std::vector<std::string> loop_ids(const Program& p);

inline const ForLoop* as_loop(const Stmt* s) {
  return s ? std::get_if<ForLoop>(&s->node) : nullptr;
}
inline ForLoop* as_loop(Stmt* s) { return s ? std::get_if<ForLoop>(&s->node) : nullptr; }

}  // namespace loopmorph
