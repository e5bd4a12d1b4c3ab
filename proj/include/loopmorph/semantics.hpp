// SPDX-License-Identifier: Apache-2.0
//
// Integer semantics of MiniC as compiled C11 on an LP64 target: integer
// promotions, the usual arithmetic conversions, UB traps for raw operators,
// and the total safe-op library. The emitted C prelude implements the same
// safe-op rules; the interpreter is the executable statement of both.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "loopmorph/ast.hpp"

namespace loopmorph {

enum class TrapKind : std::uint8_t {
  signed_overflow,
  div_by_zero,
  oob_index,
  shift_out_of_range,
  uninitialized_read,
};

std::string_view trap_name(TrapKind k);
std::optional<TrapKind> trap_from_name(std::string_view name);

/// Thrown by raw operators whose C behavior is undefined.
struct Trap {
  TrapKind kind;
};

/// A typed integer; `v` always lies within the range of `kind`.
struct Value {
  IntKind kind = IntKind::i32;
  Wide v = 0;
  friend bool operator==(const Value&, const Value&) = default;
};

/// Two's-complement reduction of `v` into the range of `kind`.
Wide wrap(IntKind kind, Wide v);
Value convert(Value v, IntKind to);
/// Bit pattern of `v` zero-extended from its width.
std::uint64_t bits_of(Value v);

IntKind promote(IntKind k);
IntKind usual_arithmetic(IntKind a, IntKind b);

/// Result type of a raw binary operator applied to operands of these types.
IntKind binary_result_kind(BinaryOp op, IntKind lhs, IntKind rhs);
IntKind unary_result_kind(UnaryOp op, IntKind operand);

/// Non-short-circuit application; throws Trap on undefined behavior.
Value apply_binary(BinaryOp op, Value lhs, Value rhs);
Value apply_unary(UnaryOp op, Value operand);

// ---------------------------------------------------------------------------
// Safe-op library: safe_<op>_<kind>(a, b), both parameters of the named kind.

enum class SafeOp : std::uint8_t { add, sub, mul, div, mod, shl, shr };

inline constexpr SafeOp kAllSafeOps[] = {SafeOp::add, SafeOp::sub, SafeOp::mul, SafeOp::div,
                                         SafeOp::mod, SafeOp::shl, SafeOp::shr};

std::string_view safe_op_name(SafeOp op);
std::string safe_fn_name(SafeOp op, IntKind kind);

struct SafeFn {
  SafeOp op;
  IntKind kind;
};
std::optional<SafeFn> parse_safe_fn(std::string_view name);

/// Total; never traps.
Value apply_safe(SafeOp op, IntKind kind, Value a, Value b);

/// C definitions of every safe_* wrapper plus the checksum helpers.
std::string safe_ops_prelude();

// ---------------------------------------------------------------------------
// Checksum accumulator.

inline constexpr std::uint64_t kChecksumInit = 0xCBF29CE484222325ULL;
inline constexpr std::uint64_t kChecksumPrime = 0x100000001B3ULL;

inline std::uint64_t checksum_mix(std::uint64_t acc, std::uint64_t value) {
  return (acc ^ value) * kChecksumPrime;
}

/// Name of the fold helper for a value of the given type ("lm_fold32").
std::string fold_fn_name(IntKind k);
/// Width encoded in a fold helper name, if it is one.
std::optional<int> parse_fold_fn(std::string_view name);

/// `checksum = %llX\n` for the given accumulator.
std::string checksum_line(std::uint64_t acc);

// Names emitted by the scaffold; user programs may not declare them.
inline constexpr std::string_view kChecksumVar = "lm_checksum";

/// Folds an expression built only from literals, casts and operators (and,
/// when allowed, safe-op calls). Returns nullopt for non-constant input or
/// when evaluation would trap.
std::optional<Value> const_eval(const Expr& e, bool allow_safe_calls = true);

}  // namespace loopmorph
