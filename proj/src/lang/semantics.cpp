// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/semantics.hpp"

#include <cstdio>
#include <sstream>

namespace loopmorph {

using UWide = unsigned __int128;

std::string_view trap_name(TrapKind k) {
  switch (k) {
    case TrapKind::signed_overflow: return "signed_overflow";
    case TrapKind::div_by_zero: return "div_by_zero";
    case TrapKind::oob_index: return "oob_index";
    case TrapKind::shift_out_of_range: return "shift_out_of_range";
    case TrapKind::uninitialized_read: return "uninitialized_read";
  }
  return "?";
}

std::optional<TrapKind> trap_from_name(std::string_view name) {
  for (auto k : {TrapKind::signed_overflow, TrapKind::div_by_zero, TrapKind::oob_index,
                 TrapKind::shift_out_of_range, TrapKind::uninitialized_read})
    if (trap_name(k) == name) return k;
  return std::nullopt;
}

Wide wrap(IntKind kind, Wide v) {
  const int w = bit_width(kind);
  const UWide mask = (UWide{1} << w) - 1;
  UWide m = static_cast<UWide>(v) & mask;
  if (is_signed(kind) && (m >> (w - 1)) != 0) return static_cast<Wide>(m) - (Wide{1} << w);
  return static_cast<Wide>(m);
}

Value convert(Value v, IntKind to) { return Value{to, wrap(to, v.v)}; }

std::uint64_t bits_of(Value v) {
  return static_cast<std::uint64_t>(wrap(unsigned_of(v.kind), v.v));
}

IntKind promote(IntKind k) { return bit_width(k) < 32 ? IntKind::i32 : k; }

IntKind usual_arithmetic(IntKind a, IntKind b) {
  a = promote(a);
  b = promote(b);
  if (a == b) return a;
  if (is_signed(a) == is_signed(b)) return bit_width(a) >= bit_width(b) ? a : b;
  IntKind u = is_signed(a) ? b : a;
  IntKind s = is_signed(a) ? a : b;
  if (bit_width(u) >= bit_width(s)) return u;
  return s;
}

IntKind binary_result_kind(BinaryOp op, IntKind lhs, IntKind rhs) {
  if (is_comparison(op) || is_logical(op)) return IntKind::i32;
  if (op == BinaryOp::shl || op == BinaryOp::shr) return promote(lhs);
  return usual_arithmetic(lhs, rhs);
}

IntKind unary_result_kind(UnaryOp op, IntKind operand) {
  if (op == UnaryOp::lognot) return IntKind::i32;
  return promote(operand);
}

namespace {

Value checked(IntKind t, Wide r) {
  if (is_signed(t)) {
    if (!fits(t, r)) throw Trap{TrapKind::signed_overflow};
    return {t, r};
  }
  return {t, wrap(t, r)};
}

Wide mul_wrapped(IntKind t, Wide a, Wide b) {
  UWide ua = static_cast<UWide>(wrap(unsigned_of(t), a));
  UWide ub = static_cast<UWide>(wrap(unsigned_of(t), b));
  return wrap(t, static_cast<Wide>(ua * ub));
}

}  // namespace

Value apply_binary(BinaryOp op, Value lhs, Value rhs) {
  if (op == BinaryOp::shl || op == BinaryOp::shr) {
    IntKind t = promote(lhs.kind);
    Value a = convert(lhs, t);
    Value count = convert(rhs, promote(rhs.kind));
    if (count.v < 0 || count.v >= bit_width(t)) throw Trap{TrapKind::shift_out_of_range};
    const int s = static_cast<int>(count.v);
    if (op == BinaryOp::shl) {
      if (is_signed(t)) {
        if (a.v < 0) throw Trap{TrapKind::signed_overflow};
        return checked(t, a.v << s);
      }
      return {t, wrap(t, static_cast<Wide>(static_cast<UWide>(a.v) << s))};
    }
    return {t, a.v >> s};
  }
  if (op == BinaryOp::land) return {IntKind::i32, (lhs.v != 0 && rhs.v != 0) ? 1 : 0};
  if (op == BinaryOp::lor) return {IntKind::i32, (lhs.v != 0 || rhs.v != 0) ? 1 : 0};

  IntKind t = usual_arithmetic(lhs.kind, rhs.kind);
  Wide a = convert(lhs, t).v;
  Wide b = convert(rhs, t).v;
  switch (op) {
    case BinaryOp::add: return checked(t, a + b);
    case BinaryOp::sub: return checked(t, a - b);
    case BinaryOp::mul:
      if (is_signed(t)) return checked(t, a * b);
      return {t, mul_wrapped(t, a, b)};
    case BinaryOp::div:
    case BinaryOp::mod:
      if (b == 0) throw Trap{TrapKind::div_by_zero};
      if (is_signed(t) && a == min_value(t) && b == -1) throw Trap{TrapKind::signed_overflow};
      return {t, op == BinaryOp::div ? a / b : a % b};
    case BinaryOp::band:
    case BinaryOp::bor:
    case BinaryOp::bxor: {
      UWide ua = static_cast<UWide>(a);
      UWide ub = static_cast<UWide>(b);
      UWide r = op == BinaryOp::band ? (ua & ub) : op == BinaryOp::bor ? (ua | ub) : (ua ^ ub);
      return {t, wrap(t, static_cast<Wide>(r))};
    }
    case BinaryOp::lt: return {IntKind::i32, a < b};
    case BinaryOp::le: return {IntKind::i32, a <= b};
    case BinaryOp::gt: return {IntKind::i32, a > b};
    case BinaryOp::ge: return {IntKind::i32, a >= b};
    case BinaryOp::eq: return {IntKind::i32, a == b};
    case BinaryOp::ne: return {IntKind::i32, a != b};
    default: break;
  }
  return {t, 0};
}

Value apply_unary(UnaryOp op, Value operand) {
  if (op == UnaryOp::lognot) return {IntKind::i32, operand.v == 0 ? 1 : 0};
  IntKind t = promote(operand.kind);
  Wide a = convert(operand, t).v;
  if (op == UnaryOp::neg) return checked(t, -a);
  return {t, wrap(t, ~a)};
}

// ---------------------------------------------------------------------------

std::string_view safe_op_name(SafeOp op) {
  switch (op) {
    case SafeOp::add: return "add";
    case SafeOp::sub: return "sub";
    case SafeOp::mul: return "mul";
    case SafeOp::div: return "div";
    case SafeOp::mod: return "mod";
    case SafeOp::shl: return "shl";
    case SafeOp::shr: return "shr";
  }
  return "?";
}

std::string safe_fn_name(SafeOp op, IntKind kind) {
  std::string out = "safe_";
  out += safe_op_name(op);
  out += '_';
  out += kind_name(kind);
  return out;
}

std::optional<SafeFn> parse_safe_fn(std::string_view name) {
  if (!name.starts_with("safe_")) return std::nullopt;
  name.remove_prefix(5);
  auto us = name.find('_');
  if (us == std::string_view::npos) return std::nullopt;
  auto op_part = name.substr(0, us);
  auto kind = kind_from_name(name.substr(us + 1));
  if (!kind) return std::nullopt;
  for (auto op : kAllSafeOps)
    if (safe_op_name(op) == op_part) return SafeFn{op, *kind};
  return std::nullopt;
}

Value apply_safe(SafeOp op, IntKind kind, Value a_in, Value b_in) {
  const Wide a = convert(a_in, kind).v;
  const Wide b = convert(b_in, kind).v;
  const int w = bit_width(kind);
  switch (op) {
    case SafeOp::add: return {kind, wrap(kind, a + b)};
    case SafeOp::sub: return {kind, wrap(kind, a - b)};
    case SafeOp::mul: return {kind, mul_wrapped(kind, a, b)};
    case SafeOp::div:
      if (b == 0) return {kind, a};
      if (is_signed(kind) && b == -1) return {kind, wrap(kind, -a)};
      return {kind, a / b};
    case SafeOp::mod:
      if (b == 0) return {kind, a};
      if (is_signed(kind) && b == -1) return {kind, 0};
      return {kind, a % b};
    case SafeOp::shl: {
      int s = static_cast<int>(bits_of({kind, b}) & static_cast<unsigned>(w - 1));
      UWide ua = static_cast<UWide>(wrap(unsigned_of(kind), a));
      return {kind, wrap(kind, static_cast<Wide>(ua << s))};
    }
    case SafeOp::shr: {
      int s = static_cast<int>(bits_of({kind, b}) & static_cast<unsigned>(w - 1));
      return {kind, a >> s};
    }
  }
  return {kind, 0};
}

namespace {

void emit_safe_fn(std::ostringstream& os, SafeOp op, IntKind k) {
  const std::string t(c_type_name(k));
  const std::string ut(c_type_name(unsigned_of(k)));
  const std::string ct = bit_width(k) <= 32 ? "uint32_t" : "uint64_t";
  const std::string mask = std::to_string(bit_width(k) - 1) + "u";
  const std::string name = safe_fn_name(op, k);
  os << "static inline " << t << " " << name << "(" << t << " a, " << t << " b) {\n  return ";
  auto widened = [&](const char* v) { return "(" + ct + ")(" + ut + ")" + v; };
  switch (op) {
    case SafeOp::add:
      os << "(" << t << ")(" << widened("a") << " + " << widened("b") << ");";
      break;
    case SafeOp::sub:
      os << "(" << t << ")(" << widened("a") << " - " << widened("b") << ");";
      break;
    case SafeOp::mul:
      os << "(" << t << ")(" << widened("a") << " * " << widened("b") << ");";
      break;
    case SafeOp::div:
      if (is_signed(k))
        os << "(b == 0) ? a : ((b == -1) ? (" << t << ")((" << ct << ")0 - " << widened("a")
           << ") : (" << t << ")(a / b));";
      else
        os << "(b == 0) ? a : (" << t << ")(a / b);";
      break;
    case SafeOp::mod:
      if (is_signed(k))
        os << "(b == 0) ? a : ((b == -1) ? (" << t << ")0 : (" << t << ")(a % b));";
      else
        os << "(b == 0) ? a : (" << t << ")(a % b);";
      break;
    case SafeOp::shl:
      os << "(" << t << ")(" << widened("a") << " << ((unsigned)(" << ut << ")b & " << mask
         << "));";
      break;
    case SafeOp::shr:
      os << "(" << t << ")(a >> ((unsigned)(" << ut << ")b & " << mask << "));";
      break;
  }
  os << "\n}\n";
}

}  // namespace

std::string safe_ops_prelude() {
  std::ostringstream os;
  os << "#include <stdint.h>\n#include <stdio.h>\n\n#pragma GCC diagnostic ignored \"-Wunused-function\"\n\n";
  os << "static uint64_t lm_checksum = UINT64_C(0xCBF29CE484222325);\n";
  for (int w : {8, 16, 32, 64}) {
    os << "static inline void lm_fold" << w << "(uint" << w << "_t v) {\n"
       << "  lm_checksum = (lm_checksum ^ (uint64_t)v) * UINT64_C(0x100000001B3);\n}\n";
  }
  os << "\n";
  for (IntKind k : kAllKinds)
    for (SafeOp op : kAllSafeOps) emit_safe_fn(os, op, k);
  return os.str();
}

std::string fold_fn_name(IntKind k) { return "lm_fold" + std::to_string(bit_width(k)); }

std::optional<int> parse_fold_fn(std::string_view name) {
  for (int w : {8, 16, 32, 64})
    if (name == "lm_fold" + std::to_string(w)) return w;
  return std::nullopt;
}

std::string checksum_line(std::uint64_t acc) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checksum = %llX\n", static_cast<unsigned long long>(acc));
  return buf;
}

std::optional<Value> const_eval(const Expr& e, bool allow_safe_calls) {
  try {
    return std::visit(
        [&](const auto& n) -> std::optional<Value> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return Value{n.kind, n.value};
          } else if constexpr (std::is_same_v<T, Unary>) {
            auto v = const_eval(*n.operand, allow_safe_calls);
            if (!v) return std::nullopt;
            return apply_unary(n.op, *v);
          } else if constexpr (std::is_same_v<T, Binary>) {
            auto a = const_eval(*n.lhs, allow_safe_calls);
            if (!a) return std::nullopt;
            if (n.op == BinaryOp::land && a->v == 0) return Value{IntKind::i32, 0};
            if (n.op == BinaryOp::lor && a->v != 0) return Value{IntKind::i32, 1};
            auto b = const_eval(*n.rhs, allow_safe_calls);
            if (!b) return std::nullopt;
            return apply_binary(n.op, *a, *b);
          } else if constexpr (std::is_same_v<T, Cast>) {
            auto v = const_eval(*n.operand, allow_safe_calls);
            if (!v) return std::nullopt;
            return convert(*v, n.kind);
          } else if constexpr (std::is_same_v<T, Call>) {
            if (!allow_safe_calls) return std::nullopt;
            auto fn = parse_safe_fn(n.callee);
            if (!fn || n.args.size() != 2) return std::nullopt;
            auto a = const_eval(n.args[0], true);
            auto b = const_eval(n.args[1], true);
            if (!a || !b) return std::nullopt;
            return apply_safe(fn->op, fn->kind, *a, *b);
          } else {
            return std::nullopt;
          }
        },
        e.node);
  } catch (const Trap&) {
    return std::nullopt;
  }
}

}  // namespace loopmorph
