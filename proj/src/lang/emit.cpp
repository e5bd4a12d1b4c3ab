// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/emit.hpp"

#include <sstream>

#include "loopmorph/semantics.hpp"
#include "loopmorph/validate.hpp"

namespace loopmorph {

std::string wide_to_string(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string out;
  while (u != 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) out.insert(out.begin(), '-');
  return out;
}

std::string emit_literal(const IntLit& l) {
  switch (l.kind) {
    case IntKind::i32:
      if (l.value == min_value(IntKind::i32)) return "INT32_MIN";
      if (l.value < 0) return "(" + wide_to_string(l.value) + ")";
      return wide_to_string(l.value);
    case IntKind::u32:
      return wide_to_string(l.value) + "U";
    case IntKind::i64:
      if (l.value == min_value(IntKind::i64)) return "INT64_MIN";
      return "INT64_C(" + wide_to_string(l.value) + ")";
    case IntKind::u64:
      return "UINT64_C(" + wide_to_string(l.value) + ")";
    default:
      // Not spellable; validation rejects these before emission.
      return "((" + std::string(c_type_name(l.kind)) + ")" + wide_to_string(l.value) + ")";
  }
}

namespace {

std::string expr_text(const Expr& e, bool top) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return emit_literal(n);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, ArrayRef>) {
          return n.name + "[" + expr_text(*n.index, true) + "]";
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (n.op == UnaryOp::neg) return "(-(" + expr_text(*n.operand, true) + "))";
          return "(" + std::string(op_token(n.op)) + expr_text(*n.operand, false) + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          std::string body = expr_text(*n.lhs, false) + " " + std::string(op_token(n.op)) +
                             " " + expr_text(*n.rhs, false);
          return top ? body : "(" + body + ")";
        } else if constexpr (std::is_same_v<T, Cast>) {
          std::string body =
              "(" + std::string(c_type_name(n.kind)) + ")" + expr_text(*n.operand, false);
          return top ? body : "(" + body + ")";
        } else {
          std::string out = n.callee + "(";
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            out += expr_text(n.args[i], true);
          }
          return out + ")";
        }
      },
      e.node);
}

class Emitter {
 public:
  explicit Emitter(const Program& p) : p_(p) {}

  std::string run() {
    os_ << safe_ops_prelude() << "\n";
    for (const auto& g : p_.globals) {
      os_ << "static ";
      decl(g);
      vars_[g.name] = VarInfo{g.type, true, true};
    }
    for (const auto& f : p_.functions) {
      os_ << "\n";
      function(f);
    }
    return os_.str();
  }

 private:
  const Program& p_;
  std::ostringstream os_;
  VarTable vars_;
  int indent_ = 0;

  void pad() {
    for (int i = 0; i < indent_; ++i) os_ << "  ";
  }

  void decl(const Decl& d) {
    os_ << c_type_name(d.type.kind) << " " << d.name;
    if (d.type.is_array()) {
      os_ << "[" << *d.type.array_len << "]";
      if (!d.array_init.empty()) {
        os_ << " = {";
        for (std::size_t i = 0; i < d.array_init.size(); ++i) {
          if (i) os_ << ", ";
          os_ << expr_text(d.array_init[i], true);
        }
        os_ << "}";
      }
    } else if (d.init) {
      os_ << " = " << expr_text(*d.init, true);
    }
    os_ << ";\n";
  }

  void function(const Function& f) {
    vars_ = VarTable{};
    for (const auto& g : p_.globals) vars_[g.name] = VarInfo{g.type, true, true};
    if (f.name == "main") {
      os_ << "int main(void) {\n";
    } else {
      os_ << "static " << c_type_name(*f.return_kind) << " " << f.name << "(";
      if (f.params.empty()) os_ << "void";
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i) os_ << ", ";
        os_ << c_type_name(f.params[i].kind) << " " << f.params[i].name;
        vars_[f.params[i].name] = VarInfo{TypeSpec::scalar(f.params[i].kind)};
      }
      os_ << ") {\n";
    }
    indent_ = 1;
    stmts(f.body);
    if (f.name == "main") {
      pad();
      os_ << "printf(\"checksum = %llX\\n\", (unsigned long long)lm_checksum);\n";
      pad();
      os_ << "return 0;\n";
    }
    indent_ = 0;
    os_ << "}\n";
  }

  void stmts(const Block& b) {
    for (const auto& s : b.stmts) stmt(s);
  }

  void braced(const Block& b) {
    os_ << "{\n";
    ++indent_;
    stmts(b);
    --indent_;
    pad();
    os_ << "}";
  }

  void stmt(const Stmt& s) {
    pad();
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Decl>) {
            decl(n);
            vars_[n.name] = VarInfo{n.type};
          } else if constexpr (std::is_same_v<T, Assign>) {
            os_ << n.target.name;
            if (n.target.index) os_ << "[" << expr_text(*n.target.index, true) << "]";
            os_ << " " << op_token(n.op) << " " << expr_text(n.rhs, true) << ";\n";
          } else if constexpr (std::is_same_v<T, If>) {
            os_ << "if (" << expr_text(n.cond, true) << ") ";
            braced(n.then_block);
            if (n.else_block) {
              os_ << " else ";
              braced(*n.else_block);
            }
            os_ << "\n";
          } else if constexpr (std::is_same_v<T, ForLoop>) {
            vars_[n.index_var] = VarInfo{TypeSpec::scalar(n.index_kind)};
            os_ << "/*@loop:" << n.loop_id << "*/ for (" << c_type_name(n.index_kind) << " "
                << n.index_var << " = " << expr_text(n.init, true) << "; " << n.index_var << " "
                << op_token(n.rel) << " " << expr_text(n.bound, true) << "; " << n.index_var
                << " " << op_token(n.step_op) << " " << expr_text(n.step, true) << ") ";
            braced(n.body);
            os_ << "\n";
          } else if constexpr (std::is_same_v<T, Block>) {
            braced(n);
            os_ << "\n";
          } else if constexpr (std::is_same_v<T, ChecksumFold>) {
            auto k = kind_of(n.value, vars_, p_).value_or(IntKind::u64);
            os_ << fold_fn_name(k) << "(" << expr_text(n.value, true) << ");\n";
          } else if constexpr (std::is_same_v<T, Return>) {
            os_ << "return " << expr_text(n.value, true) << ";\n";
          }
        },
        s.node);
  }
};

}  // namespace

std::string emit_expr(const Expr& e) { return expr_text(e, true); }

std::string emit_c(const Program& p) {
  require_valid(p);
  return Emitter(p).run();
}

}  // namespace loopmorph
