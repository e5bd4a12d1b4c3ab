// SPDX-License-Identifier: Apache-2.0

#include "loopmorph/parse.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "loopmorph/errors.hpp"
#include "loopmorph/semantics.hpp"
#include "loopmorph/validate.hpp"
#include "loopmorph/walk.hpp"

namespace loopmorph {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, std::string found)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": expected one of {" +
            join(expected) + "} but found '" + found + "'"),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { ident, number, punct, string, loop_mark, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

constexpr std::array<std::string_view, 25> kPuncts = {
    "<<=", ">>=", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=",
    "/=",  "%=",  "&=", "|=", "^=", "++", "--", "->", "(",  ")",  "{",  "}",
};
constexpr std::string_view kSingle = "[];,=+-*/%&|^~!<>?:.#";

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    skip_prelude();
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "<end of input>", line_, col_});
        return out;
      }
      int line = line_, col = col_;
      char c = src_[pos_];
      if (c == '/' && peek(1) == '*') {
        auto close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos)
          throw ParseError(line, col, {"*/"}, "<end of input>");
        std::string_view body = src_.substr(pos_ + 2, close - pos_ - 2);
        advance(close + 2 - pos_);
        if (body.starts_with("@loop:"))
          out.push_back({Tok::loop_mark, std::string(body.substr(6)), line, col});
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        continue;
      }
      if (c == '#') throw SubsetViolation(loc(line, col) + "preprocessor directives are not supported");
      if (is_alpha(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) advance(1);
        out.push_back({Tok::ident, std::string(src_.substr(start, pos_ - start)), line, col});
        continue;
      }
      if (is_digit(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) advance(1);
        out.push_back({Tok::number, std::string(src_.substr(start, pos_ - start)), line, col});
        continue;
      }
      if (c == '"') {
        std::size_t start = pos_;
        advance(1);
        while (pos_ < src_.size() && src_[pos_] != '"') {
          if (src_[pos_] == '\\') advance(1);
          advance(1);
        }
        if (pos_ >= src_.size()) throw ParseError(line, col, {"\""}, "<end of input>");
        advance(1);
        out.push_back({Tok::string, std::string(src_.substr(start, pos_ - start)), line, col});
        continue;
      }
      if (c == '\'') throw SubsetViolation(loc(line, col) + "character literals are not supported");
      bool matched = false;
      for (auto p : kPuncts) {
        if (src_.substr(pos_, p.size()) == p) {
          out.push_back({Tok::punct, std::string(p), line, col});
          advance(p.size());
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (kSingle.find(c) != std::string_view::npos) {
        out.push_back({Tok::punct, std::string(1, c), line, col});
        advance(1);
        continue;
      }
      throw ParseError(line, col, {"token"}, std::string(1, c));
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  static bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static std::string loc(int line, int col) {
    return std::to_string(line) + ":" + std::to_string(col) + ": ";
  }

  char peek(std::size_t off) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      advance(1);
  }

  void skip_prelude() {
    skip_space();
    static const std::string prelude = safe_ops_prelude();
    if (src_.substr(pos_, prelude.size()) == prelude) advance(prelude.size());
  }
};

const std::set<std::string, std::less<>> kForeignTypes = {
    "int", "char", "short", "long", "unsigned", "signed", "float", "double", "void",
    "struct", "union", "enum", "_Bool", "const", "volatile", "typedef", "extern",
    "register", "auto", "size_t", "bool",
};

const std::set<std::string, std::less<>> kForeignStmts = {
    "while", "do", "goto", "switch", "case", "default", "break", "continue", "sizeof",
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    while (!at_end()) {
      if (is("int") && peek(1).text == "main") {
        p.functions.push_back(main_function());
        if (!at_end()) fail({"<end of input>"});
        break;
      }
      accept("static");
      IntKind kind = type_name();
      Token name = expect_ident();
      if (is("(")) {
        p.functions.push_back(function(kind, name.text));
      } else {
        p.globals.push_back(decl_rest(kind, name.text));
      }
    }
    if (p.functions.empty() || p.functions.back().name != "main") fail({"int main"});
    assign_loop_ids(p);
    return p;
  }

  Expr whole_expr() {
    Expr e = expr();
    if (!at_end()) fail({"<end of input>"});
    return e;
  }

  /// Widths spelled by each fold helper, in source order.
  const std::vector<int>& fold_widths() const { return fold_widths_; }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::vector<int> fold_widths_;

  const Token& cur() const { return toks_[i_]; }
  const Token& peek(std::size_t off) const {
    return toks_[std::min(i_ + off, toks_.size() - 1)];
  }
  bool at_end() const { return cur().kind == Tok::end; }
  bool is(std::string_view text) const {
    return (cur().kind == Tok::punct || cur().kind == Tok::ident) && cur().text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    ++i_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(cur().line, cur().col, std::move(expected), cur().text);
  }
  [[noreturn]] void unsupported(const std::string& what) const {
    throw SubsetViolation(std::to_string(cur().line) + ":" + std::to_string(cur().col) + ": " +
                          what + " is outside MiniC");
  }
  void expect(std::string_view text) {
    if (!accept(text)) fail({std::string(text)});
  }
  Token expect_ident() {
    if (cur().kind != Tok::ident) fail({"identifier"});
    return toks_[i_++];
  }

  std::optional<IntKind> peek_type() const {
    if (cur().kind != Tok::ident) return std::nullopt;
    return kind_from_c_type(cur().text);
  }

  IntKind type_name() {
    if (cur().kind == Tok::ident && kForeignTypes.contains(cur().text))
      unsupported("type '" + cur().text + "'");
    auto k = peek_type();
    if (!k) fail({"integer type"});
    ++i_;
    if (is("*")) unsupported("pointer type");
    return *k;
  }

  // -- declarations ---------------------------------------------------------

  Decl decl_rest(IntKind kind, std::string name) {
    Decl d;
    d.name = std::move(name);
    d.type = TypeSpec::scalar(kind);
    if (accept("[")) {
      if (cur().kind != Tok::number) fail({"array length"});
      auto n = number_value(cur().text);
      if (!n || n->kind != IntKind::i32 || n->value < 1) fail({"positive array length"});
      ++i_;
      expect("]");
      if (is("[")) unsupported("multi-dimensional array");
      d.type.array_len = static_cast<std::uint32_t>(n->value);
      if (accept("=")) {
        expect("{");
        if (!is("}")) {
          do {
            d.array_init.push_back(expr());
          } while (accept(","));
        }
        expect("}");
      }
    } else if (accept("=")) {
      if (is("{")) fail({"expression"});
      d.init = expr();
    }
    if (is(",")) unsupported("multiple declarators");
    expect(";");
    return d;
  }

  Function function(IntKind ret, std::string name) {
    Function f;
    f.name = std::move(name);
    f.return_kind = ret;
    expect("(");
    if (!accept("void")) {
      if (!is(")")) {
        do {
          IntKind k = type_name();
          f.params.push_back({expect_ident().text, k});
        } while (accept(","));
      }
    }
    expect(")");
    f.body = block();
    return f;
  }

  Function main_function() {
    Function f;
    f.name = "main";
    expect("int");
    expect("main");
    expect("(");
    accept("void");
    expect(")");
    expect("{");
    while (!is("printf")) {
      if (is("}") || at_end()) fail({"statement", "printf"});
      f.body.stmts.push_back(stmt());
    }
    scaffold();
    expect("}");
    return f;
  }

  void scaffold() {
    expect("printf");
    expect("(");
    if (cur().kind != Tok::string || cur().text != "\"checksum = %llX\\n\"")
      fail({"\"checksum = %llX\\n\""});
    ++i_;
    for (auto t : {",", "(", "unsigned", "long", "long", ")", "lm_checksum", ")", ";", "return"})
      expect(t);
    if (cur().kind != Tok::number || cur().text != "0") fail({"0"});
    ++i_;
    expect(";");
  }

  // -- statements -----------------------------------------------------------

  Block block() {
    expect("{");
    Block b;
    while (!accept("}")) {
      if (at_end()) fail({"}"});
      b.stmts.push_back(stmt());
    }
    return b;
  }

  Stmt stmt() {
    if (cur().kind == Tok::ident && kForeignStmts.contains(cur().text))
      unsupported("'" + cur().text + "' statement");
    if (is("++") || is("--")) unsupported("increment/decrement");
    if (is("{")) return Stmt{block()};
    if (cur().kind == Tok::loop_mark) {
      std::string id = cur().text;
      ++i_;
      if (!is("for")) fail({"for"});
      return Stmt{for_loop(std::move(id))};
    }
    if (is("for")) return Stmt{for_loop({})};
    if (accept("if")) {
      If s;
      expect("(");
      s.cond = expr();
      expect(")");
      s.then_block = block();
      if (accept("else")) {
        if (is("if")) unsupported("else-if chain");
        s.else_block = block();
      }
      return Stmt{std::move(s)};
    }
    if (accept("return")) {
      Return r{expr()};
      expect(";");
      return Stmt{std::move(r)};
    }
    if (cur().kind == Tok::ident && kForeignTypes.contains(cur().text))
      unsupported("type '" + cur().text + "'");
    if (peek_type()) {
      IntKind k = type_name();
      std::string name = expect_ident().text;
      return Stmt{decl_rest(k, std::move(name))};
    }
    if (cur().kind == Tok::ident) {
      if (auto w = parse_fold_fn(cur().text)) {
        ++i_;
        expect("(");
        ChecksumFold f{expr()};
        expect(")");
        expect(";");
        fold_widths_.push_back(*w);
        return Stmt{std::move(f)};
      }
      return assignment();
    }
    fail({"statement"});
  }

  Stmt assignment() {
    Assign a;
    a.target.name = expect_ident().text;
    if (is("(")) unsupported("expression statement");
    if (accept("[")) {
      a.target.index = expr();
      expect("]");
    }
    static const std::pair<std::string_view, AssignOp> ops[] = {
        {"=", AssignOp::set},   {"+=", AssignOp::add},  {"-=", AssignOp::sub},
        {"*=", AssignOp::mul},  {"&=", AssignOp::band}, {"|=", AssignOp::bor},
        {"^=", AssignOp::bxor},
    };
    bool found = false;
    for (auto [tok, op] : ops) {
      if (accept(tok)) {
        a.op = op;
        found = true;
        break;
      }
    }
    if (!found) {
      if (is("/=") || is("%=") || is("<<=") || is(">>=")) unsupported("compound operator " + cur().text);
      if (is("++") || is("--")) unsupported("increment/decrement");
      fail({"=", "+=", "-=", "*=", "&=", "|=", "^="});
    }
    a.rhs = expr();
    expect(";");
    return Stmt{std::move(a)};
  }

  ForLoop for_loop(std::string id) {
    ForLoop f;
    f.loop_id = std::move(id);
    expect("for");
    expect("(");
    if (!peek_type()) {
      if (cur().kind == Tok::ident && kForeignTypes.contains(cur().text))
        unsupported("type '" + cur().text + "'");
      unsupported("loop without index declaration");
    }
    f.index_kind = type_name();
    f.index_var = expect_ident().text;
    expect("=");
    f.init = expr();
    expect(";");
    if (cur().kind != Tok::ident || cur().text != f.index_var)
      unsupported("loop condition not on the index variable");
    ++i_;
    static const std::pair<std::string_view, RelOp> rels[] = {
        {"<=", RelOp::le}, {">=", RelOp::ge}, {"<", RelOp::lt}, {">", RelOp::gt}};
    bool found = false;
    for (auto [tok, op] : rels) {
      if (accept(tok)) {
        f.rel = op;
        found = true;
        break;
      }
    }
    if (!found) {
      if (is("!=") || is("==")) unsupported("loop condition with " + cur().text);
      fail({"<", "<=", ">", ">="});
    }
    f.bound = expr();
    expect(";");
    if (cur().kind != Tok::ident || cur().text != f.index_var) {
      if (is("++") || is("--")) unsupported("increment/decrement");
      unsupported("loop step not on the index variable");
    }
    ++i_;
    if (accept("+=")) {
      f.step_op = StepOp::add;
    } else if (accept("-=")) {
      f.step_op = StepOp::sub;
    } else {
      if (is("++") || is("--")) unsupported("increment/decrement");
      fail({"+=", "-="});
    }
    f.step = expr();
    expect(")");
    f.body = block();
    return f;
  }

  void assign_loop_ids(Program& p) {
    std::set<std::string> taken = all_loop_ids(p);
    std::size_t counter = 0;
    for (auto& fn : p.functions) name_loops(fn.body, taken, counter);
  }

  void name_loops(Block& b, std::set<std::string>& taken, std::size_t& counter) {
    for (auto& s : b.stmts) {
      if (auto* f = std::get_if<ForLoop>(&s.node); f && f->loop_id.empty()) {
        std::string id;
        do {
          id = "P" + std::to_string(counter++);
        } while (taken.contains(id));
        taken.insert(id);
        f->loop_id = id;
      }
      for (auto [sel, sub] : sub_blocks(s)) name_loops(*sub, taken, counter);
    }
  }

  // -- expressions ----------------------------------------------------------

  static const std::vector<std::vector<std::pair<std::string_view, BinaryOp>>>& levels() {
    static const std::vector<std::vector<std::pair<std::string_view, BinaryOp>>> l = {
        {{"||", BinaryOp::lor}},
        {{"&&", BinaryOp::land}},
        {{"|", BinaryOp::bor}},
        {{"^", BinaryOp::bxor}},
        {{"&", BinaryOp::band}},
        {{"==", BinaryOp::eq}, {"!=", BinaryOp::ne}},
        {{"<=", BinaryOp::le}, {">=", BinaryOp::ge}, {"<", BinaryOp::lt}, {">", BinaryOp::gt}},
        {{"<<", BinaryOp::shl}, {">>", BinaryOp::shr}},
        {{"+", BinaryOp::add}, {"-", BinaryOp::sub}},
        {{"*", BinaryOp::mul}, {"/", BinaryOp::div}, {"%", BinaryOp::mod}},
    };
    return l;
  }

 public:
  Expr expr() {
    Expr e = binary_level(0);
    if (is("?")) unsupported("conditional operator");
    if (is("=")) unsupported("assignment expression");
    return e;
  }

 private:
  Expr binary_level(std::size_t level) {
    if (level == levels().size()) return unary_expr();
    Expr lhs = binary_level(level + 1);
    for (;;) {
      bool matched = false;
      if (cur().kind == Tok::punct) {
        for (auto [tok, op] : levels()[level]) {
          if (cur().text == tok) {
            ++i_;
            Expr rhs = binary_level(level + 1);
            lhs = binary(op, std::move(lhs), std::move(rhs));
            matched = true;
            break;
          }
        }
      }
      if (!matched) return lhs;
    }
  }

  Expr unary_expr() {
    if (accept("-")) return unary(UnaryOp::neg, unary_expr());
    if (accept("~")) return unary(UnaryOp::bitnot, unary_expr());
    if (accept("!")) return unary(UnaryOp::lognot, unary_expr());
    if (is("+")) unsupported("unary plus");
    if (is("*") || is("&")) unsupported("pointer operation");
    if (is("++") || is("--")) unsupported("increment/decrement");
    if (is("sizeof")) unsupported("sizeof");
    if (is("(")) {
      const Token& next = peek(1);
      if (next.kind == Tok::ident && kind_from_c_type(next.text)) {
        ++i_;
        IntKind k = type_name();
        expect(")");
        return cast(k, unary_expr());
      }
      if (next.kind == Tok::ident && kForeignTypes.contains(next.text)) {
        ++i_;
        unsupported("type '" + cur().text + "'");
      }
      // `(-N)` spells a negative int literal.
      if (next.kind == Tok::punct && next.text == "-" && peek(2).kind == Tok::number &&
          peek(3).kind == Tok::punct && peek(3).text == ")") {
        auto v = number_value(peek(2).text);
        if (v && v->kind == IntKind::i32 && is_plain_decimal(peek(2).text)) {
          i_ += 4;
          return lit(IntKind::i32, -v->value);
        }
      }
      ++i_;
      Expr inner = expr();
      expect(")");
      return postfix_check(std::move(inner));
    }
    return postfix_check(primary());
  }

  Expr postfix_check(Expr e) {
    if (is("++") || is("--")) unsupported("increment/decrement");
    if (is("->") || is(".")) unsupported("member access");
    return e;
  }

  static bool is_plain_decimal(const std::string& t) {
    return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  }

  struct Num {
    IntKind kind;
    Wide value;
  };

  static std::optional<Num> number_value(const std::string& text) {
    std::string digits = text;
    std::string suffix;
    int base = 10;
    std::size_t start = 0;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
      base = 16;
      start = 2;
    }
    std::size_t end = start;
    auto digit_of = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (base == 16 && c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (base == 16 && c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    Wide v = 0;
    while (end < digits.size() && digit_of(digits[end]) >= 0) {
      v = v * base + digit_of(digits[end]);
      if (v > (Wide{1} << 80)) return std::nullopt;
      ++end;
    }
    if (end == start) return std::nullopt;
    if (base == 10 && end - start > 1 && digits[start] == '0') return std::nullopt;  // octal
    suffix = digits.substr(end);
    std::transform(suffix.begin(), suffix.end(), suffix.begin(),
                   [](char c) { return static_cast<char>(std::toupper(c)); });
    IntKind k;
    if (suffix.empty()) k = IntKind::i32;
    else if (suffix == "U") k = IntKind::u32;
    else if (suffix == "L" || suffix == "LL") k = IntKind::i64;
    else if (suffix == "UL" || suffix == "LU" || suffix == "ULL" || suffix == "LLU") k = IntKind::u64;
    else return std::nullopt;
    if (!fits(k, v)) return std::nullopt;
    return Num{k, v};
  }

  Expr number_literal() {
    auto n = number_value(cur().text);
    if (!n) unsupported("integer literal '" + cur().text + "' (use INT64_C/UINT64_C)");
    ++i_;
    return lit(n->kind, n->value);
  }

  Expr primary() {
    if (cur().kind == Tok::number) return number_literal();
    if (cur().kind == Tok::string) unsupported("string literal");
    if (cur().kind != Tok::ident) fail({"expression"});
    std::string name = cur().text;
    if (kForeignTypes.contains(name)) unsupported("type '" + name + "'");
    if (kForeignStmts.contains(name)) unsupported("'" + name + "'");
    ++i_;
    if (name == "INT32_MIN") return lit(IntKind::i32, min_value(IntKind::i32));
    if (name == "INT64_MIN") return lit(IntKind::i64, min_value(IntKind::i64));
    if (name == "INT64_C" || name == "UINT64_C") {
      IntKind k = name == "INT64_C" ? IntKind::i64 : IntKind::u64;
      expect("(");
      bool neg = accept("-");
      if (cur().kind != Tok::number) fail({"integer"});
      const std::string& digits = cur().text;
      if (!is_plain_decimal(digits) || digits.size() > 20 || (digits.size() > 1 && digits[0] == '0'))
        fail({"decimal integer"});
      Wide v = 0;
      for (char c : digits) v = v * 10 + (c - '0');
      if (neg) v = -v;
      if (!fits(k, v)) unsupported("literal out of range");
      ++i_;
      expect(")");
      return lit(k, v);
    }
    if (accept("[")) {
      Expr idx = expr();
      expect("]");
      if (is("[")) unsupported("multi-dimensional array");
      return index_of(name, std::move(idx));
    }
    if (accept("(")) {
      std::vector<Expr> args;
      if (!is(")")) {
        do {
          args.push_back(expr());
        } while (accept(","));
      }
      expect(")");
      return call(name, std::move(args));
    }
    return var(name);
  }
};

/// Each fold helper name must agree with the static width of its argument;
/// otherwise re-emission would not reproduce the input.
void check_fold_widths(const Program& p, const std::vector<int>& spelled) {
  std::vector<int> widths;
  for (const auto& fn : p.functions) {
    // Walk in source order, tracking a flat scope like the emitter does.
    VarTable vars;
    for (const auto& g : p.globals) vars[g.name] = VarInfo{g.type, true, true};
    for (const auto& prm : fn.params) vars[prm.name] = VarInfo{TypeSpec::scalar(prm.kind)};
    walk_stmts(fn.body, StmtPath{fn.name, {}}, [&](const Stmt& s, const StmtPath&) {
      if (auto* d = std::get_if<Decl>(&s.node)) vars[d->name] = VarInfo{d->type};
      if (auto* f = std::get_if<ForLoop>(&s.node))
        vars[f->index_var] = VarInfo{TypeSpec::scalar(f->index_kind)};
      if (auto* c = std::get_if<ChecksumFold>(&s.node)) {
        auto k = kind_of(c->value, vars, p);
        widths.push_back(k ? bit_width(*k) : 0);
      }
    });
  }
  for (std::size_t i = 0; i < widths.size() && i < spelled.size(); ++i) {
    if (widths[i] != spelled[i])
      throw InvalidProgram("checksum fold #" + std::to_string(i) + " uses lm_fold" +
                           std::to_string(spelled[i]) + " for a " +
                           std::to_string(widths[i]) + "-bit value");
  }
}

}  // namespace

Program parse_minic(std::string_view src) {
  Parser parser(Lexer(src).run());
  Program p = parser.program();
  require_valid(p);
  check_fold_widths(p, parser.fold_widths());
  return p;
}

Expr parse_expr(std::string_view src) {
  Parser parser(Lexer(src).run());
  return parser.whole_expr();
}

}  // namespace loopmorph
