#include "ndviz/invariant.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace ndviz {

InvariantError::InvariantError(Kind kind, const std::string& message, std::size_t line,
                               std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

std::string_view type_name(ValueType t) {
  switch (t) {
    case ValueType::Bool: return "boolean";
    case ValueType::Int: return "integer";
    case ValueType::Word: return "word";
  }
  return "?";
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view src, MachineKind kind) : src_(src), kind_(kind) {}

  Expr parse_program() {
    skip();
    if (at_end()) syntax("empty invariant");
    Expr e = parse_or();
    skip();
    if (!at_end()) syntax(std::string("unexpected '") + src_[pos_] + "'");
    expect_type(e, ValueType::Bool, 0);
    return e;
  }

 private:
  using Op = Expr::Op;

  // --- scanning -----------------------------------------------------------

  void skip() {
    while (!at_end()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (!at_end() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  bool at_end() const { return pos_ >= src_.size(); }

  // Peeks an identifier/number token without consuming it.
  std::string_view peek_word() {
    skip();
    std::size_t end = pos_;
    while (end < src_.size() && is_word_char(src_[end])) ++end;
    return src_.substr(pos_, end - pos_);
  }

  bool accept_keyword(std::string_view kw) {
    if (peek_word() != kw) return false;
    pos_ += kw.size();
    return true;
  }

  bool accept(std::string_view punct) {
    skip();
    if (src_.substr(pos_, punct.size()) != punct) return false;
    pos_ += punct.size();
    return true;
  }

  void expect(std::string_view punct) {
    if (!accept(punct)) syntax("expected '" + std::string(punct) + "'");
  }

  std::string take_symbol() {
    const std::string_view w = peek_word();
    if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) != 0;
        }))
      syntax("expected a symbol");
    pos_ += w.size();
    return std::string(w);
  }

  std::pair<std::size_t, std::size_t> line_col(std::size_t offset) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(InvariantError::Kind kind, const std::string& msg, std::size_t offset) const {
    auto [line, col] = line_col(offset);
    throw InvariantError(kind, msg, line, col);
  }
  [[noreturn]] void syntax(const std::string& msg) const {
    fail(InvariantError::Kind::Syntax, msg, pos_);
  }

  void expect_type(const Expr& e, ValueType want, std::size_t at) const {
    if (e.type != want)
      fail(InvariantError::Kind::Type,
           "expected " + std::string(type_name(want)) + " but found " +
               std::string(type_name(e.type)),
           at);
  }

  static Expr node(Op op, ValueType type, std::vector<Expr> args = {}) {
    Expr e;
    e.op = op;
    e.type = type;
    e.args = std::move(args);
    return e;
  }

  // --- grammar ------------------------------------------------------------

  Expr parse_or() {
    const std::size_t at = (skip(), pos_);
    Expr lhs = parse_and();
    while (accept_keyword("or")) {
      const std::size_t rat = (skip(), pos_);
      Expr rhs = parse_and();
      expect_type(lhs, ValueType::Bool, at);
      expect_type(rhs, ValueType::Bool, rat);
      lhs = node(Op::Or, ValueType::Bool, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_and() {
    const std::size_t at = (skip(), pos_);
    Expr lhs = parse_not();
    while (accept_keyword("and")) {
      const std::size_t rat = (skip(), pos_);
      Expr rhs = parse_not();
      expect_type(lhs, ValueType::Bool, at);
      expect_type(rhs, ValueType::Bool, rat);
      lhs = node(Op::And, ValueType::Bool, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_not() {
    if (accept_keyword("not")) {
      const std::size_t at = (skip(), pos_);
      Expr operand = parse_not();
      expect_type(operand, ValueType::Bool, at);
      return node(Op::Not, ValueType::Bool, {std::move(operand)});
    }
    return parse_compare();
  }

  std::optional<CmpOp> accept_cmp() {
    static constexpr std::pair<std::string_view, CmpOp> kOps[] = {
        {"==", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<=", CmpOp::Le},
        {">=", CmpOp::Ge}, {"<", CmpOp::Lt},  {">", CmpOp::Gt}};
    for (auto [text, op] : kOps)
      if (accept(text)) return op;
    return std::nullopt;
  }

  Expr parse_compare() {
    const std::size_t at = (skip(), pos_);
    Expr lhs = parse_additive();
    if (auto op = accept_cmp()) {
      const std::size_t rat = (skip(), pos_);
      Expr rhs = parse_additive();
      expect_type(lhs, ValueType::Int, at);
      expect_type(rhs, ValueType::Int, rat);
      Expr e = node(Op::Compare, ValueType::Bool, {std::move(lhs), std::move(rhs)});
      e.cmp = *op;
      if (auto again = (skip(), pos_); accept_cmp())
        fail(InvariantError::Kind::Syntax, "comparisons do not chain", again);
      return e;
    }
    return lhs;
  }

  Expr parse_additive() {
    const std::size_t at = (skip(), pos_);
    Expr lhs = parse_multiplicative();
    for (;;) {
      Op op;
      if (accept("++"))
        op = Op::Concat;
      else if (accept("+"))
        op = Op::Add;
      else if (accept("-"))
        op = Op::Sub;
      else
        break;
      const std::size_t rat = (skip(), pos_);
      Expr rhs = parse_multiplicative();
      const ValueType want = op == Op::Concat ? ValueType::Word : ValueType::Int;
      expect_type(lhs, want, at);
      expect_type(rhs, want, rat);
      lhs = node(op, want, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    const std::size_t at = (skip(), pos_);
    Expr lhs = parse_primary();
    while (accept("*")) {
      const std::size_t rat = (skip(), pos_);
      Expr rhs = parse_primary();
      expect_type(lhs, ValueType::Int, at);
      expect_type(rhs, ValueType::Int, rat);
      lhs = node(Op::Mul, ValueType::Int, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  Expr parse_word_arg() {
    const std::size_t at = (skip(), pos_);
    Expr e = parse_or();
    expect_type(e, ValueType::Word, at);
    return e;
  }

  Pattern parse_pattern_arg() {
    skip();
    if (at_end()) syntax("expected a pattern");
    std::size_t begin = pos_;
    std::size_t end = pos_;
    if (src_[pos_] == '"') {
      begin = pos_ + 1;
      end = src_.find('"', begin);
      if (end == std::string_view::npos) syntax("unterminated pattern string");
      pos_ = end + 1;
    } else {
      int depth = 0;
      while (end < src_.size()) {
        const char c = src_[end];
        if (c == '(') ++depth;
        if (c == ')') {
          if (depth == 0) break;
          --depth;
        }
        if (c == '\n' || c == '#') break;
        ++end;
      }
      pos_ = end;
    }
    try {
      return parse_pattern(src_.substr(begin, end - begin));
    } catch (const PatternError& e) {
      fail(InvariantError::Kind::Syntax, std::string("bad pattern: ") + e.what(),
           begin + e.offset());
    }
  }

  Expr parse_primary() {
    skip();
    if (at_end()) syntax("unexpected end of invariant");
    const std::size_t at = pos_;
    const char c = src_[pos_];

    if (accept("(")) {
      Expr inner = parse_or();
      expect(")");
      return inner;
    }
    if (accept("[")) {
      Expr lit = node(Op::Literal, ValueType::Word);
      while (!accept("]")) {
        if (at_end()) syntax("unterminated word literal");
        lit.symbols.push_back(take_symbol());
        accept(",");
      }
      return lit;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::string_view w = peek_word();
      Expr num = node(Op::Number, ValueType::Int);
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), num.number);
      if (ec != std::errc{} || ptr != w.data() + w.size()) syntax("bad number '" + std::string(w) + "'");
      pos_ += w.size();
      return num;
    }

    const std::string_view w = peek_word();
    if (w == "true" || w == "false") {
      pos_ += w.size();
      return node(w == "true" ? Op::True : Op::False, ValueType::Bool);
    }
    if (w == "ci") {
      pos_ += w.size();
      return node(Op::Ci, ValueType::Word);
    }
    if (w == "stack") {
      if (kind_ == MachineKind::Nfa)
        fail(InvariantError::Kind::StackInNfa, "'stack' is only available in PDA invariants", at);
      pos_ += w.size();
      return node(Op::Stack, ValueType::Word);
    }
    if (w == "len") {
      pos_ += w.size();
      expect("(");
      Expr arg = parse_word_arg();
      expect(")");
      return node(Op::Len, ValueType::Int, {std::move(arg)});
    }
    if (w == "count") {
      pos_ += w.size();
      expect("(");
      Expr arg = parse_word_arg();
      expect(",");
      Expr e = node(Op::Count, ValueType::Int, {std::move(arg)});
      e.symbol = take_symbol();
      expect(")");
      return e;
    }
    if (w == "matches") {
      pos_ += w.size();
      expect("(");
      Expr arg = parse_word_arg();
      expect(",");
      Expr e = node(Op::Matches, ValueType::Bool, {std::move(arg)});
      e.pattern = parse_pattern_arg();
      expect(")");
      return e;
    }
    if (w.empty()) syntax(std::string("unexpected '") + c + "'");
    syntax("unknown name '" + std::string(w) + "'");
  }

  std::string_view src_;
  MachineKind kind_;
  std::size_t pos_ = 0;
};

void collect_matchers(const Expr& e, std::vector<PatternMatcher>& out) {
  if (e.op == Expr::Op::Matches) out.emplace_back(e.pattern);
  for (const Expr& a : e.args) collect_matchers(a, out);
}

// Wrapping arithmetic: signed overflow is avoided by going through uint64.
std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

class Evaluator {
 public:
  Evaluator(std::span<const Symbol> ci, std::span<const Symbol> stack,
            const std::vector<PatternMatcher>& matchers)
      : ci_(ci), stack_(stack), matchers_(matchers) {}

  bool boolean(const Expr& e) {
    using Op = Expr::Op;
    switch (e.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Or: {
        // Strict evaluation keeps the matcher counter aligned with the AST walk.
        const bool l = boolean(e.args[0]);
        const bool r = boolean(e.args[1]);
        return l || r;
      }
      case Op::And: {
        const bool l = boolean(e.args[0]);
        const bool r = boolean(e.args[1]);
        return l && r;
      }
      case Op::Not: return !boolean(e.args[0]);
      case Op::Compare: {
        const std::int64_t l = integer(e.args[0]);
        const std::int64_t r = integer(e.args[1]);
        switch (e.cmp) {
          case CmpOp::Eq: return l == r;
          case CmpOp::Ne: return l != r;
          case CmpOp::Lt: return l < r;
          case CmpOp::Le: return l <= r;
          case CmpOp::Gt: return l > r;
          case CmpOp::Ge: return l >= r;
        }
        return false;
      }
      case Op::Matches: {
        const Word w = word(e.args[0]);
        return matchers_[next_matcher_++].matches(w);
      }
      default: return false;
    }
  }

  std::int64_t integer(const Expr& e) {
    using Op = Expr::Op;
    switch (e.op) {
      case Op::Number: return e.number;
      case Op::Len: return static_cast<std::int64_t>(word(e.args[0]).size());
      case Op::Count: {
        const Word w = word(e.args[0]);
        return static_cast<std::int64_t>(std::count(w.begin(), w.end(), e.symbol));
      }
      case Op::Add:
      case Op::Sub:
      case Op::Mul: {
        const auto l = static_cast<std::uint64_t>(integer(e.args[0]));
        const auto r = static_cast<std::uint64_t>(integer(e.args[1]));
        if (e.op == Op::Add) return wrap(l + r);
        if (e.op == Op::Sub) return wrap(l - r);
        return wrap(l * r);
      }
      default: return 0;
    }
  }

  Word word(const Expr& e) {
    using Op = Expr::Op;
    switch (e.op) {
      case Op::Ci: return Word(ci_.begin(), ci_.end());
      case Op::Stack: return Word(stack_.begin(), stack_.end());
      case Op::Literal: return e.symbols;
      case Op::Concat: {
        Word l = word(e.args[0]);
        Word r = word(e.args[1]);
        l.insert(l.end(), r.begin(), r.end());
        return l;
      }
      default: return {};
    }
  }

 private:
  std::span<const Symbol> ci_;
  std::span<const Symbol> stack_;
  const std::vector<PatternMatcher>& matchers_;
  std::size_t next_matcher_ = 0;
};

std::string_view cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

}  // namespace

InvariantProgram InvariantProgram::parse(std::string_view source, MachineKind kind) {
  InvariantProgram program;
  program.source_ = std::string(source);
  program.kind_ = kind;
  program.ast_ = Parser(program.source_, kind).parse_program();
  auto matchers = std::make_shared<std::vector<PatternMatcher>>();
  collect_matchers(program.ast_, *matchers);
  program.matchers_ = std::move(matchers);
  return program;
}

bool InvariantProgram::eval(std::span<const Symbol> ci,
                            std::optional<std::span<const Symbol>> stack) const {
  if (stack.has_value() != (kind_ == MachineKind::Pda))
    throw std::invalid_argument("invariant eval: stack must be supplied exactly for PDA programs");
  Evaluator ev(ci, stack.value_or(std::span<const Symbol>{}), *matchers_);
  return ev.boolean(ast_);
}

std::string render_expr(const Expr& e) {
  using Op = Expr::Op;
  auto bin = [&](std::string_view op) {
    return "(" + render_expr(e.args[0]) + " " + std::string(op) + " " + render_expr(e.args[1]) + ")";
  };
  switch (e.op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Or: return bin("or");
    case Op::And: return bin("and");
    case Op::Not: return "not (" + render_expr(e.args[0]) + ")";
    case Op::Compare: return bin(cmp_text(e.cmp));
    case Op::Matches:
      return "matches(" + render_expr(e.args[0]) + ", \"" + render_pattern(e.pattern) + "\")";
    case Op::Number: return std::to_string(e.number);
    case Op::Len: return "len(" + render_expr(e.args[0]) + ")";
    case Op::Count: return "count(" + render_expr(e.args[0]) + ", " + e.symbol + ")";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Ci: return "ci";
    case Op::Stack: return "stack";
    case Op::Concat: return bin("++");
    case Op::Literal: {
      std::string out = "[";
      for (std::size_t i = 0; i < e.symbols.size(); ++i) {
        if (i) out += ' ';
        out += e.symbols[i];
      }
      return out + "]";
    }
  }
  return {};
}

}  // namespace ndviz
