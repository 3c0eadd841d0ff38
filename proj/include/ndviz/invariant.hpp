#pragma once

// Invariant predicates: a closed expression language over the consumed
// input `ci` and (for pushdown automata) the `stack`, top first.
//
//   bool := bool or bool | bool and bool | not bool | ( bool )
//         | int CMP int | matches( word , pattern ) | true | false
//   int  := NUMBER | len( word ) | count( word , SYMBOL )
//         | int (+|-|*) int | ( int )
//   word := ci | stack | word ++ word | [ SYMBOL* ]
//
// `#` starts a line comment. A pattern is either a double-quoted string or
// raw text up to the balancing ')'; see pattern.hpp for its syntax.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ndviz/pattern.hpp"
#include "ndviz/types.hpp"

namespace ndviz {

enum class ValueType { Bool, Int, Word };

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Expr {
  enum class Op {
    True, False, Or, And, Not, Compare, Matches,  // bool
    Number, Len, Count, Add, Sub, Mul,            // int
    Ci, Stack, Concat, Literal                    // word
  };

  Op op = Op::True;
  ValueType type = ValueType::Bool;
  CmpOp cmp = CmpOp::Eq;             // Compare
  std::int64_t number = 0;           // Number
  std::string symbol;                // Count
  std::vector<std::string> symbols;  // Literal
  Pattern pattern;                   // Matches
  std::vector<Expr> args;

  bool operator==(const Expr&) const = default;
};

class InvariantError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Type, StackInNfa };

  InvariantError(Kind kind, const std::string& message, std::size_t line, std::size_t column);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  Kind kind_;
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A parsed, type-checked predicate. Copies share the compiled pattern matchers.
class InvariantProgram {
 public:
  /// Throws InvariantError.
  static InvariantProgram parse(std::string_view source, MachineKind kind);

  /// `stack` must be supplied exactly when the program was parsed for a PDA.
  bool eval(std::span<const Symbol> ci, std::optional<std::span<const Symbol>> stack = {}) const;

  const std::string& source() const { return source_; }
  const Expr& ast() const { return ast_; }
  MachineKind kind() const { return kind_; }

 private:
  InvariantProgram() = default;

  std::string source_;
  Expr ast_;
  MachineKind kind_ = MachineKind::Nfa;
  // Indexed in depth-first order of Matches nodes.
  std::shared_ptr<const std::vector<PatternMatcher>> matchers_;
};

/// Fully parenthesized source text for an expression; reparsing it yields an equal AST.
std::string render_expr(const Expr& expr);

}  // namespace ndviz
