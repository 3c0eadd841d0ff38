#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ndviz {

/// Regular expression over symbol tokens. Juxtaposition is concatenation,
/// `|` is union, postfix `*` is Kleene star and `_` denotes the empty word.
/// Concat and Union nodes always have at least two parts.
struct Pattern {
  enum class Kind { Empty, Symbol, Concat, Union, Star };

  Kind kind = Kind::Empty;
  std::string symbol;          // Kind::Symbol
  std::vector<Pattern> parts;  // Concat/Union: >= 2, Star: exactly 1

  bool operator==(const Pattern&) const = default;
};

class PatternError : public std::runtime_error {
 public:
  PatternError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  /// Byte offset into the pattern text.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

Pattern parse_pattern(std::string_view text);

/// Canonical text; parse_pattern(render_pattern(p)) == p.
std::string render_pattern(const Pattern& pattern);

/// Thompson-construction NFA for a Pattern, simulated with state sets.
/// Immutable after construction; matches() is reentrant.
class PatternMatcher {
 public:
  explicit PatternMatcher(const Pattern& pattern);

  /// Whole-word membership.
  bool matches(std::span<const std::string> word) const;

  std::size_t state_count() const { return nodes_.size(); }

 private:
  struct Node {
    enum class Type { Symbol, Split, Match } type;
    std::string symbol;
    int out = -1;
    int out1 = -1;
  };
  // Unpatched exits: (node index, second slot?).
  struct Fragment {
    int start;
    std::vector<std::pair<int, bool>> dangling;
  };

  Fragment build(const Pattern& p);
  int add(Node node);
  void patch(const Fragment& f, int target);
  void add_closure(std::vector<int>& set, std::vector<unsigned char>& mark, int s) const;

  std::vector<Node> nodes_;
  int start_ = -1;
};

}  // namespace ndviz
