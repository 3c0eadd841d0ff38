#include "ndviz/pattern.hpp"

#include <algorithm>
#include <cctype>

namespace ndviz {

namespace {

bool is_symbol_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

class PatternParser {
 public:
  explicit PatternParser(std::string_view text) : text_(text) {}

  Pattern parse() {
    skip_ws();
    if (at_end()) throw PatternError("empty pattern", pos_);
    Pattern p = parse_union();
    skip_ws();
    if (!at_end()) throw PatternError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return p;
  }

 private:
  Pattern parse_union() {
    Pattern first = parse_concat();
    skip_ws();
    if (at_end() || text_[pos_] != '|') return first;
    Pattern u{Pattern::Kind::Union, {}, {}};
    u.parts.push_back(std::move(first));
    while (!at_end() && text_[pos_] == '|') {
      ++pos_;
      u.parts.push_back(parse_concat());
      skip_ws();
    }
    return u;
  }

  Pattern parse_concat() {
    std::vector<Pattern> items;
    for (;;) {
      skip_ws();
      if (at_end() || text_[pos_] == '|' || text_[pos_] == ')') break;
      items.push_back(parse_star());
    }
    if (items.empty()) throw PatternError("expected a symbol, '_' or '('", pos_);
    if (items.size() == 1) return std::move(items.front());
    return Pattern{Pattern::Kind::Concat, {}, std::move(items)};
  }

  Pattern parse_star() {
    Pattern p = parse_atom();
    for (;;) {
      skip_ws();
      if (at_end() || text_[pos_] != '*') break;
      ++pos_;
      Pattern star{Pattern::Kind::Star, {}, {}};
      star.parts.push_back(std::move(p));
      p = std::move(star);
    }
    return p;
  }

  Pattern parse_atom() {
    skip_ws();
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      Pattern inner = parse_union();
      skip_ws();
      if (at_end() || text_[pos_] != ')') throw PatternError("unbalanced '('", open);
      ++pos_;
      return inner;
    }
    if (c == '_') {
      ++pos_;
      return Pattern{};
    }
    if (is_symbol_char(c)) {
      const std::size_t begin = pos_;
      while (!at_end() && is_symbol_char(text_[pos_])) ++pos_;
      return Pattern{Pattern::Kind::Symbol, std::string(text_.substr(begin, pos_ - begin)), {}};
    }
    throw PatternError(std::string("unexpected '") + c + "'", pos_);
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_into(const Pattern& p, std::string& out);

void render_child(const Pattern& child, bool wrap, std::string& out) {
  if (wrap) out += '(';
  render_into(child, out);
  if (wrap) out += ')';
}

void render_into(const Pattern& p, std::string& out) {
  using K = Pattern::Kind;
  switch (p.kind) {
    case K::Empty:
      out += '_';
      break;
    case K::Symbol:
      out += p.symbol;
      break;
    case K::Concat:
      for (std::size_t i = 0; i < p.parts.size(); ++i) {
        if (i) out += ' ';
        const K k = p.parts[i].kind;
        render_child(p.parts[i], k == K::Concat || k == K::Union, out);
      }
      break;
    case K::Union:
      for (std::size_t i = 0; i < p.parts.size(); ++i) {
        if (i) out += " | ";
        render_child(p.parts[i], p.parts[i].kind == K::Union, out);
      }
      break;
    case K::Star: {
      const K k = p.parts.front().kind;
      render_child(p.parts.front(), k == K::Concat || k == K::Union, out);
      out += '*';
      break;
    }
  }
}

}  // namespace

Pattern parse_pattern(std::string_view text) { return PatternParser(text).parse(); }

std::string render_pattern(const Pattern& pattern) {
  std::string out;
  render_into(pattern, out);
  return out;
}

PatternMatcher::PatternMatcher(const Pattern& pattern) {
  Fragment f = build(pattern);
  const int match = add(Node{Node::Type::Match, {}, -1, -1});
  patch(f, match);
  start_ = f.start;
}

int PatternMatcher::add(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

void PatternMatcher::patch(const Fragment& f, int target) {
  for (auto [index, second] : f.dangling) {
    if (second)
      nodes_[index].out1 = target;
    else
      nodes_[index].out = target;
  }
}

PatternMatcher::Fragment PatternMatcher::build(const Pattern& p) {
  using K = Pattern::Kind;
  switch (p.kind) {
    case K::Empty: {
      const int s = add(Node{Node::Type::Split, {}, -1, -1});
      return Fragment{s, {{s, false}, {s, true}}};
    }
    case K::Symbol: {
      const int s = add(Node{Node::Type::Symbol, p.symbol, -1, -1});
      return Fragment{s, {{s, false}}};
    }
    case K::Concat: {
      Fragment acc = build(p.parts.front());
      for (std::size_t i = 1; i < p.parts.size(); ++i) {
        Fragment next = build(p.parts[i]);
        patch(acc, next.start);
        acc.dangling = std::move(next.dangling);
      }
      return acc;
    }
    case K::Union: {
      Fragment acc = build(p.parts.front());
      for (std::size_t i = 1; i < p.parts.size(); ++i) {
        Fragment next = build(p.parts[i]);
        const int s = add(Node{Node::Type::Split, {}, acc.start, next.start});
        acc.start = s;
        acc.dangling.insert(acc.dangling.end(), next.dangling.begin(), next.dangling.end());
      }
      return acc;
    }
    case K::Star: {
      Fragment body = build(p.parts.front());
      const int s = add(Node{Node::Type::Split, {}, body.start, -1});
      patch(body, s);
      return Fragment{s, {{s, true}}};
    }
  }
  return Fragment{-1, {}};
}

void PatternMatcher::add_closure(std::vector<int>& set, std::vector<unsigned char>& mark,
                                 int s) const {
  // Iterative to keep deep star nests off the call stack.
  std::vector<int> work{s};
  while (!work.empty()) {
    const int cur = work.back();
    work.pop_back();
    if (cur < 0 || mark[cur]) continue;
    mark[cur] = 1;
    const Node& n = nodes_[cur];
    if (n.type == Node::Type::Split) {
      work.push_back(n.out1);
      work.push_back(n.out);
    } else {
      set.push_back(cur);
    }
  }
}

bool PatternMatcher::matches(std::span<const std::string> word) const {
  std::vector<unsigned char> mark(nodes_.size(), 0);
  std::vector<int> current;
  std::vector<int> next;
  add_closure(current, mark, start_);
  for (const std::string& sym : word) {
    std::fill(mark.begin(), mark.end(), 0);
    next.clear();
    for (int s : current) {
      const Node& n = nodes_[s];
      if (n.type == Node::Type::Symbol && n.symbol == sym) add_closure(next, mark, n.out);
    }
    current.swap(next);
    if (current.empty()) return false;
  }
  for (int s : current)
    if (nodes_[s].type == Node::Type::Match) return true;
  return false;
}

}  // namespace ndviz
