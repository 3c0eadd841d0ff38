#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <unordered_set>

namespace oracle {

using ndviz::MachineKind;
using ndviz::MachineParts;
using ndviz::Pattern;
using ndviz::Rule;

namespace {

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<std::string> names(const char* prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

Machine random_nfa(std::mt19937& rng, int max_states, int max_sigma, int max_rules) {
  MachineParts p;
  p.kind = MachineKind::Nfa;
  p.states = names("q", pick(rng, 1, max_states));
  const int sigma = pick(rng, 1, max_sigma);
  for (int i = 0; i < sigma; ++i) p.sigma.push_back(std::string(1, static_cast<char>('a' + i)));
  p.start = p.states[0];
  for (const auto& s : p.states)
    if (pick(rng, 0, 2) == 0) p.finals.push_back(s);
  const int rules = pick(rng, 0, max_rules);
  for (int i = 0; i < rules; ++i) {
    Rule r;
    r.src = p.states[pick(rng, 0, static_cast<int>(p.states.size()) - 1)];
    r.dst = p.states[pick(rng, 0, static_cast<int>(p.states.size()) - 1)];
    if (pick(rng, 0, 3) != 0) r.read = p.sigma[pick(rng, 0, sigma - 1)];
    p.rules.push_back(r);
  }
  return Machine(std::move(p));
}

Machine random_pda(std::mt19937& rng, int max_states, int max_rules, int max_seq) {
  MachineParts p;
  p.kind = MachineKind::Pda;
  p.states = names("q", pick(rng, 1, max_states));
  p.sigma = {"a", "b"};
  p.gamma = {"X", "Y"};
  p.start = p.states[0];
  for (const auto& s : p.states)
    if (pick(rng, 0, 1) == 0) p.finals.push_back(s);
  auto seq = [&] {
    Word w;
    const int n = pick(rng, 0, max_seq);
    for (int i = 0; i < n; ++i) w.push_back(p.gamma[pick(rng, 0, 1)]);
    return w;
  };
  const int rules = pick(rng, 1, max_rules);
  for (int i = 0; i < rules; ++i) {
    Rule r;
    r.src = p.states[pick(rng, 0, static_cast<int>(p.states.size()) - 1)];
    r.dst = p.states[pick(rng, 0, static_cast<int>(p.states.size()) - 1)];
    if (pick(rng, 0, 2) != 0) r.read = p.sigma[pick(rng, 0, 1)];
    r.pop = seq();
    r.push = seq();
    p.rules.push_back(r);
  }
  return Machine(std::move(p));
}

std::vector<Word> all_words(const std::vector<std::string>& sigma, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (const auto& s : sigma) {
        Word x = w;
        x.push_back(s);
        next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer.swap(next);
  }
  return out;
}

// --- subset construction ------------------------------------------------------

SubsetDfa::SubsetDfa(const Machine& nfa) : m_(nfa) {
  for (std::size_t i = 0; i < nfa.states().size(); ++i) index_[nfa.states()[i]] = static_cast<int>(i);
  for (const auto& f : nfa.finals()) finals_ |= 1ull << index_.at(f);
  start_ = closure(1ull << index_.at(nfa.start()));
}

SubsetDfa::Set SubsetDfa::closure(Set s) const {
  for (;;) {
    Set grown = s;
    for (const Rule& r : m_.rules())
      if (!r.read && (s >> index_.at(r.src) & 1)) grown |= 1ull << index_.at(r.dst);
    if (grown == s) return s;
    s = grown;
  }
}

SubsetDfa::Set SubsetDfa::move(Set s, const std::string& symbol) {
  auto key = std::make_pair(s, symbol);
  if (auto it = delta_.find(key); it != delta_.end()) return it->second;
  Set out = 0;
  for (const Rule& r : m_.rules())
    if (r.read == symbol && (s >> index_.at(r.src) & 1)) out |= 1ull << index_.at(r.dst);
  out = closure(out);
  delta_.emplace(key, out);
  return out;
}

bool SubsetDfa::accepts(const Word& word) {
  Set s = start_;
  for (const auto& sym : word) s = move(s, sym);
  return (s & finals_) != 0;
}

// --- PDA search ---------------------------------------------------------------

namespace {

struct Config {
  std::string state;
  std::size_t pos;
  Word stack;  // top first
  bool operator<(const Config& o) const {
    return std::tie(state, pos, stack) < std::tie(o.state, o.pos, o.stack);
  }
  bool operator==(const Config&) const = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const {
    std::size_t h = std::hash<std::string>{}(c.state) ^ (c.pos * 0x9e3779b97f4a7c15ULL);
    for (const auto& s : c.stack) h = h * 31 + std::hash<std::string>{}(s);
    return h;
  }
};

std::vector<Config> successors(const Machine& m, const Word& word, const Config& c) {
  std::vector<Config> out;
  for (const Rule& r : m.rules()) {
    if (r.src != c.state) continue;
    std::size_t pos = c.pos;
    if (r.read) {
      if (pos >= word.size() || word[pos] != *r.read) continue;
      ++pos;
    }
    if (r.pop.size() > c.stack.size() || !std::equal(r.pop.begin(), r.pop.end(), c.stack.begin())) continue;
    Word stack(r.push);
    stack.insert(stack.end(), c.stack.begin() + static_cast<std::ptrdiff_t>(r.pop.size()), c.stack.end());
    out.push_back({r.dst, pos, std::move(stack)});
  }
  return out;
}

bool accepting(const Machine& m, const Word& word, const Config& c) {
  return c.pos == word.size() && c.stack.empty() &&
         std::find(m.finals().begin(), m.finals().end(), c.state) != m.finals().end();
}

}  // namespace

ndviz::Verdict pda_verdict(const Machine& pda, const Word& word, std::size_t k) {
  // level by level; `seen` holds every configuration at a shorter distance
  std::unordered_set<Config, ConfigHash> seen{Config{pda.start(), 0, {}}};
  std::vector<Config> level(seen.begin(), seen.end());
  bool cutoff = false;
  for (std::size_t d = 0; !level.empty(); ++d) {
    std::vector<Config> next;
    for (const Config& c : level) {
      if (accepting(pda, word, c)) return ndviz::Verdict::Accept;
      std::vector<Config> succ = successors(pda, word, c);
      if (d == k) {
        cutoff = cutoff || !succ.empty();
        continue;
      }
      for (Config& n : succ)
        if (seen.insert(n).second) next.push_back(std::move(n));
    }
    level = std::move(next);
  }
  return cutoff ? ndviz::Verdict::CutoffLimit : ndviz::Verdict::Reject;
}

bool naive_accepts(const Machine& machine, const Word& word, std::size_t k) {
  std::function<bool(const Config&, std::size_t)> go = [&](const Config& c, std::size_t d) {
    if (accepting(machine, word, c)) return true;
    if (d == k) return false;
    for (const Config& n : successors(machine, word, c))
      if (go(n, d + 1)) return true;
    return false;
  };
  return go(Config{machine.start(), 0, {}}, 0);
}

// --- patterns -----------------------------------------------------------------

namespace {

std::set<std::size_t> ends(const Pattern& p, const Word& w, const std::set<std::size_t>& from) {
  switch (p.kind) {
    case Pattern::Kind::Empty: return from;
    case Pattern::Kind::Symbol: {
      std::set<std::size_t> out;
      for (std::size_t i : from)
        if (i < w.size() && w[i] == p.symbol) out.insert(i + 1);
      return out;
    }
    case Pattern::Kind::Concat: {
      std::set<std::size_t> cur = from;
      for (const Pattern& part : p.parts) cur = ends(part, w, cur);
      return cur;
    }
    case Pattern::Kind::Union: {
      std::set<std::size_t> out;
      for (const Pattern& part : p.parts) {
        auto e = ends(part, w, from);
        out.insert(e.begin(), e.end());
      }
      return out;
    }
    case Pattern::Kind::Star: {
      std::set<std::size_t> out = from;
      std::set<std::size_t> frontier = from;
      while (!frontier.empty()) {
        std::set<std::size_t> next;
        for (std::size_t e : ends(p.parts[0], w, frontier))
          if (out.insert(e).second) next.insert(e);
        frontier.swap(next);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

bool pattern_matches(const Pattern& p, const Word& word) { return ends(p, word, {0}).contains(word.size()); }

Pattern random_pattern(std::mt19937& rng, int depth, const std::vector<std::string>& symbols) {
  const int choice = depth <= 0 ? pick(rng, 0, 1) : pick(rng, 0, 4);
  Pattern p;
  switch (choice) {
    case 0:
      p.kind = Pattern::Kind::Symbol;
      p.symbol = symbols[pick(rng, 0, static_cast<int>(symbols.size()) - 1)];
      if (pick(rng, 0, 5) == 0) p = Pattern{};
      return p;
    case 1:
      p.kind = Pattern::Kind::Symbol;
      p.symbol = symbols[pick(rng, 0, static_cast<int>(symbols.size()) - 1)];
      return p;
    case 2:
    case 3: {
      p.kind = choice == 2 ? Pattern::Kind::Concat : Pattern::Kind::Union;
      const int n = pick(rng, 2, 3);
      for (int i = 0; i < n; ++i) p.parts.push_back(random_pattern(rng, depth - 1, symbols));
      return p;
    }
    default:
      p.kind = Pattern::Kind::Star;
      p.parts.push_back(random_pattern(rng, depth - 1, symbols));
      return p;
  }
}

// --- invariant source ---------------------------------------------------------

namespace {

std::string wrap(std::mt19937& rng, const std::string& s) { return pick(rng, 0, 1) ? "(" + s + ")" : s; }

std::string word_src(std::mt19937& rng, int depth, bool pda) {
  const int c = depth <= 0 ? pick(rng, 0, 2) : pick(rng, 0, 3);
  switch (c) {
    case 0: return "ci";
    case 1: return pda ? "stack" : "ci";
    case 2: {
      const char* lits[] = {"[]", "[a]", "[a b]", "[b b a]"};
      return lits[pick(rng, 0, 3)];
    }
    default: return word_src(rng, depth - 1, pda) + " ++ " + word_src(rng, depth - 1, pda);
  }
}

std::string int_src(std::mt19937& rng, int depth, bool pda) {
  const int c = depth <= 0 ? pick(rng, 0, 2) : pick(rng, 0, 5);
  switch (c) {
    case 0: return std::to_string(pick(rng, 0, 9));
    case 1: return "len(" + word_src(rng, depth - 1, pda) + ")";
    case 2: return "count(" + word_src(rng, depth - 1, pda) + ", " + (pick(rng, 0, 1) ? "a" : "b") + ")";
    case 3: return wrap(rng, int_src(rng, depth - 1, pda) + " + " + int_src(rng, depth - 1, pda));
    case 4: return wrap(rng, int_src(rng, depth - 1, pda) + " - " + int_src(rng, depth - 1, pda));
    default: return wrap(rng, int_src(rng, depth - 1, pda) + " * " + int_src(rng, depth - 1, pda));
  }
}

}  // namespace

std::string random_invariant(std::mt19937& rng, int depth, bool pda) {
  static const char* cmps[] = {"==", "!=", "<", "<=", ">", ">="};
  const int c = depth <= 0 ? pick(rng, 0, 3) : pick(rng, 0, 6);
  switch (c) {
    case 0: return pick(rng, 0, 1) ? "true" : "false";
    case 1:
    case 2: return int_src(rng, depth - 1, pda) + " " + cmps[pick(rng, 0, 5)] + " " + int_src(rng, depth - 1, pda);
    case 3: {
      const std::string pat = ndviz::render_pattern(random_pattern(rng, 2, {"a", "b"}));
      const std::string arg = pick(rng, 0, 1) ? "\"" + pat + "\"" : pat;
      return "matches(" + word_src(rng, depth - 1, pda) + ", " + arg + ")";
    }
    case 4: return "not " + wrap(rng, random_invariant(rng, depth - 1, pda));
    case 5:
      return wrap(rng, random_invariant(rng, depth - 1, pda) + " and " + random_invariant(rng, depth - 1, pda));
    default:
      return wrap(rng, random_invariant(rng, depth - 1, pda) + " or " + random_invariant(rng, depth - 1, pda));
  }
}

// Shortest accepting rule sequence, ties broken lexicographically by rule index:
// find the least D with an accepting configuration exactly D steps away, then
// walk forward taking the smallest rule that keeps one within reach.
std::optional<std::vector<std::size_t>> bfs_first_accepting_path(const Machine& m, const Word& w, std::size_t k) {
  std::map<std::pair<std::string, std::size_t>, bool> memo;
  auto key = [](const ndviz::Configuration& c) {
    std::string s = c.state + "|";
    for (const auto& x : c.unconsumed) s += x + ",";
    s += "|";
    for (const auto& x : c.stack) s += x + ",";
    return s;
  };
  std::function<bool(const ndviz::Configuration&, std::size_t)> within = [&](const ndviz::Configuration& c, std::size_t j) {
    if (j == 0) return ndviz::is_accepting(m, c);
    auto [it, fresh] = memo.try_emplace({key(c), j}, false);
    if (!fresh) return it->second;
    bool ok = false;
    for (std::size_t r : ndviz::applicable_rules(m, c))
      if (within(ndviz::step(m, c, r), j - 1)) {
        ok = true;
        break;
      }
    memo[{key(c), j}] = ok;
    return ok;
  };
  ndviz::Configuration c{m.start(), w, {}};
  for (std::size_t d = 0; d <= k; ++d) {
    if (!within(c, d)) continue;
    std::vector<std::size_t> seq;
    for (std::size_t left = d; left > 0; --left)
      for (std::size_t r : ndviz::applicable_rules(m, c)) {
        const ndviz::Configuration next = ndviz::step(m, c, r);
        if (within(next, left - 1)) {
          seq.push_back(r);
          c = next;
          break;
        }
      }
    return seq;
  }
  return std::nullopt;
}


}  // namespace oracle
