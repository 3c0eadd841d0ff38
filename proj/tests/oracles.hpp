#pragma once

// Reference implementations used only by tests. None of them share code with
// the library beyond the Machine/Pattern data types.

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ndviz/engine.hpp"
#include "ndviz/machine.hpp"
#include "ndviz/pattern.hpp"

namespace oracle {

using ndviz::Machine;
using ndviz::Word;

Machine random_nfa(std::mt19937& rng, int max_states = 5, int max_sigma = 2, int max_rules = 12);
Machine random_pda(std::mt19937& rng, int max_states = 3, int max_rules = 8, int max_seq = 2);

std::vector<Word> all_words(const std::vector<std::string>& sigma, std::size_t max_len);

/// Lazily built subset-construction DFA with ε-closure.
class SubsetDfa {
 public:
  explicit SubsetDfa(const Machine& nfa);
  bool accepts(const Word& word);

 private:
  using Set = unsigned long long;
  Set closure(Set s) const;
  Set move(Set s, const std::string& symbol);

  const Machine& m_;
  std::map<std::string, int> index_;
  Set finals_ = 0;
  Set start_ = 0;
  std::map<std::pair<Set, std::string>, Set> delta_;
};

/// Depth-bounded PDA search over sets of configurations, one level per step.
/// ACCEPT if an accepting configuration is within k steps; otherwise
/// CUTOFF-LIMIT if a configuration at distance exactly k still has a move;
/// otherwise REJECT.
ndviz::Verdict pda_verdict(const Machine& pda, const Word& word, std::size_t k);

/// Shortest accepting rule sequence within k steps, ties broken by rule index.
std::optional<std::vector<std::size_t>> bfs_first_accepting_path(const Machine& m, const Word& w, std::size_t k);

/// Plain enumeration of every computation of length ≤ k, no deduplication.
/// True if any of them accepts.
bool naive_accepts(const Machine& machine, const Word& word, std::size_t k);

/// End-position sets computed directly over the pattern tree.
bool pattern_matches(const ndviz::Pattern& p, const Word& word);

ndviz::Pattern random_pattern(std::mt19937& rng, int depth, const std::vector<std::string>& symbols);

/// Well-typed invariant source text from the expression grammar.
std::string random_invariant(std::mt19937& rng, int depth, bool pda);

}  // namespace oracle
