#pragma once

// Integer-indexed view of a Machine shared by the exploration kernels.

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "ndviz/engine.hpp"

namespace ndviz::detail {

inline constexpr std::uint32_t kEpsilon = std::numeric_limits<std::uint32_t>::max();

struct CompiledRule {
  std::uint32_t src;
  std::uint32_t read;  // kEpsilon for ε
  std::vector<std::uint32_t> pop;   // top first
  std::uint32_t dst;
  std::vector<std::uint32_t> push;  // top first
};

struct CompiledMachine {
  bool pda = false;
  std::uint32_t start = 0;
  std::vector<unsigned char> final;
  std::vector<CompiledRule> rules;
  std::vector<std::vector<std::uint32_t>> rules_by_state;  // ascending rule index
  std::vector<Symbol> symbols;                             // id -> name
  std::unordered_map<Symbol, std::uint32_t> symbol_ids;
  std::unordered_map<StateName, std::uint32_t> state_ids;
};

/// Throws std::invalid_argument if the machine does not validate.
CompiledMachine compile(const Machine& machine);

/// Throws InputError for symbols outside Σ.
std::vector<std::uint32_t> encode_word(const Machine& machine, const CompiledMachine& cm,
                                       const Word& word);

/// Visited-set key with its hash computed once.
struct ConfigKey {
  std::uint32_t state;
  std::uint32_t consumed;
  std::vector<std::uint32_t> stack;  // top at back
  std::size_t hash;

  ConfigKey(std::uint32_t s, std::uint32_t c, std::vector<std::uint32_t> st);
  bool operator==(const ConfigKey& o) const {
    return state == o.state && consumed == o.consumed && stack == o.stack;
  }
};

struct ConfigKeyHash {
  std::size_t operator()(const ConfigKey& k) const noexcept { return k.hash; }
};

inline bool rule_applies(const CompiledRule& r, std::uint32_t consumed,
                         const std::vector<std::uint32_t>& stack,
                         const std::vector<std::uint32_t>& word) {
  if (r.read != kEpsilon && (consumed >= word.size() || word[consumed] != r.read)) return false;
  if (r.pop.size() > stack.size()) return false;
  for (std::size_t i = 0; i < r.pop.size(); ++i)
    if (stack[stack.size() - 1 - i] != r.pop[i]) return false;
  return true;
}

/// Successor stack: pop the rule's prefix, then push so push[0] ends on top.
inline std::vector<std::uint32_t> successor_stack(const CompiledRule& r,
                                                  const std::vector<std::uint32_t>& stack) {
  std::vector<std::uint32_t> out;
  out.reserve(stack.size() - r.pop.size() + r.push.size());
  out.assign(stack.begin(), stack.end() - static_cast<std::ptrdiff_t>(r.pop.size()));
  for (auto it = r.push.rbegin(); it != r.push.rend(); ++it) out.push_back(*it);
  return out;
}

inline bool accepting(const CompiledMachine& cm, std::uint32_t state, std::uint32_t consumed,
                      const std::vector<std::uint32_t>& stack, std::size_t word_size) {
  return cm.final[state] && consumed == word_size && stack.empty();
}

}  // namespace ndviz::detail
