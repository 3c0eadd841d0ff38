#include <deque>
#include <unordered_set>

#include "forest_builder.hpp"

namespace ndviz {

ComputationForest explore_serial(const Machine& machine, const Word& word,
                                 const ExploreOptions& options) {
  ForestBuilder b(machine, word, options);
  const detail::CompiledMachine& cm = b.compiled();
  const std::vector<std::uint32_t>& w = b.word_ids();

  std::unordered_set<detail::ConfigKey, detail::ConfigKeyHash> visited;
  visited.emplace(cm.start, 0u, std::vector<std::uint32_t>{});
  std::deque<NodeId> queue{0};

  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();

    // Copies: add_child may reallocate the node vector.
    const std::uint32_t state = b.nodes()[id].state;
    const auto consumed = static_cast<std::uint32_t>(b.nodes()[id].consumed);
    const std::vector<std::uint32_t> stack = b.nodes()[id].stack;
    const std::size_t depth = b.nodes()[id].depth;

    const bool accepts = detail::accepting(cm, state, consumed, stack, w.size());
    std::vector<std::uint32_t> rules;
    for (std::uint32_t r : cm.rules_by_state[state])
      if (detail::rule_applies(cm.rules[r], consumed, stack, w)) rules.push_back(r);

    NodeStatus status = NodeStatus::Live;
    if (accepts) {
      status = NodeStatus::AcceptLeaf;
      b.mark_accepting(id);
    }
    if (rules.empty()) {
      if (!accepts) status = NodeStatus::Stuck;
      b.nodes()[id].status = status;
      continue;
    }
    if (b.pda() && depth >= b.max_steps()) {
      if (!accepts) status = NodeStatus::Cutoff;
      b.nodes()[id].status = status;
      continue;
    }
    b.nodes()[id].status = status;

    for (std::uint32_t r : rules) {
      const detail::CompiledRule& rule = cm.rules[r];
      const std::uint32_t next_consumed = consumed + (rule.read == detail::kEpsilon ? 0u : 1u);
      std::vector<std::uint32_t> next_stack = detail::successor_stack(rule, stack);
      auto [it, fresh] = visited.emplace(rule.dst, next_consumed, next_stack);
      const NodeId child = b.add_child(id, r, rule.dst, next_consumed, std::move(next_stack),
                                       fresh ? NodeStatus::Live : NodeStatus::Pruned);
      if (fresh) queue.push_back(child);
    }
  }
  return b.finish();
}

}  // namespace ndviz
