#include <unordered_set>

#include "forest_builder.hpp"

namespace ndviz {

namespace {

// Levels smaller than this are expanded on the calling thread.
constexpr std::size_t kParallelLevel = 256;

struct Child {
  std::uint32_t rule;
  detail::ConfigKey key;
};

struct Expansion {
  bool accepts = false;
  bool cutoff = false;
  std::vector<Child> children;  // one per applicable rule, rule order
};

Expansion expand(const detail::CompiledMachine& cm, const std::vector<std::uint32_t>& w,
                 const ComputationNode& n, bool depth_capped) {
  Expansion e;
  const auto consumed = static_cast<std::uint32_t>(n.consumed);
  e.accepts = detail::accepting(cm, n.state, consumed, n.stack, w.size());
  for (std::uint32_t r : cm.rules_by_state[n.state]) {
    const detail::CompiledRule& rule = cm.rules[r];
    if (!detail::rule_applies(rule, consumed, n.stack, w)) continue;
    if (depth_capped) {
      e.cutoff = true;
      break;
    }
    const std::uint32_t next_consumed = consumed + (rule.read == detail::kEpsilon ? 0u : 1u);
    e.children.push_back(Child{r, detail::ConfigKey(rule.dst, next_consumed,
                                                    detail::successor_stack(rule, n.stack))});
  }
  return e;
}

}  // namespace

ComputationForest explore(const Machine& machine, const Word& word, const ExploreOptions& options) {
  ForestBuilder b(machine, word, options);
  const detail::CompiledMachine& cm = b.compiled();
  const std::vector<std::uint32_t>& w = b.word_ids();

  std::unordered_set<detail::ConfigKey, detail::ConfigKeyHash> visited;
  visited.emplace(cm.start, 0u, std::vector<std::uint32_t>{});

  std::vector<NodeId> frontier{0};
  std::vector<NodeId> next;
  std::vector<Expansion> level;

  while (!frontier.empty()) {
    const auto count = static_cast<std::ptrdiff_t>(frontier.size());
    level.assign(frontier.size(), Expansion{});
    const std::vector<ComputationNode>& nodes = b.nodes();

    // Read-only over the node vector; all mutation happens in the merge below.
#pragma omp parallel for schedule(dynamic, 32) if (frontier.size() >= kParallelLevel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const ComputationNode& n = nodes[frontier[i]];
      const bool capped = cm.pda && n.depth >= b.max_steps();
      level[i] = expand(cm, w, n, capped);
    }

    // Merge in generation order so ids and pruning match explore_serial.
    next.clear();
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const NodeId id = frontier[i];
      Expansion& e = level[i];
      NodeStatus status = NodeStatus::Live;
      if (e.accepts) {
        status = NodeStatus::AcceptLeaf;
        b.mark_accepting(id);
      } else if (e.cutoff) {
        status = NodeStatus::Cutoff;
      } else if (e.children.empty()) {
        status = NodeStatus::Stuck;
      }
      b.nodes()[id].status = status;

      for (Child& c : e.children) {
        const std::uint32_t state = c.key.state;
        const std::uint32_t consumed = c.key.consumed;
        std::vector<std::uint32_t> stack = c.key.stack;
        const bool fresh = visited.insert(std::move(c.key)).second;
        const NodeId child = b.add_child(id, c.rule, state, consumed, std::move(stack),
                                         fresh ? NodeStatus::Live : NodeStatus::Pruned);
        if (fresh) next.push_back(child);
      }
    }
    frontier.swap(next);
  }
  return b.finish();
}

}  // namespace ndviz
