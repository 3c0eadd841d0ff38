#pragma once

#include "compiled_machine.hpp"

namespace ndviz {

/// Shared setup and bookkeeping for the serial and parallel explorers.
class ForestBuilder {
 public:
  ForestBuilder(const Machine& machine, const Word& word, const ExploreOptions& options);

  const detail::CompiledMachine& compiled() const { return cm_; }
  const std::vector<std::uint32_t>& word_ids() const { return word_ids_; }
  std::vector<ComputationNode>& nodes() { return forest_.nodes_; }
  const std::vector<ComputationNode>& nodes() const { return forest_.nodes_; }

  bool pda() const { return cm_.pda; }
  std::size_t max_steps() const { return forest_.options_.max_steps; }

  /// Appends a node and links it to its parent. Throws LimitError past max_nodes.
  NodeId add_child(NodeId parent, std::size_t rule, std::uint32_t state, std::uint32_t consumed,
                   std::vector<std::uint32_t> stack, NodeStatus status);

  void mark_accepting(NodeId id) { forest_.accepting_.push_back(id); }

  ComputationForest finish();

 private:
  ComputationForest forest_;
  detail::CompiledMachine cm_;
  std::vector<std::uint32_t> word_ids_;
};

}  // namespace ndviz
