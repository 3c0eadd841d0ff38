#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ndviz/machine.hpp"

namespace ndviz {

enum class Verdict { Accept, Reject, CutoffLimit };
enum class NodeStatus { Live, Stuck, AcceptLeaf, Pruned, Cutoff };

std::string_view to_string(Verdict v);     // "ACCEPT", "REJECT", "CUTOFF-LIMIT"
std::string_view to_string(NodeStatus s);  // "LIVE", "STUCK", "ACCEPT-LEAF", "PRUNED", "CUTOFF"

struct ExploreOptions {
  std::size_t max_steps = 100;  // transitions per PDA computation; ignored for NFAs
  bool add_dead = false;        // augment with a dead state before exploring
  std::size_t max_nodes = 0;    // forest size cap, 0 = unbounded
};

/// Instantaneous description. The stack is written top first and is always
/// empty for NFAs.
struct Configuration {
  StateName state;
  Word unconsumed;
  Word stack;

  bool operator==(const Configuration&) const = default;
};

/// The word uses a symbol outside Σ.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The forest exceeded ExploreOptions::max_nodes.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Indices of the rules applicable to `config`, in machine rule order.
std::vector<std::size_t> applicable_rules(const Machine& machine, const Configuration& config);

/// Applies one rule: read, then pop, then push. The rule must be applicable.
Configuration step(const Machine& machine, const Configuration& config, std::size_t rule);

/// Acceptance test: final state, no input left, empty stack.
bool is_accepting(const Machine& machine, const Configuration& config);

using NodeId = std::uint32_t;

struct ComputationNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  std::optional<std::size_t> via_rule;
  std::size_t depth = 0;
  std::size_t consumed = 0;
  NodeStatus status = NodeStatus::Live;
  std::uint32_t state = 0;           // index into machine().states()
  std::vector<std::uint32_t> stack;  // symbol ids, top of stack at the BACK
  std::vector<NodeId> children;
};

/// The pruned computation tree of a machine on a word. Node ids follow
/// breadth-first generation order; node 0 is the root.
class ComputationForest {
 public:
  const Machine& machine() const { return *machine_; }
  const Word& word() const { return word_; }
  const ExploreOptions& options() const { return options_; }

  std::span<const ComputationNode> nodes() const { return nodes_; }
  const ComputationNode& node(NodeId id) const { return nodes_.at(id); }
  NodeId root() const { return 0; }

  /// In breadth-first order.
  const std::vector<NodeId>& accepting_leaves() const { return accepting_; }
  /// The first accepting leaf in breadth-first order.
  std::optional<NodeId> tracked() const {
    return accepting_.empty() ? std::nullopt : std::optional<NodeId>(accepting_.front());
  }

  Verdict verdict() const;
  std::size_t cutoff_count() const { return cutoff_count_; }

  const StateName& state_name(NodeId id) const;
  /// Stack of a node, top first.
  Word stack(NodeId id) const;
  Configuration configuration(NodeId id) const;
  /// Root-to-node list of ids.
  std::vector<NodeId> path_to(NodeId id) const;

 private:
  friend class ForestBuilder;

  std::shared_ptr<const Machine> machine_;
  Word word_;
  ExploreOptions options_;
  std::vector<ComputationNode> nodes_;
  std::vector<NodeId> accepting_;
  std::vector<Symbol> symbol_names_;  // id -> symbol (Σ ∪ Γ)
  std::size_t cutoff_count_ = 0;
};

/// Breadth-first exploration with a global visited set. Each BFS level is
/// expanded in parallel (OpenMP) and merged in generation order, so the
/// result is identical to explore_serial.
/// Throws InputError for a word outside Σ* and LimitError when max_nodes is hit.
ComputationForest explore(const Machine& machine, const Word& word, const ExploreOptions& options = {});

/// Single-threaded queue-based reference implementation of explore.
ComputationForest explore_serial(const Machine& machine, const Word& word,
                                 const ExploreOptions& options = {});

Verdict apply(const Machine& machine, const Word& word, const ExploreOptions& options = {});

struct TraceResult {
  Verdict verdict = Verdict::Reject;
  MachineKind kind = MachineKind::Nfa;
  std::vector<Configuration> path;  // root to tracked leaf, only on ACCEPT
  std::size_t accepting_count = 0;
  std::size_t cutoff_count = 0;
  std::size_t node_count = 0;
};

TraceResult trace(const Machine& machine, const Word& word, const ExploreOptions& options = {});
TraceResult trace(const ComputationForest& forest);

/// "(((a b) S) ((b) A) (() C) accept)"; PDA configurations add the stack:
/// "((a b) S (b))". Non-accepting results render as a short report.
std::string format_trace(const TraceResult& result);

/// {"word":[..],"verdict":..,"tracked":id|null,"nodes":[{"id","parent","rule",
///  "depth","consumed","status","config":{"state","unconsumed","stack"}}]}
nlohmann::json forest_to_json(const ComputationForest& forest);

}  // namespace ndviz
