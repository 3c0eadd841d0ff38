#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ndviz/engine.hpp"
#include "ndviz/invariant.hpp"

namespace ndviz {

enum class HighlightColor { Violet, Green, DarkGreen };  // ascending precedence
enum class NodeColor { None, Gold, InvGreen, InvRed, InvBicolor };

std::string_view to_string(HighlightColor c);  // "GREEN", "DARK_GREEN", "VIOLET"
std::string_view to_string(NodeColor c);       // "NONE", "GOLD", "INV_GREEN", ...

struct HighlightedEdge {
  std::size_t rule;
  HighlightColor color;
  bool operator==(const HighlightedEdge&) const = default;
};

/// One visualization step: everything visible after `index` input symbols
/// have been consumed, including ε-moves made at that level.
struct Frame {
  std::size_t index = 0;
  std::vector<NodeId> displayed_nodes;
  std::vector<HighlightedEdge> highlighted_edges;  // sorted by rule, one entry per rule
  std::map<StateName, NodeColor> node_decorations;  // every state of the machine
  std::size_t computation_count = 0;
  std::size_t cutoff_count = 0;
  Word consumed;
  Word unconsumed;
  std::optional<Word> tracked_stack;  // PDA with an accepting computation
  std::optional<Verdict> verdict_banner;

  bool operator==(const Frame&) const = default;
};

/// One frame per consumed-symbol count 0..|word|. Node decorations start as
/// GOLD for states holding a cut-off computation at that frame, NONE elsewhere.
std::vector<Frame> build_frames(const ComputationForest& forest);

using InvariantTable = std::map<StateName, InvariantProgram>;

/// Parses the machine's invariant sources. Throws InvariantError.
InvariantTable compile_invariants(const Machine& machine);

/// Colors states carrying an invariant by evaluating it on every displayed
/// node of that state lying on a root-to-accepting-leaf path: all hold →
/// INV_GREEN, none hold → INV_RED, mixed → INV_BICOLOR. Without accepting
/// computations no state is colored.
std::vector<Frame> decorate_invariants(std::vector<Frame> frames, const ComputationForest& forest,
                                       const InvariantTable& programs);

enum class NavCommand { Next, Prev, Begin, End };
enum class Direction { Next, Prev };

/// Clamped index arithmetic. `frame_count` must be positive.
std::size_t navigate(std::size_t frame_count, std::size_t current, NavCommand command);

/// Nearest frame strictly after (Next) or before (Prev) `from` with an
/// INV_RED or INV_BICOLOR decoration.
std::optional<std::size_t> jump_to_invariant_failure(std::span<const Frame> frames, std::size_t from,
                                                     Direction direction);

/// Field names as in Frame; colors and verdicts as uppercase strings.
nlohmann::json frame_to_json(const Frame& frame);
nlohmann::json frames_to_json(std::span<const Frame> frames);

/// Compact dump with sorted keys: the canonical byte form used by the CLI and service.
std::string canonical_dump(const nlohmann::json& doc);

/// Explore, build frames, and (optionally) decorate with the machine's invariants.
struct Visualization {
  ComputationForest forest;
  std::vector<Frame> frames;
};
Visualization visualize(const Machine& machine, const Word& word, const ExploreOptions& options = {},
                        bool with_invariants = true);

}  // namespace ndviz
