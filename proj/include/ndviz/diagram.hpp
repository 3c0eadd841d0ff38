#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ndviz/frames.hpp"
#include "ndviz/machine.hpp"

namespace ndviz {

namespace colors {
inline constexpr std::string_view kGreen = "#228B22";
inline constexpr std::string_view kDarkGreen = "#006400";
inline constexpr std::string_view kViolet = "#7F00FF";
inline constexpr std::string_view kGold = "#DAA520";
inline constexpr std::string_view kInvRed = "#CC0000";
inline constexpr std::string_view kInvGreen = "#22AA22";
inline constexpr std::string_view kStart = "#008000";
inline constexpr std::string_view kDefault = "#000000";
}  // namespace colors

std::string_view edge_color(HighlightColor c);

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// External layout tool failed; what() carries its diagnostics.
class LayoutError : public DiagramError {
 public:
  using DiagramError::DiagramError;
};

struct DiagramSpec {
  const Machine& machine;
  const Frame* frame = nullptr;  // highlights and decorations, if any
};

/// GraphViz DOT for the transition diagram, laid out left to right.
///
/// Nodes are sorted by name and carry id="state-<name>"; the start node is
/// tagged comment="start". Rules sharing a source and destination merge into
/// one edge (sorted by source, then destination) with id="edge-<k>",
/// comment="<rule indices>" and the labels joined with commas.
/// Throws DiagramError if the frame does not belong to the machine.
std::string emit_dot(const DiagramSpec& spec);

/// Edge label text of one rule: "a" / "ε" for NFAs, "a, b → ε" for PDAs.
std::string rule_label(const Machine& machine, const Rule& rule);

struct RenderOptions {
  /// External layout binary invoked as `<tool> -Tsvg`. Defaults to $NDVIZ_LAYOUT;
  /// when unset the built-in layered layout is used.
  std::optional<std::string> layout_tool;
};

RenderOptions render_options_from_env();

/// SVG 1.1 document for a DOT graph produced by emit_dot. State groups carry
/// data-state, edge groups data-edge/data-src/data-dst/data-rules.
std::string render_svg(std::string_view dot, const RenderOptions& options = render_options_from_env());

/// The built-in layout: ranks by BFS distance from the start node, names order each rank.
std::string render_svg_builtin(std::string_view dot);

// Parsed form of the DOT dialect emit_dot writes.
struct DotGraph {
  struct Node {
    std::string name;
    std::map<std::string, std::string> attrs;
  };
  struct Edge {
    std::string src;
    std::string dst;
    std::map<std::string, std::string> attrs;
  };
  std::map<std::string, std::string> graph_attrs;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
};

/// Throws DiagramError on text outside the supported subset.
DotGraph parse_dot(std::string_view dot);

}  // namespace ndviz
