#include "ndviz/frames.hpp"

#include <algorithm>
#include <set>

namespace ndviz {

std::string_view to_string(HighlightColor c) {
  switch (c) {
    case HighlightColor::Violet: return "VIOLET";
    case HighlightColor::Green: return "GREEN";
    case HighlightColor::DarkGreen: return "DARK_GREEN";
  }
  return "?";
}

std::string_view to_string(NodeColor c) {
  switch (c) {
    case NodeColor::None: return "NONE";
    case NodeColor::Gold: return "GOLD";
    case NodeColor::InvGreen: return "INV_GREEN";
    case NodeColor::InvRed: return "INV_RED";
    case NodeColor::InvBicolor: return "INV_BICOLOR";
  }
  return "?";
}

namespace {

// Marks every node on a root-to-leaf path of each given leaf.
std::vector<unsigned char> mark_paths(const ComputationForest& forest, std::span<const NodeId> leaves) {
  std::vector<unsigned char> on(forest.nodes().size(), 0);
  for (NodeId leaf : leaves) {
    for (std::optional<NodeId> cur = leaf; cur && !on[*cur]; cur = forest.node(*cur).parent)
      on[*cur] = 1;
  }
  return on;
}

}  // namespace

std::vector<Frame> build_frames(const ComputationForest& forest) {
  const Word& word = forest.word();
  const std::size_t count = word.size() + 1;
  const Machine& machine = forest.machine();

  const std::vector<unsigned char> accepting = mark_paths(forest, forest.accepting_leaves());
  std::vector<NodeId> tracked_leaf;
  if (auto t = forest.tracked()) tracked_leaf.push_back(*t);
  const std::vector<unsigned char> tracked = mark_paths(forest, tracked_leaf);

  std::vector<Frame> frames(count);
  std::vector<std::map<std::size_t, HighlightColor>> edges(count);
  std::vector<std::set<std::uint32_t>> gold(count);
  std::vector<std::optional<NodeId>> tracked_at(count);

  for (const ComputationNode& n : forest.nodes()) {
    const std::size_t level = n.consumed;
    if (n.status != NodeStatus::Pruned) frames[level].displayed_nodes.push_back(n.id);
    if (n.status == NodeStatus::Cutoff) gold[level].insert(n.state);
    if (n.via_rule) {
      const HighlightColor color = tracked[n.id]     ? HighlightColor::DarkGreen
                                   : accepting[n.id] ? HighlightColor::Green
                                                     : HighlightColor::Violet;
      auto [it, inserted] = edges[level].emplace(*n.via_rule, color);
      if (!inserted) it->second = std::max(it->second, color);
    }
    // Nodes come in BFS order, so the last tracked node seen is the deepest.
    if (tracked[n.id]) tracked_at[level] = n.id;
  }

  const bool show_stack = machine.is_pda() && forest.verdict() == Verdict::Accept;
  for (std::size_t i = 0; i < count; ++i) {
    Frame& f = frames[i];
    f.index = i;
    for (const auto& [rule, color] : edges[i]) f.highlighted_edges.push_back({rule, color});
    f.computation_count = f.displayed_nodes.size();
    f.cutoff_count = forest.cutoff_count();
    f.consumed.assign(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(i));
    f.unconsumed.assign(word.begin() + static_cast<std::ptrdiff_t>(i), word.end());
    for (std::uint32_t s = 0; s < machine.states().size(); ++s)
      f.node_decorations[machine.states()[s]] = gold[i].contains(s) ? NodeColor::Gold : NodeColor::None;
    if (show_stack && tracked_at[i]) f.tracked_stack = forest.stack(*tracked_at[i]);
    if (i + 1 == count) f.verdict_banner = forest.verdict();
  }
  return frames;
}

InvariantTable compile_invariants(const Machine& machine) {
  InvariantTable table;
  for (const auto& [state, source] : machine.invariants())
    table.emplace(state, InvariantProgram::parse(source, machine.kind()));
  return table;
}

std::vector<Frame> decorate_invariants(std::vector<Frame> frames, const ComputationForest& forest,
                                       const InvariantTable& programs) {
  if (forest.accepting_leaves().empty() || programs.empty()) return frames;

  const std::vector<unsigned char> accepting = mark_paths(forest, forest.accepting_leaves());
  const bool pda = forest.machine().is_pda();
  const Word& word = forest.word();

  const auto count = static_cast<std::ptrdiff_t>(frames.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    Frame& f = frames[i];
    std::span<const Symbol> ci(word.data(), f.index);
    std::map<StateName, std::pair<bool, bool>> seen;  // state -> (some hold, some fail)
    for (NodeId id : f.displayed_nodes) {
      if (!accepting[id]) continue;
      const StateName& state = forest.state_name(id);
      auto prog = programs.find(state);
      if (prog == programs.end()) continue;
      bool holds;
      if (pda) {
        const Word stack = forest.stack(id);
        holds = prog->second.eval(ci, std::span<const Symbol>(stack));
      } else {
        holds = prog->second.eval(ci);
      }
      auto& [some_hold, some_fail] = seen[state];
      (holds ? some_hold : some_fail) = true;
    }
    for (const auto& [state, result] : seen) {
      const auto [some_hold, some_fail] = result;
      f.node_decorations[state] = some_hold && some_fail ? NodeColor::InvBicolor
                                  : some_hold            ? NodeColor::InvGreen
                                                         : NodeColor::InvRed;
    }
  }
  return frames;
}

std::size_t navigate(std::size_t frame_count, std::size_t current, NavCommand command) {
  const std::size_t last = frame_count == 0 ? 0 : frame_count - 1;
  current = std::min(current, last);
  switch (command) {
    case NavCommand::Next: return std::min(current + 1, last);
    case NavCommand::Prev: return current == 0 ? 0 : current - 1;
    case NavCommand::Begin: return 0;
    case NavCommand::End: return last;
  }
  return current;
}

namespace {

bool has_failure(const Frame& f) {
  return std::any_of(f.node_decorations.begin(), f.node_decorations.end(), [](const auto& kv) {
    return kv.second == NodeColor::InvRed || kv.second == NodeColor::InvBicolor;
  });
}

}  // namespace

std::optional<std::size_t> jump_to_invariant_failure(std::span<const Frame> frames, std::size_t from,
                                                     Direction direction) {
  if (direction == Direction::Next) {
    for (std::size_t i = from + 1; i < frames.size(); ++i)
      if (has_failure(frames[i])) return i;
  } else {
    for (std::size_t i = std::min(from, frames.size()); i-- > 0;)
      if (has_failure(frames[i])) return i;
  }
  return std::nullopt;
}

nlohmann::json frame_to_json(const Frame& f) {
  using nlohmann::json;
  json edges = json::array();
  for (const HighlightedEdge& e : f.highlighted_edges)
    edges.push_back({{"rule", e.rule}, {"color", std::string(to_string(e.color))}});
  json decorations = json::object();
  for (const auto& [state, color] : f.node_decorations) decorations[state] = std::string(to_string(color));

  json j;
  j["index"] = f.index;
  j["displayed_nodes"] = f.displayed_nodes;
  j["highlighted_edges"] = std::move(edges);
  j["node_decorations"] = std::move(decorations);
  j["computation_count"] = f.computation_count;
  j["cutoff_count"] = f.cutoff_count;
  j["consumed"] = f.consumed;
  j["unconsumed"] = f.unconsumed;
  j["tracked_stack"] = f.tracked_stack ? json(*f.tracked_stack) : json(nullptr);
  j["verdict_banner"] = f.verdict_banner ? json(std::string(to_string(*f.verdict_banner))) : json(nullptr);
  return j;
}

nlohmann::json frames_to_json(std::span<const Frame> frames) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Frame& f : frames) arr.push_back(frame_to_json(f));
  return arr;
}

std::string canonical_dump(const nlohmann::json& doc) { return doc.dump(); }

Visualization visualize(const Machine& machine, const Word& word, const ExploreOptions& options,
                        bool with_invariants) {
  Visualization v{explore(machine, word, options), {}};
  v.frames = build_frames(v.forest);
  if (with_invariants && !v.forest.machine().invariants().empty())
    v.frames = decorate_invariants(std::move(v.frames), v.forest, compile_invariants(v.forest.machine()));
  return v;
}

}  // namespace ndviz
