#include <algorithm>
#include <sstream>

#include "forest_builder.hpp"
#include "ndviz/engine.hpp"

namespace ndviz {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "ACCEPT";
    case Verdict::Reject: return "REJECT";
    case Verdict::CutoffLimit: return "CUTOFF-LIMIT";
  }
  return "?";
}

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Live: return "LIVE";
    case NodeStatus::Stuck: return "STUCK";
    case NodeStatus::AcceptLeaf: return "ACCEPT-LEAF";
    case NodeStatus::Pruned: return "PRUNED";
    case NodeStatus::Cutoff: return "CUTOFF";
  }
  return "?";
}

// --- named-configuration semantics ------------------------------------------

namespace {

bool applies(const Rule& r, const Configuration& c) {
  if (r.src != c.state) return false;
  if (r.read && (c.unconsumed.empty() || c.unconsumed.front() != *r.read)) return false;
  if (r.pop.size() > c.stack.size()) return false;
  return std::equal(r.pop.begin(), r.pop.end(), c.stack.begin());
}

}  // namespace

std::vector<std::size_t> applicable_rules(const Machine& machine, const Configuration& config) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < machine.rules().size(); ++i)
    if (applies(machine.rules()[i], config)) out.push_back(i);
  return out;
}

Configuration step(const Machine& machine, const Configuration& config, std::size_t rule) {
  const Rule& r = machine.rules().at(rule);
  if (!applies(r, config)) throw std::logic_error("step: rule " + std::to_string(rule) + " does not apply");
  Configuration next;
  next.state = r.dst;
  next.unconsumed.assign(config.unconsumed.begin() + (r.read ? 1 : 0), config.unconsumed.end());
  next.stack = r.push;
  next.stack.insert(next.stack.end(), config.stack.begin() + static_cast<std::ptrdiff_t>(r.pop.size()),
                    config.stack.end());
  return next;
}

bool is_accepting(const Machine& machine, const Configuration& config) {
  return machine.is_final(config.state) && config.unconsumed.empty() && config.stack.empty();
}

// --- compiled form ------------------------------------------------------------

namespace detail {

ConfigKey::ConfigKey(std::uint32_t s, std::uint32_t c, std::vector<std::uint32_t> st)
    : state(s), consumed(c), stack(std::move(st)) {
  // FNV-1a over the three components.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(state);
  mix(consumed);
  mix(stack.size());
  for (std::uint32_t x : stack) mix(x);
  hash = static_cast<std::size_t>(h);
}

CompiledMachine compile(const Machine& machine) {
  if (const ValidationReport report = validate(machine); !report.ok())
    throw std::invalid_argument("machine does not validate:\n" + report.to_string());

  CompiledMachine cm;
  cm.pda = machine.is_pda();
  for (const StateName& s : machine.states())
    cm.state_ids.emplace(s, static_cast<std::uint32_t>(cm.state_ids.size()));
  auto intern = [&](const Symbol& s) {
    auto [it, inserted] = cm.symbol_ids.emplace(s, static_cast<std::uint32_t>(cm.symbols.size()));
    if (inserted) cm.symbols.push_back(s);
    return it->second;
  };
  for (const Symbol& s : machine.sigma()) intern(s);
  for (const Symbol& s : machine.gamma()) intern(s);

  cm.start = cm.state_ids.at(machine.start());
  cm.final.assign(machine.states().size(), 0);
  for (const StateName& f : machine.finals()) cm.final[cm.state_ids.at(f)] = 1;

  cm.rules_by_state.resize(machine.states().size());
  for (const Rule& r : machine.rules()) {
    CompiledRule c;
    c.src = cm.state_ids.at(r.src);
    c.dst = cm.state_ids.at(r.dst);
    c.read = r.read ? cm.symbol_ids.at(*r.read) : kEpsilon;
    for (const Symbol& s : r.pop) c.pop.push_back(cm.symbol_ids.at(s));
    for (const Symbol& s : r.push) c.push.push_back(cm.symbol_ids.at(s));
    cm.rules_by_state[c.src].push_back(static_cast<std::uint32_t>(cm.rules.size()));
    cm.rules.push_back(std::move(c));
  }
  return cm;
}

std::vector<std::uint32_t> encode_word(const Machine& machine, const CompiledMachine& cm,
                                       const Word& word) {
  std::vector<std::uint32_t> ids;
  ids.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    const bool in_sigma =
        std::find(machine.sigma().begin(), machine.sigma().end(), word[i]) != machine.sigma().end();
    if (!in_sigma)
      throw InputError("word symbol " + std::to_string(i) + " ('" + word[i] + "') is not in sigma");
    ids.push_back(cm.symbol_ids.at(word[i]));
  }
  return ids;
}

}  // namespace detail

// --- forest -------------------------------------------------------------------

ForestBuilder::ForestBuilder(const Machine& machine, const Word& word, const ExploreOptions& options) {
  if (options.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  forest_.machine_ = std::make_shared<const Machine>(
      options.add_dead && !machine.augmented() ? add_dead_state(machine) : machine);
  cm_ = detail::compile(*forest_.machine_);
  word_ids_ = detail::encode_word(*forest_.machine_, cm_, word);
  forest_.word_ = word;
  forest_.options_ = options;
  forest_.symbol_names_ = cm_.symbols;

  ComputationNode root;
  root.id = 0;
  root.state = cm_.start;
  forest_.nodes_.push_back(std::move(root));
}

NodeId ForestBuilder::add_child(NodeId parent, std::size_t rule, std::uint32_t state,
                                std::uint32_t consumed, std::vector<std::uint32_t> stack,
                                NodeStatus status) {
  auto& nodes = forest_.nodes_;
  const std::size_t cap = forest_.options_.max_nodes;
  if (cap != 0 && nodes.size() >= cap)
    throw LimitError("computation forest exceeds " + std::to_string(cap) + " nodes");
  ComputationNode n;
  n.id = static_cast<NodeId>(nodes.size());
  n.parent = parent;
  n.via_rule = rule;
  n.depth = nodes[parent].depth + 1;
  n.consumed = consumed;
  n.status = status;
  n.state = state;
  n.stack = std::move(stack);
  nodes[parent].children.push_back(n.id);
  nodes.push_back(std::move(n));
  return nodes.back().id;
}

ComputationForest ForestBuilder::finish() {
  forest_.cutoff_count_ = static_cast<std::size_t>(
      std::count_if(forest_.nodes_.begin(), forest_.nodes_.end(),
                    [](const ComputationNode& n) { return n.status == NodeStatus::Cutoff; }));
  return std::move(forest_);
}

Verdict ComputationForest::verdict() const {
  if (!accepting_.empty()) return Verdict::Accept;
  return cutoff_count_ > 0 ? Verdict::CutoffLimit : Verdict::Reject;
}

const StateName& ComputationForest::state_name(NodeId id) const {
  return machine_->states().at(node(id).state);
}

Word ComputationForest::stack(NodeId id) const {
  const auto& st = node(id).stack;
  Word out;
  out.reserve(st.size());
  for (auto it = st.rbegin(); it != st.rend(); ++it) out.push_back(symbol_names_.at(*it));
  return out;
}

Configuration ComputationForest::configuration(NodeId id) const {
  const ComputationNode& n = node(id);
  return Configuration{state_name(id),
                       Word(word_.begin() + static_cast<std::ptrdiff_t>(n.consumed), word_.end()),
                       stack(id)};
}

std::vector<NodeId> ComputationForest::path_to(NodeId id) const {
  std::vector<NodeId> path;
  for (std::optional<NodeId> cur = id; cur; cur = node(*cur).parent) path.push_back(*cur);
  std::reverse(path.begin(), path.end());
  return path;
}

Verdict apply(const Machine& machine, const Word& word, const ExploreOptions& options) {
  return explore(machine, word, options).verdict();
}

// --- trace --------------------------------------------------------------------

TraceResult trace(const ComputationForest& forest) {
  TraceResult result;
  result.verdict = forest.verdict();
  result.kind = forest.machine().kind();
  result.accepting_count = forest.accepting_leaves().size();
  result.cutoff_count = forest.cutoff_count();
  result.node_count = forest.nodes().size();
  if (auto tracked = forest.tracked())
    for (NodeId id : forest.path_to(*tracked)) result.path.push_back(forest.configuration(id));
  return result;
}

TraceResult trace(const Machine& machine, const Word& word, const ExploreOptions& options) {
  return trace(explore(machine, word, options));
}

namespace {

std::string list(const Word& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out + ")";
}

}  // namespace

std::string format_trace(const TraceResult& result) {
  if (result.verdict == Verdict::Accept) {
    std::string out = "(";
    for (const Configuration& c : result.path) {
      out += "(" + list(c.unconsumed) + " " + c.state;
      if (result.kind == MachineKind::Pda) out += " " + list(c.stack);
      out += ") ";
    }
    return out + "accept)";
  }
  std::ostringstream os;
  os << (result.verdict == Verdict::Reject ? "reject" : "cutoff-limit") << '\n'
     << "accepting computations: " << result.accepting_count << '\n'
     << "cut off computations: " << result.cutoff_count << '\n'
     << "explored configurations: " << result.node_count;
  return os.str();
}

nlohmann::json forest_to_json(const ComputationForest& forest) {
  using nlohmann::json;
  json nodes = json::array();
  for (const ComputationNode& n : forest.nodes()) {
    const Configuration c = forest.configuration(n.id);
    json j;
    j["id"] = n.id;
    j["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    j["rule"] = n.via_rule ? json(*n.via_rule) : json(nullptr);
    j["depth"] = n.depth;
    j["consumed"] = n.consumed;
    j["status"] = std::string(to_string(n.status));
    j["config"] = {{"state", c.state}, {"unconsumed", c.unconsumed}, {"stack", c.stack}};
    nodes.push_back(std::move(j));
  }
  json doc;
  doc["word"] = forest.word();
  doc["verdict"] = std::string(to_string(forest.verdict()));
  doc["tracked"] = forest.tracked() ? json(*forest.tracked()) : json(nullptr);
  doc["nodes"] = std::move(nodes);
  return doc;
}

}  // namespace ndviz
