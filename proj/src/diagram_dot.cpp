#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "ndviz/diagram.hpp"

namespace ndviz {

std::string_view edge_color(HighlightColor c) {
  switch (c) {
    case HighlightColor::Green: return colors::kGreen;
    case HighlightColor::DarkGreen: return colors::kDarkGreen;
    case HighlightColor::Violet: return colors::kViolet;
  }
  return colors::kDefault;
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string seq(const Word& w) {
  if (w.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out;
}

void check_frame(const Machine& m, const Frame& f) {
  for (const HighlightedEdge& e : f.highlighted_edges)
    if (e.rule >= m.rules().size())
      throw DiagramError("frame highlights rule " + std::to_string(e.rule) + " which the machine lacks");
  std::set<std::string_view> states(m.states().begin(), m.states().end());
  std::set<std::string_view> decorated;
  for (const auto& [state, color] : f.node_decorations) decorated.insert(state);
  if (states != decorated) throw DiagramError("frame was built for a different machine (state sets differ)");
}

}  // namespace

std::string rule_label(const Machine& machine, const Rule& rule) {
  const std::string read = rule.read.value_or("ε");
  if (!machine.is_pda()) return read;
  return read + ", " + seq(rule.pop) + " → " + seq(rule.push);
}

std::string emit_dot(const DiagramSpec& spec) {
  const Machine& m = spec.machine;
  if (spec.frame) check_frame(m, *spec.frame);

  std::map<std::size_t, HighlightColor> highlight;
  if (spec.frame)
    for (const HighlightedEdge& e : spec.frame->highlighted_edges) highlight[e.rule] = e.color;

  std::ostringstream os;
  os << "digraph machine {\n"
     << "  rankdir=LR;\n"
     << "  node [shape=circle, fontname=\"Helvetica\", color=\"" << colors::kDefault << "\"];\n"
     << "  edge [fontname=\"Helvetica\", color=\"" << colors::kDefault << "\"];\n";

  std::vector<StateName> states = m.states();
  std::sort(states.begin(), states.end());
  for (const StateName& s : states) {
    std::vector<std::string> attrs{"id=" + quote("state-" + s)};
    const bool start = s == m.start();
    if (start) attrs.push_back("comment=\"start\"");
    if (m.is_final(s)) attrs.push_back("shape=doublecircle");
    if (start) attrs.push_back("color=" + quote(colors::kStart) + ", penwidth=2");

    std::vector<std::string> style;
    if (m.dead_state() && s == *m.dead_state()) style.push_back("dashed");
    const NodeColor deco = spec.frame ? spec.frame->node_decorations.at(s) : NodeColor::None;
    std::string fill;
    switch (deco) {
      case NodeColor::Gold: fill = colors::kGold; break;
      case NodeColor::InvGreen: fill = colors::kInvGreen; break;
      case NodeColor::InvRed: fill = colors::kInvRed; break;
      case NodeColor::InvBicolor:
        fill = std::string(colors::kInvGreen) + ";0.5:" + std::string(colors::kInvRed);
        break;
      case NodeColor::None: break;
    }
    if (!fill.empty()) style.push_back("filled");
    if (!style.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < style.size(); ++i) joined += (i ? "," : "") + style[i];
      attrs.push_back("style=" + quote(joined));
    }
    if (!fill.empty()) attrs.push_back("fillcolor=" + quote(fill));

    os << "  " << quote(s) << " [";
    for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
    os << "];\n";
  }

  // (src, dst) -> rule indices in rule order
  std::map<std::pair<StateName, StateName>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < m.rules().size(); ++i)
    groups[{m.rules()[i].src, m.rules()[i].dst}].push_back(i);

  std::size_t k = 0;
  for (const auto& [ends, rules] : groups) {
    std::string label;
    std::string ids;
    bool synthetic = true;
    std::optional<HighlightColor> color;
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const Rule& r = m.rules()[rules[j]];
      if (j) {
        label += m.is_pda() ? ",\\n" : ", ";
        ids += ',';
      }
      label += rule_label(m, r);
      ids += std::to_string(rules[j]);
      synthetic = synthetic && r.synthetic;
      if (auto h = highlight.find(rules[j]); h != highlight.end())
        color = color ? std::max(*color, h->second) : h->second;
    }
    os << "  " << quote(ends.first) << " -> " << quote(ends.second) << " [id="
       << quote("edge-" + std::to_string(k++)) << ", comment=" << quote(ids) << ", label=" << quote(label);
    if (synthetic) os << ", style=\"dashed\"";
    if (color) os << ", color=" << quote(edge_color(*color)) << ", penwidth=3";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

// --- DOT subset parser ----------------------------------------------------------

namespace {

class DotParser {
 public:
  explicit DotParser(std::string_view text) : t_(text) {}

  DotGraph parse() {
    DotGraph g;
    const std::string kw = ident();
    if (kw != "digraph") fail("expected 'digraph'");
    if (peek() != '{') ident();
    expect('{');
    for (;;) {
      skip();
      if (peek() == '}') {
        ++pos_;
        break;
      }
      if (at_end()) fail("unterminated graph");
      const std::string first = ident();
      skip();
      if (first == "node" || first == "edge" || first == "graph") {
        auto attrs = attr_list();
        if (first == "graph") g.graph_attrs.insert(attrs.begin(), attrs.end());
        accept(';');
        continue;
      }
      if (peek() == '=') {
        ++pos_;
        g.graph_attrs[first] = ident();
        accept(';');
        continue;
      }
      if (t_.substr(pos_, 2) == "->") {
        pos_ += 2;
        DotGraph::Edge e{first, ident(), {}};
        skip();
        if (peek() == '[') e.attrs = attr_list();
        accept(';');
        g.edges.push_back(std::move(e));
        continue;
      }
      DotGraph::Node n{first, {}};
      if (peek() == '[') n.attrs = attr_list();
      accept(';');
      g.nodes.push_back(std::move(n));
    }
    skip();
    if (!at_end()) fail("trailing text after graph");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw DiagramError("DOT parse error at offset " + std::to_string(pos_) + ": " + msg);
  }
  bool at_end() const { return pos_ >= t_.size(); }
  char peek() {
    skip();
    return at_end() ? '\0' : t_[pos_];
  }
  void skip() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(t_[pos_]))) {
        ++pos_;
      } else if (t_.substr(pos_, 2) == "//") {
        while (!at_end() && t_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void accept(char c) {
    if (peek() == c) ++pos_;
  }

  std::string ident() {
    skip();
    if (at_end()) fail("unexpected end of input");
    std::string out;
    if (t_[pos_] == '"') {
      ++pos_;
      while (!at_end() && t_[pos_] != '"') {
        if (t_[pos_] == '\\' && pos_ + 1 < t_.size()) {
          const char next = t_[pos_ + 1];
          if (next == '"' || next == '\\') {
            out += next;
            pos_ += 2;
            continue;
          }
        }
        out += t_[pos_++];
      }
      if (at_end()) fail("unterminated string");
      ++pos_;
      return out;
    }
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(t_[pos_])) || t_[pos_] == '_' ||
                         t_[pos_] == '.' || t_[pos_] == '#'))
      out += t_[pos_++];
    if (out.empty()) fail(std::string("unexpected '") + t_[pos_] + "'");
    return out;
  }

  std::map<std::string, std::string> attr_list() {
    std::map<std::string, std::string> attrs;
    expect('[');
    while (peek() != ']') {
      if (at_end()) fail("unterminated attribute list");
      const std::string key = ident();
      expect('=');
      attrs[key] = ident();
      skip();
      if (peek() == ',' || peek() == ';') ++pos_;
    }
    ++pos_;
    return attrs;
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};

}  // namespace

DotGraph parse_dot(std::string_view dot) { return DotParser(dot).parse(); }

}  // namespace ndviz
