#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "ndviz/diagram.hpp"

namespace ndviz {

namespace {

constexpr double kRadius = 22.0;
constexpr double kRankGap = 150.0;
constexpr double kRowGap = 90.0;
constexpr double kMargin = 60.0;

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string attr(const std::map<std::string, std::string>& attrs, const std::string& key,
                 const std::string& fallback = "") {
  auto it = attrs.find(key);
  return it == attrs.end() ? fallback : it->second;
}

bool has_style(const std::map<std::string, std::string>& attrs, std::string_view style) {
  const std::string s = attr(attrs, "style");
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    if (std::string_view(s).substr(pos, end - pos) == style) return true;
    pos = end + 1;
  }
  return false;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::vector<std::string> split_lines(const std::string& label) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t at = label.find("\\n", pos);
    if (at == std::string::npos) {
      lines.push_back(label.substr(pos));
      return lines;
    }
    lines.push_back(label.substr(pos, at - pos));
    pos = at + 2;
  }
}

std::string marker_id(const std::string& color) {
  std::string id = "arrow-";
  for (char c : color)
    if (std::isalnum(static_cast<unsigned char>(c))) id += c;
  return id;
}

struct Point {
  double x, y;
};

void write_text(std::ostringstream& os, const std::string& label, Point at, const std::string& color) {
  const std::vector<std::string> lines = split_lines(label);
  const double top = at.y - 7.0 * static_cast<double>(lines.size() - 1);
  os << "    <text x=\"" << fmt(at.x) << "\" y=\"" << fmt(top) << "\" text-anchor=\"middle\" "
     << "font-family=\"Helvetica,sans-serif\" font-size=\"12\" fill=\"" << xml_escape(color) << "\">";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i == 0)
      os << xml_escape(lines[i]);
    else
      os << "<tspan x=\"" << fmt(at.x) << "\" dy=\"14\">" << xml_escape(lines[i]) << "</tspan>";
  }
  os << "</text>\n";
}

std::string edge_data_attrs(const DotGraph::Edge& e) {
  return "data-edge=\"" + xml_escape(e.src + "->" + e.dst) + "\" data-src=\"" + xml_escape(e.src) +
         "\" data-dst=\"" + xml_escape(e.dst) + "\" data-rules=\"" + xml_escape(attr(e.attrs, "comment")) + "\"";
}

}  // namespace

std::string render_svg_builtin(std::string_view dot) {
  const DotGraph g = parse_dot(dot);

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i].name, i);
  for (const DotGraph::Edge& e : g.edges)
    if (!index.contains(e.src) || !index.contains(e.dst))
      throw DiagramError("edge " + e.src + " -> " + e.dst + " names an undeclared node");

  // Rank = BFS distance from the start node; unreachable nodes go in one extra rank.
  std::size_t start = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (attr(g.nodes[i].attrs, "comment") == "start") start = i;
  std::vector<std::vector<std::size_t>> succ(g.nodes.size());
  for (const DotGraph::Edge& e : g.edges) succ[index.at(e.src)].push_back(index.at(e.dst));
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rank(g.nodes.size(), kUnset);
  std::size_t max_rank = 0;
  if (!g.nodes.empty()) {
    std::queue<std::size_t> q;
    rank[start] = 0;
    q.push(start);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      max_rank = std::max(max_rank, rank[u]);
      for (std::size_t v : succ[u])
        if (rank[v] == kUnset) {
          rank[v] = rank[u] + 1;
          q.push(v);
        }
    }
  }
  bool orphans = false;
  for (std::size_t& r : rank)
    if (r == kUnset) {
      r = max_rank + 1;
      orphans = true;
    }
  const std::size_t ranks = g.nodes.empty() ? 0 : max_rank + 1 + (orphans ? 1 : 0);

  std::vector<std::vector<std::size_t>> columns(ranks);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) columns[rank[i]].push_back(i);
  std::size_t rows = 1;
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(), [&](std::size_t a, std::size_t b) { return g.nodes[a].name < g.nodes[b].name; });
    rows = std::max(rows, col.size());
  }
  const double height = 2 * kMargin + static_cast<double>(rows - 1) * kRowGap;
  const double width = 2 * kMargin + static_cast<double>(ranks == 0 ? 0 : ranks - 1) * kRankGap;
  std::vector<Point> pos(g.nodes.size());
  for (std::size_t r = 0; r < ranks; ++r) {
    const auto& col = columns[r];
    const double offset = (height - static_cast<double>(col.size() - 1) * kRowGap) / 2;
    for (std::size_t j = 0; j < col.size(); ++j)
      pos[col[j]] = {kMargin + static_cast<double>(r) * kRankGap, offset + static_cast<double>(j) * kRowGap};
  }

  const std::string default_edge = std::string(colors::kDefault);
  std::set<std::string> edge_colors{default_edge};
  for (const DotGraph::Edge& e : g.edges) edge_colors.insert(attr(e.attrs, "color", default_edge));
  std::set<std::pair<std::string, std::string>> pairs;
  for (const DotGraph::Edge& e : g.edges) pairs.emplace(e.src, e.dst);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width) << "\" height=\""
     << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n"
     << "  <defs>\n";
  for (const std::string& c : edge_colors)
    os << "    <marker id=\"" << marker_id(c) << "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
       << "markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\""
       << xml_escape(c) << "\"/></marker>\n";
  std::size_t gradients = 0;
  std::map<std::size_t, std::string> gradient_of;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const std::string fill = attr(g.nodes[i].attrs, "fillcolor");
    const std::size_t split = fill.find(";0.5:");
    if (split == std::string::npos) continue;
    const std::string id = "split-" + std::to_string(gradients++);
    gradient_of[i] = id;
    os << "    <linearGradient id=\"" << id << "\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">"
       << "<stop offset=\"50%\" stop-color=\"" << xml_escape(fill.substr(0, split)) << "\"/>"
       << "<stop offset=\"50%\" stop-color=\"" << xml_escape(fill.substr(split + 5)) << "\"/>"
       << "</linearGradient>\n";
  }
  os << "  </defs>\n";

  for (const DotGraph::Edge& e : g.edges) {
    const std::string color = attr(e.attrs, "color", default_edge);
    const Point a = pos[index.at(e.src)];
    const Point b = pos[index.at(e.dst)];
    std::string path;
    Point label_at;
    if (e.src == e.dst) {
      path = "M" + fmt(a.x - 10) + "," + fmt(a.y - kRadius + 2) + " C" + fmt(a.x - 30) + "," + fmt(a.y - 75) + " " +
             fmt(a.x + 30) + "," + fmt(a.y - 75) + " " + fmt(a.x + 10) + "," + fmt(a.y - kRadius + 2);
      label_at = {a.x, a.y - 64};
    } else {
      const double dx = b.x - a.x, dy = b.y - a.y;
      const double len = std::hypot(dx, dy);
      const double ux = dx / len, uy = dy / len;
      const Point from{a.x + ux * kRadius, a.y + uy * kRadius};
      const Point to{b.x - ux * kRadius, b.y - uy * kRadius};
      // Bend when the reverse edge exists or the edge would cross a node of its rank.
      double bend = pairs.contains({e.dst, e.src}) ? 28.0 : 0.0;
      if (bend == 0.0 && std::abs(dx) < 1.0 && std::abs(dy) > kRowGap + 1) bend = 40.0;
      const Point mid{(from.x + to.x) / 2 - uy * bend, (from.y + to.y) / 2 + ux * bend};
      if (bend == 0.0) {
        path = "M" + fmt(from.x) + "," + fmt(from.y) + " L" + fmt(to.x) + "," + fmt(to.y);
        label_at = {mid.x - uy * 10, mid.y + ux * 10 - 4};
      } else {
        const Point ctrl{2 * mid.x - (from.x + to.x) / 2, 2 * mid.y - (from.y + to.y) / 2};
        path = "M" + fmt(from.x) + "," + fmt(from.y) + " Q" + fmt(ctrl.x) + "," + fmt(ctrl.y) + " " + fmt(to.x) + "," +
               fmt(to.y);
        label_at = {mid.x - uy * 10, mid.y + ux * 10};
      }
    }
    os << "  <g class=\"edge\" id=\"" << xml_escape(attr(e.attrs, "id")) << "\" " << edge_data_attrs(e) << ">\n"
       << "    <path d=\"" << path << "\" fill=\"none\" stroke=\"" << xml_escape(color) << "\" stroke-width=\""
       << xml_escape(attr(e.attrs, "penwidth", "1")) << "\"";
    if (has_style(e.attrs, "dashed")) os << " stroke-dasharray=\"5,3\"";
    os << " marker-end=\"url(#" << marker_id(color) << ")\"/>\n";
    write_text(os, attr(e.attrs, "label"), label_at, color);
    os << "  </g>\n";
  }

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const DotGraph::Node& n = g.nodes[i];
    const Point p = pos[i];
    const std::string stroke = attr(n.attrs, "color", std::string(colors::kDefault));
    std::string fill = "#FFFFFF";
    if (has_style(n.attrs, "filled")) {
      auto gi = gradient_of.find(i);
      fill = gi != gradient_of.end() ? "url(#" + gi->second + ")" : attr(n.attrs, "fillcolor", fill);
    }
    const std::string dash = has_style(n.attrs, "dashed") ? " stroke-dasharray=\"4,3\"" : "";
    os << "  <g class=\"node\" id=\"" << xml_escape(attr(n.attrs, "id", "state-" + n.name)) << "\" data-state=\""
       << xml_escape(n.name) << "\"";
    if (attr(n.attrs, "comment") == "start") os << " data-start=\"true\"";
    os << ">\n"
       << "    <circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"" << fmt(kRadius) << "\" fill=\""
       << xml_escape(fill) << "\" stroke=\"" << xml_escape(stroke) << "\" stroke-width=\""
       << xml_escape(attr(n.attrs, "penwidth", "1")) << "\"" << dash << "/>\n";
    if (attr(n.attrs, "shape") == "doublecircle")
      os << "    <circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y) << "\" r=\"" << fmt(kRadius - 4)
         << "\" fill=\"none\" stroke=\"" << xml_escape(stroke) << "\"" << dash << "/>\n";
    os << "    <text x=\"" << fmt(p.x) << "\" y=\"" << fmt(p.y + 4) << "\" text-anchor=\"middle\" "
       << "font-family=\"Helvetica,sans-serif\" font-size=\"14\">" << xml_escape(n.name) << "</text>\n"
       << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

RenderOptions render_options_from_env() {
  RenderOptions o;
  if (const char* tool = std::getenv("NDVIZ_LAYOUT"); tool && *tool) o.layout_tool = tool;
  return o;
}

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

// Adds the data-* attributes the built-in renderer emits to GraphViz output.
std::string annotate(std::string svg, const DotGraph& g) {
  std::map<std::string, const DotGraph::Edge*> edges;
  for (const DotGraph::Edge& e : g.edges) edges[attr(e.attrs, "id")] = &e;

  static const std::regex group(R"re(<g id="((?:state|edge)-[^"]*)" class="(node|edge)">)re");
  std::string out;
  auto begin = std::sregex_iterator(svg.begin(), svg.end(), group);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    out.append(svg, last, static_cast<std::size_t>(m.position(0)) - last);
    const std::string id = m[1].str();
    std::string extra;
    if (m[2] == "node") {
      extra = " data-state=\"" + xml_escape(id.substr(6)) + "\"";
    } else if (auto e = edges.find(id); e != edges.end()) {
      extra = " " + edge_data_attrs(*e->second);
    }
    out += "<g id=\"" + id + "\" class=\"" + m[2].str() + "\"" + extra + ">";
    last = static_cast<std::size_t>(m.position(0) + m.length(0));
  }
  out.append(svg, last);
  return out;
}

}  // namespace

std::string render_svg(std::string_view dot, const RenderOptions& options) {
  if (!options.layout_tool) return render_svg_builtin(dot);

  const DotGraph g = parse_dot(dot);
  namespace fs = std::filesystem;
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("ndviz-" + std::to_string(rd()) + std::to_string(rd()));
  fs::create_directories(dir);
  const fs::path in = dir / "in.dot", out = dir / "out.svg", errs = dir / "err.txt";
  {
    std::ofstream f(in, std::ios::binary);
    f << dot;
  }
  const std::string cmd = shell_quote(*options.layout_tool) + " -Tsvg " + shell_quote(in.string()) + " -o " +
                          shell_quote(out.string()) + " 2>" + shell_quote(errs.string());
  const int rc = std::system(cmd.c_str());
  std::string svg = slurp(out);
  const std::string diagnostics = slurp(errs);
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (rc != 0 || svg.empty())
    throw LayoutError("layout tool '" + *options.layout_tool + "' failed (status " + std::to_string(rc) +
                      ")" + (diagnostics.empty() ? "" : ": " + diagnostics));
  return annotate(std::move(svg), g);
}

}  // namespace ndviz
