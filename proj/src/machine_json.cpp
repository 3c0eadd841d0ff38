#include "ndviz/machine_json.hpp"

#include <fstream>
#include <sstream>

namespace ndviz {

using nlohmann::json;

namespace {

std::string at(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw MachineFormatError(key, "missing field");
  return *it;
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw MachineFormatError(field, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> as_string_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw MachineFormatError(field, "expected an array of strings");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], at(field, i)));
  return out;
}

std::optional<Symbol> as_read(const json& v, const std::string& field) {
  std::string s = as_string(v, field);
  if (s.empty() || s == kEpsilonAlias) return std::nullopt;
  return s;
}

// Pop/push: a symbol array, or "" / "EMP" for nothing.
Word as_stack_word(const json& v, const std::string& field) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.empty() || s == kEpsilonAlias) return {};
    throw MachineFormatError(field, "expected an array of stack symbols");
  }
  return as_string_list(v, field);
}

Rule nfa_rule(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3)
    throw MachineFormatError(field, "expected [source, read, destination]");
  Rule r;
  r.src = as_string(v[0], at(field, 0));
  r.read = as_read(v[1], at(field, 1));
  r.dst = as_string(v[2], at(field, 2));
  return r;
}

Rule pda_rule(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2)
    throw MachineFormatError(field, "expected [[source, read, pop], [destination, push]]");
  const json& lhs = v[0];
  const json& rhs = v[1];
  if (!lhs.is_array() || lhs.size() != 3)
    throw MachineFormatError(at(field, 0), "expected [source, read, pop]");
  if (!rhs.is_array() || rhs.size() != 2)
    throw MachineFormatError(at(field, 1), "expected [destination, push]");
  Rule r;
  r.src = as_string(lhs[0], at(field, 0) + "[0]");
  r.read = as_read(lhs[1], at(field, 0) + "[1]");
  r.pop = as_stack_word(lhs[2], at(field, 0) + "[2]");
  r.dst = as_string(rhs[0], at(field, 1) + "[0]");
  r.push = as_stack_word(rhs[1], at(field, 1) + "[1]");
  return r;
}

}  // namespace

Machine machine_from_json(const json& doc) {
  if (!doc.is_object()) throw MachineFormatError("$", "expected a JSON object");
  MachineParts parts;

  const std::string kind = as_string(require(doc, "kind"), "kind");
  if (kind == "ndfa")
    parts.kind = MachineKind::Nfa;
  else if (kind == "pda")
    parts.kind = MachineKind::Pda;
  else
    throw MachineFormatError("kind", "expected \"ndfa\" or \"pda\"");

  parts.states = as_string_list(require(doc, "states"), "states");
  parts.sigma = as_string_list(require(doc, "sigma"), "sigma");
  if (auto it = doc.find("gamma"); it != doc.end())
    parts.gamma = as_string_list(*it, "gamma");
  else if (parts.kind == MachineKind::Pda)
    throw MachineFormatError("gamma", "missing field");
  parts.start = as_string(require(doc, "start"), "start");
  parts.finals = as_string_list(require(doc, "finals"), "finals");

  const json& rules = require(doc, "rules");
  if (!rules.is_array()) throw MachineFormatError("rules", "expected an array of rules");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string field = at("rules", i);
    parts.rules.push_back(parts.kind == MachineKind::Nfa ? nfa_rule(rules[i], field)
                                                         : pda_rule(rules[i], field));
  }

  if (auto it = doc.find("invariants"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw MachineFormatError("invariants", "expected an object");
    for (const auto& [state, src] : it->items())
      parts.invariants[state] = as_string(src, "invariants." + state);
  }
  return Machine(std::move(parts));
}

Machine parse_machine(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MachineFormatError("$", std::string("invalid JSON: ") + e.what());
  }
  return machine_from_json(doc);
}

Machine load_machine(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MachineFileError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw MachineFileError("cannot read " + path.string());
  return parse_machine(buf.str());
}

json machine_to_json(const Machine& m) {
  json doc;
  doc["kind"] = std::string(to_string(m.kind()));
  doc["states"] = m.states();
  doc["sigma"] = m.sigma();
  doc["gamma"] = m.gamma();
  doc["start"] = m.start();
  doc["finals"] = m.finals();
  json rules = json::array();
  for (const Rule& r : m.rules()) {
    const std::string read = r.read.value_or("");
    if (m.is_pda())
      rules.push_back(json::array({json::array({r.src, read, r.pop}), json::array({r.dst, r.push})}));
    else
      rules.push_back(json::array({r.src, read, r.dst}));
  }
  doc["rules"] = std::move(rules);
  if (!m.invariants().empty()) doc["invariants"] = m.invariants();
  return doc;
}

Word parse_word(std::string_view csv) {
  Word word;
  if (csv.empty()) return word;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t comma = csv.find(',', begin);
    std::string_view item = csv.substr(begin, comma == std::string_view::npos ? csv.npos : comma - begin);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw std::invalid_argument("empty symbol in word '" + std::string(csv) + "'");
    word.emplace_back(item);
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return word;
}

std::string format_word(const Word& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ',';
    out += word[i];
  }
  return out;
}

}  // namespace ndviz
