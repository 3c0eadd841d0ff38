#include "ndviz/machine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ndviz/invariant.hpp"

namespace ndviz {

bool is_valid_symbol_name(std::string_view name) {
  if (name.empty() || name == kEpsilonAlias) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

bool is_valid_state_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == '\'';
  });
}

std::string_view to_string(MachineKind kind) { return kind == MachineKind::Nfa ? "ndfa" : "pda"; }

bool Machine::has_state(std::string_view name) const {
  return std::find(parts_.states.begin(), parts_.states.end(), name) != parts_.states.end();
}

bool Machine::is_final(std::string_view name) const {
  return std::find(parts_.finals.begin(), parts_.finals.end(), name) != parts_.finals.end();
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const Violation& v : violations) {
    out += v.component;
    out += ": ";
    out += v.message;
    out += '\n';
  }
  return out;
}

namespace {

void check_names(const std::vector<std::string>& names, std::string_view component,
                 bool (*valid)(std::string_view), std::string_view what,
                 std::vector<Violation>& out) {
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string comp = std::string(component) + "[" + std::to_string(i) + "]";
    if (!valid(names[i]))
      out.push_back({comp, "invalid " + std::string(what) + " name '" + names[i] + "'"});
    if (!seen.insert(names[i]).second)
      out.push_back({comp, "duplicate " + std::string(what) + " '" + names[i] + "'"});
  }
}

}  // namespace

ValidationReport validate(const Machine& m) {
  ValidationReport report;
  auto& out = report.violations;
  const bool pda = m.is_pda();

  check_names(m.states(), "states", is_valid_state_name, "state", out);
  check_names(m.sigma(), "sigma", is_valid_symbol_name, "symbol", out);
  check_names(m.gamma(), "gamma", is_valid_symbol_name, "stack symbol", out);
  if (!pda && !m.gamma().empty()) out.push_back({"gamma", "an ndfa has no stack alphabet"});

  const std::set<std::string_view> states(m.states().begin(), m.states().end());
  const std::set<std::string_view> sigma(m.sigma().begin(), m.sigma().end());
  const std::set<std::string_view> gamma(m.gamma().begin(), m.gamma().end());

  if (!states.contains(m.start())) out.push_back({"start", "start not a state"});
  for (std::size_t i = 0; i < m.finals().size(); ++i)
    if (!states.contains(m.finals()[i]))
      out.push_back({"finals[" + std::to_string(i) + "]", "final not a state"});

  for (std::size_t i = 0; i < m.rules().size(); ++i) {
    const Rule& r = m.rules()[i];
    const std::string comp = "rules[" + std::to_string(i) + "]";
    if (!states.contains(r.src)) out.push_back({comp + ".src", "rule source not a state"});
    if (!states.contains(r.dst)) out.push_back({comp + ".dst", "rule destination not a state"});
    if (r.read && !sigma.contains(*r.read)) out.push_back({comp + ".read", "unknown input symbol"});
    if (!pda && (!r.pop.empty() || !r.push.empty()))
      out.push_back({comp, "ndfa rules cannot touch a stack"});
    for (const Symbol& s : r.pop)
      if (!gamma.contains(s)) out.push_back({comp + ".pop", "unknown stack symbol '" + s + "'"});
    for (const Symbol& s : r.push)
      if (!gamma.contains(s)) out.push_back({comp + ".push", "unknown stack symbol '" + s + "'"});
  }

  for (const auto& [state, source] : m.invariants()) {
    const std::string comp = "invariants." + state;
    if (!states.contains(state)) {
      out.push_back({comp, "invariant for unknown state"});
      continue;
    }
    if (m.dead_state() && state == *m.dead_state()) {
      out.push_back({comp, "the dead state cannot carry an invariant"});
      continue;
    }
    try {
      (void)InvariantProgram::parse(source, m.kind());
    } catch (const InvariantError& e) {
      out.push_back({comp, e.what()});
    }
  }
  return report;
}

Machine add_dead_state(const Machine& machine) {
  if (machine.augmented()) return machine;

  MachineParts parts = machine.parts();
  StateName ds(kDefaultDeadState);
  while (machine.has_state(ds)) ds += '\'';

  std::vector<Rule> extra;
  if (!machine.is_pda()) {
    for (const StateName& q : parts.states)
      for (const Symbol& a : parts.sigma) {
        const bool present = std::any_of(parts.rules.begin(), parts.rules.end(), [&](const Rule& r) {
          return r.src == q && r.read && *r.read == a;
        });
        if (!present) extra.push_back(Rule{q, a, {}, ds, {}, true});
      }
    if (extra.empty()) {
      Machine unchanged(std::move(parts));
      unchanged.augmented_ = true;
      return unchanged;
    }
    for (const Symbol& a : parts.sigma) extra.push_back(Rule{ds, a, {}, ds, {}, true});
  } else {
    for (const StateName& q : parts.states)
      for (const Symbol& a : parts.sigma) extra.push_back(Rule{q, a, {}, ds, {}, true});
    for (const Symbol& a : parts.sigma) extra.push_back(Rule{ds, a, {}, ds, {}, true});
    for (const Symbol& g : parts.gamma) extra.push_back(Rule{ds, std::nullopt, {g}, ds, {}, true});
  }

  parts.states.push_back(ds);
  parts.rules.insert(parts.rules.end(), extra.begin(), extra.end());
  Machine augmented(std::move(parts));
  augmented.augmented_ = true;
  augmented.dead_state_ = ds;
  return augmented;
}

}  // namespace ndviz
