#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ndviz/types.hpp"

namespace ndviz {

inline constexpr std::string_view kDefaultDeadState = "ds";

/// One transition rule. For NFAs `pop` and `push` are always empty.
/// Stack sequences are written top first: the leftmost element of `pop` must be
/// on top of the stack, and the leftmost element of `push` ends up on top.
struct Rule {
  StateName src;
  std::optional<Symbol> read;  // nullopt = ε
  Word pop;
  StateName dst;
  Word push;
  bool synthetic = false;  // added by dead-state augmentation

  bool operator==(const Rule&) const = default;
};

struct MachineParts {
  MachineKind kind = MachineKind::Nfa;
  std::vector<StateName> states;
  std::vector<Symbol> sigma;
  std::vector<Symbol> gamma;  // empty for NFAs
  StateName start;
  std::vector<StateName> finals;
  std::vector<Rule> rules;
  std::map<StateName, std::string> invariants;  // state -> invariant source
};

/// An NFA or PDA. Immutable once constructed; rule order is significant
/// (it fixes the order in which computations branch).
class Machine {
 public:
  explicit Machine(MachineParts parts) : parts_(std::move(parts)) {}

  MachineKind kind() const { return parts_.kind; }
  bool is_pda() const { return parts_.kind == MachineKind::Pda; }

  const std::vector<StateName>& states() const { return parts_.states; }
  const std::vector<Symbol>& sigma() const { return parts_.sigma; }
  const std::vector<Symbol>& gamma() const { return parts_.gamma; }
  const StateName& start() const { return parts_.start; }
  const std::vector<StateName>& finals() const { return parts_.finals; }
  const std::vector<Rule>& rules() const { return parts_.rules; }
  const std::map<StateName, std::string>& invariants() const { return parts_.invariants; }

  /// Set once add_dead_state has run, even when nothing needed adding.
  bool augmented() const { return augmented_; }
  /// Name of the synthetic dead state, if one was added.
  const std::optional<StateName>& dead_state() const { return dead_state_; }

  bool has_state(std::string_view name) const;
  bool is_final(std::string_view name) const;

  const MachineParts& parts() const { return parts_; }

 private:
  friend Machine add_dead_state(const Machine& machine);

  MachineParts parts_;
  bool augmented_ = false;
  std::optional<StateName> dead_state_;
};

struct Violation {
  std::string component;  // e.g. "start", "rules[3].read"
  std::string message;    // e.g. "start not a state"
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  /// One "component: message" line per violation.
  std::string to_string() const;
};

/// Checks every structural invariant of a machine, including that each
/// attached invariant predicate parses for the machine's kind.
ValidationReport validate(const Machine& machine);

/// Adds a fresh non-final dead state ("ds", primed until unused) with
/// synthetic rules appended after the original ones.
///
/// NFA: one (q σ ds) for every missing (q, σ) pair plus (ds σ ds) loops;
/// a machine that is already total on K×Σ is returned unchanged.
/// PDA: ((q σ ε)(ds ε)) for every (q, σ), then ((ds σ ε)(ds ε)) and
/// ((ds ε (γ))(ds ε)) so the input is consumed and the stack emptied.
///
/// Applying it to an already augmented machine returns the machine as is.
Machine add_dead_state(const Machine& machine);

}  // namespace ndviz
