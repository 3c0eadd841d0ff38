#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ndviz {

enum class MachineKind { Nfa, Pda };

using Symbol = std::string;
using StateName = std::string;
using Word = std::vector<Symbol>;

/// Input alias for the empty read/pop/push used by FSM sources.
inline constexpr std::string_view kEpsilonAlias = "EMP";

/// Symbols are alphanumeric tokens; "EMP" is reserved.
bool is_valid_symbol_name(std::string_view name);

/// State names additionally allow '_', '-', '.' and apostrophes (fresh dead-state names use them).
bool is_valid_state_name(std::string_view name);

std::string_view to_string(MachineKind kind);

}  // namespace ndviz
