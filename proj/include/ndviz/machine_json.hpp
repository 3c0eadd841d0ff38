#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ndviz/machine.hpp"

namespace ndviz {

/// Malformed machine document. `field()` is a JSON path such as "rules[2][1]".
class MachineFormatError : public std::runtime_error {
 public:
  MachineFormatError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class MachineFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Machine file format:
//   {"kind":"ndfa"|"pda","states":[..],"sigma":[..],"gamma":[..],"start":"S",
//    "finals":[..],"rules":[..],"invariants":{"S":"len(ci)==0"}}
// NFA rule: ["S","","A"] ("" or "EMP" reads nothing).
// PDA rule: [["S","a",[]],["S",["b"]]] (pop/push are symbol arrays, top first).
Machine machine_from_json(const nlohmann::json& doc);
Machine parse_machine(std::string_view text);
Machine load_machine(const std::filesystem::path& path);

nlohmann::json machine_to_json(const Machine& machine);

/// Comma-separated symbols; the empty string is the empty word.
/// Throws std::invalid_argument on an empty element.
Word parse_word(std::string_view csv);
std::string format_word(const Word& word);

}  // namespace ndviz
