#pragma once

#include "gpac/turing.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace gpac {

/// Parses the JSON machine document:
///   {"name": ..., "m": 2, "k": 4, "q0": 0, "halting": [..],
///    "delta": [{"q":0, "s":0, "q2":1, "s2":1, "dir":"R"}, ...],
///    "tape": {"left": [..], "head": 0, "right": [..]}}   (tape optional)
/// Malformed JSON raises SyntaxError with the byte offset; structural or
/// invariant problems raise SemanticError.
TuringMachine parse_machine(std::string_view text);

/// The document's "tape" field, if present, as a configuration in q0.
std::optional<Configuration> parse_document_tape(std::string_view text,
                                                 const TuringMachine& machine);

/// A standalone tape object {"left": [..], "head": d, "right": [..]}.
Configuration parse_tape(std::string_view text, const TuringMachine& machine);

std::string serialize_machine(const TuringMachine& machine,
                              const std::optional<Configuration>& tape = std::nullopt);

std::string read_file(const std::string& path);

}  // namespace gpac
