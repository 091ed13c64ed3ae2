#include "gpac/machine_io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace gpac {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.what(), e.byte);
  }
}

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw SemanticError("missing field", std::string("'") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SemanticError("field type", std::string("'") + key + "': " + e.what());
  }
}

Configuration tape_from_json(const json& tape, const TuringMachine& machine) {
  if (!tape.is_object()) throw SemanticError("tape", "tape must be an object");
  Configuration c;
  c.left = tape.contains("left") ? field<std::vector<int>>(tape, "left") : std::vector<int>{};
  c.right = tape.contains("right") ? field<std::vector<int>>(tape, "right") : std::vector<int>{};
  c.head = tape.contains("head") ? field<int>(tape, "head") : 0;
  c.state = tape.contains("state") ? field<int>(tape, "state") : machine.initial_state();
  try {
    validate(c, machine);
  } catch (const EncodingError& e) {
    throw SemanticError("tape alphabet", e.what());
  }
  c.canonicalize();
  return c;
}

}  // namespace

TuringMachine parse_machine(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SemanticError("document", "top level must be an object");
  const int m = field<int>(doc, "m");
  const int k = field<int>(doc, "k");
  const int q0 = field<int>(doc, "q0");
  const auto halting = doc.contains("halting") ? field<std::vector<int>>(doc, "halting")
                                               : std::vector<int>{};
  const std::string name = doc.contains("name") ? field<std::string>(doc, "name") : "";
  if (m < 1) throw SemanticError("state count", "m must be at least 1");
  if (k < 2) throw SemanticError("alphabet size", "k must be at least 2");

  const json& rows = doc.contains("delta") ? doc.at("delta") : json::array();
  if (!rows.is_array()) throw SemanticError("field type", "'delta' must be an array");
  std::map<std::pair<int, int>, Transition> entries;
  for (const json& row : rows) {
    const int q = field<int>(row, "q");
    const int s = field<int>(row, "s");
    Transition t{field<int>(row, "q2"), field<int>(row, "s2"), Direction::Left};
    const auto dir = field<std::string>(row, "dir");
    if (dir == "R") {
      t.dir = Direction::Right;
    } else if (dir != "L") {
      throw SemanticError("direction", "dir must be \"L\" or \"R\", got \"" + dir + "\"");
    }
    if (q < 0 || q >= m || s < 0 || s > k - 2)
      throw SemanticError("delta domain", "entry (" + std::to_string(q) + "," +
                                              std::to_string(s) + ") outside Q x Sigma");
    if (!entries.emplace(std::pair{q, s}, t).second)
      throw SemanticError("delta not deterministic", "duplicate entry (" + std::to_string(q) +
                                                         "," + std::to_string(s) + ")");
  }
  std::vector<Transition> table;
  for (int q = 0; q < m; ++q) {
    for (int s = 0; s <= k - 2; ++s) {
      auto it = entries.find({q, s});
      if (it == entries.end())
        throw SemanticError("delta not total", "no entry for (" + std::to_string(q) + "," +
                                                   std::to_string(s) + ")");
      table.push_back(it->second);
    }
  }
  return TuringMachine(m, k, q0, halting, std::move(table), name);
}

std::optional<Configuration> parse_document_tape(std::string_view text,
                                                 const TuringMachine& machine) {
  const json doc = parse_json(text);
  if (!doc.contains("tape")) return std::nullopt;
  return tape_from_json(doc.at("tape"), machine);
}

Configuration parse_tape(std::string_view text, const TuringMachine& machine) {
  return tape_from_json(parse_json(text), machine);
}

std::string serialize_machine(const TuringMachine& machine,
                              const std::optional<Configuration>& tape) {
  json doc;
  if (!machine.name().empty()) doc["name"] = machine.name();
  doc["m"] = machine.states();
  doc["k"] = machine.base();
  doc["q0"] = machine.initial_state();
  doc["halting"] = machine.halting();
  json rows = json::array();
  for (int q = 0; q < machine.states(); ++q) {
    for (int s = 0; s < machine.symbols(); ++s) {
      const Transition& t = machine.delta(q, s);
      rows.push_back({{"q", q},
                      {"s", s},
                      {"q2", t.next_state},
                      {"s2", t.write},
                      {"dir", t.dir == Direction::Left ? "L" : "R"}});
    }
  }
  doc["delta"] = rows;
  if (tape) doc["tape"] = {{"left", tape->left}, {"head", tape->head}, {"right", tape->right}};
  return doc.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace gpac
