#pragma once

// Wire formats: JSON encodings of values, stores, moves and labels, the
// JSON-lines script and trace formats, and the text trace format.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sysgame/sls.hpp"

namespace sysgame {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TraceStyle { Text, Jsonl };

nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);
nlohmann::json store_to_json(const Store& s);
Store store_from_json(const nlohmann::json& j);
nlohmann::json names_to_json(const NameSet& names);

nlohmann::json move_to_json(const SystemMove& mv);
SystemMove move_from_json(const nlohmann::json& j);
nlohmann::json label_to_json(const Label& l);
Label label_from_json(const nlohmann::json& j);

std::vector<SystemMove> parse_script(const std::string& text);
std::string format_script(const std::vector<SystemMove>& script);
std::vector<Label> parse_trace(const std::string& text);
std::string format_trace(const std::vector<Label>& trace, TraceStyle style);

std::string read_file(const std::string& path);

}  // namespace sysgame
