#include "sysgame/io.hpp"

#include <fstream>
#include <sstream>

namespace sysgame {

using nlohmann::json;

namespace {

Name name_from_json(const json& j, const char* what) {
  if (!j.is_string()) throw FormatError(std::string(what) + " must be a name string");
  auto n = parse_name(j.get<std::string>());
  if (!n) throw FormatError(std::string("malformed name '") + j.get<std::string>() + "'");
  return *n;
}

void append_atoms(const json& j, std::vector<Value>& out) {
  if (j.is_array()) {
    for (const auto& x : j) append_atoms(x, out);
  } else if (j.is_number_integer()) {
    out.push_back(Value::integer(j.get<std::int64_t>()));
  } else if (j.is_string()) {
    out.push_back(Value::name(name_from_json(j, "value")));
  } else {
    throw FormatError("value must be an integer, a name or an array, got " + j.dump());
  }
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

MoveKind kind_from_json(const json& j) {
  const auto& kind = field(j, "kind");
  if (kind == "call") return MoveKind::Call;
  if (kind == "ret") return MoveKind::Ret;
  throw FormatError("kind must be \"call\" or \"ret\", got " + kind.dump());
}

template <typename F>
auto parse_lines(const std::string& text, F parse_one) {
  std::vector<decltype(parse_one(json{}))> out;
  std::istringstream is(text);
  std::string line;
  for (int n = 1; std::getline(is, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_one(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(n) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

json value_to_json(const Value& v) {
  auto atom = [](const Value& a) -> json {
    if (a.is_int()) return a.as_int();
    return a.as_name().str();
  };
  if (v.kind() != Value::Kind::Tuple) return atom(v);
  json arr = json::array();
  for (const auto& a : v.atoms()) arr.push_back(atom(a));
  return arr;
}

Value value_from_json(const json& j) {
  std::vector<Value> atoms;
  append_atoms(j, atoms);
  return Value::tuple(atoms);
}

json store_to_json(const Store& s) {
  json out = json::object();
  for (const auto& [a, v] : s.locations()) out[a.str()] = value_to_json(v);
  return out;
}

Store store_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("store must be an object");
  Store s;
  for (const auto& [key, val] : j.items()) {
    auto a = parse_name(key);
    if (!a) throw FormatError("malformed store key '" + key + "'");
    if (a->is_continuation()) {
      // Kept so that validation can reject it.
      s.set_cont(*a, {{}, *a});
      continue;
    }
    if (a->is_function()) throw FormatError("store key '" + key + "' is a function name");
    Value v = value_from_json(val);
    if (!is_storable(v)) throw FormatError("store value for '" + key + "' is not storable");
    s.set(*a, v);
  }
  return s;
}

json names_to_json(const NameSet& names) {
  json out = json::array();
  for (const auto& n : names) out.push_back(n.str());
  return out;
}

json move_to_json(const SystemMove& mv) {
  json out;
  out["kind"] = mv.kind == MoveKind::Call ? "call" : "ret";
  if (mv.kind == MoveKind::Call) out["fn"] = mv.fn.str();
  out["value"] = value_to_json(mv.value);
  out["k"] = mv.k.str();
  out["store"] = store_to_json(mv.store);
  return out;
}

SystemMove move_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("move must be an object");
  SystemMove mv;
  mv.kind = kind_from_json(j);
  if (mv.kind == MoveKind::Call) mv.fn = name_from_json(field(j, "fn"), "fn");
  mv.value = j.contains("value") ? value_from_json(j["value"]) : Value::unit();
  mv.k = name_from_json(field(j, "k"), "k");
  mv.store = j.contains("store") ? store_from_json(j["store"]) : Store{};
  return mv;
}

json label_to_json(const Label& l) {
  json out;
  out["dir"] = l.dir == Direction::PS ? "PS" : "SP";
  out["kind"] = l.kind == MoveKind::Call ? "call" : "ret";
  if (l.kind == MoveKind::Call) out["fn"] = l.fn.str();
  out["value"] = value_to_json(l.value);
  out["k"] = l.k.str();
  out["store"] = store_to_json(l.store);
  return out;
}

Label label_from_json(const json& j) {
  Label l = as_label(move_from_json(j));
  const auto& dir = field(j, "dir");
  if (dir == "PS") l.dir = Direction::PS;
  else if (dir == "SP") l.dir = Direction::SP;
  else throw FormatError("dir must be \"PS\" or \"SP\", got " + dir.dump());
  return l;
}

std::vector<SystemMove> parse_script(const std::string& text) { return parse_lines(text, move_from_json); }

std::string format_script(const std::vector<SystemMove>& script) {
  std::string out;
  for (const auto& mv : script) out += move_to_json(mv).dump() + "\n";
  return out;
}

std::vector<Label> parse_trace(const std::string& text) { return parse_lines(text, label_from_json); }

std::string format_trace(const std::vector<Label>& trace, TraceStyle style) {
  std::string out;
  for (const auto& l : trace) out += (style == TraceStyle::Jsonl ? label_to_json(l).dump() : render(l)) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace sysgame
