#include "sysgame/session.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <httplib.h>

#include "sysgame/io.hpp"

namespace sysgame {

using nlohmann::json;

json error_body(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

namespace {

const char* status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::Live: return "live";
    case NodeStatus::Crashed: return "crashed";
    case NodeStatus::Diverged: return "diverged";
  }
  return "?";
}

json move_error_json(const MoveError& e) {
  json out = error_body(move_error_name(e.kind), e.message);
  out["explanation"] = e.explanation();
  out["names"] = names_to_json(e.names);
  return out;
}

Reply fail(int status, const std::string& kind, const std::string& message) { return {status, error_body(kind, message), ""}; }

}  // namespace

Session::Session(std::string id, std::string source, ResolvedModule module, MoveBudget budget, std::size_t menu_limit)
    : id_(std::move(id)),
      source_(std::move(source)),
      module_(std::move(module)),
      budget_(std::move(budget)),
      menu_limit_(menu_limit) {
  HistoryNode root;
  root.state = initial_config(module_);
  root.disclosed = public_names(root.state);
  nodes_.push_back(std::move(root));
}

bool Session::system_turn(const HistoryNode& n) const {
  return n.status == NodeStatus::Live && std::holds_alternative<SystemConfig>(n.state);
}

std::vector<SystemMove> Session::menu_moves() const {
  const HistoryNode& n = nodes_[cursor_];
  if (!system_turn(n)) return {};
  return enumerate_system_moves(std::get<SystemConfig>(n.state), module_, budget_);
}

json Session::menu() const {
  auto moves = menu_moves();
  json list = json::array();
  for (std::size_t i = 0; i < moves.size() && i < menu_limit_; ++i) list.push_back(move_to_json(moves[i]));
  return {{"menu", list}, {"total", moves.size()}, {"truncated", moves.size() > menu_limit_}};
}

json Session::view() const {
  const HistoryNode& n = nodes_[cursor_];
  const NameSet& pub = public_names(n.state);
  const Store& store = state_store(n.state);
  json out;
  out["id"] = id_;
  out["cursor"] = n.id;
  out["turn"] = system_turn(n) ? "system" : status_name(n.status);
  if (!n.detail.empty()) out["detail"] = n.detail;
  out["publicNames"] = names_to_json(pub);
  out["privateCount"] = (used_names(n.state) - pub).size();
  out["visibleStore"] = store_to_json(restrict_to(store, pub.locations()));
  json conts = json::array();
  for (const auto& [k, _] : store.continuations())
    if (pub.contains(k)) conts.push_back(k.str());
  out["storedContinuations"] = conts;
  json labels = json::array();
  for (const auto& l : n.labels) labels.push_back(label_to_json(l));
  out["lastLabels"] = labels;
  out["disclosures"] = names_to_json(n.disclosed);
  json m = menu();
  out["menu"] = m["menu"];
  out["menuTruncated"] = m["truncated"];
  json tree = json::array();
  for (const auto& h : nodes_) {
    json node;
    node["id"] = h.id;
    node["parent"] = h.parent ? json(*h.parent) : json(nullptr);
    node["move"] = h.move ? move_to_json(*h.move) : json(nullptr);
    json ls = json::array();
    for (const auto& l : h.labels) ls.push_back(label_to_json(l));
    node["labels"] = ls;
    node["status"] = std::holds_alternative<SystemConfig>(h.state) || h.status != NodeStatus::Live
                         ? status_name(h.status)
                         : "program";
    node["children"] = h.children;
    tree.push_back(std::move(node));
  }
  out["historyTree"] = tree;
  return out;
}

std::optional<json> Session::apply(const SystemMove& mv) {
  const HistoryNode& at = nodes_[cursor_];
  if (!system_turn(at))
    return error_body("ScriptAtWrongTurn", "node " + std::to_string(at.id) + " is not at a System turn");
  const auto& sc = std::get<SystemConfig>(at.state);
  MoveOutcome r = apply_system_move(sc, mv, module_);
  if (auto* err = std::get_if<MoveError>(&r)) return move_error_json(*err);

  HistoryNode n;
  n.id = nodes_.size();
  n.parent = at.id;
  n.move = mv;
  n.labels.push_back(as_label(mv));
  RunResult run = run_to_boundary(std::get<ProgramConfig>(r), module_, budget_.fuel);
  if (run.result.is_boundary()) {
    Emission em = emit_boundary(run.last, run.result);
    n.labels.push_back(em.label);
    n.state = std::move(em.next);
  } else {
    n.state = run.last;
    n.status = run.result.kind == StepResult::Kind::Crash ? NodeStatus::Crashed : NodeStatus::Diverged;
    n.detail = run.result.kind == StepResult::Kind::Crash
                   ? std::string(crash_reason_name(run.result.reason)) + ": " + run.result.detail
                   : run.result.detail;
  }
  n.disclosed = public_names(n.state) - sc.pub;
  nodes_[at.id].children.push_back(n.id);
  cursor_ = n.id;
  nodes_.push_back(std::move(n));
  return std::nullopt;
}

bool Session::navigate(std::size_t node) {
  if (node >= nodes_.size()) return false;
  cursor_ = node;
  return true;
}

std::vector<SystemMove> Session::path_to(std::size_t node) const {
  std::vector<SystemMove> out;
  for (std::optional<std::size_t> n = node; n && nodes_[*n].move; n = nodes_[*n].parent) out.push_back(*nodes_[*n].move);
  std::reverse(out.begin(), out.end());
  return out;
}

json Session::verify() const {
  json mismatches = json::array();
  for (const auto& n : nodes_) {
    ReplayResult r = replay(module_, path_to(n.id), budget_.fuel);
    std::vector<Label> expected;
    for (std::optional<std::size_t> p = n.id; p; p = nodes_[*p].parent)
      expected.insert(expected.begin(), nodes_[*p].labels.begin(), nodes_[*p].labels.end());
    bool stopped = n.status != NodeStatus::Live;
    bool ok = r.trace == expected && state_equal(r.final_state, n.state) && (stopped == r.error.has_value());
    if (!ok) mismatches.push_back({{"node", n.id}, {"replayed", render(r.final_state)}});
  }
  return {{"ok", mismatches.empty()}, {"nodes", nodes_.size()}, {"mismatches", mismatches}};
}

std::string Session::export_log() const { return format_script(path_to(cursor_)); }

// ---------------------------------------------------------------------------

SessionManager::SessionManager(MoveBudget defaults, std::size_t menu_limit)
    : defaults_(std::move(defaults)), menu_limit_(menu_limit) {}

std::shared_ptr<Session> SessionManager::find(const std::string& id) {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Reply SessionManager::create(const std::string& body, const std::string& content_type) {
  std::string source = body;
  MoveBudget budget = defaults_;
  if (content_type.find("json") != std::string::npos) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("source") || !j["source"].is_string())
      return fail(400, "BadRequest", "expected {\"source\": \"...\"}");
    source = j["source"].get<std::string>();
    if (j.contains("budget")) {
      const json& b = j["budget"];
      try {
        if (b.contains("ints")) budget.int_pool = b["ints"].get<std::vector<std::int64_t>>();
        if (b.contains("fresh")) budget.max_fresh_locs = b["fresh"].get<std::size_t>();
        if (b.contains("width")) budget.max_tuple_width = b["width"].get<std::size_t>();
        if (b.contains("fuel")) budget.fuel = b["fuel"].get<std::size_t>();
      } catch (const json::exception& e) {
        return fail(400, "BadRequest", std::string("malformed budget: ") + e.what());
      }
    }
  }
  ResolvedModule m;
  try {
    m = resolve_and_desugar(parse_module(source));
  } catch (const SyntaxError& e) {
    Reply r = fail(422, "SyntaxError", e.what());
    r.body["line"] = e.pos().line;
    r.body["col"] = e.pos().col;
    return r;
  } catch (const ResolveError& e) {
    Reply r = fail(422, "ResolveError", e.what());
    r.body["line"] = e.pos().line;
    r.body["col"] = e.pos().col;
    r.body["ident"] = e.ident();
    return r;
  }
  std::string id;
  {
    std::unique_lock lock(mutex_);
    std::random_device rd;
    std::ostringstream os;
    os << std::hex << next_id_++ << "-" << rd();
    id = os.str();
    sessions_[id] = std::make_shared<Session>(id, source, std::move(m), budget, menu_limit_);
  }
  auto s = find(id);
  std::unique_lock lock(s->mutex());
  return {201, {{"id", id}, {"view", s->view()}}, ""};
}

Reply SessionManager::get(const std::string& id) {
  auto s = find(id);
  if (!s) return fail(404, "UnknownSession", "no session " + id);
  std::shared_lock lock(s->mutex());
  return {200, s->view(), ""};
}

Reply SessionManager::moves(const std::string& id) {
  auto s = find(id);
  if (!s) return fail(404, "UnknownSession", "no session " + id);
  std::shared_lock lock(s->mutex());
  return {200, s->menu(), ""};
}

Reply SessionManager::apply(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return fail(404, "UnknownSession", "no session " + id);
  SystemMove mv;
  try {
    mv = move_from_json(json::parse(body));
  } catch (const json::exception& e) {
    return fail(400, "BadRequest", e.what());
  } catch (const FormatError& e) {
    return fail(400, "BadRequest", e.what());
  }
  std::unique_lock lock(s->mutex());
  if (auto err = s->apply(mv)) return {(*err)["error"] == "ScriptAtWrongTurn" ? 409 : 422, *err, ""};
  return {200, s->view(), ""};
}

Reply SessionManager::cursor(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return fail(404, "UnknownSession", "no session " + id);
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("node") || !j["node"].is_number_unsigned())
    return fail(400, "BadRequest", "expected {\"node\": <id>}");
  std::unique_lock lock(s->mutex());
  if (!s->navigate(j["node"].get<std::size_t>()))
    return fail(404, "UnknownNode", "no node " + j["node"].dump());
  return {200, s->view(), ""};
}

Reply SessionManager::verify(const std::string& id) {
  auto s = find(id);
  if (!s) return fail(404, "UnknownSession", "no session " + id);
  std::shared_lock lock(s->mutex());
  return {200, s->verify(), ""};
}

Reply SessionManager::export_log(const std::string& id) {
  auto s = find(id);
  if (!s) return fail(404, "UnknownSession", "no session " + id);
  std::shared_lock lock(s->mutex());
  return {200, {}, s->export_log()};
}

// ---------------------------------------------------------------------------

void register_routes(httplib::Server& server, SessionManager& manager) {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    if (r.status == 200 && !r.text.empty()) res.set_content(r.text, "application/x-ndjson");
    else if (r.body.is_null() && r.status == 200) res.set_content("", "application/x-ndjson");
    else res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/sessions", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.create(req.body, req.get_header_value("Content-Type")));
  });
  server.Get(R"(/sessions/([^/]+))", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.get(req.matches[1]));
  });
  server.Get(R"(/sessions/([^/]+)/moves)", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.moves(req.matches[1]));
  });
  server.Post(R"(/sessions/([^/]+)/moves)", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.apply(req.matches[1], req.body));
  });
  server.Post(R"(/sessions/([^/]+)/cursor)", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.cursor(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([^/]+)/verify)", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.verify(req.matches[1]));
  });
  server.Get(R"(/sessions/([^/]+)/export)", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, manager.export_log(req.matches[1]));
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "unknown error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(error_body("Internal", what).dump(), "application/json");
  });
}

void serve(SessionManager& manager, const std::string& host, int port) {
  httplib::Server server;
  register_routes(server, manager);
  if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace sysgame
