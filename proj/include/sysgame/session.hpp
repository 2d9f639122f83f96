#pragma once

// Interactive sessions in which a client plays the System against a module
// one move at a time, with a branching history, and the HTTP front end.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "sysgame/sls.hpp"

namespace httplib {
class Server;
}

namespace sysgame {

struct HistoryNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::optional<SystemMove> move;
  std::vector<Label> labels;  // the S→P label and, unless stopped, the P→S answer
  SlsState state;
  NodeStatus status = NodeStatus::Live;
  std::string detail;
  NameSet disclosed;  // public names gained over the parent
  std::vector<std::size_t> children;
};

class Session {
 public:
  Session(std::string id, std::string source, ResolvedModule module, MoveBudget budget, std::size_t menu_limit);

  const std::string& id() const { return id_; }
  const std::string& source() const { return source_; }
  const MoveBudget& budget() const { return budget_; }

  nlohmann::json view() const;
  nlohmann::json menu() const;
  std::vector<SystemMove> menu_moves() const;

  /// Applies `mv` at the cursor. Returns the error body on rejection.
  std::optional<nlohmann::json> apply(const SystemMove& mv);
  bool navigate(std::size_t node);
  nlohmann::json verify() const;
  std::string export_log() const;

  std::shared_mutex& mutex() const { return mutex_; }

  /// Moves from the root to `node`.
  std::vector<SystemMove> path_to(std::size_t node) const;
  const std::vector<HistoryNode>& nodes() const { return nodes_; }
  std::size_t cursor() const { return cursor_; }

 private:
  bool system_turn(const HistoryNode& n) const;

  std::string id_;
  std::string source_;
  ResolvedModule module_;
  MoveBudget budget_;
  std::size_t menu_limit_;
  std::vector<HistoryNode> nodes_;
  std::size_t cursor_ = 0;
  mutable std::shared_mutex mutex_;
};

/// A JSON response with its HTTP status.
struct Reply {
  int status = 200;
  nlohmann::json body;
  std::string text;  // used instead of body when non-empty
};

class SessionManager {
 public:
  explicit SessionManager(MoveBudget defaults = {}, std::size_t menu_limit = 500);

  Reply create(const std::string& body, const std::string& content_type);
  Reply get(const std::string& id);
  Reply moves(const std::string& id);
  Reply apply(const std::string& id, const std::string& body);
  Reply cursor(const std::string& id, const std::string& body);
  Reply verify(const std::string& id);
  Reply export_log(const std::string& id);

 private:
  std::shared_ptr<Session> find(const std::string& id);

  MoveBudget defaults_;
  std::size_t menu_limit_;
  std::uint64_t next_id_ = 1;
  std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

nlohmann::json error_body(const std::string& kind, const std::string& message);

void register_routes(httplib::Server& server, SessionManager& manager);

/// Blocks serving the HTTP API until the process is stopped.
void serve(SessionManager& manager, const std::string& host, int port);

}  // namespace sysgame
