#pragma once

// System-level semantics: boundary transitions between Program and System,
// validation and enumeration of System moves, replay, and bounded
// exploration of the induced labelled transition system.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sysgame/machine.hpp"
#include "sysgame/nominal.hpp"
#include "sysgame/store.hpp"
#include "sysgame/syntax.hpp"

namespace sysgame {

/// ⟨⟨N | P ⊢ s⟩⟩.
struct SystemConfig {
  NameSet used;
  NameSet pub;
  Store store;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

using SlsState = std::variant<SystemConfig, ProgramConfig>;

NameSet support(const SystemConfig& c);
SystemConfig apply_perm(const Permutation& pi, const SystemConfig& c);
std::string render(const SystemConfig& c);
bool state_equal(const SlsState& a, const SlsState& b);
NameSet support(const SlsState& x);
SlsState apply_perm(const Permutation& pi, const SlsState& x);
std::string render(const SlsState& x);
const NameSet& public_names(const SlsState& x);
const NameSet& used_names(const SlsState& x);
const Store& state_store(const SlsState& x);

enum class Direction : std::uint8_t { PS, SP };
enum class MoveKind : std::uint8_t { Call, Ret };

/// call f, v, k / ret v, k with the visible store (location bindings only).
struct Label {
  Direction dir = Direction::SP;
  MoveKind kind = MoveKind::Call;
  Name fn;
  Value value;
  Name k;
  Store store;

  friend bool operator==(const Label& a, const Label& b) {
    return a.dir == b.dir && a.kind == b.kind && (a.kind == MoveKind::Ret || a.fn == b.fn) && a.value == b.value &&
           a.k == b.k && a.store == b.store;
  }
};

NameSet support(const Label& l);
Label apply_perm(const Permutation& pi, const Label& l);
/// "S->P call f0 (), k0 | {l5=0}".
std::string render(const Label& l);

/// The S→P half of a label; `store` is the System's update s′.
struct SystemMove {
  MoveKind kind = MoveKind::Call;
  Name fn;
  Value value;
  Name k;
  Store store;

  friend bool operator==(const SystemMove& a, const SystemMove& b) {
    return a.kind == b.kind && (a.kind == MoveKind::Ret || a.fn == b.fn) && a.value == b.value && a.k == b.k &&
           a.store == b.store;
  }
};

Label as_label(const SystemMove& mv);
SystemMove as_move(const Label& l);

enum class MoveErrorKind : std::uint8_t {
  GuessedPrivateName,
  UnknownContinuation,
  PrivateStoreTampering,
  MissingPublicFrame,
  ContinuationInStore,
  UndefinedFunction,
  UnboundFreshLocation,
  StoredContinuationReused,
  IllSortedMove,
};

const char* move_error_name(MoveErrorKind k);

struct MoveError {
  MoveErrorKind kind;
  NameSet names;        // offending names, if any
  std::string message;  // technical description
  /// Human-readable explanation in terms of what the System knows.
  std::string explanation() const;
};

struct MoveBudget {
  std::vector<std::int64_t> int_pool{0, 1};
  std::size_t max_fresh_locs = 1;
  std::size_t max_tuple_width = 2;
  std::size_t max_depth = 6;
  std::size_t fuel = 100000;
};

SystemConfig initial_config(const ResolvedModule& m);

struct Emission {
  Label label;
  SystemConfig next;
};

/// P→S call or return. `avoid` widens the freshness of the new continuation.
Emission emit_boundary(const ProgramConfig& c, const StepResult& r, const NameSet* avoid = nullptr);

using MoveOutcome = std::variant<ProgramConfig, MoveError>;

MoveOutcome apply_system_move(const SystemConfig& sc, const SystemMove& mv, const ResolvedModule& m);

std::vector<SystemMove> enumerate_system_moves(const SystemConfig& sc, const ResolvedModule& m,
                                               const MoveBudget& b);

/// Values over `atoms` of width ≤ max_width; `fresh` atoms are used in
/// prefix order so each equivalence class under their permutation appears
/// once.
std::vector<Value> enumerate_values(const std::vector<Value>& atoms, const std::vector<Name>& fresh,
                                    std::size_t max_width);

enum class ReplayErrorKind : std::uint8_t { InvalidMove, ScriptAtWrongTurn, Crash, Divergent };

struct ReplayError {
  ReplayErrorKind kind;
  std::size_t move_index = 0;
  std::optional<MoveError> move_error;
  std::string message;
};

struct ReplayResult {
  std::vector<Label> trace;
  SlsState final_state;
  /// Public set after each label.
  std::vector<NameSet> public_after;
  std::optional<ReplayError> error;
};

ReplayResult replay(const ResolvedModule& m, const std::vector<SystemMove>& script, std::size_t fuel);

/// Canonical renaming of private names, pinning `pinned` and the public set.
struct Canonical {
  SlsState state;
  Permutation witness;  // maps the canonical form back to the original
  std::string key;
};

Canonical canonicalize(const SlsState& x, const NameSet& pinned = {});

/// Renames names outside `pinned` to the lowest free indices in order of
/// discovery: `seeds`, then names reachable through `stores` from the seeds
/// and `roots`, then unreachable bindings ordered by masked content, then
/// `rest`.
Permutation canonical_renaming(const std::vector<Name>& seeds, const NameSet& roots,
                               const std::vector<const Store*>& stores, const NameSet& rest, const NameSet& pinned);

// ---------------------------------------------------------------------------
// Explicit labelled transition systems

struct LtsEdge {
  std::size_t to = 0;
  bool tau = false;
  Label label;
};

enum class NodeStatus : std::uint8_t { Live, Crashed, Diverged };

struct LtsNode {
  NameSet pub;
  std::size_t depth = 0;
  bool expanded = false;
  NodeStatus status = NodeStatus::Live;
  std::string detail;
  std::ptrdiff_t parent = -1;  // BFS tree
  std::size_t parent_edge = 0;
};

struct Lts {
  std::vector<LtsNode> nodes;
  std::vector<std::vector<LtsEdge>> out;
  std::size_t max_depth = 0;

  std::size_t edge_count() const;
  /// Edges from the root to `node` along the BFS tree.
  std::vector<const LtsEdge*> path_to(std::size_t node) const;
};

struct SlsLts {
  Lts graph;
  std::vector<SlsState> states;
};

struct ExploreOptions {
  std::size_t jobs = 1;
};

SlsLts explore(const ResolvedModule& m, const MoveBudget& b, const ExploreOptions& opts = {});

/// System moves along the BFS path to `node`.
std::vector<SystemMove> script_to(const Lts& lts, std::size_t node);

}  // namespace sysgame
