#pragma once

// Semantic composition of two modules' system-level semantics: composite
// states, the seven composition rules and their mirror images, knowledge
// updates, the reachable-state invariants, the translation into states of
// the syntactic composite, and the conformance check between the two.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sysgame/bisim.hpp"
#include "sysgame/sls.hpp"

namespace sysgame {

/// X₁ ∥_{𝔭,s} X₂. Continuation names in `shared` have System polarity iff
/// they are in `system_conts`, Program polarity otherwise.
struct CompositeState {
  SlsState left;
  SlsState right;
  NameSet shared;
  NameSet system_conts;
  Store aux;
  /// For states where both sides are System configurations: the side (1 or
  /// 2) that was a Program configuration in the preceding state, 0 if none.
  int last_active = 0;
};

std::string render(const CompositeState& cs);
CompositeState swap_sides(const CompositeState& cs);

enum class Polarity : std::uint8_t { Program, System };

struct ComposeFaults {
  bool drop_cross_call_freshness = false;
  bool skip_closure_in_p_update = false;
};

/// The two modules, resolved against one symbol table, and their link.
struct Composition {
  ResolvedModule left;
  ResolvedModule right;
  ResolvedModule linked;
  ComposeFaults faults;
};

Composition make_composition(const ResolvedModule& m1, const ResolvedModule& m2, ComposeFaults faults = {});

struct KnowledgeUpdate {
  NameSet shared;
  NameSet system_conts;
  Store aux;
  std::vector<std::string> violations;  // System-side preconditions only
};

/// (𝔭,s′)ᴾ[v,k,s] and (𝔭,s′)ˢ[v,k,s]. `private_names` is ν(X₁,X₂)∖𝔭.
KnowledgeUpdate knowledge_update(const NameSet& shared, const NameSet& system_conts, const Store& aux,
                                 Polarity pol, const Value& v, const std::optional<Name>& k, const Store& s,
                                 const NameSet& private_names, bool skip_closure = false);

CompositeState composite_init(const Composition& c);

struct CompositeSuccessor {
  int rule = 0;  // 1–7
  bool tau = false;
  Label label;  // meaningful unless tau
  CompositeState next;
};

struct CompositeStep {
  std::vector<CompositeSuccessor> next;
  NodeStatus status = NodeStatus::Live;
  std::string detail;
};

/// All successors: one machine step (rule 1) or one boundary rule from a
/// state with an active Program, or every budgeted System move otherwise.
CompositeStep composite_step(const Composition& c, const CompositeState& cs, const MoveBudget& b);

/// Applies one external System move to a state where both sides are System
/// configurations (rules 6 and 7).
std::variant<CompositeSuccessor, std::string> composite_system_move(const Composition& c, const CompositeState& cs,
                                                                    const SystemMove& mv);

/// Runs rule 1 to the next boundary rule, crash or divergence.
CompositeStep composite_advance(const Composition& c, const CompositeState& cs, const MoveBudget& b);

struct LemmaClause {
  std::string name;
  bool holds = true;
  std::string detail;
};

struct LemmaReport {
  std::vector<LemmaClause> clauses;
  bool holds() const;
  std::string failures() const;
};

LemmaReport check_state_lemma(const CompositeState& cs);

class ComposeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// K = ς(P₁∩P₂) ∖ 𝔭_S.
NameSet stitched_conts(const CompositeState& cs);

/// The corresponding state of the syntactic composite. Throws ComposeError
/// on a broken continuation chain.
SlsState translate_R(const CompositeState& cs);

struct CompositeLts {
  Lts graph;
  std::vector<CompositeState> states;
};

/// τ-edges do not count towards depth; runs of more than `tau_limit`
/// consecutive τ-edges are cut and marked divergent.
CompositeLts explore_composite(const Composition& c, const MoveBudget& b, std::size_t tau_limit = 64);

struct ItemResult {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_failure;
};

struct CompositionReport {
  ItemResult items[5];
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t lemma_states = 0;
  std::size_t lemma_failures = 0;
  std::string first_lemma_failure;
  std::optional<Verdict> bisim;

  bool items_hold() const;
  bool holds() const;
};

/// Checks every explored composite state and transition against the
/// translation, the invariants, and weak bisimilarity with `syntactic`.
CompositionReport check_composition(const Composition& c, const ResolvedModule& syntactic, const MoveBudget& b);

/// Resolves both modules and their syntactic composite against one table.
struct ComposedSources {
  Composition composition;
  ResolvedModule syntactic;
};

ComposedSources compose_sources(const SourceModule& a, const SourceModule& b, ComposeFaults faults = {});

}  // namespace sysgame
