#pragma once

// Bounded bisimulation up to permutations fixing public names, with an
// optional weak variant absorbing τ-edges.

#include <optional>
#include <string>
#include <vector>

#include "sysgame/sls.hpp"

namespace sysgame {

enum class Side : std::uint8_t { Left, Right };

struct Witness {
  /// Labels along the distinguishing run on each side (τ omitted).
  std::vector<Label> trace_left, trace_right;
  /// System moves replaying each run.
  std::vector<SystemMove> script_left, script_right;
  /// The side that performs the unmatched label, and the label itself.
  Side side = Side::Left;
  std::optional<Label> unmatched;
  std::string reason;
};

struct Verdict {
  enum class Kind : std::uint8_t { BisimilarUpTo, Distinguished, InterfaceMismatch };
  Kind kind = Kind::BisimilarUpTo;
  std::size_t depth = 0;
  std::optional<Witness> witness;
  std::size_t pairs = 0;
  std::string message;

  bool bisimilar() const { return kind == Kind::BisimilarUpTo; }
};

const char* verdict_name(Verdict::Kind k);

/// Abstract rendering of a label: names in `pub` are shown through `sigma`
/// (identity when null); other names become ordered placeholders, returned
/// in `fresh` in placeholder order.
std::string abstract_label(const Label& l, const NameSet& pub, const std::map<Name, Name>* sigma,
                           std::vector<Name>* fresh = nullptr);

/// Greatest bounded (weak, if requested) bisimulation between two explored
/// systems from their roots.
Verdict bisim_lts(const Lts& left, const Lts& right, bool weak);

Verdict weak_bisimilar(const Lts& left, const Lts& right);

/// Modules resolved against one symbol table so that their interfaces share
/// names.
Verdict bisimilar(const ResolvedModule& m1, const ResolvedModule& m2, const MoveBudget& b,
                  const ExploreOptions& opts = {});

struct ResolvedPair {
  ResolvedModule first, second;
};

ResolvedPair resolve_pair(const SourceModule& a, const SourceModule& b);

struct CongruenceReport {
  Verdict hypothesis;
  std::optional<Verdict> conclusion;  // skipped when the hypothesis fails
  bool holds() const { return !hypothesis.bisimilar() || (conclusion && conclusion->bisimilar()); }
};

CongruenceReport check_congruence(const SourceModule& m1, const SourceModule& m2, const SourceModule& c,
                                  const MoveBudget& b, const ExploreOptions& opts = {});

}  // namespace sysgame
