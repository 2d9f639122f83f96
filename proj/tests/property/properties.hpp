#pragma once

// Randomized and exhaustive property checks shared by the property test
// binary and the acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

namespace sysgame::props {

struct PropResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first;

  bool ok() const { return cases > 0 && failures == 0; }
  void check(bool good, const std::string& what) {
    ++cases;
    if (!good && failures++ == 0) first = what;
  }
};

/// step, apply_system_move, canonicalize and explore commute with random
/// sort-preserving permutations that fix the module's own names.
PropResult equivariance(std::uint64_t seed, std::size_t cases);

/// Closure, restriction, update and permutation laws on random stores.
PropResult store_laws(std::uint64_t seed, std::size_t cases);

/// Every explored edge of every fixture: the System only mentions public or
/// fresh names and leaves private locations alone; the Program's label shows
/// exactly its visible store.
PropResult epistemic_edges(std::size_t depth);

/// Every explored trace survives a jsonl round trip, as does every script.
PropResult trace_round_trip(std::size_t depth);

/// Fixtures explored by the exhaustive properties.
const std::vector<std::string>& fixture_names();

}  // namespace sysgame::props
