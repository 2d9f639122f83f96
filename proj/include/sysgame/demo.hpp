#pragma once

// The replay attack on the bundled prot module, as an annotated trace.

#include <optional>
#include <string>
#include <vector>

#include "sysgame/sls.hpp"

namespace sysgame {

struct DemoStep {
  Label label;
  std::string note;
  NameSet disclosed;  // public names gained by this label
  NameSet pub_after;
};

struct AttackDemo {
  std::vector<DemoStep> steps;
  /// The name disclosed by the last label, if it was never public before.
  std::optional<Name> secret;
  std::string error;  // non-empty if the script did not replay
};

const std::string& bundled_prot_source();
const std::string& bundled_attack_script();

AttackDemo attack_demo(const ResolvedModule& m, const std::vector<SystemMove>& script, std::size_t fuel);
AttackDemo attack_demo();

std::string format_demo(const AttackDemo& d, const ResolvedModule& m);

}  // namespace sysgame
