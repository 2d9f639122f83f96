#pragma once

// Frame-stack abstract machine: one deterministic internal step at a time,
// stopping at the boundary with the System.

#include <cstdint>
#include <functional>
#include <string>

#include "sysgame/nominal.hpp"
#include "sysgame/store.hpp"
#include "sysgame/syntax.hpp"

namespace sysgame {

/// ⟨N | P ⊢ s, t, e, k⟩.
struct ProgramConfig {
  NameSet used;
  NameSet pub;
  Store store;
  FrameStack frames;
  Exp control;
  Name ret_cont;
};

bool config_equal(const ProgramConfig& a, const ProgramConfig& b);
NameSet support(const ProgramConfig& c);
ProgramConfig apply_perm(const Permutation& pi, const ProgramConfig& c);
std::string render(const ProgramConfig& c);

enum class CrashReason : std::uint8_t { DerefUnbound, NotALocation, BadOperands, CallNonFunction, ArityMismatch };

const char* crash_reason_name(CrashReason r);

struct StepResult {
  enum class Kind : std::uint8_t { Internal, SystemCall, SystemReturn, Crash, Divergent };
  Kind kind = Kind::Internal;
  ProgramConfig next;   // Internal
  Name fn;              // SystemCall
  Value value;          // SystemCall, SystemReturn
  FrameStack frames;    // SystemCall: residual frames below f(□)
  Name k;               // SystemCall, SystemReturn
  CrashReason reason = CrashReason::BadOperands;
  std::string detail;   // Crash, Divergent

  bool is_boundary() const { return kind == Kind::SystemCall || kind == Kind::SystemReturn; }
};

/// One row of the operational semantics. Fresh locations avoid c.used and,
/// when given, `avoid`.
StepResult step(const ProgramConfig& c, const ResolvedModule& m, const NameSet* avoid = nullptr);

struct RunResult {
  ProgramConfig last;
  StepResult result;
  std::size_t steps = 0;
};

using StepObserver = std::function<void(const ProgramConfig&)>;

/// Steps until a non-internal result; `fuel` exhaustion yields Divergent.
RunResult run_to_boundary(const ProgramConfig& c, const ResolvedModule& m, std::size_t fuel,
                          const NameSet* avoid = nullptr, const StepObserver& observe = {});

}  // namespace sysgame
