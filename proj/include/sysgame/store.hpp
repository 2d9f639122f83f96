#pragma once

// Two-component store: locations map to integers, locations or function
// names; continuation names map to a suspended frame stack and the
// continuation it returns to.

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "sysgame/nominal.hpp"
#include "sysgame/syntax.hpp"
#include "sysgame/value.hpp"

namespace sysgame {

struct Continuation {
  FrameStack frames;
  Name next;

  friend bool operator==(const Continuation& a, const Continuation& b) {
    return a.next == b.next && frames_equal(a.frames, b.frames);
  }
};

/// Integers, location names and function names.
bool is_storable(const Value& v);

enum class RestrictMode { Keep, Drop };

class Store {
 public:
  Store() = default;
  Store(std::initializer_list<std::pair<const Name, Value>> locs) : locs_(locs) {}

  /// Binds a location. Throws std::invalid_argument on a non-location key or a
  /// non-storable value.
  void set(const Name& a, Value v);
  void set_cont(const Name& k, Continuation c);
  void erase(const Name& a);

  /// Absent keys give std::nullopt.
  std::optional<Value> get(const Name& a) const;
  const Continuation* get_cont(const Name& k) const;
  bool contains(const Name& a) const;

  const std::map<Name, Value>& locations() const { return locs_; }
  const std::map<Name, Continuation>& continuations() const { return conts_; }
  NameSet domain() const;
  bool empty() const { return locs_.empty() && conts_.empty(); }
  std::size_t size() const { return locs_.size() + conts_.size(); }

  /// Location component only.
  Store location_part() const;

  friend bool operator==(const Store&, const Store&) = default;

 private:
  std::map<Name, Value> locs_;
  std::map<Name, Continuation> conts_;
};

Store restrict(const Store& s, const NameSet& x, RestrictMode mode);
inline Store restrict_to(const Store& s, const NameSet& x) { return restrict(s, x, RestrictMode::Keep); }
inline Store restrict_from(const Store& s, const NameSet& x) { return restrict(s, x, RestrictMode::Drop); }
/// s[patch] = patch ∪ (s ∖ dom(patch)).
Store update(const Store& s, const Store& patch);
/// s ⊑ s2 iff dom(s) ⊆ dom(s2).
bool extends(const Store& s, const Store& s2);
/// True iff every binding of `sub` is present in `s` with the same value.
bool contains_bindings(const Store& s, const Store& sub);
/// Least superset of x closed under the bindings of s.
NameSet closure(const Store& s, const NameSet& x);
/// Closure through location bindings only.
NameSet location_closure(const Store& s, const NameSet& x);

NameSet support(const Store& s);
NameSet support(const Continuation& c);
Store apply_perm(const Permutation& pi, const Store& s);

/// "name=value" pairs sorted by rendered name, comma separated.
std::string render(const Store& s);

}  // namespace sysgame
