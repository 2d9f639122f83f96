#pragma once

// Runtime values: integers, names and tuples. Tuples are kept flat, so a
// tuple never contains a tuple, a one-element tuple is its element, and the
// empty tuple is unit.

#include <cstdint>
#include <string>
#include <vector>

#include "sysgame/nominal.hpp"

namespace sysgame {

class Value {
 public:
  enum class Kind : std::uint8_t { Int, Name, Tuple };

  Value() : kind_(Kind::Tuple) {}  // unit

  static Value unit() { return Value(); }
  static Value integer(std::int64_t n);
  static Value name(const Name& a);
  /// Flattening pair constructor: (v, w).
  static Value pair(const Value& a, const Value& b);
  static Value tuple(const std::vector<Value>& parts);

  Kind kind() const { return kind_; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_name() const { return kind_ == Kind::Name; }
  bool is_unit() const { return kind_ == Kind::Tuple && items_.empty(); }
  bool is_tuple() const { return kind_ == Kind::Tuple && !items_.empty(); }

  std::int64_t as_int() const { return int_; }
  const Name& as_name() const { return name_; }
  /// Atoms of a flat tuple (empty for unit). For an atom, a one-element list.
  std::vector<Value> atoms() const;
  std::size_t width() const;

  std::string str() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value&, const Value&) = default;

 private:
  Kind kind_;
  std::int64_t int_ = 0;
  Name name_{};
  std::vector<Value> items_;
};

NameSet support(const Value& v);
Value apply_perm(const Permutation& pi, const Value& v);

}  // namespace sysgame
