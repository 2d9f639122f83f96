#pragma once

// Sorted atoms, finite sets of atoms, and finite sort-preserving permutations.

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sysgame {

enum class Sort : std::uint8_t { Location = 0, Function = 1, Continuation = 2 };

char sort_prefix(Sort sort);

/// A sorted atom. Rendered as "l<i>", "f<i>" or "k<i>".
struct Name {
  Sort sort = Sort::Location;
  std::uint32_t index = 0;

  static Name loc(std::uint32_t i) { return {Sort::Location, i}; }
  static Name fn(std::uint32_t i) { return {Sort::Function, i}; }
  static Name cont(std::uint32_t i) { return {Sort::Continuation, i}; }

  bool is_location() const { return sort == Sort::Location; }
  bool is_function() const { return sort == Sort::Function; }
  bool is_continuation() const { return sort == Sort::Continuation; }

  std::string str() const;

  friend auto operator<=>(const Name&, const Name&) = default;
};

/// Parses the canonical rendering. "a<i>" is accepted as an alias of "l<i>".
std::optional<Name> parse_name(std::string_view text);

/// Finite set of names kept as a sorted vector.
class NameSet {
 public:
  using const_iterator = std::vector<Name>::const_iterator;

  NameSet() = default;
  NameSet(std::initializer_list<Name> names);
  explicit NameSet(std::vector<Name> names);

  bool contains(const Name& n) const;
  bool insert(const Name& n);
  bool erase(const Name& n);
  void insert_all(const NameSet& other);

  bool empty() const { return names_.empty(); }
  std::size_t size() const { return names_.size(); }
  const_iterator begin() const { return names_.begin(); }
  const_iterator end() const { return names_.end(); }
  const std::vector<Name>& vec() const { return names_; }

  NameSet of_sort(Sort sort) const;
  NameSet locations() const { return of_sort(Sort::Location); }
  NameSet functions() const { return of_sort(Sort::Function); }
  NameSet continuations() const { return of_sort(Sort::Continuation); }

  bool subset_of(const NameSet& other) const;
  bool disjoint(const NameSet& other) const;

  friend NameSet operator|(const NameSet& a, const NameSet& b);
  friend NameSet operator&(const NameSet& a, const NameSet& b);
  friend NameSet operator-(const NameSet& a, const NameSet& b);
  friend bool operator==(const NameSet&, const NameSet&) = default;

  std::string str() const;

 private:
  std::vector<Name> names_;
};

/// Least-index name of `sort` outside `used`.
Name fresh(Sort sort, const NameSet& used);

/// Finite sort-preserving bijection, identity outside its carrier.
class Permutation {
 public:
  Permutation() = default;

  static Permutation swap(const Name& a, const Name& b);
  /// Builds a permutation from an injective partial map, completing it into a
  /// bijection on dom ∪ range. Throws std::invalid_argument if the map is not
  /// injective or not sort-preserving.
  static Permutation from_partial(const std::map<Name, Name>& partial);

  Name operator()(const Name& a) const;
  Permutation inverse() const;
  /// (this ∘ other): apply `other` first.
  Permutation compose(const Permutation& other) const;

  bool is_identity() const { return map_.empty(); }
  const std::map<Name, Name>& carrier() const { return map_; }
  std::string str() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  void normalize();
  std::map<Name, Name> map_;
};

NameSet apply_perm(const Permutation& pi, const NameSet& set);
inline Name apply_perm(const Permutation& pi, const Name& a) { return pi(a); }

}  // namespace sysgame

template <>
struct std::hash<sysgame::Name> {
  std::size_t operator()(const sysgame::Name& n) const noexcept {
    return (static_cast<std::size_t>(n.sort) << 32) ^ n.index;
  }
};
