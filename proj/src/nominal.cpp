#include "sysgame/nominal.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace sysgame {

char sort_prefix(Sort sort) {
  switch (sort) {
    case Sort::Location: return 'l';
    case Sort::Function: return 'f';
    case Sort::Continuation: return 'k';
  }
  return '?';
}

std::string Name::str() const {
  return sort_prefix(sort) + std::to_string(index);
}

std::optional<Name> parse_name(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  Sort sort;
  switch (text[0]) {
    case 'l':
    case 'a': sort = Sort::Location; break;
    case 'f': sort = Sort::Function; break;
    case 'k': sort = Sort::Continuation; break;
    default: return std::nullopt;
  }
  std::uint32_t index = 0;
  auto digits = text.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return Name{sort, index};
}

NameSet::NameSet(std::initializer_list<Name> names) : names_(names) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

NameSet::NameSet(std::vector<Name> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

bool NameSet::contains(const Name& n) const {
  return std::binary_search(names_.begin(), names_.end(), n);
}

bool NameSet::insert(const Name& n) {
  auto it = std::lower_bound(names_.begin(), names_.end(), n);
  if (it != names_.end() && *it == n) return false;
  names_.insert(it, n);
  return true;
}

bool NameSet::erase(const Name& n) {
  auto it = std::lower_bound(names_.begin(), names_.end(), n);
  if (it == names_.end() || *it != n) return false;
  names_.erase(it);
  return true;
}

void NameSet::insert_all(const NameSet& other) {
  if (other.empty()) return;
  *this = *this | other;
}

NameSet NameSet::of_sort(Sort sort) const {
  NameSet out;
  for (const auto& n : names_)
    if (n.sort == sort) out.names_.push_back(n);
  return out;
}

bool NameSet::subset_of(const NameSet& other) const {
  return std::includes(other.names_.begin(), other.names_.end(), names_.begin(), names_.end());
}

bool NameSet::disjoint(const NameSet& other) const {
  auto a = names_.begin();
  auto b = other.names_.begin();
  while (a != names_.end() && b != other.names_.end()) {
    if (*a < *b) ++a;
    else if (*b < *a) ++b;
    else return false;
  }
  return true;
}

NameSet operator|(const NameSet& a, const NameSet& b) {
  NameSet out;
  out.names_.reserve(a.size() + b.size());
  std::set_union(a.names_.begin(), a.names_.end(), b.names_.begin(), b.names_.end(),
                 std::back_inserter(out.names_));
  return out;
}

NameSet operator&(const NameSet& a, const NameSet& b) {
  NameSet out;
  std::set_intersection(a.names_.begin(), a.names_.end(), b.names_.begin(), b.names_.end(),
                        std::back_inserter(out.names_));
  return out;
}

NameSet operator-(const NameSet& a, const NameSet& b) {
  NameSet out;
  std::set_difference(a.names_.begin(), a.names_.end(), b.names_.begin(), b.names_.end(),
                      std::back_inserter(out.names_));
  return out;
}

std::string NameSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (i) out += ",";
    out += names_[i].str();
  }
  return out + "}";
}

Name fresh(Sort sort, const NameSet& used) {
  std::uint32_t candidate = 0;
  for (const auto& n : used) {
    if (n.sort != sort) continue;
    if (n.index == candidate) ++candidate;
    else if (n.index > candidate) break;
  }
  return Name{sort, candidate};
}

Permutation Permutation::swap(const Name& a, const Name& b) {
  if (a.sort != b.sort) throw std::invalid_argument("swap of names with different sorts");
  Permutation p;
  if (a != b) {
    p.map_[a] = b;
    p.map_[b] = a;
  }
  return p;
}

Permutation Permutation::from_partial(const std::map<Name, Name>& partial) {
  NameSet dom, range;
  for (const auto& [x, y] : partial) {
    if (x.sort != y.sort) throw std::invalid_argument("permutation must preserve sorts");
    if (!range.insert(y)) throw std::invalid_argument("permutation map is not injective");
    dom.insert(x);
  }
  Permutation p;
  p.map_ = partial;
  // Elements hit but not mapped must be sent to elements mapped but not hit.
  NameSet unmapped = range - dom;
  NameSet unhit = dom - range;
  for (Sort sort : {Sort::Location, Sort::Function, Sort::Continuation}) {
    auto from = unmapped.of_sort(sort).vec();
    auto to = unhit.of_sort(sort).vec();
    for (std::size_t i = 0; i < from.size(); ++i) p.map_[from[i]] = to[i];
  }
  p.normalize();
  return p;
}

Name Permutation::operator()(const Name& a) const {
  auto it = map_.find(a);
  return it == map_.end() ? a : it->second;
}

Permutation Permutation::inverse() const {
  Permutation p;
  for (const auto& [x, y] : map_) p.map_[y] = x;
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  Permutation p;
  for (const auto& [x, y] : other.map_) p.map_[x] = (*this)(y);
  for (const auto& [x, y] : map_)
    if (!other.map_.count(x)) p.map_[x] = y;
  p.normalize();
  return p;
}

void Permutation::normalize() {
  for (auto it = map_.begin(); it != map_.end();) {
    if (it->first == it->second) it = map_.erase(it);
    else ++it;
  }
}

std::string Permutation::str() const {
  std::string out = "[";
  bool first = true;
  for (const auto& [x, y] : map_) {
    if (!first) out += ",";
    first = false;
    out += x.str() + "->" + y.str();
  }
  return out + "]";
}

NameSet apply_perm(const Permutation& pi, const NameSet& set) {
  if (pi.is_identity()) return set;
  std::vector<Name> out;
  out.reserve(set.size());
  for (const auto& n : set) out.push_back(pi(n));
  return NameSet(std::move(out));
}

}  // namespace sysgame
