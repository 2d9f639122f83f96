#include "sysgame/store.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace sysgame {

bool is_storable(const Value& v) {
  return v.is_int() || (v.is_name() && !v.as_name().is_continuation());
}

void Store::set(const Name& a, Value v) {
  if (!a.is_location()) throw std::invalid_argument("store key " + a.str() + " is not a location");
  if (!is_storable(v)) throw std::invalid_argument("value " + v.str() + " cannot be stored");
  locs_[a] = std::move(v);
}

void Store::set_cont(const Name& k, Continuation c) {
  if (!k.is_continuation()) throw std::invalid_argument("store key " + k.str() + " is not a continuation");
  conts_[k] = std::move(c);
}

void Store::erase(const Name& a) {
  if (a.is_continuation()) conts_.erase(a);
  else locs_.erase(a);
}

std::optional<Value> Store::get(const Name& a) const {
  auto it = locs_.find(a);
  if (it == locs_.end()) return std::nullopt;
  return it->second;
}

const Continuation* Store::get_cont(const Name& k) const {
  auto it = conts_.find(k);
  return it == conts_.end() ? nullptr : &it->second;
}

bool Store::contains(const Name& a) const {
  return a.is_continuation() ? conts_.count(a) > 0 : locs_.count(a) > 0;
}

NameSet Store::domain() const {
  std::vector<Name> out;
  out.reserve(size());
  for (const auto& [a, _] : locs_) out.push_back(a);
  for (const auto& [k, _] : conts_) out.push_back(k);
  return NameSet(std::move(out));
}

Store Store::location_part() const {
  Store out;
  out.locs_ = locs_;
  return out;
}

Store restrict(const Store& s, const NameSet& x, RestrictMode mode) {
  bool keep = mode == RestrictMode::Keep;
  Store out;
  for (const auto& [a, v] : s.locations())
    if (x.contains(a) == keep) out.set(a, v);
  for (const auto& [k, c] : s.continuations())
    if (x.contains(k) == keep) out.set_cont(k, c);
  return out;
}

Store update(const Store& s, const Store& patch) {
  Store out = s;
  for (const auto& [a, v] : patch.locations()) out.set(a, v);
  for (const auto& [k, c] : patch.continuations()) out.set_cont(k, c);
  return out;
}

bool extends(const Store& s, const Store& s2) {
  for (const auto& [a, _] : s.locations())
    if (!s2.contains(a)) return false;
  for (const auto& [k, _] : s.continuations())
    if (!s2.contains(k)) return false;
  return true;
}

bool contains_bindings(const Store& s, const Store& sub) {
  for (const auto& [a, v] : sub.locations()) {
    auto w = s.get(a);
    if (!w || *w != v) return false;
  }
  for (const auto& [k, c] : sub.continuations()) {
    const auto* d = s.get_cont(k);
    if (!d || !(*d == c)) return false;
  }
  return true;
}

namespace {

NameSet reach(const Store& s, const NameSet& x, bool follow_continuations) {
  NameSet out = x;
  std::deque<Name> work(x.begin(), x.end());
  auto add = [&](const Name& n) {
    if (out.insert(n)) work.push_back(n);
  };
  while (!work.empty()) {
    Name a = work.front();
    work.pop_front();
    if (a.is_location()) {
      if (auto v = s.get(a))
        for (const auto& n : support(*v)) add(n);
    } else if (a.is_continuation() && follow_continuations) {
      if (const auto* c = s.get_cont(a))
        for (const auto& n : support(*c)) add(n);
    }
  }
  return out;
}

}  // namespace

NameSet closure(const Store& s, const NameSet& x) { return reach(s, x, true); }

NameSet location_closure(const Store& s, const NameSet& x) { return reach(s, x, false); }

NameSet support(const Continuation& c) {
  NameSet out = support(c.frames);
  out.insert(c.next);
  return out;
}

NameSet support(const Store& s) {
  std::vector<Name> out;
  for (const auto& [a, v] : s.locations()) {
    out.push_back(a);
    if (v.is_name()) out.push_back(v.as_name());
  }
  NameSet names(std::move(out));
  for (const auto& [k, c] : s.continuations()) {
    names.insert(k);
    names.insert_all(support(c));
  }
  return names;
}

Store apply_perm(const Permutation& pi, const Store& s) {
  if (pi.is_identity()) return s;
  Store out;
  for (const auto& [a, v] : s.locations()) out.set(pi(a), apply_perm(pi, v));
  for (const auto& [k, c] : s.continuations()) out.set_cont(pi(k), {apply_perm(pi, c.frames), pi(c.next)});
  return out;
}

std::string render(const Store& s) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [a, v] : s.locations()) entries.emplace_back(a.str(), v.str());
  for (const auto& [k, c] : s.continuations())
    entries.emplace_back(k.str(), "(" + render(c.frames) + "," + c.next.str() + ")");
  std::sort(entries.begin(), entries.end());
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ",";
    out += entries[i].first + "=" + entries[i].second;
  }
  return out;
}

}  // namespace sysgame
