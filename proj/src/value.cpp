#include "sysgame/value.hpp"

namespace sysgame {

Value Value::integer(std::int64_t n) {
  Value v;
  v.kind_ = Kind::Int;
  v.int_ = n;
  return v;
}

Value Value::name(const Name& a) {
  Value v;
  v.kind_ = Kind::Name;
  v.name_ = a;
  return v;
}

std::vector<Value> Value::atoms() const {
  if (kind_ == Kind::Tuple) return items_;
  return {*this};
}

std::size_t Value::width() const {
  return kind_ == Kind::Tuple ? items_.size() : 1;
}

Value Value::pair(const Value& a, const Value& b) {
  std::vector<Value> parts = a.atoms();
  for (auto& x : b.atoms()) parts.push_back(std::move(x));
  return tuple(parts);
}

Value Value::tuple(const std::vector<Value>& parts) {
  std::vector<Value> flat;
  for (const auto& p : parts)
    for (auto& x : p.atoms()) flat.push_back(std::move(x));
  if (flat.size() == 1) return flat.front();
  Value v;
  v.items_ = std::move(flat);
  return v;
}

std::string Value::str() const {
  switch (kind_) {
    case Kind::Int: return std::to_string(int_);
    case Kind::Name: return name_.str();
    case Kind::Tuple: break;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ",";
    out += items_[i].str();
  }
  return out + ")";
}

NameSet support(const Value& v) {
  NameSet out;
  for (const auto& a : v.atoms())
    if (a.is_name()) out.insert(a.as_name());
  return out;
}

Value apply_perm(const Permutation& pi, const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Int: return v;
    case Value::Kind::Name: return Value::name(pi(v.as_name()));
    case Value::Kind::Tuple: break;
  }
  std::vector<Value> parts;
  for (const auto& a : v.atoms()) parts.push_back(apply_perm(pi, a));
  return Value::tuple(parts);
}

}  // namespace sysgame
