#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "sysgame/store.hpp"
#include "support.hpp"

using namespace sysgame;

namespace {

const Name l0 = Name::loc(0), l1 = Name::loc(1), l2 = Name::loc(2), l3 = Name::loc(3);
const Name f0 = Name::fn(0), k0 = Name::cont(0), k1 = Name::cont(1);

// Scans indices upward for the first one of `sort` absent from `used`.
Name least_gap(Sort sort, const NameSet& used) {
  for (std::uint32_t i = 0;; ++i)
    if (!used.contains({sort, i})) return {sort, i};
}

}  // namespace

TEST(Nominal, EqualityIsSortAndIndex) {
  EXPECT_EQ(Name::loc(3), Name::loc(3));
  EXPECT_NE(Name::loc(3), Name::fn(3));
  EXPECT_NE(Name::loc(3), Name::loc(4));
}

TEST(Nominal, RenderingIsSortPrefixedAndInjective) {
  EXPECT_EQ(Name::loc(3).str(), "l3");
  EXPECT_EQ(Name::fn(0).str(), "f0");
  EXPECT_EQ(Name::cont(7).str(), "k7");
  std::set<std::string> seen;
  for (Sort s : {Sort::Location, Sort::Function, Sort::Continuation})
    for (std::uint32_t i = 0; i < 50; ++i) {
      Name n{s, i};
      EXPECT_TRUE(seen.insert(n.str()).second);
      EXPECT_EQ(parse_name(n.str()), n);
    }
  EXPECT_EQ(parse_name("a4"), Name::loc(4));
  EXPECT_FALSE(parse_name("x1").has_value());
}

TEST(Nominal, FreshIsLeastGap) {
  EXPECT_EQ(fresh(Sort::Location, {}), l0);
  NameSet used{l0, l1, f0};
  EXPECT_EQ(fresh(Sort::Location, used), least_gap(Sort::Location, used));
  EXPECT_EQ(fresh(Sort::Location, used), l2);
  EXPECT_EQ(fresh(Sort::Continuation, {l0}), k0);
  NameSet gappy{l0, l2, l3};
  EXPECT_EQ(fresh(Sort::Location, gappy), least_gap(Sort::Location, gappy));
}

TEST(Nominal, NameSetAlgebra) {
  NameSet a{l0, l1, f0}, b{l1, k0};
  EXPECT_EQ(a | b, (NameSet{l0, l1, f0, k0}));
  EXPECT_EQ(a & b, (NameSet{l1}));
  EXPECT_EQ(a - b, (NameSet{l0, f0}));
  EXPECT_EQ(a.locations(), (NameSet{l0, l1}));
  EXPECT_TRUE((a & b).subset_of(a));
  EXPECT_TRUE((a - b).disjoint(b));
}

TEST(Nominal, PermutationsPreserveSort) {
  EXPECT_THROW(Permutation::from_partial({{l0, f0}}), std::invalid_argument);
  EXPECT_THROW(Permutation::from_partial({{l0, l2}, {l1, l2}}), std::invalid_argument);
  Permutation p = Permutation::from_partial({{l0, l1}});
  EXPECT_EQ(p(l0), l1);
  EXPECT_EQ(p(l1), l0);
  EXPECT_EQ(p(l2), l2);
  EXPECT_TRUE(p.compose(p.inverse()).is_identity());
  Permutation q = Permutation::swap(l1, l2);
  for (const Name& n : {l0, l1, l2, l3}) EXPECT_EQ(p.compose(q)(n), p(q(n)));
}

TEST(Nominal, SwapOnStore) {
  Store s{{l0, Value::integer(5)}};
  Store expected{{l1, Value::integer(5)}};
  EXPECT_EQ(apply_perm(Permutation::swap(l0, l1), s), expected);
  EXPECT_EQ(apply_perm(Permutation{}, s), s);
}

TEST(Nominal, SupportOfValuesAndStores) {
  EXPECT_TRUE(support(Value::integer(42)).empty());
  Store s;
  s.set(l0, Value::name(l1));
  FrameStack t{Frame::bin_right(Value::name(l2), BinOp::Assign)};
  s.set_cont(k0, {t, k1});
  EXPECT_EQ(support(s), (NameSet{l0, l1, k0, k1} | support(t)));
  EXPECT_EQ(support(t), (NameSet{l2}));
}

TEST(Values, TuplesAreFlat) {
  Value a = Value::integer(1), b = Value::name(l0), c = Value::integer(2);
  EXPECT_EQ(Value::pair(Value::pair(a, b), c), Value::tuple({a, b, c}));
  EXPECT_EQ(Value::tuple({a}), a);
  EXPECT_TRUE(Value::tuple({}).is_unit());
  EXPECT_EQ(Value::pair(Value::unit(), a), a);
  EXPECT_EQ(Value::tuple({a, b, c}).width(), 3u);
}

TEST(Store, SortedComponents) {
  Store s;
  EXPECT_THROW(s.set(k0, Value::integer(0)), std::invalid_argument);
  EXPECT_THROW(s.set(l0, Value::pair(Value::integer(1), Value::integer(2))), std::invalid_argument);
  EXPECT_THROW(s.set(l0, Value::name(k0)), std::invalid_argument);
  s.set(l0, Value::name(f0));
  EXPECT_EQ(s.get(l0), Value::name(f0));
  EXPECT_FALSE(s.get(l1).has_value());
}

TEST(Store, Restrict) {
  Store s{{l0, Value::integer(3)}, {l1, Value::name(l0)}};
  EXPECT_TRUE(restrict_to(s, {}).empty());
  EXPECT_EQ(restrict_to(s, {l0}), (Store{{l0, Value::integer(3)}}));
  EXPECT_EQ(restrict_from(s, {l0}), (Store{{l1, Value::name(l0)}}));
}

TEST(Store, Update) {
  Store s{{l0, Value::integer(1)}};
  EXPECT_EQ(update(s, {}), s);
  EXPECT_EQ(update(s, {{l0, Value::integer(7)}}), (Store{{l0, Value::integer(7)}}));
  EXPECT_EQ(update(s, {{l1, Value::integer(2)}}), (Store{{l0, Value::integer(1)}, {l1, Value::integer(2)}}));
}

TEST(Store, Extends) {
  Store big{{l0, Value::integer(9)}, {l1, Value::integer(2)}};
  EXPECT_TRUE(extends({}, big));
  EXPECT_TRUE(extends({{l0, Value::integer(1)}}, big));
  EXPECT_FALSE(extends({{l0, Value::integer(1)}, {l2, Value::integer(0)}}, {{l0, Value::integer(1)}}));
}

TEST(Store, Closure) {
  Store s{{l0, Value::name(l1)}, {l1, Value::integer(5)}, {l2, Value::integer(7)}};
  EXPECT_TRUE(closure(s, {}).empty());
  EXPECT_EQ(closure(s, {l0}), (NameSet{l0, l1}));
  Store c;
  FrameStack t{Frame::bin_right(Value::name(l3), BinOp::Assign)};
  c.set_cont(k0, {t, k1});
  EXPECT_EQ(closure(c, {k0}), (NameSet{k0, k1} | support(t)));
  EXPECT_EQ(location_closure(c, {k0}), (NameSet{k0}));
}

TEST(Store, ClosureThroughChains) {
  Store s{{l0, Value::name(l1)}, {l1, Value::name(l2)}, {l2, Value::name(l0)}, {l3, Value::name(l0)}};
  EXPECT_EQ(closure(s, {l1}), (NameSet{l0, l1, l2}));
  EXPECT_EQ(closure(s, {l3}), (NameSet{l0, l1, l2, l3}));
}
