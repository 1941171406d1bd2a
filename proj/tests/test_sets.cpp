#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "minimax/errors.hpp"
#include "minimax/ext_real.hpp"
#include "minimax/set_desc.hpp"

using minimax::ExtReal;
using minimax::kInf;
using minimax::Part;
using minimax::SetDesc;

TEST(ExtReal, OrderingAndArithmetic) {
  EXPECT_LT(ExtReal::neg_inf(), ExtReal(-1e300));
  EXPECT_LT(ExtReal(1e300), ExtReal::pos_inf());
  EXPECT_EQ(ExtReal(2.0) + ExtReal(3.0), ExtReal(5.0));
  EXPECT_EQ(ExtReal::pos_inf() + ExtReal(-7.0), ExtReal::pos_inf());
  EXPECT_EQ(-ExtReal::pos_inf(), ExtReal::neg_inf());
  EXPECT_EQ(ExtReal(kInf), ExtReal::pos_inf());
  EXPECT_THROW(ExtReal::pos_inf() + ExtReal::neg_inf(), minimax::ExtRealArithmeticError);
  EXPECT_THROW(ExtReal::pos_inf() - ExtReal::pos_inf(), minimax::ExtRealArithmeticError);
  EXPECT_THROW(ExtReal(std::nan("")), std::exception);
  EXPECT_THROW((void)ExtReal::neg_inf().value(), std::exception);
  EXPECT_EQ(ExtReal(0.5).to_string(), "0.5");
  EXPECT_EQ(ExtReal::pos_inf().to_string(), "+inf");
}

TEST(SetDesc, Constructors) {
  EXPECT_TRUE(SetDesc::empty().is_empty());
  EXPECT_EQ(SetDesc::singleton(3).kind(), SetDesc::Kind::Singleton);
  EXPECT_EQ(SetDesc::interval(0, 1).kind(), SetDesc::Kind::Interval);
  EXPECT_EQ(SetDesc::half_line(5).kind(), SetDesc::Kind::HalfLine);
  EXPECT_EQ(SetDesc::half_line(5).to_string(), "[5, +inf)");
  EXPECT_EQ(SetDesc::singleton(3).to_string(), "{3}");
  EXPECT_EQ(SetDesc::empty().to_string(), "{}");
  const SetDesc u = SetDesc::unite(SetDesc::interval(0, 1), SetDesc::interval(2, 3));
  EXPECT_EQ(u.kind(), SetDesc::Kind::FiniteUnion);
  EXPECT_EQ(u.to_string(), "[0, 1] U [2, 3]");
  EXPECT_TRUE(SetDesc::interval(2, 1).is_empty());
  EXPECT_TRUE(SetDesc::interval(1, 1, true, false).is_empty());
}

TEST(SetDesc, MergesTouchingParts) {
  const SetDesc s = SetDesc::unite(SetDesc::interval(0, 1, true, false), SetDesc::interval(1, 2));
  EXPECT_EQ(s, SetDesc::interval(0, 2));
  // open at the shared point on both sides keeps a gap
  const SetDesc g = SetDesc::unite(SetDesc::interval(0, 1, true, false), SetDesc::interval(1, 2, false, true));
  EXPECT_EQ(g.parts().size(), 2u);
  EXPECT_FALSE(g.member(1));
}

TEST(SetDesc, DistanceProjectionTruncation) {
  const SetDesc s = SetDesc::half_line(5);
  EXPECT_EQ(s.dist(2), ExtReal(3));
  EXPECT_EQ(s.dist(7), ExtReal(0));
  EXPECT_EQ(SetDesc::empty().dist(0), ExtReal::pos_inf());
  EXPECT_EQ(s.project(-1), 5);
  EXPECT_EQ(s.truncate(10), SetDesc::interval(5, 10));
  EXPECT_TRUE(SetDesc::half_line(20).truncate(10).is_empty());
  EXPECT_EQ(SetDesc::interval(0, 1, false, false).closure(), SetDesc::interval(0, 1));
  EXPECT_EQ(SetDesc::interval(0, 4).excess_over(SetDesc::singleton(0)), ExtReal(4));
  EXPECT_EQ(SetDesc::singleton(0).excess_over(SetDesc::interval(0, 4)), ExtReal(0));
}

TEST(SetDescProperty, NormalizationIsIdempotent) {
  gen::Rng r(11);
  for (int i = 0; i < 2000; ++i) {
    const SetDesc s = gen::set(r);
    EXPECT_EQ(SetDesc::from_parts(s.parts()), s) << s.to_string();
    for (std::size_t k = 1; k < s.parts().size(); ++k) {
      const Part& prev = s.parts()[k - 1];
      const Part& next = s.parts()[k];
      EXPECT_TRUE(prev.hi < next.lo || (prev.hi == next.lo && !prev.hi_closed && !next.lo_closed)) << s.to_string();
    }
  }
}

TEST(SetDescProperty, DistanceAgreesWithMembership) {
  gen::Rng r(12);
  for (int i = 0; i < 1000; ++i) {
    const SetDesc s = gen::set(r);
    for (int k = 0; k < 20; ++k) {
      const double v = r.coin() ? r.lattice(-6, 6) : r.uniform(-6, 6);
      const ExtReal d = s.dist(v);
      EXPECT_GE(d, ExtReal(0.0));
      if (s.member(v)) EXPECT_EQ(d, ExtReal(0.0)) << s.to_string() << " at " << v;
      if (d == ExtReal(0.0)) EXPECT_TRUE(s.closure().member(v)) << s.to_string() << " at " << v;
      if (!s.is_empty()) EXPECT_EQ(ExtReal(std::abs(s.project(v) - v)), d) << s.to_string() << " at " << v;
    }
  }
}

TEST(SetDescProperty, TruncationIsMonotone) {
  gen::Rng r(13);
  for (int i = 0; i < 1000; ++i) {
    const SetDesc s = gen::set(r);
    const double r1 = r.uniform(0, 6);
    const double r2 = r1 + r.uniform(0, 6);
    const SetDesc t1 = s.truncate(r1), t2 = s.truncate(r2);
    EXPECT_TRUE(t1.subset_of_closure(t2)) << s.to_string();
    EXPECT_TRUE(t2.subset_of_closure(s)) << s.to_string();
    EXPECT_TRUE(t2.bounded());
  }
}

TEST(SetDescProperty, UnionAndIntersectionMembership) {
  gen::Rng r(14);
  for (int i = 0; i < 1000; ++i) {
    const SetDesc a = gen::set(r), b = gen::set(r);
    const SetDesc u = SetDesc::unite(a, b), n = SetDesc::intersect(a, b);
    for (int k = 0; k < 20; ++k) {
      const double v = r.lattice(-6, 6);
      EXPECT_EQ(u.member(v), a.member(v) || b.member(v));
      EXPECT_EQ(n.member(v), a.member(v) && b.member(v));
    }
  }
}
