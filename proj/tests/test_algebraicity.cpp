#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "foldprod/algebraicity.hpp"
#include "foldprod/closed_forms.hpp"

using namespace foldprod;

namespace {

const Rational kHalf = make_rational(1, 2);

bool pair_preconditions(const Rational& b, const Rational& c) {
  return b > 0 && c > 0 && !is_integer(Rational(b / 4)) && !is_integer(Rational((c - 2) / 4));
}

}  // namespace

TEST(Frac, Examples) {
  EXPECT_EQ(frac(make_rational(9, 4)), make_rational(1, 4));
  EXPECT_EQ(frac(make_rational(-1, 4)), make_rational(3, 4));
  EXPECT_EQ(frac(Rational(3)), Rational(0));
  EXPECT_EQ(frac(Rational(-3)), Rational(0));
}

TEST(Rohrlich, Examples) {
  EXPECT_TRUE(rohrlich_check({kHalf}).algebraic);
  const Verdict quarter = rohrlich_check({make_rational(1, 4)});
  EXPECT_FALSE(quarter.algebraic);
  ASSERT_FALSE(quarter.witnesses.empty());
  EXPECT_EQ(quarter.witnesses.front().first, 1);
  EXPECT_EQ(quarter.witnesses.front().second, make_rational(1, 4));
  EXPECT_TRUE(rohrlich_check({make_rational(1, 4), make_rational(3, 4)}).algebraic);
  EXPECT_TRUE(rohrlich_check({make_rational(1, 4), make_rational(3, 4)}).conditional);
  // Gamma(1/3) Gamma(2/3) = 2 pi / sqrt3
  EXPECT_TRUE(rohrlich_check({make_rational(1, 3), make_rational(2, 3)}).algebraic);
  // Gamma(1/3)^2 alone is not
  EXPECT_FALSE(rohrlich_check({make_rational(1, 3), make_rational(1, 3)}).algebraic);
}

TEST(Rohrlich, IntegerArguments) {
  // D = 1: only m = 1; Gamma(2) Gamma(3) is rational but r/2 = 1 != 0
  const RohrlichInstance inst = make_rohrlich_instance({Rational(2), Rational(3)});
  EXPECT_EQ(inst.D, 1);
  EXPECT_FALSE(rohrlich_check(inst).algebraic);
  EXPECT_THROW(rohrlich_check({Rational(0)}), Error);
  EXPECT_THROW(rohrlich_check({Rational(-2), kHalf}), Error);
  EXPECT_THROW(make_rohrlich_instance({}), Error);
}

TEST(Corollary, Examples) {
  EXPECT_TRUE(corollary_simple_check(1).algebraic);
  EXPECT_FALSE(corollary_simple_check(2).algebraic);
  EXPECT_FALSE(corollary_simple_check(3).algebraic);
  const Verdict v = corollary_simple_check(make_rational(3, 2));
  const Verdict w = corollary_pair_check(make_rational(3, 2), 1);
  EXPECT_EQ(v.algebraic, w.algebraic);
  EXPECT_EQ(v.witnesses, w.witnesses);
  for (const Rational& b : {make_rational(1, 5), make_rational(2, 5), kHalf, make_rational(3, 2)})
    EXPECT_TRUE(corollary_pair_check(b, 2 - b).algebraic) << to_string(b);
  EXPECT_TRUE(corollary_pair_check(make_rational(5, 3), make_rational(5, 3)).algebraic);
  EXPECT_FALSE(corollary_pair_check(2, 1).algebraic);
}

TEST(Corollary, Preconditions) {
  EXPECT_THROW(corollary_simple_check(4), Error);
  EXPECT_THROW(corollary_simple_check(8), Error);
  EXPECT_THROW(corollary_pair_check(1, 2), Error);
  EXPECT_THROW(corollary_pair_check(1, 6), Error);
  EXPECT_THROW(corollary_pair_check(-1, 1), Error);
  try {
    corollary_pair_check(4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(AlgebraicityProperty, FracLemma) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> num(-500, 500), den(1, 60);
  const Rational half = kHalf;
  for (int i = 0; i < 1000; ++i) {
    const Rational x = make_rational(num(rng), den(rng));
    const Rational fx = frac(x);
    ASSERT_GE(fx, 0);
    ASSERT_LT(fx, 1);
    if (!is_integer(x)) {
      ASSERT_EQ(frac(Rational(-x)), 1 - fx) << to_string(x);
    }
    // {1/2 + x} = {x} + 1/2 if {x} < 1/2, else {x} - 1/2
    ASSERT_EQ(frac(Rational(half + x)), fx < half ? Rational(fx + half) : Rational(fx - half)) << to_string(x);
    // {1/2 - x} = 1/2 - {x} if {x} <= 1/2, else 3/2 - {x}
    ASSERT_EQ(frac(Rational(half - x)), fx <= half ? Rational(half - fx) : Rational(make_rational(3, 2) - fx))
        << to_string(x);
  }
}

TEST(AlgebraicityProperty, SimpleIsPairWithOne) {
  for (long q = 1; q <= 12; ++q)
    for (long p = 1; p <= 8 * q; ++p) {
      const Rational b = make_rational(p, q);
      if (b.get_den() != q || !pair_preconditions(b, 1)) continue;
      const Verdict s = corollary_simple_check(b);
      const Verdict t = corollary_pair_check(b, 1);
      ASSERT_EQ(s.algebraic, t.algebraic) << to_string(b);
      ASSERT_EQ(s.witnesses, t.witnesses) << to_string(b);
    }
}

TEST(AlgebraicityProperty, TangentFamilySound) {
  for (long q = 1; q <= 12; ++q)
    for (long p = 1; p < 2 * q; ++p) {
      const Rational b = make_rational(p, q);
      if (b.get_den() != q || !pair_preconditions(b, 2 - b)) continue;
      EXPECT_TRUE(corollary_pair_check(b, 2 - b).algebraic) << to_string(b);
    }
}

TEST(AlgebraicityProperty, SymmetricUnderSwap) {
  // theorem_pair(b,c) theorem_pair(c,b) = 1, so the verdicts must agree.
  for (long q = 1; q <= 6; ++q)
    for (long p1 = 1; p1 < 4 * q; ++p1)
      for (long p2 = 1; p2 < 4 * q; ++p2) {
        const Rational b = make_rational(p1, q), c = make_rational(p2, q);
        if (!pair_preconditions(b, c) || !pair_preconditions(c, b)) continue;
        ASSERT_EQ(corollary_pair_check(b, c).algebraic, corollary_pair_check(c, b).algebraic)
            << to_string(b) << ", " << to_string(c);
      }
}

TEST(AlgebraicityProperty, PairAgreesWithRohrlich) {
  for (long q = 1; q <= 8; ++q)
    for (long p1 = 1; p1 < 4 * q; ++p1)
      for (long p2 = 1; p2 < 2 * q; ++p2) {
        const Rational b = make_rational(p1, q), c = make_rational(p2, q);
        if (!pair_preconditions(b, c)) continue;
        ASSERT_EQ(corollary_pair_check(b, c).algebraic, rohrlich_check(pair_rohrlich_instance(b, c)).algebraic)
            << to_string(b) << ", " << to_string(c);
      }
}

TEST(AlgebraicityProperty, ExplicitFormsAreAlgebraic) {
  // Whenever the simplified pair form has no gamma and no pi left, the
  // criterion must say algebraic.
  for (long q = 1; q <= 6; ++q)
    for (long p1 = 1; p1 < 4 * q; ++p1)
      for (long p2 = 1; p2 < 2 * q; ++p2) {
        const Rational b = make_rational(p1, q), c = make_rational(p2, q);
        if (!pair_preconditions(b, c)) continue;
        if (theorem_pair(b, c).is_algebraic_form()) {
          EXPECT_TRUE(corollary_pair_check(b, c).algebraic) << to_string(b) << ", " << to_string(c);
        }
      }
}
