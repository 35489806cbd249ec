#include <gtest/gtest.h>

#include "foldprod/mpnum.hpp"
#include "support.hpp"

using namespace foldprod;
using foldprod::test::close_to;

// Reference values: mpmath at 55 digits.

TEST(Mpnum, PrecisionValidation) {
  EXPECT_THROW(Precision(5), Error);
  EXPECT_THROW(Precision(30, 2), Error);
  EXPECT_GE(Precision(30).bits(), 132);
}

TEST(Mpnum, Constants) {
  const Precision p(50);
  EXPECT_TRUE(close_to(const_pi(p), "3.1415926535897932384626433832795028841971693993751", 48));
  EXPECT_TRUE(close_to(const_euler_gamma(p), "0.57721566490153286060651209008240243104215933593992", 48));
  EXPECT_TRUE(close_to(const_log2(p), "0.69314718055994530941723212145817656807550013436026", 48));
}

TEST(Mpnum, GammaAtRationals) {
  const Precision p(50);
  EXPECT_TRUE(close_to(gamma(make_rational(1, 3), p), "2.6789385347077476336556929409746776441286893779573", 48));
  EXPECT_TRUE(close_to(gamma(make_rational(1, 4), p), "3.6256099082219083119306851558676720029951676828801", 48));
  EXPECT_TRUE(close_to(gamma(make_rational(1, 24), p), "23.462487693183319881385711469586294930433365134005", 46));
  EXPECT_TRUE(close_to(gamma(make_rational(7, 2), p), "3.3233509704478425511840640312646472177454052302295", 48));
  EXPECT_TRUE(close_to(gamma(make_rational(41, 4), p), "639232.59877957679428375840187608496715342528499682", 42));
}

TEST(Mpnum, LogGamma) {
  const Precision p(50);
  EXPECT_TRUE(close_to(log_gamma(make_rational(1, 7), p), "1.8791692715958358364559564093450710543995426217203", 48));
  EXPECT_TRUE(close_to(log_gamma(make_rational(1000, 3), p), "1601.0622804759817794738831819710257204722201093876", 45));
}

TEST(Mpnum, GammaPoles) {
  const Precision p(30);
  EXPECT_THROW(gamma(Rational(0), p), Error);
  EXPECT_THROW(gamma(Rational(-3), p), Error);
}

TEST(Mpnum, GammaOfBigReal) {
  const Precision p(40);
  const BigReal x(make_rational(1, 4), p.bits());
  EXPECT_TRUE(close_to(gamma(x, p), "3.6256099082219083119306851558676720029951676828801", 38));
}

TEST(Mpnum, Trig) {
  const Precision p(50);
  EXPECT_TRUE(close_to(trig_pi(TrigKind::Sin, make_rational(1, 7), p),
                       "0.43388373911755812047576833284835875460999072778746", 48));
  EXPECT_TRUE(close_to(trig_pi(TrigKind::Tan, make_rational(3, 8), p),
                       "2.4142135623730950488016887242096980785696718753769", 48));
  EXPECT_TRUE(close_to(trig_pi(TrigKind::Cos, make_rational(5, 12), p),
                       "0.25881904510252076234889883762404832834906890131993", 48));
  // exact argument reduction
  EXPECT_TRUE(close_to(trig_pi(TrigKind::Sin, make_rational(1000001, 7), p),
                       trig_pi(TrigKind::Sin, make_rational(1000001 % 14, 7), p), 48));
  EXPECT_TRUE(trig_pi(TrigKind::Sin, Rational(5), p).is_zero());
  EXPECT_THROW(trig_pi(TrigKind::Tan, make_rational(3, 2), p), Error);
}

TEST(Mpnum, AgmAndEllipticK) {
  const Precision p(50);
  const BigReal one(1, p.bits());
  EXPECT_TRUE(close_to(agm(one, sqrt(BigReal(2, p.bits())), p), "1.1981402347355922074399224922803238782272126632157", 48));
  EXPECT_TRUE(close_to(elliptic_k_agm(BigReal(make_rational(1, 2), p.bits()), p),
                       "1.8540746773013719184338503471952600462175988235218", 48));
  EXPECT_THROW(elliptic_k_agm(one, p), Error);
  EXPECT_THROW(agm(one, BigReal(0, p.bits()), p), Error);
}

TEST(Mpnum, Formatting) {
  const BigReal x(make_rational(1, 3), 128);
  EXPECT_EQ(format_decimal(x, 5), "0.33333");
  EXPECT_EQ(format_sci(BigReal(make_rational(1, 1000), 64), 2), "1.0e-03");
  EXPECT_THROW(BigReal::from_string("abc", 64), Error);
}

TEST(Mpnum, LogOfInteger) {
  EXPECT_THROW(log_of(Integer(0), 64), Error);
  EXPECT_TRUE(log_of(Integer(1), 64).is_zero());
}

namespace {

std::vector<Rational> grid() {
  std::vector<Rational> z;
  for (long k = 1; k <= 11; ++k) z.push_back(make_rational(k, 12));
  for (long k : {1L, 3L, 9L}) z.push_back(make_rational(k, 20));
  return z;
}

}  // namespace

TEST(MpnumProperty, Reflection) {
  const Precision p(50);
  const BigReal pi = const_pi(p);
  for (const auto& z : grid()) {
    const BigReal lhs = gamma(z, p) * gamma(Rational(1 - z), p);
    const BigReal rhs = pi / trig_pi(TrigKind::Sin, z, p);
    EXPECT_TRUE(close_to(lhs, rhs, 40)) << to_string(z);
  }
}

TEST(MpnumProperty, Duplication) {
  const Precision p(50);
  const BigReal sqrt_pi = sqrt(const_pi(p));
  for (const auto& z : grid()) {
    const BigReal two_pow = pow(BigReal(2, p.bits()), BigReal(Rational(2 * z - 1), p.bits()));
    const BigReal lhs = two_pow * gamma(z, p) * gamma(Rational(z + make_rational(1, 2)), p);
    const BigReal rhs = sqrt_pi * gamma(Rational(2 * z), p);
    EXPECT_TRUE(close_to(lhs, rhs, 40)) << to_string(z);
  }
}

TEST(MpnumProperty, Recurrence) {
  const Precision p(40);
  for (long q = 2; q <= 9; ++q)
    for (long k = 1; k < 3 * q; ++k) {
      const Rational x = make_rational(k, q);
      if (is_integer(x)) continue;
      EXPECT_TRUE(close_to(gamma(Rational(x + 1), p) / gamma(x, p), BigReal(x, p.bits()), 35)) << to_string(x);
    }
}
