#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "foldprod/closed_forms.hpp"
#include "foldprod/products.hpp"
#include "support.hpp"

using namespace foldprod;
using foldprod::test::close_to;

namespace {

const Rational kHalf = make_rational(1, 2);

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::UsageError;
}

// |value - oracle| must sit inside the certified bound (plus the oracle's own
// truncation at 50 digits).
::testing::AssertionResult certified_against(const CertifiedValue& v, const std::string& oracle) {
  const BigReal ref = BigReal::from_string(oracle, 256);
  const BigReal delta = abs(v.value.rounded(256) - ref);
  if (delta <= v.abs_error_bound + ten_pow_neg(49, 64)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "delta " << format_sci(delta, 3) << " exceeds bound "
                                       << format_sci(v.abs_error_bound, 3);
}

// Reference values: mpmath, 55 digits. A is a level-by-level gamma sum over
// 220 levels; the others are gamma quotients.
const char* kA = "0.36357755172695813220673965662742478875475878998495";
const char* kB = "0.65551438857302995261620989747277985342068873785791";
const char* kSqrtHalf = "0.70710678118654752440084436210484903928483593768847";
const char* kUnsigned = "0.86602540378443864676372317075293618347140262690519";
const char* kAlternating = "0.57735026918962576450914878050195745564760175127013";

ProductSpec spec_a() { return make_product({kHalf}, {Rational(1)}, 0, Weight::Paperfold); }
ProductSpec spec_b() { return make_product({Rational(0)}, {kHalf}, 1, Weight::Paperfold); }
ProductSpec spec_p() { return make_product({kHalf}, {Rational(1)}, 0, Weight::ThueMorse); }
ProductSpec spec_unsigned() {
  return make_product({make_rational(1, 3), make_rational(2, 3)}, {kHalf, kHalf}, 0, Weight::Unsigned);
}
ProductSpec spec_alt() { return make_product({make_rational(1, 3)}, {make_rational(2, 3)}, 0, Weight::AlternatingSign); }

}  // namespace

TEST(ProductSpec, Validation) {
  EXPECT_EQ(code_of([] { make_product({}, {}, 0, Weight::Paperfold); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { make_product({Rational(1)}, {Rational(1), Rational(2)}, 0, Weight::Paperfold); }),
            ErrorCode::UnequalFactorCounts);
  EXPECT_EQ(code_of([] { make_product({Rational(1)}, {Rational(2)}, -1, Weight::Paperfold); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { make_product({make_rational(-1, 2)}, {Rational(1)}, 0, Weight::Paperfold); }),
            ErrorCode::NonPositiveFactorOnTail);
  EXPECT_EQ(code_of([] { make_product({Rational(0)}, {Rational(1)}, 0, Weight::Paperfold); }),
            ErrorCode::NonPositiveFactorOnTail);
  EXPECT_EQ(code_of([] { make_product({Rational(1)}, {Rational(2)}, 0, Weight::Unsigned); }),
            ErrorCode::UnbalancedUnsignedProduct);
}

TEST(ProductSpec, CancelAndText) {
  const ProductSpec s = make_product({kHalf, Rational(1)}, {Rational(1), make_rational(3, 2)}, 0, Weight::Paperfold);
  EXPECT_EQ(s.num_roots(), std::vector<Rational>{kHalf});
  EXPECT_EQ(s.den_roots(), std::vector<Rational>{make_rational(3, 2)});
  EXPECT_EQ(to_string(spec_b()), "prod_{n>=1} (n/(n+1/2))^paperfold");
  EXPECT_EQ(to_string(flajolet_martin_r_spec()), "prod_{n>=1} ((n+1/4)(n+1/2)/((n)(n+3/4)))^thue-morse");
  EXPECT_TRUE(make_product({Rational(2)}, {Rational(2)}, 0, Weight::ThueMorse).is_trivial());
  EXPECT_EQ(spec_a().times(spec_a().reciprocal()).degree(), 1u);
  EXPECT_TRUE(spec_a().times(spec_a().reciprocal()).is_trivial());
}

TEST(ProductSpec, FromLinear) {
  // (2n)/(2n+1) = n/(n+1/2)
  EXPECT_EQ(from_linear({{2, 0}}, {{2, 1}}, 1, Weight::Paperfold), spec_b());
  EXPECT_THROW(from_linear({{2, 0}}, {{3, 1}}, 1, Weight::Paperfold), Error);
}

TEST(Weights, ParseAndTerms) {
  EXPECT_EQ(parse_weight("thue-morse"), Weight::ThueMorse);
  EXPECT_EQ(parse_weight("unsigned"), Weight::Unsigned);
  EXPECT_EQ(weight_term(Weight::AlternatingSign, 3), -1);
  EXPECT_EQ(weight_term(Weight::Paperfold, 2), -1);
}

TEST(EvalPartial, ExactSmallProducts) {
  const Precision p(30);
  // (1/2)^+1 (3/4)^+1 (5/6)^-1 = 9/20
  EXPECT_TRUE(close_to(eval_partial(spec_a(), 3, p), BigReal(make_rational(9, 20), 256), 35));
  // Thue-Morse: (1/2)^+1 (3/4)^-1 (5/6)^-1 (7/8)^+1
  EXPECT_TRUE(close_to(eval_partial(spec_p(), 4, p), BigReal(make_rational(1, 2) * make_rational(4, 3) *
                                                                 make_rational(6, 5) * make_rational(7, 8), 256), 35));
  EXPECT_TRUE(close_to(eval_partial(spec_b(), 1, p), BigReal(1, 64), 35));  // empty
  EXPECT_THROW(eval_partial(spec_b(), 0, p), Error);
}

TEST(EvalCertified, PaperfoldA) { EXPECT_TRUE(certified_against(eval_certified(spec_a(), Precision(50)), kA)); }

TEST(EvalCertified, PaperfoldB) { EXPECT_TRUE(certified_against(eval_certified(spec_b(), Precision(50)), kB)); }

TEST(EvalCertified, ThueMorseWoodsRobbins) {
  EXPECT_TRUE(certified_against(eval_certified(spec_p(), Precision(50)), kSqrtHalf));
}

TEST(EvalCertified, Unsigned) { EXPECT_TRUE(certified_against(eval_certified(spec_unsigned(), Precision(50)), kUnsigned)); }

TEST(EvalCertified, Alternating) { EXPECT_TRUE(certified_against(eval_certified(spec_alt(), Precision(50)), kAlternating)); }

TEST(EvalCertified, BoundIsTight) {
  for (const auto& s : {spec_a(), spec_b(), spec_p()}) {
    const CertifiedValue v = eval_certified(s, Precision(40));
    EXPECT_LE(v.abs_error_bound, ten_pow_neg(40, 64)) << to_string(s);
  }
}

TEST(EvalCertified, WeightMismatch) {
  EXPECT_THROW(eval_thue_morse_certified(spec_a(), Precision(20)), Error);
  EXPECT_THROW(eval_paperfold_certified(spec_p(), Precision(20)), Error);
}

TEST(EvalCertified, TrivialProduct) {
  const ProductSpec one = make_product({Rational(3)}, {Rational(3)}, 0, Weight::Paperfold);
  EXPECT_TRUE(close_to(eval_certified(one, Precision(20)).value, BigReal(1, 64), 25));
}

TEST(ProductsProperty, MonotoneInPrecision) {
  const std::vector<ProductSpec> specs = {spec_a(), spec_b(), spec_p(), spec_unsigned(), spec_alt(),
                                          tangent_product_spec(make_rational(2, 5)), flajolet_martin_q_spec()};
  for (const auto& s : specs) {
    const CertifiedValue lo = eval_certified(s, Precision(20));
    const CertifiedValue hi = eval_certified(s, Precision(40));
    EXPECT_LE(abs(lo.value - hi.value), lo.abs_error_bound + hi.abs_error_bound) << to_string(s);
    EXPECT_LE(hi.abs_error_bound, lo.abs_error_bound) << to_string(s);
  }
}

TEST(ProductsProperty, OracleEquivalence) {
  const Precision p(20);
  const std::vector<ProductSpec> specs = {spec_a(), spec_b(), spec_p(), spec_unsigned(), spec_alt(),
                                          tangent_product_spec(make_rational(3, 2)), theorem_simple_product(3)};
  for (const auto& s : specs) {
    const BigReal partial = eval_partial(s, 1000000, p);
    const BigReal certified = eval_certified(s, p).value;
    EXPECT_LE(abs(partial - certified), ten_pow_neg(4, 64)) << to_string(s);
  }
}

TEST(LemmaGeneral, SignedEqualsReduced) {
  // g(x) = (x+b)/(x+1)
  const Precision p(40);
  for (const Rational& b : {kHalf, Rational(2), Rational(3), make_rational(7, 3)}) {
    const GFunctionSpec g = make_g_function({b}, {Rational(1)});
    const LemmaReduction signed_form = lemma_general_signed(g);
    const LemmaReduction reduced = lemma_general_reduce(g);
    const CertifiedValue lhs = scale(eval_certified(signed_form.product, p), signed_form.boundary_factor, p.bits());
    const BigReal rhs = eval_expr(ww_product(reduced.product) * GammaExpr::constant(reduced.boundary_factor), p);
    EXPECT_TRUE(close_to(lhs.value, rhs, 35)) << to_string(b);
  }
}

TEST(LemmaGeneral, ZeroRootBoundary) {
  const Precision p(40);
  const GFunctionSpec g = make_g_function({Rational(0)}, {Rational(1)});
  const LemmaReduction signed_form = lemma_general_signed(g);
  const LemmaReduction reduced = lemma_general_reduce(g);
  EXPECT_EQ(signed_form.product.start(), 1);
  EXPECT_EQ(reduced.boundary_factor, make_rational(3, 2));  // g(0)/g(2) with g(0) = 1
  const BigReal lhs = scale(eval_certified(signed_form.product, p), signed_form.boundary_factor, p.bits()).value;
  const BigReal rhs = eval_expr(ww_product(reduced.product) * GammaExpr::constant(reduced.boundary_factor), p);
  EXPECT_TRUE(close_to(lhs, rhs, 35));
}

TEST(LemmaGeneral, InvalidG) {
  EXPECT_EQ(code_of([] { make_g_function({Rational(-1)}, {Rational(1)}); }), ErrorCode::InvalidG);
  EXPECT_EQ(code_of([] { make_g_function({Rational(1)}, {Rational(0)}); }), ErrorCode::InvalidG);
  EXPECT_EQ(code_of([] { make_g_function({Rational(1)}, {}); }), ErrorCode::InvalidG);
}

TEST(FlajoletMartin, TwoRoutesAgree) {
  const FlajoletMartin fm = flajolet_martin(Precision(30));
  EXPECT_LE(abs(fm.R.value - fm.R_via_Q.value), fm.R.abs_error_bound + fm.R_via_Q.abs_error_bound);
  // Q by brute force over 2^20 terms
  const BigReal partial = eval_partial(flajolet_martin_q_spec(), 1 << 20, Precision(20));
  EXPECT_LE(abs(partial - fm.Q.value), ten_pow_neg(5, 64));
}

TEST(VonHaeseler, Values) {
  const Precision p(40);
  const VonHaeseler s1 = von_haeseler(1, p);
  EXPECT_TRUE(close_to(s1.lhs.value, "1.5707963267948966192313216916397514420985846996876", 35));
  EXPECT_TRUE(close_to(s1.rhs.value, "1.5707963267948966192313216916397514420985846996876", 35));
  // 4/3 Catalan and 8/7 * pi^3/32
  EXPECT_TRUE(close_to(von_haeseler(2, p).lhs.value, "1.2212874589029586867394713532431788143655324990422", 35));
  EXPECT_TRUE(close_to(von_haeseler(3, p).rhs.value, "1.1073670242964221491241541095393355429366174487816", 35));
  EXPECT_THROW(von_haeseler(0, p), Error);
}
