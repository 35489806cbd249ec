#pragma once

// Fractional-part criteria for algebraicity, conditional on Rohrlich's
// conjecture: prod Gamma(a_i) is an algebraic multiple of pi^(r/2) iff
// sum_i {m a_i} = r/2 for every m in [1, D) prime to the common denominator D.
// Everything here is exact rational arithmetic; the strict and non-strict
// comparisons against 1/2 are where floating point would go wrong.

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "foldprod/error.hpp"
#include "foldprod/rational.hpp"

namespace foldprod {

/// x - floor(x), in [0, 1).
inline Rational frac(const Rational& x) { return x - Rational(floor_of(x)); }

struct RohrlichInstance {
  std::vector<Rational> args;
  Integer D;
};

inline RohrlichInstance make_rohrlich_instance(std::vector<Rational> args) {
  if (args.empty()) throw Error(ErrorCode::DomainError, "Rohrlich instance needs at least one argument");
  for (const auto& a : args)
    if (a <= 0 && is_integer(a)) throw Error(ErrorCode::PoleArgument, "argument " + to_string(a) + " is a pole");
  RohrlichInstance inst{std::move(args), 1};
  inst.D = lcm_of_denominators(inst.args);
  return inst;
}

struct Verdict {
  bool algebraic = true;
  std::vector<std::pair<long, Rational>> witnesses;  // failing m with the offending fractional value
  bool conditional = true;                           // rests on Rohrlich's conjecture
};

inline Verdict rohrlich_check(const RohrlichInstance& inst) {
  for (const auto& a : inst.args)
    if (a <= 0 && is_integer(a)) throw Error(ErrorCode::PoleArgument, "argument " + to_string(a) + " is a pole");
  if (!inst.D.fits_slong_p()) throw Error(ErrorCode::DomainError, "common denominator too large");
  const long D = inst.D.get_si();
  const Rational half_r = make_rational(static_cast<long>(inst.args.size()), 2);
  Verdict v;
  const long m_end = D == 1 ? 2 : D;
  for (long m = 1; m < m_end; ++m) {
    if (std::gcd(m, D) != 1) continue;
    Rational sum = 0;
    for (const auto& a : inst.args) sum += frac(a * m);
    if (sum != half_r) v.witnesses.emplace_back(m, sum);
  }
  v.algebraic = v.witnesses.empty();
  return v;
}

inline Verdict rohrlich_check(const std::vector<Rational>& args) {
  return rohrlich_check(make_rohrlich_instance(args));
}

/// Algebraicity of the pair product for (b, c): for every m in [1, 4a) prime
/// to 4a (a the common denominator of b and c),
///     ({mb/4} < 1/2 and {mc/4} <= 1/2) or ({mb/4} >= 1/2 and {mc/4} > 1/2).
inline Verdict corollary_pair_check(const Rational& b, const Rational& c) {
  if (b <= 0 || c <= 0) throw Error(ErrorCode::DomainError, "b and c must be positive");
  if (is_integer(Rational(b / 4)))
    throw Error(ErrorCode::DomainError, "b/4 must not be an integer (b=" + to_string(b) + ")");
  if (is_integer(Rational((c - 2) / 4)))
    throw Error(ErrorCode::DomainError, "(c-2)/4 must not be an integer (c=" + to_string(c) + ")");
  const Integer a = lcm(Integer(b.get_den()), Integer(c.get_den()));
  if (!a.fits_slong_p() || a > (1L << 40)) throw Error(ErrorCode::DomainError, "denominator too large");
  const long modulus = 4 * a.get_si();
  const Rational half(1, 2);
  Verdict v;
  for (long m = 1; m < modulus; ++m) {
    if (std::gcd(m, modulus) != 1) continue;
    const Rational fb = frac(b * m / 4);
    const Rational fc = frac(c * m / 4);
    const bool ok = (fb < half && fc <= half) || (fb >= half && fc > half);
    if (!ok) v.witnesses.emplace_back(m, fb);
  }
  v.algebraic = v.witnesses.empty();
  return v;
}

/// The single-parameter family is the pair with c = 1.
inline Verdict corollary_simple_check(const Rational& b) { return corollary_pair_check(b, 1); }

/// The four gamma arguments whose product is the pair closed form times
/// Gamma(1-b/4) Gamma(1/2-c/4) (an algebraic multiple of pi^2 by
/// reflection); valid for 0 < b < 4, 0 < c < 2.
inline RohrlichInstance pair_rohrlich_instance(const Rational& b, const Rational& c) {
  if (!(b > 0 && b < 4 && c > 0 && c < 2)) throw Error(ErrorCode::DomainError, "needs 0 < b < 4 and 0 < c < 2");
  const Rational half(1, 2);
  return make_rohrlich_instance({c / 4, half - c / 4, half + b / 4, 1 - b / 4});
}

}  // namespace foldprod
