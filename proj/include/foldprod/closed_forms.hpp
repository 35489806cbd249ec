#pragma once

// Closed forms of paperfolding products and of short gamma products, plus the
// catalog of identities the verifier runs.
//
// The balanced product prod_{n>=0} prod(n+a_i)/prod(n+b_i) with sum a = sum b
// equals prod Gamma(b_i)/prod Gamma(a_i). A paperfolding product with
// g(x) = (x+b)/(x+1) reduces to such a product, which gives
//     prod ((n+b)/(n+(b+1)/2))^eps_n = Gamma(1/4)^2/(pi sqrt2) * Gamma(1/2+b/4)/Gamma(b/4).
// Ratios for two parameters b, c give the pair form and, with c = 2-b, the
// tangent family tan(pi b/4).

#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "foldprod/error.hpp"
#include "foldprod/gamma_expr.hpp"
#include "foldprod/products.hpp"
#include "foldprod/radical.hpp"
#include "foldprod/rational.hpp"

namespace foldprod {

/// prod Gamma(b_j) / prod Gamma(a_i) for a balanced product (not simplified).
inline GammaExpr ww_product(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational sa = 0, sb = 0;
  for (const auto& x : a) sa += x;
  for (const auto& x : b) sb += x;
  if (a.size() != b.size() || sa != sb)
    throw Error(ErrorCode::UnbalancedSums, "root sums " + to_string(sa) + " and " + to_string(sb) + " differ");
  for (const auto* list : {&a, &b})
    for (const auto& x : *list)
      if (x <= 0 && is_integer(x)) throw Error(ErrorCode::PoleArgument, "root " + to_string(x) + " is a pole");
  GammaExpr e;
  for (const auto& x : b) e *= GammaExpr::gamma(x);
  for (const auto& x : a) e *= GammaExpr::gamma(x, -1);
  return e;
}

/// Closed form of an unsigned balanced ProductSpec.
inline GammaExpr ww_product(const ProductSpec& s) {
  if (s.weight() != Weight::Unsigned) throw Error(ErrorCode::DomainError, "ww_product needs an unsigned product");
  std::vector<Rational> a, b;
  for (const auto& x : s.num_roots()) a.push_back(x + s.start());
  for (const auto& x : s.den_roots()) b.push_back(x + s.start());
  return ww_product(a, b);
}

namespace detail {

inline void require_positive(const Rational& b, const char* name) {
  if (b <= 0) throw Error(ErrorCode::DomainError, std::string(name) + " must be positive, got " + to_string(b));
}

inline GammaExpr simple_raw(const Rational& b) {
  return GammaExpr::gamma(make_rational(1, 4), 2) * GammaExpr::pi_power(-2) * GammaExpr::two_power(make_rational(-1, 2)) *
         GammaExpr::gamma(make_rational(1, 2) + b / 4) * GammaExpr::gamma(b / 4, -1);
}

}  // namespace detail

/// prod ((n+b)/(n+(b+1)/2))^eps_n
inline ProductSpec theorem_simple_product(const Rational& b) {
  detail::require_positive(b, "b");
  return make_product({b}, {(b + 1) / 2}, 0, Weight::Paperfold);
}

/// Gamma(1/4)^2/(pi sqrt2) * Gamma(1/2+b/4)/Gamma(b/4), simplified.
inline GammaExpr theorem_simple(const Rational& b) {
  detail::require_positive(b, "b");
  return simplify(detail::simple_raw(b));
}

/// Second form 2^((1-b)/2) (Gamma(1/4)/Gamma(b/4))^2 Gamma(b/2)/sqrt(pi), simplified.
inline GammaExpr theorem_simple_alt(const Rational& b) {
  detail::require_positive(b, "b");
  GammaExpr e = GammaExpr::two_power((1 - b) / 2) * GammaExpr::gamma(make_rational(1, 4), 2) *
                GammaExpr::gamma(b / 4, -2) * GammaExpr::gamma(b / 2) * GammaExpr::pi_power(-1);
  return simplify(e);
}

/// prod ((n+b)(n+(c+1)/2)/((n+c)(n+(b+1)/2)))^eps_n
inline ProductSpec theorem_pair_product(const Rational& b, const Rational& c) {
  detail::require_positive(b, "b");
  detail::require_positive(c, "c");
  return make_product({b, (c + 1) / 2}, {c, (b + 1) / 2}, 0, Weight::Paperfold);
}

/// Gamma(c/4) Gamma(1/2+b/4) / (Gamma(b/4) Gamma(1/2+c/4)), simplified.
inline GammaExpr theorem_pair(const Rational& b, const Rational& c) {
  detail::require_positive(b, "b");
  detail::require_positive(c, "c");
  GammaExpr e = GammaExpr::gamma(c / 4) * GammaExpr::gamma(make_rational(1, 2) + b / 4) * GammaExpr::gamma(b / 4, -1) *
                GammaExpr::gamma(make_rational(1, 2) + c / 4, -1);
  return simplify(e);
}

namespace detail {

inline Rational t_argument(const Rational& b, long k) {
  const Rational p = Rational(Integer(1) << static_cast<mp_bitcnt_t>(k));
  return (b + p - 1) / p;
}

}  // namespace detail

/// T_k(b): theorem_simple at (b + 2^k - 1)/2^k.
inline GammaExpr t_k(const Rational& b, long k) {
  detail::require_positive(b, "b");
  if (k < 0) throw Error(ErrorCode::DomainError, "k must be >= 0");
  return theorem_simple(detail::t_argument(b, k));
}

/// T_k(b) T_{k+1}(b) ... T_{l-1}(b); requires k < l.
inline GammaExpr t_chain(const Rational& b, long k, long l) {
  detail::require_positive(b, "b");
  if (k < 0 || k >= l) throw Error(ErrorCode::DomainError, "t_chain needs 0 <= k < l");
  GammaExpr e;
  for (long i = k; i < l; ++i) e *= detail::simple_raw(detail::t_argument(b, i));
  return simplify(e);
}

/// prod ((n + (b+2^k-1)/2^k)/(n + (b+2^l-1)/2^l))^eps_n
inline ProductSpec t_chain_product(const Rational& b, long k, long l) {
  detail::require_positive(b, "b");
  if (k < 0 || k >= l) throw Error(ErrorCode::DomainError, "t_chain needs 0 <= k < l");
  return make_product({detail::t_argument(b, k)}, {detail::t_argument(b, l)}, 0, Weight::Paperfold);
}

namespace detail {

inline Rational u_to_b(const Rational& c, long j) {
  if (j < 0) throw Error(ErrorCode::DomainError, "j must be >= 0");
  const Rational p = Rational(Integer(1) << static_cast<mp_bitcnt_t>(j));
  if (c <= 1 - 1 / p) throw Error(ErrorCode::DomainError, "u_shift needs c > 1 - 2^-j, got c=" + to_string(c));
  return p * c + 1 - p;
}

}  // namespace detail

/// U_j(c) = prod ((n + 2^j c + 1 - 2^j)/(n + c))^eps_n = T_{0,j}(2^j c + 1 - 2^j).
inline GammaExpr u_shift(const Rational& c, long j) {
  const Rational b = detail::u_to_b(c, j);
  if (j == 0) return GammaExpr::one();
  return t_chain(b, 0, j);
}

inline ProductSpec u_shift_product(const Rational& c, long j) {
  const Rational b = detail::u_to_b(c, j);
  return make_product({b}, {c}, 0, Weight::Paperfold);
}

// ---------------------------------------------------------------------------
// Tangent family

namespace detail {

inline void require_tangent_b(const Rational& b) {
  if (b <= 0 || b >= 2) throw Error(ErrorCode::DomainError, "tangent product needs 0 < b < 2, got " + to_string(b));
}

}  // namespace detail

/// prod ((n+b)(2n+3-b)/((n+2-b)(2n+1+b)))^eps_n
inline ProductSpec tangent_product_spec(const Rational& b) {
  detail::require_tangent_b(b);
  return make_product({b, (3 - b) / 2}, {2 - b, (1 + b) / 2}, 0, Weight::Paperfold);
}

/// tan(pi b/4), obtained by simplifying the pair form with c = 2-b.
inline GammaExpr tangent_product(const Rational& b) {
  detail::require_tangent_b(b);
  return theorem_pair(b, 2 - b);
}

// ---------------------------------------------------------------------------
// Identity records

/// sum_{n>=0} eps_n/(n+1)^s.
struct VonHaeselerSeries {
  long s;
  friend bool operator==(const VonHaeselerSeries&, const VonHaeselerSeries&) = default;
};

/// (1/2) int_0^{pi/2} dphi / sqrt(2 - sin^2 phi).
struct EllipticHalfIntegral {
  friend bool operator==(const EllipticHalfIntegral&, const EllipticHalfIntegral&) = default;
};

using IdentityLhs = std::variant<ProductSpec, GammaExpr, VonHaeselerSeries, EllipticHalfIntegral>;
using IdentityRhs = std::variant<GammaExpr, AlgebraicLiteral>;

struct IdentityRecord {
  std::string id;
  IdentityLhs lhs;
  Rational lhs_factor = 1;  // the identity reads lhs_factor * lhs = rhs
  IdentityRhs rhs;
  std::string source;
};

inline std::string to_string(const IdentityLhs& lhs) {
  struct V {
    std::string operator()(const ProductSpec& s) const { return to_string(s); }
    std::string operator()(const GammaExpr& e) const { return to_string(e); }
    std::string operator()(const VonHaeselerSeries& v) const {
      return "sum_{n>=0} eps_n/(n+1)^" + std::to_string(v.s);
    }
    std::string operator()(const EllipticHalfIntegral&) const { return "(1/2) int_0^{pi/2} dphi/sqrt(2-sin^2 phi)"; }
  };
  return std::visit(V{}, lhs);
}

inline std::string to_string(const IdentityRhs& rhs) {
  if (const auto* e = std::get_if<GammaExpr>(&rhs)) return to_string(*e);
  return std::get<AlgebraicLiteral>(rhs).text();
}

/// The three products for tan((k-1)pi/4k), tan((k-2)pi/4k) and their product.
inline std::vector<IdentityRecord> tangent_triple(long k) {
  if (k < 3) throw Error(ErrorCode::DomainError, "tangent_triple needs k >= 3");
  const Rational b1 = make_rational(k - 1, k), b2 = make_rational(k - 2, k);
  const std::string tag = "tangent-k" + std::to_string(k);
  const std::string src = "tangent family, k=" + std::to_string(k);
  const ProductSpec p1 = tangent_product_spec(b1);
  const ProductSpec p2 = tangent_product_spec(b2);
  const GammaExpr t1 = simplify(GammaExpr::trig(TrigKind::Tan, make_rational(k - 1, 4 * k)));
  const GammaExpr t2 = simplify(GammaExpr::trig(TrigKind::Tan, make_rational(k - 2, 4 * k)));
  return {
      {tag + "-a", p1, 1, t1, src + ", b=(k-1)/k"},
      {tag + "-b", p2, 1, t2, src + ", b=(k-2)/k"},
      {tag + "-ab", p1.times(p2), 1, simplify(t1 * t2), src + ", product of both"},
  };
}

// ---------------------------------------------------------------------------
// Short gamma products

struct ShortProduct {
  GammaExpr lhs;  // the gamma product, unsimplified
  GammaExpr rhs;  // its closed value
};

namespace detail {

/// p if m = p^e, else 0.
inline long prime_power_base(long m) {
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      return m == 1 ? p : 0;
    }
  }
  return m;
}

inline long totient(long m) {
  long count = 0;
  for (long k = 1; k <= m; ++k)
    if (std::gcd(k, m) == 1) ++count;
  return count;
}

}  // namespace detail

/// prod_{1<=k<=m, gcd(k,m)=1} Gamma(k/m) = (2pi)^(phi(m)/2) / sqrt(p) for
/// m = p^e, (2pi)^(phi(m)/2) otherwise.
inline ShortProduct sandor_toth(long m) {
  if (m < 2) throw Error(ErrorCode::DomainError, "sandor_toth needs m >= 2");
  ShortProduct out;
  for (long k = 1; k <= m; ++k)
    if (std::gcd(k, m) == 1) out.lhs *= GammaExpr::gamma(make_rational(k, m));
  const long phi = detail::totient(m);
  out.rhs = GammaExpr::two_power(make_rational(phi, 2)) * GammaExpr::pi_power(phi);
  if (const long p = detail::prime_power_base(m); p != 0) out.rhs *= GammaExpr::surd(p, make_rational(-1, 2));
  out.rhs = simplify(out.rhs);
  return out;
}

struct NijenhuisResult {
  std::vector<long> A_n;  // subgroup of (Z/2nZ)^* generated by n+2, sorted
  long nu = 0;            // |A_n|
  long b_count = 0;       // #{x in A_n : x > n}
  GammaExpr product;      // prod_{x in A_n} Gamma(x/2n)
  GammaExpr value;        // 2^b_count pi^(nu/2)
};

/// Cyclic subgroup generated by n+2 in (Z/2nZ)^*; only the subgroup itself,
/// not its cosets.
inline NijenhuisResult nijenhuis(long n) {
  if (n <= 1 || n % 2 == 0) throw Error(ErrorCode::DomainError, "nijenhuis needs odd n > 1");
  NijenhuisResult r;
  const long mod = 2 * n;
  long x = 1;
  do {
    r.A_n.push_back(x);
    x = (x * (n + 2)) % mod;
  } while (x != 1);
  std::sort(r.A_n.begin(), r.A_n.end());
  r.nu = static_cast<long>(r.A_n.size());
  for (long a : r.A_n) {
    if (a > n) ++r.b_count;
    r.product *= GammaExpr::gamma(make_rational(a, mod));
  }
  r.value = simplify(GammaExpr::two_power(r.b_count) * GammaExpr::pi_power(r.nu));
  return r;
}

/// Gamma(1/24)Gamma(11/24)Gamma(19/24)Gamma(17/24) = 4 pi^2 sqrt3 and
/// Gamma(1/20)Gamma(9/20)Gamma(13/20)Gamma(17/20) = 4 pi^2 5^(1/4).
inline std::vector<ShortProduct> borwein_zucker() {
  auto prod = [](long q, std::initializer_list<long> ks) {
    GammaExpr e;
    for (long k : ks) e *= GammaExpr::gamma(make_rational(k, q));
    return e;
  };
  return {
      {prod(24, {1, 11, 19, 17}), simplify(GammaExpr::constant(4) * GammaExpr::pi_power(4) *
                                           GammaExpr::surd(3, make_rational(1, 2)))},
      {prod(20, {1, 9, 13, 17}), simplify(GammaExpr::constant(4) * GammaExpr::pi_power(4) *
                                          GammaExpr::surd(5, make_rational(1, 4)))},
  };
}

/// The two short-product relations plus the two paperfolding products they
/// yield through the pair form with (b,c) = (5/6,1/6) and (3/5,1/5).
inline std::vector<IdentityRecord> sporadic_identities() {
  const auto bz = borwein_zucker();
  return {
      {"short-24", bz[0].lhs, 1, bz[0].rhs, "Borwein-Zucker short gamma product, denominator 24"},
      {"short-20", bz[1].lhs, 1, bz[1].rhs, "Borwein-Zucker short gamma product, denominator 20"},
      {"sporadic-5/6-1/6", theorem_pair_product(make_rational(5, 6), make_rational(1, 6)), 1,
       AlgebraicLiteral("sqrt(3)*(1+sqrt(2))"), "pair form b=5/6, c=1/6 with the denominator-24 short product"},
      {"sporadic-3/5-1/5", theorem_pair_product(make_rational(3, 5), make_rational(1, 5)), 1,
       AlgebraicLiteral("5^(1/4)*(sqrt(6)*sqrt(5-sqrt(5))+sqrt(15)-sqrt(3))/(2*sqrt(3))"),
       "pair form b=3/5, c=1/5 with the denominator-20 short product"},
  };
}

/// Every displayed identity with a verifiable left side.
inline std::vector<IdentityRecord> identity_catalog() {
  const Rational half(1, 2);
  std::vector<IdentityRecord> out;
  out.push_back({"thue-morse", make_product({half}, {Rational(1)}, 0, Weight::ThueMorse), 1,
                 simplify(GammaExpr::two_power(make_rational(-1, 2))), "Woods-Robbins product"});
  out.push_back({"paperfold-B", make_product({Rational(0)}, {half}, 1, Weight::Paperfold), 1,
                 simplify(GammaExpr::gamma(make_rational(1, 4), 2) * GammaExpr::constant(make_rational(1, 8)) *
                          GammaExpr::two_power(make_rational(-1, 2)) * GammaExpr::pi_power(-1)),
                 "paperfolding product prod_{n>=1} (2n/(2n+1))^eps_n"});
  out.push_back({"wallis", make_product({Rational(0), Rational(0)}, {-half, half}, 1, Weight::Unsigned), 1,
                 simplify(ww_product({Rational(1), Rational(1)}, {half, make_rational(3, 2)})), "Wallis product"});
  out.push_back({"simple-b2", theorem_simple_product(2), 1, theorem_simple(2), "single-parameter family, b=2"});
  out.push_back({"simple-b3", theorem_simple_product(3), 1, theorem_simple(3), "single-parameter family, b=3"});
  out.push_back({"chain-T02-b3", t_chain_product(3, 0, 2), 1, t_chain(3, 0, 2),
                 "consecutive chain T_0(3) T_1(3)"});
  out.push_back({"tangent-b3/2", tangent_product_spec(make_rational(3, 2)), 1, AlgebraicLiteral("1+sqrt(2)"),
                 "tangent family, b=3/2"});
  out.push_back({"tangent-b1/5", tangent_product_spec(make_rational(1, 5)), 1,
                 AlgebraicLiteral("sqrt(5)+1-sqrt(5+2*sqrt(5))"), "tangent family, b=1/5"});
  out.push_back({"tangent-b2/5", tangent_product_spec(make_rational(2, 5)), 1,
                 AlgebraicLiteral("1/5*sqrt(5*(5-2*sqrt(5)))"), "tangent family, b=2/5"});
  const char* k3[] = {"sqrt(3)/3", "2-sqrt(3)", "2*sqrt(3)/3-1"};
  // k=5: tan(pi/5) for b=4/5, tan(3pi/20) for b=3/5.
  const char* k5[] = {"sqrt(5-2*sqrt(5))", "sqrt(5)-1-sqrt(5-2*sqrt(5))",
                      "sqrt(25-10*sqrt(5))-sqrt(5-2*sqrt(5))-5+2*sqrt(5)"};
  for (auto [k, lits] : {std::pair{3L, k3}, std::pair{5L, k5}}) {
    auto triple = tangent_triple(k);
    for (std::size_t i = 0; i < triple.size(); ++i) {
      triple[i].rhs = AlgebraicLiteral(lits[i]);
      out.push_back(triple[i]);
    }
  }
  for (auto& r : sporadic_identities()) out.push_back(r);

  // g(x) = x/(x+1): prod (g(n)/g(2n+1))^eps_n = 2B equals 3/2 prod_{n>=1} g(4n)/g(4n+2).
  const GFunctionSpec g = make_g_function({Rational(0)}, {Rational(1)});
  const LemmaReduction red = lemma_general_reduce(g);
  out.push_back({"lemma-chain-B", red.product, red.boundary_factor,
                 simplify(GammaExpr::gamma(make_rational(1, 4), 2) * GammaExpr::constant(make_rational(1, 4)) *
                          GammaExpr::two_power(make_rational(-1, 2)) * GammaExpr::pi_power(-1)),
                 "structural reduction g(n)/g(2n+1) -> g(4n)/g(4n+2) for g(x)=x/(x+1)"});
  out.push_back({"von-haeseler-s1", VonHaeselerSeries{1}, 1, simplify(GammaExpr::constant(half) * GammaExpr::pi_power(2)),
                 "von Haeseler series, s=1"});
  out.push_back({"elliptic-half", EllipticHalfIntegral{}, 1,
                 simplify(GammaExpr::gamma(make_rational(1, 4), 2) * GammaExpr::constant(make_rational(1, 8)) *
                          GammaExpr::two_power(make_rational(-1, 2)) * GammaExpr::pi_power(-1)),
                 "complete elliptic integral, AGM"});
  return out;
}

}  // namespace foldprod
