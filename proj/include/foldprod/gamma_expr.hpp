#pragma once

// Symbolic closed forms
//     q * 2^t * pi^(h/2) * prod Gamma(x_i)^e_i * prod trig(pi r_j)^f_j * prod s_k^(g_k)
// with q, t, r_j, g_k rational and h, e_i, f_j integers.
//
// simplify() applies, in order: the shift Gamma(x+1) = x Gamma(x) into (0,1],
// duplication on same-sign pairs (x, x+1/2) (largest x first, repeated to a
// fixpoint), then reflection of every argument in (1/2,1). Trig factors are
// rewritten as sin(pi s) with s in (0,1/2], exact values substituted, and
// sin(pi s)/sin(pi (1/2-s)) pairs merged into tan. Surds are split into primes
// with integer parts moved to q, and powers of two gathered into t.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "foldprod/error.hpp"
#include "foldprod/mpnum.hpp"
#include "foldprod/rational.hpp"

namespace foldprod {

struct GammaExpr {
  using TrigKey = std::pair<TrigKind, Rational>;

  Rational rational_factor = 1;
  Rational two_exponent = 0;
  long pi_half_exponent = 0;
  std::map<Rational, long> gamma_factors;
  std::map<TrigKey, long> trig_factors;
  std::map<Rational, Rational> surd_factors;  // radicand -> exponent

  static GammaExpr one() { return {}; }

  static GammaExpr constant(const Rational& q) {
    GammaExpr e;
    e.rational_factor = q;
    return e;
  }

  /// Gamma(x)^k. Non-positive non-integer x is shifted up to (0,1) with the
  /// rational factor prod 1/(x+i); non-positive integers are poles.
  static GammaExpr gamma(const Rational& x, long k = 1) {
    GammaExpr e;
    if (k == 0) return e;
    Rational y = x;
    if (y <= 0) {
      if (is_integer(y)) throw Error(ErrorCode::PoleArgument, "Gamma has a pole at " + to_string(x));
      Rational f = 1;
      while (y <= 0) {
        f *= y;
        y += 1;
      }
      e.rational_factor = pow_int(f, -k);
    }
    e.gamma_factors[y] = k;
    return e;
  }

  /// pi^(h/2)
  static GammaExpr pi_power(long half_exponent) {
    GammaExpr e;
    e.pi_half_exponent = half_exponent;
    return e;
  }

  static GammaExpr two_power(const Rational& t) {
    GammaExpr e;
    e.two_exponent = t;
    return e;
  }

  static GammaExpr trig(TrigKind kind, const Rational& r, long k = 1) {
    GammaExpr e;
    if (k != 0) e.trig_factors[{kind, r}] = k;
    return e;
  }

  static GammaExpr surd(const Rational& radicand, const Rational& exponent) {
    if (radicand <= 0) throw Error(ErrorCode::DomainError, "surd radicand must be positive");
    GammaExpr e;
    if (exponent != 0 && radicand != 1) e.surd_factors[radicand] = exponent;
    return e;
  }

  GammaExpr& operator*=(const GammaExpr& o) {
    rational_factor *= o.rational_factor;
    two_exponent += o.two_exponent;
    pi_half_exponent += o.pi_half_exponent;
    merge(gamma_factors, o.gamma_factors);
    merge(trig_factors, o.trig_factors);
    merge(surd_factors, o.surd_factors);
    return *this;
  }

  /// Integer power; negative powers need a nonzero rational factor.
  GammaExpr pow(long k) const {
    if (k < 0 && rational_factor == 0) throw Error(ErrorCode::DomainError, "inverse of zero expression");
    GammaExpr e;
    e.rational_factor = pow_int(rational_factor, k);
    e.two_exponent = two_exponent * k;
    e.pi_half_exponent = pi_half_exponent * k;
    if (k == 0) return e;
    for (const auto& [x, m] : gamma_factors) e.gamma_factors[x] = m * k;
    for (const auto& [key, m] : trig_factors) e.trig_factors[key] = m * k;
    for (const auto& [s, g] : surd_factors) e.surd_factors[s] = g * k;
    return e;
  }

  GammaExpr inverse() const { return pow(-1); }

  bool has_gamma() const { return !gamma_factors.empty(); }

  /// True when no transcendental factor is left: no Gamma and an even power
  /// of sqrt(pi) equal to zero.
  bool is_algebraic_form() const { return gamma_factors.empty() && pi_half_exponent == 0; }

  friend GammaExpr operator*(GammaExpr a, const GammaExpr& b) { return a *= b; }
  friend GammaExpr operator/(GammaExpr a, const GammaExpr& b) { return a *= b.inverse(); }
  friend bool operator==(const GammaExpr& a, const GammaExpr& b) {
    return a.rational_factor == b.rational_factor && a.two_exponent == b.two_exponent &&
           a.pi_half_exponent == b.pi_half_exponent && a.gamma_factors == b.gamma_factors &&
           a.trig_factors == b.trig_factors && a.surd_factors == b.surd_factors;
  }

 private:
  template <class K, class V>
  static void merge(std::map<K, V>& into, const std::map<K, V>& from) {
    for (const auto& [key, v] : from) {
      V& slot = into[key];
      slot += v;
      if (slot == 0) into.erase(key);
    }
  }
};

namespace detail {

inline void add_gamma(std::map<Rational, long>& m, const Rational& x, long k) {
  if (k == 0) return;
  long& slot = m[x];
  slot += k;
  if (slot == 0) m.erase(x);
}

template <class K>
inline void add_trig(std::map<K, long>& m, const K& key, long k) {
  if (k == 0) return;
  long& slot = m[key];
  slot += k;
  if (slot == 0) m.erase(key);
}

inline void add_surd(std::map<Rational, Rational>& m, const Rational& r, const Rational& g) {
  if (g == 0 || r == 1) return;
  Rational& slot = m[r];
  slot += g;
  if (slot == 0) m.erase(r);
}

// Gamma(x) = Gamma(y) * prod_{y <= z < x} z with y in (0,1].
inline bool shift_pass(GammaExpr& e) {
  bool changed = false;
  std::map<Rational, long> out;
  for (const auto& [x, k] : e.gamma_factors) {
    Rational y = x;
    if (y > 1) {
      Rational f = 1;
      while (y > 1) {
        y -= 1;
        f *= y;
      }
      e.rational_factor *= pow_int(f, k);
      changed = true;
    }
    if (y == 1) {
      changed = true;
      continue;
    }
    if (y == make_rational(1, 2)) {
      e.pi_half_exponent += k;
      changed = true;
      continue;
    }
    add_gamma(out, y, k);
  }
  e.gamma_factors = std::move(out);
  return changed;
}

// Gamma(x) Gamma(x+1/2) = 2^(1-2x) sqrt(pi) Gamma(2x), largest x first.
inline bool duplication_pass(GammaExpr& e) {
  const Rational half(1, 2);
  for (auto it = e.gamma_factors.rbegin(); it != e.gamma_factors.rend(); ++it) {
    const Rational x = it->first;
    if (x >= half) continue;
    auto partner = e.gamma_factors.find(x + half);
    if (partner == e.gamma_factors.end()) continue;
    const long a = it->second, b = partner->second;
    if ((a > 0) != (b > 0)) continue;
    const long t = a > 0 ? std::min(a, b) : std::max(a, b);
    const Rational xp = x + half;
    add_gamma(e.gamma_factors, x, -t);
    add_gamma(e.gamma_factors, xp, -t);
    add_gamma(e.gamma_factors, 2 * x, t);
    e.two_exponent += (1 - 2 * x) * t;
    e.pi_half_exponent += t;
    return true;
  }
  return false;
}

// Gamma(x) = pi / (sin(pi x) Gamma(1-x)) for x in (1/2, 1).
inline void reflection_pass(GammaExpr& e) {
  const Rational half(1, 2);
  std::vector<std::pair<Rational, long>> upper;
  for (const auto& [x, k] : e.gamma_factors)
    if (x > half) upper.emplace_back(x, k);
  for (const auto& [x, k] : upper) {
    add_gamma(e.gamma_factors, x, -k);
    add_gamma(e.gamma_factors, 1 - x, -k);
    e.pi_half_exponent += 2 * k;
    add_trig(e.trig_factors, GammaExpr::TrigKey{TrigKind::Sin, Rational(1 - x)}, -k);
  }
}

inline Rational mod_two(const Rational& r) {
  Rational y = r - Rational(2 * floor_of(r / 2));
  return y;
}

inline void trig_pass(GammaExpr& e) {
  const Rational half(1, 2);
  // Everything to sin(pi s) with s in (0, 1/2].
  std::map<Rational, long> sines;
  int sign = 1;
  auto add_sin = [&](Rational r, long k) {
    r = mod_two(r);
    if (r >= 1) {
      r -= 1;
      if (k % 2 != 0) sign = -sign;
    }
    if (r == 0) throw Error(ErrorCode::DomainError, "sin(pi*k) = 0 in a closed form");
    if (r > half) r = 1 - r;
    add_gamma(sines, r, k);
  };
  for (const auto& [key, k] : e.trig_factors) {
    const auto& [kind, r] = key;
    switch (kind) {
      case TrigKind::Sin: add_sin(r, k); break;
      case TrigKind::Cos: add_sin(r + half, k); break;
      case TrigKind::Tan:
        add_sin(r, k);
        add_sin(r + half, -k);
        break;
    }
  }
  e.trig_factors.clear();
  if (sign < 0) e.rational_factor = -e.rational_factor;

  // Exact values.
  for (auto it = sines.begin(); it != sines.end();) {
    const Rational& s = it->first;
    const long k = it->second;
    if (s == half) {
      it = sines.erase(it);
    } else if (s == make_rational(1, 6)) {
      e.two_exponent -= k;
      it = sines.erase(it);
    } else if (s == make_rational(1, 4)) {
      e.two_exponent -= make_rational(k, 2);
      it = sines.erase(it);
    } else if (s == make_rational(1, 3)) {
      e.two_exponent -= k;
      add_surd(e.surd_factors, 3, make_rational(k, 2));
      it = sines.erase(it);
    } else {
      ++it;
    }
  }

  // sin(pi s)^a sin(pi (1/2 - s))^b with opposite signs -> tan, positive power.
  std::map<GammaExpr::TrigKey, long> out;
  std::vector<Rational> keys;
  for (const auto& [s, k] : sines) keys.push_back(s);
  for (const Rational& s : keys) {
    auto it = sines.find(s);
    if (it == sines.end()) continue;
    auto other = sines.find(half - s);
    if (other != sines.end() && other != it && (it->second > 0) != (other->second > 0)) {
      const long a = it->second, b = other->second;
      const long t = std::min(std::abs(a), std::abs(b));
      const Rational top = a > 0 ? s : Rational(half - s);
      add_trig(out, GammaExpr::TrigKey{TrigKind::Tan, top}, t);
      const long a_left = a > 0 ? a - t : a + t;
      const long b_left = b > 0 ? b - t : b + t;
      const Rational other_s = other->first;
      sines.erase(it);
      sines.erase(other_s);
      if (a_left != 0) add_trig(out, GammaExpr::TrigKey{TrigKind::Sin, s}, a_left);
      if (b_left != 0) add_trig(out, GammaExpr::TrigKey{TrigKind::Sin, other_s}, b_left);
    }
  }
  for (const auto& [s, k] : sines) add_trig(out, GammaExpr::TrigKey{TrigKind::Sin, s}, k);
  e.trig_factors = std::move(out);
}

/// Prime factorisation by trial division; returns empty on overly large input.
inline std::vector<std::pair<Integer, long>> factor_small(Integer n) {
  std::vector<std::pair<Integer, long>> out;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 48) return {{n, 1}};
  for (Integer p = 2; p * p <= n; ++p) {
    long k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k > 0) out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline void surd_pass(GammaExpr& e) {
  std::map<Integer, Rational> primes;
  for (const auto& [r, g] : e.surd_factors) {
    for (const auto& [p, k] : factor_small(Integer(r.get_num()))) primes[p] += g * k;
    for (const auto& [p, k] : factor_small(Integer(r.get_den()))) primes[p] -= g * k;
  }
  e.surd_factors.clear();
  for (const auto& [p, g] : primes) {
    if (g == 0) continue;
    if (p == 2) {
      e.two_exponent += g;
      continue;
    }
    const Integer whole = floor_of(g);
    const Rational frac = g - Rational(whole);
    e.rational_factor *= pow_int(Rational(p), whole.get_si());
    add_surd(e.surd_factors, Rational(p), frac);
  }
}

inline void two_pass(GammaExpr& e) {
  if (e.rational_factor == 0) return;
  Integer num = e.rational_factor.get_num(), den = e.rational_factor.get_den();
  const long vn = num == 0 ? 0 : static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
  const long vd = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0));
  mpz_tdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(vn));
  mpz_tdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(vd));
  e.rational_factor = make_rational(num, den);
  e.rational_factor.canonicalize();
  e.two_exponent += vn - vd;
}

}  // namespace detail

/// Canonical form; see the header comment for the rule order.
inline GammaExpr simplify(GammaExpr e) {
  if (e.rational_factor == 0) return GammaExpr::constant(0);
  bool changed = true;
  while (changed) {
    changed = detail::shift_pass(e);
    changed = detail::duplication_pass(e) || changed;
  }
  detail::reflection_pass(e);
  detail::trig_pass(e);
  detail::surd_pass(e);
  detail::two_pass(e);
  return e;
}

namespace detail {

inline std::string exponent_text(const Rational& q) {
  if (is_integer(q) && q >= 0) return to_string(q);
  return "(" + to_string(q) + ")";
}

}  // namespace detail

/// Canonical text, e.g. "3 * 2^(-3) * pi^(1/2) * G(1/4)^2 * tan(pi*3/8)^1 * 5^(1/4)".
inline std::string to_string(const GammaExpr& e) {
  std::vector<std::string> parts;
  if (e.rational_factor != 1) parts.push_back(to_string(e.rational_factor));
  if (e.two_exponent != 0) parts.push_back("2^" + detail::exponent_text(e.two_exponent));
  if (e.pi_half_exponent != 0) parts.push_back("pi^" + detail::exponent_text(make_rational(e.pi_half_exponent, 2)));
  for (const auto& [x, k] : e.gamma_factors) parts.push_back("G(" + to_string(x) + ")^" + detail::exponent_text(k));
  for (const auto& [key, k] : e.trig_factors)
    parts.push_back(std::string(to_string(key.first)) + "(pi*" + to_string(key.second) + ")^" +
                    detail::exponent_text(k));
  for (const auto& [r, g] : e.surd_factors) {
    const std::string base = is_integer(r) ? to_string(r) : "(" + to_string(r) + ")";
    parts.push_back(base + "^" + detail::exponent_text(g));
  }
  if (parts.empty()) return "1";
  std::string out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " * " + parts[i];
  return out;
}

/// Numeric value, accumulated as a logarithm so large gamma powers cannot
/// overflow. Relative error stays below 2^-(bits-4).
inline BigReal eval_expr(const GammaExpr& e, const Precision& p) {
  const mpfr_prec_t bits = p.bits();
  if (e.rational_factor == 0) return BigReal(0, bits);
  const mpfr_prec_t w = bits + 32;
  const Precision pw(p.decimal_digits + 10, p.guard_digits);
  int sign = e.rational_factor > 0 ? 1 : -1;
  BigReal acc = log(BigReal(Rational(abs(e.rational_factor)), w));
  if (e.two_exponent != 0) {
    BigReal l2(w);
    mpfr_const_log2(l2.raw(), MPFR_RNDN);
    acc += l2 * BigReal(e.two_exponent, w);
  }
  if (e.pi_half_exponent != 0) acc += log(detail::pi_bits(w)) * BigReal(make_rational(e.pi_half_exponent, 2), w);
  for (const auto& [x, k] : e.gamma_factors) acc += detail::log_gamma_bits(x, w) * k;
  for (const auto& [key, k] : e.trig_factors) {
    BigReal t = trig_pi(key.first, key.second, pw);
    if (t.is_zero()) throw Error(ErrorCode::DomainError, "zero trig factor in closed form");
    if (t.sign() < 0 && k % 2 != 0) sign = -sign;
    acc += log(abs(t)) * k;
  }
  for (const auto& [r, g] : e.surd_factors) acc += log(BigReal(r, w)) * BigReal(g, w);
  BigReal v = exp(acc);
  if (sign < 0) v = -v;
  return v.rounded(bits);
}

}  // namespace foldprod
