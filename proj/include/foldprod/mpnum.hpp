#pragma once

// Arbitrary-precision reals and the special functions the closed forms need.
//
// BigReal is a value type over an MPFR number with its own precision. Binary
// operations round to nearest at the larger precision of the two operands, so
// each elementary operation contributes at most half an ulp of relative error.
//
// Gamma is evaluated as exp(log_gamma). log_gamma shifts the argument to
// z = x + m >= z_min with the shift product kept exact for rational x, then
// sums the Stirling series
//     log Gamma(z) = (z - 1/2) log z - z + log(2 pi)/2 + sum_k B_2k / (2k (2k-1) z^(2k-1)).
// For real z > 0 the remainder after any term is bounded by the first omitted
// term, which is what the loop tests against.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "foldprod/error.hpp"
#include "foldprod/rational.hpp"

namespace foldprod {

/// Target accuracy of a computation: decimal_digits certified digits, computed
/// with guard_digits of internal slack.
struct Precision {
  int decimal_digits = 30;
  int guard_digits = 10;

  Precision() = default;
  explicit Precision(int digits, int guard = 10) : decimal_digits(digits), guard_digits(guard) {
    if (digits < 10) throw Error(ErrorCode::DomainError, "decimal_digits must be >= 10");
    if (guard < 10) throw Error(ErrorCode::DomainError, "guard_digits must be >= 10");
  }

  /// ceil((decimal_digits + guard_digits) * log2(10))
  mpfr_prec_t bits() const {
    return static_cast<mpfr_prec_t>(std::ceil((decimal_digits + guard_digits) * 3.3219280948873623));
  }

  Precision with_guard(int guard) const { return Precision(decimal_digits, guard); }
};

class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits = 128) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  BigReal(long value, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  BigReal(const Rational& value, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  BigReal(const Integer& value, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }
  static BigReal from_double(double value, mpfr_prec_t bits) {
    BigReal r(bits);
    mpfr_set_d(r.v_, value, MPFR_RNDN);
    return r;
  }
  static BigReal from_string(const std::string& text, mpfr_prec_t bits) {
    BigReal r(bits);
    if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0)
      throw Error(ErrorCode::ParseError, "not a decimal number: '" + text + "'");
    return r;
  }

  BigReal(const BigReal& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  BigReal(BigReal&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  BigReal& operator=(BigReal other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr raw() { return v_; }

  /// Same value rounded to a new precision.
  BigReal rounded(mpfr_prec_t bits) const {
    BigReal r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  /// Base-2 exponent e with |x| in [2^(e-1), 2^e); very negative for zero.
  long exponent2() const { return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_)); }

  BigReal& operator+=(const BigReal& o) { return apply(o, mpfr_add); }
  BigReal& operator-=(const BigReal& o) { return apply(o, mpfr_sub); }
  BigReal& operator*=(const BigReal& o) { return apply(o, mpfr_mul); }
  BigReal& operator/=(const BigReal& o) { return apply(o, mpfr_div); }

  friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
  friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
  friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
  friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }

  friend BigReal operator*(BigReal a, long s) {
    mpfr_mul_si(a.v_, a.v_, s, MPFR_RNDN);
    return a;
  }
  friend BigReal operator/(BigReal a, long s) {
    mpfr_div_si(a.v_, a.v_, s, MPFR_RNDN);
    return a;
  }
  friend BigReal operator+(BigReal a, long s) {
    mpfr_add_si(a.v_, a.v_, s, MPFR_RNDN);
    return a;
  }
  friend BigReal operator-(BigReal a, long s) {
    mpfr_sub_si(a.v_, a.v_, s, MPFR_RNDN);
    return a;
  }
  friend BigReal operator-(BigReal a) {
    mpfr_neg(a.v_, a.v_, MPFR_RNDN);
    return a;
  }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  template <class Fn>
  BigReal unary(Fn fn) const {
    BigReal r(precision());
    fn(r.v_, v_, MPFR_RNDN);
    return r;
  }

 private:
  BigReal& apply(const BigReal& o, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)) {
    const mpfr_prec_t p = std::max(precision(), o.precision());
    if (p > precision()) mpfr_prec_round(v_, p, MPFR_RNDN);
    fn(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

inline BigReal abs(const BigReal& x) { return x.unary(mpfr_abs); }
inline BigReal sqrt(const BigReal& x) { return x.unary(mpfr_sqrt); }
inline BigReal log(const BigReal& x) { return x.unary(mpfr_log); }
inline BigReal exp(const BigReal& x) { return x.unary(mpfr_exp); }
inline BigReal expm1(const BigReal& x) { return x.unary(mpfr_expm1); }

inline BigReal pow(const BigReal& base, const BigReal& e) {
  BigReal r(std::max(base.precision(), e.precision()));
  mpfr_pow(r.raw(), base.get(), e.get(), MPFR_RNDN);
  return r;
}

inline BigReal ldexp(const BigReal& x, long e) {
  BigReal r = x;
  mpfr_mul_2si(r.raw(), r.get(), e, MPFR_RNDN);
  return r;
}

inline BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

/// 10^(-digits) at the given precision.
inline BigReal ten_pow_neg(int digits, mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_ui_pow_ui(r.raw(), 10, static_cast<unsigned long>(digits), MPFR_RNDN);
  mpfr_ui_div(r.raw(), 1, r.get(), MPFR_RNDN);
  return r;
}

inline BigReal log_of(const Integer& z, mpfr_prec_t bits) {
  if (z <= 0) throw Error(ErrorCode::NonPositiveArgument, "log of non-positive integer " + z.get_str());
  return log(BigReal(z, bits));
}

/// Scientific notation with sig significant digits, e.g. "1.2345e-07".
inline std::string format_sci(const BigReal& x, int sig) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RNe", std::max(sig - 1, 0), x.get());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

/// Plain decimal with sig significant digits; exponent form only for very
/// small or large magnitudes.
inline std::string format_decimal(const BigReal& x, int sig) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RNg", std::max(sig, 1), x.get());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

// ---------------------------------------------------------------------------
// Constants

inline BigReal const_pi(const Precision& p) {
  BigReal r(p.bits());
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

inline BigReal const_euler_gamma(const Precision& p) {
  BigReal r(p.bits());
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

inline BigReal const_log2(const Precision& p) {
  BigReal r(p.bits());
  mpfr_const_log2(r.raw(), MPFR_RNDN);
  return r;
}

namespace detail {

inline BigReal pi_bits(mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

/// Even-index Bernoulli numbers B_0, B_2, ..., B_{2(count-1)}, exact.
/// Tangent numbers by the Brent-Harvey integer recurrence, then
/// B_2k = (-1)^(k-1) 2k T_k / (4^k (4^k - 1)).
class BernoulliTable {
 public:
  static BernoulliTable& instance() {
    static BernoulliTable table;
    return table;
  }

  /// Returns B_2k; grows the cache on demand. Thread-safe.
  Rational even(std::size_t k) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (k >= values_.size()) rebuild(std::max<std::size_t>(2 * values_.size(), k + 1));
    return values_[k];
  }

 private:
  BernoulliTable() { rebuild(64); }

  void rebuild(std::size_t count) {
    const std::size_t n = count;  // tangent numbers T_1..T_{n-1}
    std::vector<Integer> t(n + 1);
    t[1] = 1;
    for (std::size_t k = 2; k <= n; ++k) t[k] = static_cast<unsigned long>(k - 1) * t[k - 1];
    for (std::size_t k = 2; k <= n; ++k)
      for (std::size_t j = k; j <= n; ++j)
        t[j] = static_cast<unsigned long>(j - k) * t[j - 1] + static_cast<unsigned long>(j - k + 2) * t[j];
    values_.assign(count, Rational(0));
    values_[0] = 1;
    for (std::size_t k = 1; k < count; ++k) {
      Integer four_k;
      mpz_ui_pow_ui(four_k.get_mpz_t(), 4, static_cast<unsigned long>(k));
      Rational b = make_rational(Integer(static_cast<unsigned long>(2 * k)) * t[k], four_k * (four_k - 1));
      values_[k] = (k % 2 == 1) ? b : Rational(-b);
    }
  }

  std::mutex mutex_;
  std::vector<Rational> values_;
};

/// Stirling series for log Gamma(z), z large. Stops at the first term below
/// 2^-bits; that term bounds the remainder.
inline BigReal stirling_log_gamma(const BigReal& z, mpfr_prec_t bits) {
  const BigReal half(make_rational(1, 2), bits);
  BigReal two_pi = pi_bits(bits) * 2L;
  BigReal s = (z - half) * log(z) - z + log(two_pi) / 2L;
  const BigReal z2inv = BigReal(1L, bits) / (z * z);
  BigReal zpow = BigReal(1L, bits) / z;
  auto& table = BernoulliTable::instance();
  BigReal previous(bits);
  for (std::size_t k = 1;; ++k) {
    const Rational coeff = table.even(k) / Rational(static_cast<unsigned long>(2 * k * (2 * k - 1)));
    BigReal term = BigReal(coeff, bits) * zpow;
    if (term.exponent2() < -static_cast<long>(bits)) break;
    if (k > 1 && abs(term) > abs(previous))
      throw Error(ErrorCode::PrecisionUnreachable, "Stirling series diverged before reaching target");
    s += term;
    previous = term;
    zpow *= z2inv;
  }
  return s;
}

inline long shift_count(const BigReal& x, mpfr_prec_t bits) {
  const double target = std::max<double>(static_cast<double>(bits), 20.0);
  const double xv = x.to_double();
  return xv >= target ? 0 : static_cast<long>(std::ceil(target - xv));
}

}  // namespace detail

namespace detail {

/// log Gamma(x) for rational x > 0, rounded to `bits`. The shift product
/// prod (x+k) is formed exactly in integers before a single logarithm.
inline BigReal log_gamma_bits(const Rational& x, mpfr_prec_t bits) {
  if (x <= 0) throw Error(ErrorCode::NonPositiveArgument, "gamma argument " + to_string(x) + " is not positive");
  const mpfr_prec_t w = bits + 32;
  const long m = shift_count(BigReal(x, 64), w);
  const Rational z = x + Rational(m);
  BigReal result = stirling_log_gamma(BigReal(z, w), w);
  if (m > 0) {
    const Integer& num = x.get_num();
    const Integer& den = x.get_den();
    Integer product = 1;
    for (long k = 0; k < m; ++k) product *= num + den * k;
    result -= log_of(product, w);
    if (den != 1) result += log_of(den, w) * m;
  }
  return result.rounded(bits);
}

}  // namespace detail

inline BigReal log_gamma(const Rational& x, const Precision& p) { return detail::log_gamma_bits(x, p.bits()); }

/// log Gamma(x) for a real x > 0.
inline BigReal log_gamma(const BigReal& x, const Precision& p) {
  if (x.sign() <= 0) throw Error(ErrorCode::NonPositiveArgument, "gamma argument is not positive");
  const mpfr_prec_t w = std::max(p.bits(), x.precision()) + 32;
  const BigReal xw = x.rounded(w);
  const long m = detail::shift_count(xw, w);
  BigReal product(1L, w);
  for (long k = 0; k < m; ++k) product *= xw + k;
  BigReal result = detail::stirling_log_gamma(xw + m, w) - log(product);
  return result.rounded(p.bits());
}

inline BigReal gamma(const Rational& x, const Precision& p) {
  const Precision wide(p.decimal_digits + 10, p.guard_digits);
  return exp(log_gamma(x, wide)).rounded(p.bits());
}

inline BigReal gamma(const BigReal& x, const Precision& p) {
  const Precision wide(p.decimal_digits + 10, p.guard_digits);
  return exp(log_gamma(x, wide)).rounded(p.bits());
}

enum class TrigKind { Sin, Cos, Tan };

inline const char* to_string(TrigKind kind) {
  switch (kind) {
    case TrigKind::Sin: return "sin";
    case TrigKind::Cos: return "cos";
    case TrigKind::Tan: return "tan";
  }
  return "?";
}

namespace detail {

/// r reduced into [0, m) exactly.
inline Rational reduce_mod(const Rational& r, long m) {
  const Rational q = r / Rational(m);
  return r - Rational(m) * Rational(floor_of(q));
}

/// sin(pi s) for s in [0, 1/2], switching to cos near the top of the range.
inline BigReal sin_pi_reduced(const Rational& s, mpfr_prec_t bits) {
  if (s == 0) return BigReal(0L, bits);
  if (s == make_rational(1, 2)) return BigReal(1L, bits);
  BigReal r(bits);
  if (s <= make_rational(1, 4)) {
    BigReal arg = pi_bits(bits) * BigReal(s, bits);
    mpfr_sin(r.raw(), arg.get(), MPFR_RNDN);
  } else {
    BigReal arg = pi_bits(bits) * BigReal(make_rational(1, 2) - s, bits);
    mpfr_cos(r.raw(), arg.get(), MPFR_RNDN);
  }
  return r;
}

inline BigReal sin_pi(const Rational& r, mpfr_prec_t bits) {
  Rational s = reduce_mod(r, 2);
  bool negate = false;
  if (s >= 1) {
    negate = true;
    s -= 1;
  }
  if (s > make_rational(1, 2)) s = Rational(1) - s;
  BigReal v = sin_pi_reduced(s, bits);
  return negate ? -v : v;
}

}  // namespace detail

/// sin, cos or tan at pi*r, with r reduced exactly in Q before any rounding.
inline BigReal trig_pi(TrigKind kind, const Rational& r, const Precision& p) {
  const mpfr_prec_t w = p.bits() + 16;
  switch (kind) {
    case TrigKind::Sin:
      return detail::sin_pi(r, w).rounded(p.bits());
    case TrigKind::Cos:
      return detail::sin_pi(r + make_rational(1, 2), w).rounded(p.bits());
    case TrigKind::Tan: {
      // Period 1; fold into [0, 1) then use tan(pi s) = -tan(pi (1 - s)).
      Rational s = detail::reduce_mod(r, 1);
      if (s == make_rational(1, 2))
        throw Error(ErrorCode::TangentPole, "tan(pi*" + to_string(r) + ") is a pole");
      bool negate = false;
      if (s > make_rational(1, 2)) {
        negate = true;
        s = Rational(1) - s;
      }
      BigReal v = detail::sin_pi_reduced(s, w) / detail::sin_pi_reduced(make_rational(1, 2) - s, w);
      return (negate ? -v : v).rounded(p.bits());
    }
  }
  return BigReal(p.bits());
}

/// Arithmetic-geometric mean of a, b > 0, iterated until the two means agree
/// to the working precision.
inline BigReal agm(const BigReal& a0, const BigReal& b0, const Precision& p) {
  if (a0.sign() <= 0 || b0.sign() <= 0) throw Error(ErrorCode::DomainError, "AGM needs positive arguments");
  const mpfr_prec_t w = p.bits() + 16;
  BigReal a = a0.rounded(w);
  BigReal b = b0.rounded(w);
  for (int iter = 0; iter < 10000; ++iter) {
    BigReal diff = abs(a - b);
    if (diff.is_zero() || diff.exponent2() < a.exponent2() - static_cast<long>(w) + 2) break;
    BigReal next_a = (a + b) / 2L;
    b = sqrt(a * b);
    a = std::move(next_a);
  }
  return a.rounded(p.bits());
}

/// Complete elliptic integral of the first kind in the parameter convention
///   K(m) = integral_0^{pi/2} dphi / sqrt(1 - m sin^2 phi),   0 <= m < 1,
/// evaluated as pi / (2 AGM(1, sqrt(1 - m))).
inline BigReal elliptic_k_agm(const BigReal& m, const Precision& p) {
  if (m.sign() < 0 || !(m < BigReal(1L, m.precision())))
    throw Error(ErrorCode::DomainError, "elliptic parameter m must lie in [0, 1)");
  const mpfr_prec_t w = p.bits() + 16;
  const Precision wide(p.decimal_digits + 5, p.guard_digits);
  BigReal one(1L, w);
  BigReal mean = agm(one, sqrt(one - m.rounded(w)), wide);
  return (detail::pi_bits(w) / (mean * 2L)).rounded(p.bits());
}

}  // namespace foldprod
