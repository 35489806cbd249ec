#pragma once

// Formal infinite products prod_{n>=n0} (prod_i (n+a_i) / prod_i (n+b_i))^{u_n}
// and their certified evaluation.
//
// Paperfolding weights. Split the indices by n+1 = 2^j (2k+1), so eps_n = (-1)^k
// and with f = log R,
//     sum_n eps_n f(n) = sum_j A_j,   A_j = sum_{k>=k_j} (-1)^k f(2^{j+1} k + 2^j - 1),
// where k_j is the first k whose index reaches n0. Pairing consecutive k turns
// each A_j into a balanced product with an exact gamma-ratio value. Levels past
// J are bounded by total variation: for x >= 2 rho (rho the largest root
// magnitude), |f'(x)| <= 4W/x^2 with W = sum |a_i - b_i| over sorted roots, so
// |A_j| <= 4W/(2^j - 1) and sum_{j>J} |A_j| <= 8W/2^J once 2^{J+1}-1 >= 2 rho.
// The regrouping of a conditionally convergent series into levels is justified
// by grouping alternating blocks; the oracle-equivalence tests check it.
//
// Thue-Morse weights. For n = 2^L q + r with r < 2^L, m_n = m_q m_r, so the
// tail past 2^L N is sum_{q>=N} m_q h_L(q) with
//     h_L(q) = sum_{r<2^L} m_r f(2^L q + r) = sum_{k>L} (-1)^{k+1} D_k / (k q^k).
// D_k is exact (the Prouhet moments sum_r m_r r^j vanish for j < L), which
// gives an explicit bound on the tail; the head is a direct product.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foldprod/error.hpp"
#include "foldprod/mpnum.hpp"
#include "foldprod/rational.hpp"
#include "foldprod/sequences.hpp"

namespace foldprod {

enum class Weight { Unsigned, Paperfold, ThueMorse, AlternatingSign };

inline const char* to_string(Weight w) {
  switch (w) {
    case Weight::Unsigned: return "unsigned";
    case Weight::Paperfold: return "paperfold";
    case Weight::ThueMorse: return "thue-morse";
    case Weight::AlternatingSign: return "alternating";
  }
  return "?";
}

inline Weight parse_weight(std::string_view name) {
  if (name == "unsigned" || name == "none") return Weight::Unsigned;
  switch (parse_seq_kind(name)) {
    case SeqKind::Paperfold: return Weight::Paperfold;
    case SeqKind::ThueMorse: return Weight::ThueMorse;
    case SeqKind::AlternatingSign: return Weight::AlternatingSign;
  }
  return Weight::Unsigned;
}

inline int weight_term(Weight w, std::uint64_t n) {
  switch (w) {
    case Weight::Unsigned: return 1;
    case Weight::Paperfold: return paperfold_term(n);
    case Weight::ThueMorse: return thue_morse_term(n);
    case Weight::AlternatingSign: return (n & 1U) ? -1 : 1;
  }
  return 1;
}

class ProductSpec;
ProductSpec make_product(std::vector<Rational> num_roots, std::vector<Rational> den_roots, std::int64_t start,
                         Weight weight);

class ProductSpec {
 public:
  const std::vector<Rational>& num_roots() const { return num_; }
  const std::vector<Rational>& den_roots() const { return den_; }
  std::int64_t start() const { return start_; }
  Weight weight() const { return weight_; }
  std::size_t degree() const { return num_.size(); }

  /// Root multisets coincide, so every factor is 1.
  bool is_trivial() const {
    auto a = num_, b = den_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  /// Product of two specs with the same start and weight; shared roots cancel.
  ProductSpec times(const ProductSpec& other) const {
    if (other.start_ != start_ || other.weight_ != weight_)
      throw Error(ErrorCode::DomainError, "times: start index and weight must match");
    std::vector<Rational> num = num_, den = den_;
    num.insert(num.end(), other.num_.begin(), other.num_.end());
    den.insert(den.end(), other.den_.begin(), other.den_.end());
    return make_product(std::move(num), std::move(den), start_, weight_);
  }

  ProductSpec reciprocal() const { return make_product(den_, num_, start_, weight_); }

  friend bool operator==(const ProductSpec& x, const ProductSpec& y) {
    return x.num_ == y.num_ && x.den_ == y.den_ && x.start_ == y.start_ && x.weight_ == y.weight_;
  }

 private:
  friend ProductSpec make_product(std::vector<Rational>, std::vector<Rational>, std::int64_t, Weight);
  ProductSpec() = default;

  std::vector<Rational> num_, den_;
  std::int64_t start_ = 0;
  Weight weight_ = Weight::Unsigned;
};

namespace detail {

// Removes roots common to both lists. Keeps one trivial pair if everything
// cancels so the lists stay nonempty.
inline void cancel_common(std::vector<Rational>& num, std::vector<Rational>& den) {
  std::sort(num.begin(), num.end());
  std::sort(den.begin(), den.end());
  std::vector<Rational> a, b;
  std::size_t i = 0, j = 0;
  while (i < num.size() && j < den.size()) {
    if (num[i] == den[j]) {
      ++i;
      ++j;
    } else if (num[i] < den[j]) {
      a.push_back(num[i++]);
    } else {
      b.push_back(den[j++]);
    }
  }
  a.insert(a.end(), num.begin() + static_cast<long>(i), num.end());
  b.insert(b.end(), den.begin() + static_cast<long>(j), den.end());
  if (a.empty() && b.empty() && !num.empty()) {
    a.push_back(num.front());
    b.push_back(num.front());
  }
  num = std::move(a);
  den = std::move(b);
}

}  // namespace detail

/// Validates and builds a product. Roots are sorted; a root shared by both
/// lists is cancelled (the factor is identically 1).
inline ProductSpec make_product(std::vector<Rational> num_roots, std::vector<Rational> den_roots, std::int64_t start,
                                Weight weight) {
  if (num_roots.empty() || den_roots.empty())
    throw Error(ErrorCode::DomainError, "root lists must be nonempty");
  if (num_roots.size() != den_roots.size())
    throw Error(ErrorCode::UnequalFactorCounts, "numerator has " + std::to_string(num_roots.size()) +
                                                    " factors, denominator has " + std::to_string(den_roots.size()));
  if (start < 0) throw Error(ErrorCode::DomainError, "start index must be >= 0");
  for (const auto* list : {&num_roots, &den_roots}) {
    for (const Rational& r : *list) {
      if (Rational(start) + r <= 0)
        throw Error(ErrorCode::NonPositiveFactorOnTail,
                    "factor n+" + to_string(r) + " is not positive at n=" + std::to_string(start));
    }
  }
  if (weight == Weight::Unsigned) {
    Rational sa = 0, sb = 0;
    for (const auto& r : num_roots) sa += r;
    for (const auto& r : den_roots) sb += r;
    if (sa != sb)
      throw Error(ErrorCode::UnbalancedUnsignedProduct,
                  "unsigned product diverges: root sums " + to_string(sa) + " and " + to_string(sb) + " differ");
  }
  detail::cancel_common(num_roots, den_roots);
  ProductSpec spec;
  spec.num_ = std::move(num_roots);
  spec.den_ = std::move(den_roots);
  spec.start_ = start;
  spec.weight_ = weight;
  return spec;
}

/// A linear factor u*n + v with u > 0.
struct LinearFactor {
  long u;
  long v;
};

/// Product of linear factors prod (u n + v); leading coefficients must agree
/// so the factor is a pure ratio of monic factors n + v/u.
inline ProductSpec from_linear(const std::vector<LinearFactor>& num, const std::vector<LinearFactor>& den,
                               std::int64_t start, Weight weight) {
  Integer lead_num = 1, lead_den = 1;
  std::vector<Rational> a, b;
  for (const auto& f : num) {
    if (f.u <= 0) throw Error(ErrorCode::DomainError, "leading coefficient must be positive");
    lead_num *= f.u;
    a.push_back(make_rational(f.v, f.u));
  }
  for (const auto& f : den) {
    if (f.u <= 0) throw Error(ErrorCode::DomainError, "leading coefficient must be positive");
    lead_den *= f.u;
    b.push_back(make_rational(f.v, f.u));
  }
  if (lead_num != lead_den) throw Error(ErrorCode::DomainError, "leading coefficients do not balance");
  return make_product(std::move(a), std::move(b), start, weight);
}

namespace detail {

inline std::string linear_text(const Rational& r) {
  if (r == 0) return "n";
  if (r > 0) return "n+" + to_string(r);
  return "n-" + to_string(Rational(-r));
}

}  // namespace detail

/// e.g. "prod_{n>=1} (n/(n+1/2))^paperfold", "prod_{n>=0} ((n+1)(n+2)/((n+3/2)(n+3/2)))^unsigned"
inline std::string to_string(const ProductSpec& s) {
  auto side = [](const std::vector<Rational>& roots, bool wrap) {
    if (roots.size() == 1) {
      const std::string t = detail::linear_text(roots[0]);
      return roots[0] == 0 ? t : "(" + t + ")";
    }
    std::string out;
    for (const auto& r : roots) out += "(" + detail::linear_text(r) + ")";
    return wrap ? "(" + out + ")" : out;
  };
  return "prod_{n>=" + std::to_string(s.start()) + "} (" + side(s.num_roots(), false) + "/" +
         side(s.den_roots(), true) + ")^" + to_string(s.weight());
}

struct CertifiedValue {
  BigReal value;
  BigReal abs_error_bound;
};

namespace detail {

constexpr mpfr_prec_t kBoundBits = 64;

inline BigReal bound(long v) { return BigReal(v, kBoundBits); }

// |x| * 2^(-bits+shift): budget for a quantity correctly rounded at `bits`
// after a few operations.
inline BigReal rounding_budget(const BigReal& x, mpfr_prec_t bits, long shift = 2) {
  return ldexp(max(abs(x.rounded(kBoundBits)), bound(1)), -bits + shift);
}

inline bool is_certified(const BigReal& value, const BigReal& err, int digits) {
  const BigReal tol = ten_pow_neg(digits, kBoundBits) * max(abs(value.rounded(kBoundBits)), bound(1));
  return err <= tol;
}

/// A log-space result: the true log lies within err of log_value.
struct LogEstimate {
  BigReal log_value;
  BigReal err;
};

/// exp of a log estimate with the error carried to the value.
inline CertifiedValue exp_certified(const LogEstimate& e, mpfr_prec_t bits) {
  BigReal value = exp(e.log_value);
  BigReal err = abs(value.rounded(kBoundBits)) * expm1(e.err.rounded(kBoundBits)) * BigReal::from_double(1.01, kBoundBits);
  err += rounding_budget(value, bits);
  return {value, err};
}

/// Runs `attempt` with guard digits doubled until the result meets
/// 10^(-digits) * max(1,|value|); gives up after four rounds.
inline CertifiedValue escalate(const Precision& p, const std::function<CertifiedValue(const Precision&)>& attempt) {
  int guard = p.guard_digits;
  for (int round = 0; round < 4; ++round, guard *= 2) {
    CertifiedValue v = attempt(Precision(p.decimal_digits, guard));
    if (is_certified(v.value, v.abs_error_bound, p.decimal_digits)) return v;
  }
  throw Error(ErrorCode::PrecisionUnreachable,
              "could not certify " + std::to_string(p.decimal_digits) + " digits");
}

/// sum lnGamma(den) - sum lnGamma(num); err accumulates the rounding budget.
inline BigReal ww_log(const std::vector<Rational>& num, const std::vector<Rational>& den, mpfr_prec_t bits,
                      BigReal& err) {
  BigReal total(bits);
  for (const auto& x : den) {
    BigReal g = log_gamma_bits(x, bits);
    err += rounding_budget(g, bits, 1);
    total += g;
  }
  for (const auto& x : num) {
    BigReal g = log_gamma_bits(x, bits);
    err += rounding_budget(g, bits, 1);
    total -= g;
  }
  err += rounding_budget(total, bits, 0);
  return total;
}

/// Multiplies integer factors into an MPFR accumulator, packing them into 64-bit
/// words first so most factors cost one machine multiply.
class FactorAccumulator {
 public:
  explicit FactorAccumulator(mpfr_prec_t bits) : acc_(1, bits) {}

  void mul(std::uint64_t f) {
    std::uint64_t next;
    if (__builtin_mul_overflow(chunk_, f, &next)) {
      flush();
      chunk_ = f;
    } else {
      chunk_ = next;
    }
  }

  void mul(const Integer& f) {
    flush();
    mpfr_mul_z(acc_.raw(), acc_.get(), f.get_mpz_t(), MPFR_RNDN);
    ++ops_;
  }

  void flush() {
    if (chunk_ != 1) {
      mpfr_mul_ui(acc_.raw(), acc_.get(), chunk_, MPFR_RNDN);
      ++ops_;
      chunk_ = 1;
    }
  }

  const BigReal& value() {
    flush();
    return acc_;
  }
  std::uint64_t ops() const { return ops_; }

 private:
  BigReal acc_;
  std::uint64_t chunk_ = 1;
  std::uint64_t ops_ = 0;
};

/// Exact integer form of the roots: n + a_i = (Q n + P_i)/Q.
struct IntegerRoots {
  Integer Q;
  std::vector<Integer> P_num, P_den;
};

inline IntegerRoots integer_roots(const ProductSpec& s) {
  IntegerRoots out;
  out.Q = 1;
  for (const auto* list : {&s.num_roots(), &s.den_roots()})
    for (const auto& r : *list) out.Q = lcm(out.Q, Integer(r.get_den()));
  for (const auto& r : s.num_roots()) out.P_num.push_back(Integer(r * Rational(out.Q)));
  for (const auto& r : s.den_roots()) out.P_den.push_back(Integer(r * Rational(out.Q)));
  return out;
}

/// Direct product over n0 <= n < N. Returns the value and the number of
/// rounded multiplications (relative error <= ops * 2^-bits, to first order).
inline std::pair<BigReal, std::uint64_t> direct_product(const ProductSpec& s, std::int64_t N, mpfr_prec_t bits) {
  const IntegerRoots ir = integer_roots(s);
  FactorAccumulator top(bits), bottom(bits);
  // Qn + P fits in 63 bits for every n < N: use machine words.
  Integer max_p = 0;
  for (const auto* list : {&ir.P_num, &ir.P_den})
    for (const auto& p : *list) max_p = std::max(max_p, Integer(abs(p)));
  const Integer largest = ir.Q * N + max_p;
  const bool fast = mpz_sizeinbase(largest.get_mpz_t(), 2) <= 62;
  const std::size_t d = s.degree();
  if (fast) {
    const auto q = static_cast<std::int64_t>(ir.Q.get_si());
    std::vector<std::int64_t> pn(d), pd(d);
    for (std::size_t i = 0; i < d; ++i) {
      pn[i] = ir.P_num[i].get_si();
      pd[i] = ir.P_den[i].get_si();
    }
    for (std::int64_t n = s.start(); n < N; ++n) {
      const bool up = weight_term(s.weight(), static_cast<std::uint64_t>(n)) > 0;
      FactorAccumulator& for_num = up ? top : bottom;
      FactorAccumulator& for_den = up ? bottom : top;
      const std::int64_t qn = q * n;
      for (std::size_t i = 0; i < d; ++i) {
        for_num.mul(static_cast<std::uint64_t>(qn + pn[i]));
        for_den.mul(static_cast<std::uint64_t>(qn + pd[i]));
      }
    }
  } else {
    for (std::int64_t n = s.start(); n < N; ++n) {
      const bool up = weight_term(s.weight(), static_cast<std::uint64_t>(n)) > 0;
      FactorAccumulator& for_num = up ? top : bottom;
      FactorAccumulator& for_den = up ? bottom : top;
      const Integer qn = ir.Q * n;
      for (std::size_t i = 0; i < d; ++i) {
        for_num.mul(Integer(qn + ir.P_num[i]));
        for_den.mul(Integer(qn + ir.P_den[i]));
      }
    }
  }
  BigReal value = top.value() / bottom.value();
  return {value, top.ops() + bottom.ops() + 1};
}

inline mpfr_prec_t log2_ceil(std::uint64_t x) {
  mpfr_prec_t k = 0;
  while ((std::uint64_t{1} << k) < x && k < 63) ++k;
  return k;
}

}  // namespace detail

/// Finite product prod_{n0 <= n < N} term(n)^{u_n}. Every factor is an exact
/// integer, so the only error is rounding in the accumulation.
inline BigReal eval_partial(const ProductSpec& spec, std::int64_t N, const Precision& p) {
  if (N < spec.start())
    throw Error(ErrorCode::DomainError, "N=" + std::to_string(N) + " is below the start index");
  const auto est_ops = static_cast<std::uint64_t>(N - spec.start() + 1) * 2 * spec.degree() + 2;
  const mpfr_prec_t w = p.bits() + detail::log2_ceil(est_ops) + 8;
  return detail::direct_product(spec, N, w).first.rounded(p.bits());
}

// ---------------------------------------------------------------------------
// Gamma-ratio evaluators

namespace detail {

/// Total variation constant: sum |a_i - b_i| over the roots paired in sorted order.
inline Rational variation_constant(const ProductSpec& s) {
  auto a = s.num_roots(), b = s.den_roots();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  Rational w = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w += abs(a[i] - b[i]);
  return w;
}

inline Rational max_root_magnitude(const ProductSpec& s) {
  Rational rho = 0;
  for (const auto* list : {&s.num_roots(), &s.den_roots()})
    for (const auto& r : *list) rho = std::max(rho, Rational(abs(r)));
  return rho;
}

constexpr int kMaxPaperfoldLevels = 20000;

inline LogEstimate paperfold_log(const ProductSpec& s, mpfr_prec_t bits) {
  const Rational W = variation_constant(s);
  const Rational rho = max_root_magnitude(s);
  const Rational n0 = s.start();
  const Rational tail_from = std::max(Rational(2 * rho), n0);

  BigReal sum(bits);
  BigReal err(kBoundBits);
  const BigReal target = ldexp(bound(1), -bits);
  Integer pow2 = 1;  // 2^j
  for (int j = 0; j < kMaxPaperfoldLevels; ++j, pow2 *= 2) {
    const Integer c = pow2 - 1;
    const Integer step = pow2 * 2;
    Integer k = 0;
    if (Rational(c) < n0) k = ceil_of(Rational(n0 - Rational(c)) / Rational(step));
    const Integer c_first = c + step * k;
    const bool odd_k = mpz_odd_p(k.get_mpz_t()) != 0;
    const Rational delta = Rational(step * 2);

    std::vector<Rational> num, den;
    for (std::size_t i = 0; i < s.degree(); ++i) {
      const Rational& a = s.num_roots()[i];
      const Rational& b = s.den_roots()[i];
      num.push_back((Rational(c_first) + a) / delta);
      num.push_back((Rational(step + c_first) + b) / delta);
      den.push_back((Rational(c_first) + b) / delta);
      den.push_back((Rational(step + c_first) + a) / delta);
    }
    BigReal level = ww_log(num, den, bits, err);
    if (odd_k)
      sum -= level;
    else
      sum += level;

    // Levels after j: sum_{i>j} |A_i| <= 8W/2^j once 2^{j+1}-1 covers the roots.
    if (Rational(step - 1) >= tail_from) {
      BigReal tail = BigReal(Rational(W * 8 / Rational(pow2)), kBoundBits);
      if (tail <= target) {
        err += tail;
        return {sum, err};
      }
    }
  }
  throw Error(ErrorCode::PrecisionUnreachable, "paperfold level cap reached");
}

}  // namespace detail

/// Certified value of a paperfolding-weighted product.
inline CertifiedValue eval_paperfold_certified(const ProductSpec& spec, const Precision& p) {
  if (spec.weight() != Weight::Paperfold) throw Error(ErrorCode::DomainError, "spec weight is not paperfold");
  if (spec.is_trivial()) return {BigReal(1, p.bits()), BigReal(0, detail::kBoundBits)};
  return detail::escalate(p, [&](const Precision& q) {
    return detail::exp_certified(detail::paperfold_log(spec, q.bits()), q.bits());
  });
}

/// Unsigned balanced product: prod_{n>=n0} = prod Gamma(n0+b) / prod Gamma(n0+a).
inline CertifiedValue eval_unsigned_certified(const ProductSpec& spec, const Precision& p) {
  if (spec.weight() != Weight::Unsigned) throw Error(ErrorCode::DomainError, "spec weight is not unsigned");
  if (spec.is_trivial()) return {BigReal(1, p.bits()), BigReal(0, detail::kBoundBits)};
  return detail::escalate(p, [&](const Precision& q) {
    std::vector<Rational> num, den;
    for (const auto& a : spec.num_roots()) num.push_back(a + spec.start());
    for (const auto& b : spec.den_roots()) den.push_back(b + spec.start());
    BigReal err(detail::kBoundBits);
    BigReal lg = detail::ww_log(num, den, q.bits(), err);
    return detail::exp_certified({lg, err}, q.bits());
  });
}

/// (-1)^n weights: consecutive terms pair into one balanced product in t.
inline CertifiedValue eval_alternating_certified(const ProductSpec& spec, const Precision& p) {
  if (spec.weight() != Weight::AlternatingSign) throw Error(ErrorCode::DomainError, "spec weight is not alternating");
  if (spec.is_trivial()) return {BigReal(1, p.bits()), BigReal(0, detail::kBoundBits)};
  return detail::escalate(p, [&](const Precision& q) {
    const Rational n0 = spec.start();
    std::vector<Rational> num, den;
    for (std::size_t i = 0; i < spec.degree(); ++i) {
      const Rational& a = spec.num_roots()[i];
      const Rational& b = spec.den_roots()[i];
      num.push_back((n0 + a) / 2);
      num.push_back((n0 + 1 + b) / 2);
      den.push_back((n0 + b) / 2);
      den.push_back((n0 + 1 + a) / 2);
    }
    BigReal err(detail::kBoundBits);
    BigReal lg = detail::ww_log(num, den, q.bits(), err);
    if (spec.start() % 2 != 0) lg = -lg;
    return detail::exp_certified({lg, err}, q.bits());
  });
}

// ---------------------------------------------------------------------------
// Thue-Morse evaluator

struct ThueMorseLimits {
  int max_level = 20;
  std::int64_t max_blocks = 2000;
  std::int64_t max_terms = std::int64_t{1} << 27;
};

namespace detail {

/// Prouhet moments mu_j = sum_{r<2^L} m_r r^j for j <= K, all L <= max_level.
inline std::vector<std::vector<Integer>> prouhet_moments(int max_level, int K,
                                                         const std::vector<std::vector<Integer>>& binom) {
  std::vector<std::vector<Integer>> mu(static_cast<std::size_t>(max_level) + 1,
                                       std::vector<Integer>(static_cast<std::size_t>(K) + 1, 0));
  mu[0][0] = 1;
  for (int L = 0; L < max_level; ++L) {
    // mu^{(L+1)}_i = -sum_{j<i} C(i,j) 2^{L(i-j)} mu^{(L)}_j
    for (int i = 0; i <= K; ++i) {
      Integer acc = 0;
      for (int j = L; j < i; ++j) {
        Integer t = binom[i][j] * mu[L][j];
        mpz_mul_2exp(t.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(L) * (i - j));
        acc += t;
      }
      mu[L + 1][i] = -acc;
    }
  }
  return mu;
}

struct ThueMorsePlan {
  int L = 0;
  std::int64_t N = 0;
  BigReal tail_bound{kBoundBits};
};

inline BigReal z_sum(const BigReal& N, int k) {
  // sum_{q>=N} q^-k <= N^-k + N^{1-k}/(k-1)
  BigReal nk = pow(N, BigReal(-k, kBoundBits));
  return nk + nk * N / (k - 1);
}

inline std::optional<ThueMorsePlan> plan_thue_morse(const ProductSpec& s, mpfr_prec_t bits,
                                                    const ThueMorseLimits& lim) {
  const Rational rho = max_root_magnitude(s);
  const double rho_d = rho.get_d();
  const std::size_t d = s.degree();
  const BigReal target = ldexp(bound(1), -bits);

  // K large enough that the series remainder is negligible at N >= 16 lambda.
  const int K = static_cast<int>(bits / 4) + 12;
  std::vector<std::vector<Integer>> binom(static_cast<std::size_t>(K) + 2);
  for (int k = 0; k <= K + 1; ++k) {
    binom[k].assign(static_cast<std::size_t>(k) + 1, 1);
    for (int j = 1; j < k; ++j) binom[k][j] = binom[k - 1][j - 1] + binom[k - 1][j];
  }
  const auto mu = prouhet_moments(lim.max_level, K, binom);

  // Powers of every root, exact.
  std::vector<std::vector<Rational>> pa(d), pb(d);
  for (std::size_t i = 0; i < d; ++i) {
    pa[i].assign(static_cast<std::size_t>(K) + 1, 1);
    pb[i].assign(static_cast<std::size_t>(K) + 1, 1);
    for (int e = 1; e <= K; ++e) {
      pa[i][e] = pa[i][e - 1] * s.num_roots()[i];
      pb[i][e] = pb[i][e - 1] * s.den_roots()[i];
    }
  }

  std::optional<ThueMorsePlan> best;
  for (int L = 1; L <= lim.max_level; ++L) {
    const double two_L = std::ldexp(1.0, L);
    const double lambda_d = (two_L - 1 + rho_d) / two_L;
    std::int64_t n_min = static_cast<std::int64_t>(std::ceil(16 * lambda_d));
    n_min = std::max<std::int64_t>(n_min, s.start() / static_cast<std::int64_t>(two_L) + 1);
    if (best && static_cast<double>(n_min) * two_L >= static_cast<double>(best->N) * std::ldexp(1.0, best->L)) break;
    if (n_min > lim.max_blocks) continue;

    // |D_k| for L < k <= K.
    std::vector<BigReal> absD(static_cast<std::size_t>(K) + 1, BigReal(kBoundBits));
    for (int k = L + 1; k <= K; ++k) {
      Rational acc = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (int j = L; j < k; ++j) {
          if (mu[L][j] == 0) continue;
          acc += Rational(binom[k][j] * mu[L][j]) * (pa[i][k - j] - pb[i][k - j]);
        }
      BigReal v(Rational(abs(acc)), kBoundBits + 16);
      absD[k] = ldexp(v, -static_cast<long>(L) * k).rounded(kBoundBits);
    }
    // lambda rounded up.
    const BigReal lambda = BigReal(Rational(Rational(Integer(1) << L) - 1 + rho) / Rational(Integer(1) << L),
                                   kBoundBits) * BigReal::from_double(1.0 + 1e-15, kBoundBits);

    auto tail_at = [&](std::int64_t N) {
      const BigReal Nr(N, kBoundBits);
      BigReal t(kBoundBits);
      for (int k = L + 1; k <= K; ++k)
        if (!absD[k].is_zero()) t += absD[k] / k * z_sum(Nr, k);
      BigReal rem = bound(2) * ldexp(bound(static_cast<long>(d)), L) * pow(lambda, BigReal(K + 1, kBoundBits));
      rem /= BigReal(K + 1, kBoundBits) * (bound(1) - lambda / Nr);
      rem *= z_sum(Nr, K + 1);
      return (t + rem) * BigReal::from_double(1.01, kBoundBits);
    };

    const std::int64_t max_n = std::min<std::int64_t>(lim.max_blocks, lim.max_terms >> L);
    if (max_n < n_min || tail_at(max_n) > target) continue;
    std::int64_t lo = n_min, hi = max_n;  // tail_at(hi) meets the target
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (tail_at(mid) <= target)
        hi = mid;
      else
        lo = mid + 1;
    }
    const double cost = static_cast<double>(hi) * two_L;
    if (!best || cost < static_cast<double>(best->N) * std::ldexp(1.0, best->L)) best = ThueMorsePlan{L, hi, tail_at(hi)};
  }
  return best;
}

}  // namespace detail

/// Certified value of a Thue-Morse weighted product: direct head up to 2^L N
/// plus an explicitly bounded tail.
inline CertifiedValue eval_thue_morse_certified(const ProductSpec& spec, const Precision& p,
                                               const ThueMorseLimits& lim = {}) {
  if (spec.weight() != Weight::ThueMorse) throw Error(ErrorCode::DomainError, "spec weight is not thue-morse");
  if (spec.is_trivial()) return {BigReal(1, p.bits()), BigReal(0, detail::kBoundBits)};
  return detail::escalate(p, [&](const Precision& q) {
    const auto plan = detail::plan_thue_morse(spec, q.bits(), lim);
    if (!plan)
      throw Error(ErrorCode::PrecisionUnreachable,
                  "no Thue-Morse level/truncation within limits reaches " + std::to_string(q.decimal_digits) +
                      " digits");
    const std::int64_t end = (std::int64_t{1} << plan->L) * plan->N;
    const auto ops_est = static_cast<std::uint64_t>(end) * 2 * spec.degree() + 2;
    const mpfr_prec_t w = q.bits() + detail::log2_ceil(ops_est) + 8;
    auto [value, ops] = detail::direct_product(spec, end, w);
    // Relative error: rounding of the head and exp(tail) - 1.
    BigReal rel = ldexp(BigReal(static_cast<long>(ops) + 1, detail::kBoundBits), -w + 1);
    rel += expm1(plan->tail_bound) * BigReal::from_double(1.01, detail::kBoundBits);
    BigReal out = value.rounded(q.bits());
    BigReal err = abs(value.rounded(detail::kBoundBits)) * rel + detail::rounding_budget(out, q.bits(), 0);
    return CertifiedValue{out, err};
  });
}

/// Dispatches on the weight.
inline CertifiedValue eval_certified(const ProductSpec& spec, const Precision& p) {
  switch (spec.weight()) {
    case Weight::Unsigned: return eval_unsigned_certified(spec, p);
    case Weight::Paperfold: return eval_paperfold_certified(spec, p);
    case Weight::ThueMorse: return eval_thue_morse_certified(spec, p);
    case Weight::AlternatingSign: return eval_alternating_certified(spec, p);
  }
  throw Error(ErrorCode::DomainError, "unknown weight");
}

// ---------------------------------------------------------------------------
// Structural reduction g(n)/g(2n+1) -> g(4n)/g(4n+2)

/// g(x) = prod (x + p_i) / prod (x + q_i). A root p_i = 0 means g(0) is taken
/// as 1, matching the usual convention for g(x) = x/(x+1).
struct GFunctionSpec {
  std::vector<Rational> num_roots;
  std::vector<Rational> den_roots;
};

inline GFunctionSpec make_g_function(std::vector<Rational> num_roots, std::vector<Rational> den_roots) {
  if (num_roots.empty() || num_roots.size() != den_roots.size())
    throw Error(ErrorCode::InvalidG, "g needs equal, nonzero numbers of numerator and denominator roots");
  for (const auto& p : num_roots)
    if (p < 0) throw Error(ErrorCode::InvalidG, "g vanishes at x=" + to_string(Rational(-p)) + " > 0");
  for (const auto& q : den_roots)
    if (q <= 0) throw Error(ErrorCode::InvalidG, "g has a pole at x=" + to_string(Rational(-q)) + " >= 0");
  return {std::move(num_roots), std::move(den_roots)};
}

/// Exact g(x) for x > 0, and the convention at x = 0.
inline Rational g_value(const GFunctionSpec& g, const Rational& x) {
  Rational v = 1;
  for (const auto& p : g.num_roots)
    if (!(x == 0 && p == 0)) v *= x + p;
  for (const auto& q : g.den_roots) v /= x + q;
  return v;
}

inline bool has_zero_root(const GFunctionSpec& g) {
  return std::any_of(g.num_roots.begin(), g.num_roots.end(), [](const Rational& p) { return p == 0; });
}

/// value(product) * boundary_factor is the value of the reduced product.
struct LemmaReduction {
  ProductSpec product;
  Rational boundary_factor;
};

/// prod_{n>=0} g(4n)/g(4n+2) as an unsigned product. A zero root starts the
/// product at n=1 with the n=0 term g(0)/g(2) as boundary factor.
inline LemmaReduction lemma_general_reduce(const GFunctionSpec& g) {
  const GFunctionSpec checked = make_g_function(g.num_roots, g.den_roots);
  std::vector<Rational> num, den;
  for (const auto& p : checked.num_roots) {
    num.push_back(p / 4);
    den.push_back((p + 2) / 4);
  }
  for (const auto& q : checked.den_roots) {
    den.push_back(q / 4);
    num.push_back((q + 2) / 4);
  }
  if (has_zero_root(checked))
    return {make_product(num, den, 1, Weight::Unsigned), g_value(checked, 0) / g_value(checked, 2)};
  return {make_product(num, den, 0, Weight::Unsigned), Rational(1)};
}

/// prod_{n>=0} (g(n)/g(2n+1))^{eps_n} as a paperfold product. A zero root
/// starts at n=1 with boundary (g(0)/g(1))^{eps_0}.
inline LemmaReduction lemma_general_signed(const GFunctionSpec& g) {
  const GFunctionSpec checked = make_g_function(g.num_roots, g.den_roots);
  std::vector<Rational> num, den;
  for (const auto& p : checked.num_roots) {
    num.push_back(p);
    den.push_back((p + 1) / 2);
  }
  for (const auto& q : checked.den_roots) {
    den.push_back(q);
    num.push_back((q + 1) / 2);
  }
  if (has_zero_root(checked))
    return {make_product(num, den, 1, Weight::Paperfold), g_value(checked, 0) / g_value(checked, 1)};
  return {make_product(num, den, 0, Weight::Paperfold), Rational(1)};
}

/// Multiplies a certified value by an exact rational.
inline CertifiedValue scale(const CertifiedValue& v, const Rational& c, mpfr_prec_t bits) {
  BigReal factor(c, bits);
  BigReal value = v.value * factor;
  BigReal err = v.abs_error_bound * abs(factor.rounded(detail::kBoundBits)) + detail::rounding_budget(value, bits);
  return {value, err};
}

// ---------------------------------------------------------------------------
// Flajolet-Martin constants

/// Q = prod_{n>=1} (2n/(2n+1))^{m_n}.
inline ProductSpec flajolet_martin_q_spec() {
  return make_product({Rational(0)}, {make_rational(1, 2)}, 1, Weight::ThueMorse);
}

/// prod_{n>=1} ((4n+1)(4n+2)/(4n(4n+3)))^{m_n}; R is e^gamma sqrt2/3 times it.
inline ProductSpec flajolet_martin_r_spec() {
  return make_product({make_rational(1, 4), make_rational(1, 2)}, {Rational(0), make_rational(3, 4)}, 1,
                      Weight::ThueMorse);
}

struct FlajoletMartin {
  CertifiedValue Q;
  CertifiedValue R;
  CertifiedValue R_via_Q;
};

inline FlajoletMartin flajolet_martin(const Precision& p) {
  using detail::kBoundBits;
  const Precision hi(p.decimal_digits, p.guard_digits);
  const mpfr_prec_t bits = hi.bits() + 16;
  CertifiedValue q = eval_thue_morse_certified(flajolet_martin_q_spec(), hi);
  CertifiedValue inner = eval_thue_morse_certified(flajolet_martin_r_spec(), hi);

  BigReal eg(bits);
  mpfr_const_euler(eg.raw(), MPFR_RNDN);
  const BigReal e_gamma = exp(eg);
  const BigReal sqrt2 = sqrt(BigReal(2, bits));

  const BigReal c_r = e_gamma * sqrt2 / 3;
  BigReal r_value = c_r * inner.value;
  BigReal r_err = inner.abs_error_bound * c_r.rounded(kBoundBits) + detail::rounding_budget(r_value, hi.bits(), 3);

  const BigReal c_q = e_gamma / sqrt2;
  BigReal rq_value = c_q / q.value;
  // |c/Q - c/Q'| <= |c/Q| * e/(|Q| - e)
  const BigReal q_abs = abs(q.value.rounded(kBoundBits));
  BigReal rq_err = abs(rq_value.rounded(kBoundBits)) * q.abs_error_bound / (q_abs - q.abs_error_bound) *
                   BigReal::from_double(1.01, kBoundBits);
  rq_err += detail::rounding_budget(rq_value, hi.bits(), 3);
  return {q, {r_value.rounded(hi.bits()), r_err}, {rq_value.rounded(hi.bits()), rq_err}};
}

// ---------------------------------------------------------------------------
// sum eps_n / (n+1)^s

struct VonHaeseler {
  CertifiedValue lhs;
  CertifiedValue rhs;
};

namespace detail {

/// BigReal (4t+c)^(-e).
inline BigReal inv_pow(const Integer& base, long e, mpfr_prec_t bits) {
  BigReal r(base, bits);
  mpfr_pow_si(r.raw(), r.get(), -e, MPFR_RNDN);
  return r;
}

/// beta(s) = sum_{t>=0} (4t+1)^{-s} - (4t+3)^{-s} by Euler-Maclaurin from N.
inline LogEstimate beta_euler_maclaurin(long s, mpfr_prec_t bits) {
  const mpfr_prec_t w = bits + 20;
  const long N = static_cast<long>(w / 6) + 10;
  BigReal sum(w);
  for (long t = 0; t < N; ++t) {
    sum += inv_pow(Integer(4 * t + 1), s, w);
    sum -= inv_pow(Integer(4 * t + 3), s, w);
  }
  const Integer x1 = 4 * N + 1, x3 = 4 * N + 3;
  // integral from N to infinity
  if (s == 1) {
    sum += log(BigReal(make_rational(x3, x1), w)) / 4;
  } else {
    BigReal integral = inv_pow(x1, s - 1, w) - inv_pow(x3, s - 1, w);
    sum += integral / (4 * (s - 1));
  }
  sum += (inv_pow(x1, s, w) - inv_pow(x3, s, w)) / 2;

  // + sum_k B_2k/(2k)! (s)_{2k-1} 4^{2k-1} [x1^{-s-2k+1} - x3^{-s-2k+1}]
  auto& bern = BernoulliTable::instance();
  const BigReal stop = ldexp(bound(1), -w - 4);
  Integer rising = s;  // (s)_{2k-1}
  Integer fact = 2;    // (2k)!
  Integer four = 4;    // 4^{2k-1}
  const long k_max = static_cast<long>(3 * N);
  for (long k = 1; k <= k_max; ++k) {
    const Rational coef = bern.even(static_cast<std::size_t>(k)) / Rational(fact) * Rational(rising * four);
    const BigReal c(coef, w);
    const BigReal t1 = c * inv_pow(x1, s + 2 * k - 1, w);
    const BigReal t3 = c * inv_pow(x3, s + 2 * k - 1, w);
    if (abs(t1.rounded(kBoundBits)) < stop) {
      // First omitted term bounds the remainder for each of the two sums.
      BigReal err = (abs(t1.rounded(kBoundBits)) + abs(t3.rounded(kBoundBits))) * 2;
      err += ldexp(bound(N + k + 8), -w);
      return {sum, err};
    }
    sum += t1 - t3;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
    four *= 16;
  }
  throw Error(ErrorCode::PrecisionUnreachable, "Euler-Maclaurin did not converge");
}

/// beta(s) = sum_k (-1)^k (2k+1)^{-s} by the Cohen-Villegas-Zagier acceleration.
inline LogEstimate beta_cvz(long s, mpfr_prec_t bits) {
  const mpfr_prec_t w = bits + 24;
  const long n = static_cast<long>(std::ceil((bits + 4) * 0.6931471805599453 / 1.7627471740390860)) + 2;
  BigReal base = BigReal(3, w) + sqrt(BigReal(8, w));
  BigReal d(w);
  mpfr_pow_si(d.raw(), base.get(), n, MPFR_RNDN);
  d = (d + BigReal(1, w) / d) / 2;
  BigReal b(-1, w), c = -d, total(w);
  for (long k = 0; k < n; ++k) {
    c = b - c;
    total += c * inv_pow(Integer(2 * k + 1), s, w);
    b = b * ((k + n) * (k - n));
    b = b / ((2 * k + 1) * (k + 1));
    b = b * 2;
  }
  BigReal value = total / d;
  // |error| <= 2 a_0 / (3+sqrt8)^n with a_0 = 1, plus rounding.
  BigReal err = bound(2) / pow(base.rounded(kBoundBits), BigReal(n, kBoundBits));
  err += ldexp(bound(4 * n + 8), -w + 8);
  return {value, err};
}

}  // namespace detail

/// Both sides of sum_n eps_n/(n+1)^s = 2^s/(2^s-1) sum_n (-1)^n/(2n+1)^s.
/// The left side goes through the level decomposition (level j contributes
/// 2^{-js} beta(s), beta by Euler-Maclaurin); the right side uses the
/// alternating-series acceleration.
inline VonHaeseler von_haeseler(long s, const Precision& p) {
  using detail::kBoundBits;
  if (s < 1) throw Error(ErrorCode::DomainError, "s must be >= 1");
  auto lhs = detail::escalate(p, [&](const Precision& q) {
    const mpfr_prec_t bits = q.bits();
    const auto beta = detail::beta_euler_maclaurin(s, bits + 8);
    const long J = (bits + 2) / s + 1;
    BigReal levels(bits + 8);
    BigReal scale_j(1, bits + 8);
    for (long j = 0; j <= J; ++j) {
      levels += scale_j;
      scale_j = ldexp(scale_j, -s);
    }
    BigReal value = beta.log_value * levels;
    // geometric tail sum_{j>J} 2^{-js} beta, |beta| <= 1
    BigReal err = beta.err * 2 + ldexp(detail::bound(2), -(J + 1) * s);
    err += detail::rounding_budget(value, bits + 8, 2 + detail::log2_ceil(static_cast<std::uint64_t>(J)));
    return CertifiedValue{value.rounded(bits), err + detail::rounding_budget(value, bits, 0)};
  });
  auto rhs = detail::escalate(p, [&](const Precision& q) {
    const mpfr_prec_t bits = q.bits();
    const auto beta = detail::beta_cvz(s, bits + 8);
    BigReal two_s = ldexp(BigReal(1, bits + 8), s);
    BigReal factor = two_s / (two_s - 1);
    BigReal value = factor * beta.log_value;
    BigReal err = beta.err * 2 + detail::rounding_budget(value, bits + 8, 3);
    return CertifiedValue{value.rounded(bits), err + detail::rounding_budget(value, bits, 0)};
  });
  return {lhs, rhs};
}

}  // namespace foldprod
