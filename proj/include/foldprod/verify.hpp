#pragma once

// Numeric verification of identity records: certified left side against the
// closed-form right side, plus the brute-force partial oracles.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "foldprod/closed_forms.hpp"
#include "foldprod/gamma_expr.hpp"
#include "foldprod/mpnum.hpp"
#include "foldprod/products.hpp"
#include "foldprod/radical.hpp"

namespace foldprod {

struct VerificationOutcome {
  std::string id;
  std::string source;
  BigReal lhs;
  BigReal rhs;
  BigReal delta;      // |lhs - rhs|
  BigReal bound;      // certified error bound of lhs
  BigReal tolerance;  // pass iff delta <= tolerance
  bool pass = false;
  double seconds = 0.0;
  std::string error;  // set when evaluation threw
};

/// (1/2) int_0^{pi/2} dphi/sqrt(2 - sin^2 phi) = K(1/2) / (2 sqrt2), K(m) = pi/(2 AGM(1, sqrt(1-m))).
inline CertifiedValue eval_elliptic_half(const Precision& p) {
  const mpfr_prec_t bits = p.bits() + 16;
  const Precision pw(p.decimal_digits + 5, p.guard_digits);
  const BigReal k = elliptic_k_agm(BigReal(make_rational(1, 2), bits), pw);
  BigReal v = k / (sqrt(BigReal(2, bits)) * 2);
  return {v.rounded(p.bits()), detail::rounding_budget(v, p.bits(), 4)};
}

inline CertifiedValue eval_identity_lhs(const IdentityRecord& r, const Precision& p) {
  struct V {
    const Precision& p;
    const Rational& factor;
    CertifiedValue operator()(const ProductSpec& s) const {
      return scale(eval_certified(s, p), factor, p.bits() + 8);
    }
    CertifiedValue operator()(const GammaExpr& e) const {
      BigReal v = eval_expr(e * GammaExpr::constant(factor), p);
      return {v, detail::rounding_budget(v, p.bits(), 4)};
    }
    CertifiedValue operator()(const VonHaeselerSeries& s) const {
      return scale(von_haeseler(s.s, p).lhs, factor, p.bits() + 8);
    }
    CertifiedValue operator()(const EllipticHalfIntegral&) const {
      return scale(eval_elliptic_half(p), factor, p.bits() + 8);
    }
  };
  return std::visit(V{p, r.lhs_factor}, r.lhs);
}

inline BigReal eval_identity_rhs(const IdentityRecord& r, const Precision& p) {
  if (const auto* e = std::get_if<GammaExpr>(&r.rhs)) return eval_expr(*e, p);
  return std::get<AlgebraicLiteral>(r.rhs).eval(p);
}

inline VerificationOutcome verify_record(const IdentityRecord& r, const Precision& p, const BigReal& tolerance) {
  VerificationOutcome out{r.id, r.source, BigReal(p.bits()), BigReal(p.bits()), BigReal(64), BigReal(64), tolerance, false, 0.0, {}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CertifiedValue lhs = eval_identity_lhs(r, p);
    out.lhs = lhs.value;
    out.bound = lhs.abs_error_bound;
    out.rhs = eval_identity_rhs(r, p);
    out.delta = abs(out.lhs - out.rhs).rounded(64);
    out.pass = out.delta <= tolerance;
  } catch (const Error& e) {
    out.error = e.what();
    out.pass = false;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Default tolerance for d-digit runs: 10^-(d-10).
inline BigReal default_tolerance(int digits) { return ten_pow_neg(std::max(digits - 10, 1), 64); }

inline std::vector<VerificationOutcome> verify_catalog(const Precision& p, const BigReal& tolerance,
                                                       const std::vector<std::string>& ids = {}) {
  std::vector<VerificationOutcome> out;
  for (const auto& r : identity_catalog()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), r.id) == ids.end()) continue;
    out.push_back(verify_record(r, p, tolerance));
  }
  return out;
}

namespace detail {

inline VerificationOutcome timed(const std::string& id, const std::string& source, const BigReal& tolerance,
                                 const std::function<void(VerificationOutcome&)>& body) {
  VerificationOutcome out{id, source, BigReal(64), BigReal(64), BigReal(64), BigReal(64), tolerance, false, 0.0, {}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
    out.delta = abs(out.lhs - out.rhs).rounded(64);
    out.pass = out.delta <= out.tolerance;
  } catch (const Error& e) {
    out.error = e.what();
    out.pass = false;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline VerificationOutcome short_outcome(const std::string& id, const std::string& source, const ShortProduct& sp,
                                         const Precision& p, const BigReal& tolerance) {
  return timed(id, source, tolerance, [&](VerificationOutcome& o) {
    o.lhs = eval_expr(sp.lhs, p);
    o.rhs = eval_expr(sp.rhs, p);
    o.bound = rounding_budget(o.lhs, p.bits(), 4);
  });
}

}  // namespace detail

/// Items beyond the catalog: the short gamma product families, the von
/// Haeseler series for s = 2, 3 and the two routes to the Flajolet-Martin R.
/// The R item passes when the routes agree within their summed bounds.
inline std::vector<VerificationOutcome> verify_supplementary(const Precision& p, const BigReal& tolerance) {
  std::vector<VerificationOutcome> out;
  for (long m = 2; m <= 30; ++m)
    out.push_back(detail::short_outcome("sandor-toth-m" + std::to_string(m), "Sandor-Toth product, m=" + std::to_string(m),
                                        sandor_toth(m), p, tolerance));
  for (long n = 3; n <= 25; n += 2) {
    const NijenhuisResult r = nijenhuis(n);
    out.push_back(detail::short_outcome("nijenhuis-n" + std::to_string(n), "Nijenhuis subgroup product, n=" + std::to_string(n),
                                        {r.product, r.value}, p, tolerance));
  }
  const auto bz = borwein_zucker();
  out.push_back(detail::short_outcome("borwein-zucker-24", "Borwein-Zucker, denominator 24", bz[0], p, tolerance));
  out.push_back(detail::short_outcome("borwein-zucker-20", "Borwein-Zucker, denominator 20", bz[1], p, tolerance));
  for (long s : {2L, 3L}) {
    out.push_back(detail::timed("von-haeseler-s" + std::to_string(s), "von Haeseler series against (2^s/(2^s-1)) beta(s), s=" + std::to_string(s),
                                tolerance, [&](VerificationOutcome& o) {
                                  const VonHaeseler v = von_haeseler(s, p);
                                  o.lhs = v.lhs.value;
                                  o.rhs = v.rhs.value;
                                  o.bound = v.lhs.abs_error_bound + v.rhs.abs_error_bound;
                                }));
  }
  out.push_back(detail::timed("flajolet-martin-R", "Flajolet-Martin R, direct against e^gamma/(sqrt2 Q)", tolerance,
                              [&](VerificationOutcome& o) {
                                const FlajoletMartin fm = flajolet_martin(p);
                                o.lhs = fm.R.value;
                                o.rhs = fm.R_via_Q.value;
                                o.bound = fm.R.abs_error_bound;
                                o.tolerance = fm.R.abs_error_bound + fm.R_via_Q.abs_error_bound;
                              }));
  return out;
}

/// Brute-force counterpart of the left side: N-term partial product or partial
/// sum, or a midpoint rule for the integral. Empty for pure gamma products.
inline std::optional<BigReal> partial_oracle(const IdentityRecord& r, std::int64_t N, const Precision& p) {
  if (const auto* s = std::get_if<ProductSpec>(&r.lhs))
    return eval_partial(*s, std::max<std::int64_t>(N, s->start()), p) * BigReal(r.lhs_factor, p.bits());
  if (const auto* v = std::get_if<VonHaeselerSeries>(&r.lhs)) {
    // Kahan-compensated double sum, plenty for a 1e-5 comparison.
    double sum = 0.0, comp = 0.0;
    for (std::int64_t n = 0; n < N; ++n) {
      const double term = paperfold_term(static_cast<std::uint64_t>(n)) / std::pow(static_cast<double>(n + 1), v->s);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return BigReal::from_double(sum, p.bits()) * BigReal(r.lhs_factor, p.bits());
  }
  if (std::holds_alternative<EllipticHalfIntegral>(r.lhs)) {
    // Smooth periodic integrand: the midpoint rule converges geometrically.
    const int steps = 256;
    const double h = std::acos(-1.0) / 2 / steps;
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double s = std::sin((i + 0.5) * h);
      sum += 1.0 / std::sqrt(2.0 - s * s);
    }
    return BigReal::from_double(sum * h / 2, p.bits()) * BigReal(r.lhs_factor, p.bits());
  }
  return std::nullopt;
}

}  // namespace foldprod
