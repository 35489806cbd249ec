// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "foldprod/algebraicity.hpp"
#include "foldprod/closed_forms.hpp"
#include "foldprod/gamma_expr.hpp"
#include "foldprod/mpnum.hpp"
#include "foldprod/products.hpp"
#include "foldprod/sequences.hpp"
#include "foldprod/verify.hpp"

using namespace foldprod;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(const BigReal& x) { return format_sci(x, 2); }

void fail(Outcome& o, const std::string& why) {
  o.pass = false;
  if (o.detail.size() < 400) o.detail += (o.detail.empty() ? "" : "; ") + why;
}

Outcome identity_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = verify_catalog(Precision(50), ten_pow_neg(30, 64));
  BigReal worst(64);
  for (const auto& r : results) {
    if (!r.pass) fail(o, r.id + " delta " + sci(r.delta) + (r.error.empty() ? "" : " " + r.error));
    if (worst < r.delta) worst = r.delta;
  }
  const double secs = seconds_since(t0);
  if (results.size() < 16) fail(o, "only " + std::to_string(results.size()) + " items");
  if (secs > 300) fail(o, "took " + std::to_string(secs) + " s");
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu items, max delta %s, %.1f s", results.size(), sci(worst).c_str(), secs);
    o.detail = buf;
  }
  return o;
}

Outcome summatory_bound() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = summatory_bound_report(std::uint64_t{1} << 22);
  const double secs = seconds_since(t0);
  if (!report.holds()) fail(o, std::to_string(report.violations) + " violations");
  if (secs > 30) fail(o, "took " + std::to_string(secs) + " s");
  char buf[160];
  if (o.pass) {
    std::snprintf(buf, sizeof buf, "n <= 2^22, max |S|/(1+log2 n) = %.4f at n=%llu, %.2f s", report.max_ratio,
                  static_cast<unsigned long long>(report.worst_n), secs);
    o.detail = buf;
  }
  return o;
}

Outcome gamma_identities() {
  Outcome o;
  const Precision p(50);
  std::vector<Rational> grid;
  for (long k = 1; k <= 11; ++k) grid.push_back(make_rational(k, 12));
  for (long k : {1L, 3L, 9L}) grid.push_back(make_rational(k, 20));
  const BigReal pi = const_pi(p), sqrt_pi = sqrt(pi), tol = ten_pow_neg(40, 64);
  BigReal worst(64);
  for (const auto& z : grid) {
    const BigReal refl = abs(gamma(z, p) * gamma(Rational(1 - z), p) - pi / trig_pi(TrigKind::Sin, z, p));
    const BigReal two_pow = pow(BigReal(2, p.bits()), BigReal(Rational(2 * z - 1), p.bits()));
    const BigReal dup =
        abs(two_pow * gamma(z, p) * gamma(Rational(z + make_rational(1, 2)), p) - sqrt_pi * gamma(Rational(2 * z), p));
    if (!(refl <= tol)) fail(o, "reflection at " + to_string(z) + ": " + sci(refl));
    if (!(dup <= tol)) fail(o, "duplication at " + to_string(z) + ": " + sci(dup));
    worst = max(worst, max(refl.rounded(64), dup.rounded(64)));
  }
  if (o.pass) o.detail = std::to_string(grid.size()) + " points, max residual " + sci(worst);
  return o;
}

Outcome lemma_general() {
  Outcome o;
  const Precision p(50);
  BigReal worst(64);
  for (const Rational& b : {make_rational(1, 2), Rational(2), Rational(3), make_rational(7, 3)}) {
    const GFunctionSpec g = make_g_function({b}, {Rational(1)});
    const LemmaReduction s = lemma_general_signed(g);
    const LemmaReduction r = lemma_general_reduce(g);
    const BigReal lhs = scale(eval_certified(s.product, p), s.boundary_factor, p.bits()).value;
    const BigReal rhs = eval_expr(ww_product(r.product) * GammaExpr::constant(r.boundary_factor), p);
    const BigReal d = abs(lhs - rhs).rounded(64);
    if (!(d <= ten_pow_neg(30, 64))) fail(o, "b=" + to_string(b) + " delta " + sci(d));
    worst = max(worst, d);
  }
  if (o.pass) o.detail = "b in {1/2, 2, 3, 7/3}, max delta " + sci(worst);
  return o;
}

Outcome short_products() {
  Outcome o;
  const Precision p(50);
  const BigReal tol = ten_pow_neg(30, 64);
  BigReal worst(64);
  auto check = [&](const std::string& name, const GammaExpr& lhs, const GammaExpr& rhs) {
    const BigReal d = abs(eval_expr(lhs, p) - eval_expr(rhs, p)).rounded(64);
    if (!(d <= tol)) fail(o, name + " delta " + sci(d));
    worst = max(worst, d);
  };
  for (long m = 2; m <= 30; ++m) {
    const ShortProduct sp = sandor_toth(m);
    check("Sandor-Toth m=" + std::to_string(m), sp.lhs, sp.rhs);
  }
  for (long n = 3; n <= 25; n += 2) {
    const NijenhuisResult r = nijenhuis(n);
    check("Nijenhuis n=" + std::to_string(n), r.product, r.value);
  }
  const auto bz = borwein_zucker();
  check("Borwein-Zucker 24", bz[0].lhs, bz[0].rhs);
  check("Borwein-Zucker 20", bz[1].lhs, bz[1].rhs);
  if (o.pass) o.detail = "29 + 12 + 2 relations, max delta " + sci(worst);
  return o;
}

Outcome flajolet_martin_check() {
  Outcome o;
  const FlajoletMartin fm30 = flajolet_martin(Precision(30));
  const FlajoletMartin fm40 = flajolet_martin(Precision(40));
  const BigReal r_delta = abs(fm30.R.value - fm30.R_via_Q.value);
  if (!(r_delta <= fm30.R.abs_error_bound + fm30.R_via_Q.abs_error_bound))
    fail(o, "R routes differ by " + sci(r_delta));
  const BigReal q_delta = abs(fm30.Q.value - fm40.Q.value);
  if (!(q_delta <= fm30.Q.abs_error_bound + fm40.Q.abs_error_bound)) fail(o, "Q moved by " + sci(q_delta));
  if (!(fm30.Q.abs_error_bound <= ten_pow_neg(30, 64))) fail(o, "Q bound " + sci(fm30.Q.abs_error_bound));
  if (format_decimal(fm30.Q.value, 30) != format_decimal(fm40.Q.value, 30)) fail(o, "Q digits changed");
  const Precision lo(20);
  const BigReal q_partial = eval_partial(flajolet_martin_q_spec(), 10000000, lo);
  const BigReal q_brute = abs(q_partial - fm30.Q.value);
  if (!(q_brute <= ten_pow_neg(5, 64))) fail(o, "brute-force Q off by " + sci(q_brute));
  // R by brute force: e^gamma sqrt2/3 times the partial product
  BigReal eg(lo.bits());
  mpfr_const_euler(eg.raw(), MPFR_RNDN);
  const BigReal r_partial =
      exp(eg) * sqrt(BigReal(2, lo.bits())) / 3L * eval_partial(flajolet_martin_r_spec(), 10000000, lo);
  const BigReal r_brute = abs(r_partial - fm30.R.value);
  if (!(r_brute <= ten_pow_neg(5, 64))) fail(o, "brute-force R off by " + sci(r_brute));
  if (o.pass)
    o.detail = "Q=" + format_decimal(fm30.Q.value, 30) + " R=" + format_decimal(fm30.R.value, 30) + ", routes differ " +
               sci(r_delta) + ", brute force " + sci(max(q_brute.rounded(64), r_brute.rounded(64)));
  return o;
}

Outcome von_haeseler_check() {
  Outcome o;
  const Precision p(35);
  const BigReal tol = ten_pow_neg(25, 64);
  const BigReal half_pi = const_pi(p) / 2L;
  const VonHaeseler s1 = von_haeseler(1, p);
  if (!(abs(s1.lhs.value - half_pi) <= tol)) fail(o, "s=1 lhs");
  if (!(abs(s1.rhs.value - half_pi) <= tol)) fail(o, "s=1 rhs");
  BigReal worst(64);
  for (long s : {2L, 3L}) {
    const VonHaeseler v = von_haeseler(s, p);
    const BigReal d = abs(v.lhs.value - v.rhs.value).rounded(64);
    if (!(d <= tol)) fail(o, "s=" + std::to_string(s) + " delta " + sci(d));
    worst = max(worst, d);
  }
  if (o.pass) o.detail = "s=1 equals pi/2, s=2,3 max delta " + sci(worst);
  return o;
}

Outcome elliptic() {
  Outcome o;
  const Precision p(50);
  const CertifiedValue v = eval_elliptic_half(p);
  const GammaExpr closed = simplify(GammaExpr::gamma(make_rational(1, 4), 2) * GammaExpr::constant(make_rational(1, 8)) *
                                    GammaExpr::two_power(make_rational(-1, 2)) * GammaExpr::pi_power(-1));
  const BigReal d = abs(v.value - eval_expr(closed, p)).rounded(64);
  if (!(d <= ten_pow_neg(30, 64))) fail(o, "delta " + sci(d));
  if (o.pass) o.detail = "K(1/2)/(2 sqrt2) = " + to_string(closed) + ", delta " + sci(d);
  return o;
}

Outcome algebraicity() {
  Outcome o;
  int tangent = 0;
  for (long q = 1; q <= 12; ++q)
    for (long p = 1; p < 2 * q; ++p) {
      const Rational b = make_rational(p, q);
      if (b.get_den() != q) continue;
      const Rational c = 2 - b;
      if (is_integer(Rational(b / 4)) || is_integer(Rational((c - 2) / 4))) continue;
      ++tangent;
      if (!corollary_pair_check(b, c).algebraic) fail(o, "tangent b=" + to_string(b));
    }
  if (corollary_simple_check(2).algebraic) fail(o, "simple(2) algebraic");
  if (corollary_simple_check(3).algebraic) fail(o, "simple(3) algebraic");
  if (!rohrlich_check({make_rational(1, 2)}).algebraic) fail(o, "[1/2]");
  if (rohrlich_check({make_rational(1, 4)}).algebraic) fail(o, "[1/4]");
  if (!rohrlich_check({make_rational(1, 4), make_rational(3, 4)}).algebraic) fail(o, "[1/4, 3/4]");
  if (o.pass) o.detail = std::to_string(tangent) + " tangent pairs algebraic; simple(2), simple(3), [1/4] not; [1/2], [1/4,3/4] algebraic";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const Precision p(20);
  const BigReal tol = ten_pow_neg(5, 64);
  int checked = 0, skipped = 0;
  BigReal worst(64);
  for (const auto& rec : identity_catalog()) {
    const auto partial = partial_oracle(rec, 10000000, p);
    if (!partial) {
      ++skipped;  // a finite gamma product has no partial-product form
      continue;
    }
    const BigReal d = abs(*partial - eval_identity_lhs(rec, p).value).rounded(64);
    if (!(d <= tol)) fail(o, rec.id + " delta " + sci(d));
    worst = max(worst, d);
    ++checked;
  }
  if (o.pass)
    o.detail = std::to_string(checked) + " items at N=10^7, max delta " + sci(worst) + " (" + std::to_string(skipped) +
               " pure gamma products n/a)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"identity suite at 50 digits, tolerance 1e-30", identity_suite},
      {"summatory bound |S(n)| <= 1 + log2 n", summatory_bound},
      {"reflection and duplication residuals <= 1e-40", gamma_identities},
      {"signed product equals reduced unsigned product", lemma_general},
      {"short gamma products", short_products},
      {"Flajolet-Martin consistency and stability", flajolet_martin_check},
      {"von Haeseler series", von_haeseler_check},
      {"elliptic integral by AGM", elliptic},
      {"algebraicity verdicts", algebraicity},
      {"certified evaluator against partial products", oracle_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    std::printf("%s criterion %zu: %s (%s) [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
