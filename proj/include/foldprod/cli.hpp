#pragma once

// Command-line front end. parse_args turns argv into a CommandRequest, render
// turns it back, run executes it against an output stream.
//
// Exit codes: 0 success, 1 usage error, 2 domain or precision error,
// 3 a verification item failed its tolerance.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "foldprod/algebraicity.hpp"
#include "foldprod/closed_forms.hpp"
#include "foldprod/error.hpp"
#include "foldprod/gamma_expr.hpp"
#include "foldprod/mpnum.hpp"
#include "foldprod/products.hpp"
#include "foldprod/rational.hpp"
#include "foldprod/sequences.hpp"
#include "foldprod/verify.hpp"

namespace foldprod {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kDefaultDigits = 30;

struct CommandRequest {
  std::string command;  // eval, closed, verify, algebraic, seq, report

  // eval, and closed --theorem ww
  Weight weight = Weight::Paperfold;
  std::vector<Rational> num, den;
  std::int64_t start = 0;
  std::optional<std::int64_t> partial;  // also print the N-term partial product

  // closed, algebraic
  std::string theorem;
  std::optional<Rational> b, c;
  std::optional<long> k, l, j, m, n;
  std::vector<Rational> args;  // algebraic --args: a raw Rohrlich instance

  // seq
  SeqKind kind = SeqKind::Paperfold;
  std::uint64_t count = 16;
  bool summatory = false;

  // verify
  bool all = false;
  std::vector<std::string> ids;
  std::string tolerance;  // decimal, e.g. "1e-25"; empty means 10^-(digits-10)

  int digits = kDefaultDigits;
  std::string format = "text";
  bool no_timing = false;

  friend bool operator==(const CommandRequest&, const CommandRequest&) = default;
};

/// Thrown by parse_args for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

namespace detail {

inline const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names = {"simple",      "simple-alt", "pair",      "t",
                                                 "chain",       "ushift",     "tangent",   "ww",
                                                 "sandor-toth", "nijenhuis",  "borwein-zucker"};
  return names;
}

inline std::vector<Rational> parse_rationals(const std::vector<std::string>& texts, const char* flag) {
  std::vector<Rational> out;
  for (const auto& t : texts) {
    try {
      out.push_back(parse_rational(t));
    } catch (const Error& e) {
      throw Error(ErrorCode::UsageError, std::string("--") + flag + ": " + e.what());
    }
  }
  return out;
}

inline int default_digits() {
  const char* env = std::getenv("FOLDPROD_DIGITS");
  if (env == nullptr || *env == '\0') return kDefaultDigits;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0') throw Error(ErrorCode::UsageError, std::string("FOLDPROD_DIGITS is not an integer: '") + env + "'");
  return static_cast<int>(std::clamp(v, -1L, 100000L));
}

}  // namespace detail

/// argv without the program name. Unknown flags and positional arguments are
/// rejected with UsageError.
inline CommandRequest parse_args(const std::vector<std::string>& argv) {
  CommandRequest req;
  CLI::App app{"Certified paperfolding and Thue-Morse products", "foldprod"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  std::string weight = "paperfold", kind = "paperfold";
  std::vector<std::string> num, den, args;
  std::string b, c;
  int digits = 0;
  std::int64_t partial = 0;
  long k = 0, l = 0, j = 0, m = 0, n = 0;

  std::vector<CLI::Option*> digit_opts;
  auto common = [&](CLI::App* sub) {
    digit_opts.push_back(sub->add_option("--digits", digits, "certified decimal digits, 10..1000 (default $FOLDPROD_DIGITS or 30)"));
    sub->add_option("--format", req.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  };
  auto product_opts = [&](CLI::App* sub) {
    sub->add_option("--num", num, "numerator roots a_i (p/q), factor (n+a_i)");
    sub->add_option("--den", den, "denominator roots b_i (p/q), factor (n+b_i)");
  };

  CLI::App* eval = app.add_subcommand("eval", "certified value of a weighted product");
  product_opts(eval);
  eval->add_option("--weight", weight, "paperfold, thue-morse, alternating or unsigned");
  eval->add_option("--start", req.start, "first index n0");
  CLI::Option* partial_opt = eval->add_option("--partial", partial, "also print the partial product up to N");
  common(eval);

  CLI::App* closed = app.add_subcommand("closed", "closed form as a gamma expression");
  closed->add_option("--theorem", req.theorem, "which closed form")->required()->check(CLI::IsMember(detail::theorem_names()));
  closed->add_option("--b", b, "parameter b (p/q)");
  closed->add_option("--c", c, "parameter c (p/q)");
  CLI::Option* k_opt = closed->add_option("--k", k, "chain start / tangent index");
  CLI::Option* l_opt = closed->add_option("--l", l, "chain end");
  CLI::Option* j_opt = closed->add_option("--j", j, "shift level");
  CLI::Option* m_opt = closed->add_option("--m", m, "Sandor-Toth modulus");
  CLI::Option* n_opt = closed->add_option("--n", n, "Nijenhuis parameter (odd)");
  product_opts(closed);
  common(closed);

  CLI::App* verify = app.add_subcommand("verify", "check catalog identities numerically");
  verify->add_flag("--all", req.all, "every catalog item");
  verify->add_option("--id", req.ids, "catalog id (repeatable)");
  verify->add_option("--tolerance", req.tolerance, "pass threshold for |lhs-rhs| (default 10^-(digits-10))");
  verify->add_flag("--no-timing", req.no_timing, "omit runtimes from the output");
  common(verify);

  CLI::App* algebraic = app.add_subcommand("algebraic", "algebraicity verdict under the Rohrlich conjecture");
  algebraic->add_option("--b", b, "parameter b (p/q)");
  algebraic->add_option("--c", c, "parameter c (p/q); omitted for the single-parameter family");
  algebraic->add_option("--args", args, "gamma arguments for a raw Rohrlich check");
  common(algebraic);

  CLI::App* seq = app.add_subcommand("seq", "dump sequence terms");
  seq->add_option("--kind", kind, "paperfold, thue-morse or alternating");
  seq->add_option("--count", req.count, "number of terms")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 24));
  seq->add_flag("--summatory", req.summatory, "also print S(n+1)");
  common(seq);

  CLI::App* report = app.add_subcommand("report", "catalog plus short products, von Haeseler and Flajolet-Martin");
  report->add_flag("--no-timing", req.no_timing, "omit runtimes from the output");
  common(report);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help()};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{kVersion};
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UsageError, std::string(e.what()) + "\n" + app.help());
  }

  CLI::App* sub = app.get_subcommands().front();
  req.command = sub->get_name();

  try {
    req.weight = parse_weight(weight);
    req.kind = parse_seq_kind(kind);
  } catch (const Error& e) {
    throw Error(ErrorCode::UsageError, e.what());
  }
  req.num = detail::parse_rationals(num, "num");
  req.den = detail::parse_rationals(den, "den");
  req.args = detail::parse_rationals(args, "args");
  if (!b.empty()) req.b = detail::parse_rationals({b}, "b").front();
  if (!c.empty()) req.c = detail::parse_rationals({c}, "c").front();

  if (partial_opt->count()) req.partial = partial;
  if (k_opt->count()) req.k = k;
  if (l_opt->count()) req.l = l;
  if (j_opt->count()) req.j = j;
  if (m_opt->count()) req.m = m;
  if (n_opt->count()) req.n = n;
  const bool digits_given =
      std::any_of(digit_opts.begin(), digit_opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
  req.digits = digits_given ? digits : detail::default_digits();
  if (req.digits < 10 || req.digits > 1000)
    throw Error(ErrorCode::UsageError, "--digits must be in [10, 1000], got " + std::to_string(req.digits));

  if (req.command == "eval" && (req.num.empty() || req.den.empty()))
    throw Error(ErrorCode::UsageError, "eval needs --num and --den");
  if (req.command == "verify" && !req.all && req.ids.empty())
    throw Error(ErrorCode::UsageError, "verify needs --all or --id");
  if (req.command == "verify" && req.all && !req.ids.empty())
    throw Error(ErrorCode::UsageError, "verify takes --all or --id, not both");
  if (!req.tolerance.empty()) {
    try {
      if (BigReal::from_string(req.tolerance, 64).sign() <= 0) throw Error(ErrorCode::ParseError, "not positive");
    } catch (const Error& e) {
      throw Error(ErrorCode::UsageError, "--tolerance: " + std::string(e.what()));
    }
  }
  if (req.command == "algebraic" && !req.b && req.args.empty())
    throw Error(ErrorCode::UsageError, "algebraic needs --b or --args");
  if (req.command == "algebraic" && req.b && !req.args.empty())
    throw Error(ErrorCode::UsageError, "algebraic takes --b/--c or --args, not both");
  if (req.command == "algebraic" && req.c && !req.b) throw Error(ErrorCode::UsageError, "--c needs --b");
  return req;
}

/// Inverse of parse_args: every option in --flag=value form.
inline std::vector<std::string> render(const CommandRequest& r) {
  std::vector<std::string> out{r.command};
  auto opt = [&](const char* name, const std::string& value) { out.push_back(std::string("--") + name + "=" + value); };
  auto rationals = [&](const char* name, const std::vector<Rational>& v) {
    for (const auto& x : v) opt(name, to_string(x));
  };
  if (r.command == "eval") {
    opt("weight", to_string(r.weight));
    rationals("num", r.num);
    rationals("den", r.den);
    opt("start", std::to_string(r.start));
    if (r.partial) opt("partial", std::to_string(*r.partial));
  } else if (r.command == "closed") {
    opt("theorem", r.theorem);
    if (r.b) opt("b", to_string(*r.b));
    if (r.c) opt("c", to_string(*r.c));
    if (r.k) opt("k", std::to_string(*r.k));
    if (r.l) opt("l", std::to_string(*r.l));
    if (r.j) opt("j", std::to_string(*r.j));
    if (r.m) opt("m", std::to_string(*r.m));
    if (r.n) opt("n", std::to_string(*r.n));
    rationals("num", r.num);
    rationals("den", r.den);
  } else if (r.command == "verify") {
    if (r.all) out.push_back("--all");
    for (const auto& id : r.ids) opt("id", id);
    if (!r.tolerance.empty()) opt("tolerance", r.tolerance);
  } else if (r.command == "algebraic") {
    if (r.b) opt("b", to_string(*r.b));
    if (r.c) opt("c", to_string(*r.c));
    rationals("args", r.args);
  } else if (r.command == "seq") {
    opt("kind", std::string(to_string(r.kind)));
    opt("count", std::to_string(r.count));
    if (r.summatory) out.push_back("--summatory");
  }
  if ((r.command == "verify" || r.command == "report") && r.no_timing) out.push_back("--no-timing");
  opt("digits", std::to_string(r.digits));
  opt("format", r.format);
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline void csv_row(std::ostream& os, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) os << ',';
    os << csv_field(f);
    first = false;
  }
  os << '\n';
}

inline const char* csv_header() { return "id,source,value,error_bound,pass"; }

inline nlohmann::ordered_json envelope(const std::string& command) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["results"] = nlohmann::ordered_json::array();
  return j;
}

inline std::string sci(const BigReal& x) { return format_sci(x, 3); }

}  // namespace detail

/// Outcomes sorted by id. An empty list prints only the header (text, csv) or
/// an empty results array (json).
inline void emit_report(std::vector<VerificationOutcome> results, const std::string& format, int digits, bool timing,
                        const std::string& command, std::ostream& os) {
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  if (format == "json") {
    auto j = detail::envelope(command);
    for (const auto& r : results) {
      nlohmann::ordered_json o;
      o["id"] = r.id;
      o["source"] = r.source;
      o["lhs"] = format_decimal(r.lhs, digits);
      o["rhs"] = format_decimal(r.rhs, digits);
      o["delta"] = detail::sci(r.delta);
      o["bound"] = detail::sci(r.bound);
      o["tolerance"] = detail::sci(r.tolerance);
      o["pass"] = r.pass;
      if (timing) o["seconds"] = r.seconds;
      if (!r.error.empty()) o["error"] = r.error;
      j["results"].push_back(o);
    }
    os << j.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    os << detail::csv_header() << '\n';
    for (const auto& r : results)
      detail::csv_row(os, {r.id, r.source, format_decimal(r.lhs, digits), detail::sci(r.bound), r.pass ? "true" : "false"});
    return;
  }
  os << "status  id                    delta       bound       tolerance" << (timing ? "   seconds" : "") << '\n';
  std::size_t passed = 0;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s  %-20s  %-10s  %-10s  %-10s", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                  detail::sci(r.delta).c_str(), detail::sci(r.bound).c_str(), detail::sci(r.tolerance).c_str());
    os << line;
    if (timing) {
      std::snprintf(line, sizeof line, "  %8.3f", r.seconds);
      os << line;
    }
    os << "  " << r.source;
    if (!r.error.empty()) os << "  [" << r.error << "]";
    os << '\n';
    passed += r.pass ? 1 : 0;
  }
  if (!results.empty()) os << passed << "/" << results.size() << " passed\n";
}

namespace detail {

inline int run_eval(const CommandRequest& r, std::ostream& os) {
  const Precision p(r.digits);
  const ProductSpec spec = make_product(r.num, r.den, r.start, r.weight);
  const CertifiedValue v = eval_certified(spec, p);
  std::optional<BigReal> partial;
  if (r.partial) partial = eval_partial(spec, std::max(*r.partial, spec.start()), p);
  const std::string product = to_string(spec);
  if (r.format == "json") {
    auto j = envelope(r.command);
    nlohmann::ordered_json o{{"id", "eval"}, {"source", product}, {"value", format_decimal(v.value, r.digits)},
                             {"error_bound", sci(v.abs_error_bound)}};
    if (partial) o["partial"] = {{"N", *r.partial}, {"value", format_decimal(*partial, r.digits)}};
    j["results"].push_back(o);
    os << j.dump(2) << '\n';
  } else if (r.format == "csv") {
    os << csv_header() << '\n';
    csv_row(os, {"eval", product, format_decimal(v.value, r.digits), sci(v.abs_error_bound), ""});
    if (partial) csv_row(os, {"partial-N" + std::to_string(*r.partial), product, format_decimal(*partial, r.digits), "", ""});
  } else {
    os << "product      " << product << '\n';
    os << "value        " << format_decimal(v.value, r.digits) << '\n';
    os << "error_bound  " << sci(v.abs_error_bound) << '\n';
    if (partial) os << "partial      " << format_decimal(*partial, r.digits) << "  (N=" << *r.partial << ")\n";
  }
  return 0;
}

template <class T>
const T& need(const std::optional<T>& v, const char* flag, const std::string& theorem) {
  if (!v) throw Error(ErrorCode::UsageError, "theorem " + theorem + " needs --" + flag);
  return *v;
}

struct ClosedResult {
  std::string lhs;  // what the expression is a closed form of
  GammaExpr expr;
};

inline ClosedResult closed_form(const CommandRequest& r) {
  const std::string& t = r.theorem;
  if (t == "simple") return {to_string(theorem_simple_product(need(r.b, "b", t))), theorem_simple(*r.b)};
  if (t == "simple-alt") return {to_string(theorem_simple_product(need(r.b, "b", t))), theorem_simple_alt(*r.b)};
  if (t == "pair") {
    const Rational& b = need(r.b, "b", t);
    const Rational& c = need(r.c, "c", t);
    return {to_string(theorem_pair_product(b, c)), theorem_pair(b, c)};
  }
  if (t == "t") {
    const Rational& b = need(r.b, "b", t);
    const long k = need(r.k, "k", t);
    const GammaExpr e = t_k(b, k);
    return {to_string(theorem_simple_product(t_argument(b, k))), e};
  }
  if (t == "chain") {
    const Rational& b = need(r.b, "b", t);
    const long k = need(r.k, "k", t), l = need(r.l, "l", t);
    return {to_string(t_chain_product(b, k, l)), t_chain(b, k, l)};
  }
  if (t == "ushift") {
    const Rational& c = need(r.c, "c", t);
    const long j = need(r.j, "j", t);
    return {to_string(u_shift_product(c, j)), u_shift(c, j)};
  }
  if (t == "tangent") {
    const Rational& b = need(r.b, "b", t);
    return {to_string(tangent_product_spec(b)), tangent_product(b)};
  }
  if (t == "ww") {
    const ProductSpec spec = make_product(r.num, r.den, r.start, Weight::Unsigned);
    return {to_string(spec), simplify(ww_product(spec))};
  }
  if (t == "sandor-toth") {
    const ShortProduct sp = sandor_toth(need(r.m, "m", t));
    return {to_string(sp.lhs), sp.rhs};
  }
  if (t == "nijenhuis") {
    const NijenhuisResult nr = nijenhuis(need(r.n, "n", t));
    return {to_string(nr.product), nr.value};
  }
  throw Error(ErrorCode::UsageError, "unknown theorem '" + t + "'");
}

inline int run_closed(const CommandRequest& r, std::ostream& os) {
  const Precision p(r.digits);
  std::vector<ClosedResult> items;
  if (r.theorem == "borwein-zucker") {
    for (const auto& sp : borwein_zucker()) items.push_back({to_string(sp.lhs), sp.rhs});
  } else {
    items.push_back(closed_form(r));
  }
  if (r.format == "json") {
    auto j = envelope(r.command);
    for (const auto& it : items)
      j["results"].push_back({{"id", r.theorem},
                              {"source", it.lhs},
                              {"expr", to_string(it.expr)},
                              {"value", format_decimal(eval_expr(it.expr, p), r.digits)}});
    os << j.dump(2) << '\n';
  } else if (r.format == "csv") {
    os << csv_header() << '\n';
    for (const auto& it : items) csv_row(os, {r.theorem, it.lhs, format_decimal(eval_expr(it.expr, p), r.digits), "", ""});
  } else {
    for (const auto& it : items) {
      os << to_string(it.expr) << '\n';
      os << "  of     " << it.lhs << '\n';
      os << "  value  " << format_decimal(eval_expr(it.expr, p), r.digits) << '\n';
    }
  }
  return 0;
}

inline int run_algebraic(const CommandRequest& r, std::ostream& os) {
  Verdict v;
  std::string source;
  std::optional<GammaExpr> closed;
  if (!r.args.empty()) {
    v = rohrlich_check(r.args);
    source = "prod G(a_i) / pi^(" + std::to_string(r.args.size()) + "/2)";
  } else if (r.c) {
    v = corollary_pair_check(*r.b, *r.c);
    closed = theorem_pair(*r.b, *r.c);
    source = "pair b=" + to_string(*r.b) + " c=" + to_string(*r.c);
  } else {
    v = corollary_simple_check(*r.b);
    closed = theorem_simple(*r.b);
    source = "simple b=" + to_string(*r.b);
  }
  const bool explicit_form = closed && closed->is_algebraic_form();
  std::string verdict;
  if (!v.algebraic)
    verdict = "not algebraic (conditional on the Rohrlich conjecture)";
  else if (explicit_form)
    verdict = "algebraic (unconditional by construction)";
  else
    verdict = "algebraic (conditional on the Rohrlich conjecture)";

  if (r.format == "json") {
    auto j = envelope(r.command);
    nlohmann::ordered_json o{{"id", "algebraic"}, {"source", source}, {"algebraic", v.algebraic},
                             {"conditional", !explicit_form}, {"verdict", verdict}};
    if (closed) o["closed_form"] = to_string(*closed);
    o["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& [m, value] : v.witnesses) o["witnesses"].push_back({{"m", m}, {"value", to_string(value)}});
    j["results"].push_back(o);
    os << j.dump(2) << '\n';
  } else if (r.format == "csv") {
    os << csv_header() << '\n';
    csv_row(os, {"algebraic", source, v.algebraic ? "algebraic" : "not-algebraic", "", ""});
  } else {
    os << source << ": " << verdict << '\n';
    if (closed) os << "  closed form  " << to_string(*closed) << '\n';
    for (const auto& [m, value] : v.witnesses) os << "  witness m=" << m << "  value " << to_string(value) << '\n';
  }
  return 0;
}

inline int run_seq(const CommandRequest& r, std::ostream& os) {
  const std::string name(to_string(r.kind));
  if (r.format == "json") {
    auto j = envelope(r.command);
    std::int64_t s = 0;
    for (std::uint64_t n = 0; n < r.count; ++n) {
      const int t = seq_term(r.kind, n);
      s += t;
      nlohmann::ordered_json o{{"n", n}, {"term", t}};
      if (r.summatory) o["S"] = s;
      j["results"].push_back(o);
    }
    os << j.dump(2) << '\n';
  } else if (r.format == "csv") {
    os << csv_header() << '\n';
    for (std::uint64_t n = 0; n < r.count; ++n) csv_row(os, {std::to_string(n), name, std::to_string(seq_term(r.kind, n)), "", ""});
  } else if (r.summatory) {
    std::int64_t s = 0;
    for (std::uint64_t n = 0; n < r.count; ++n) {
      const int t = seq_term(r.kind, n);
      s += t;
      os << n << ' ' << (t > 0 ? "+1" : "-1") << ' ' << s << '\n';
    }
  } else {
    for (std::uint64_t n = 0; n < r.count; ++n) os << (n ? " " : "") << (seq_term(r.kind, n) > 0 ? "+1" : "-1");
    os << '\n';
  }
  return 0;
}

inline int run_verify(const CommandRequest& r, std::ostream& os) {
  const Precision p(r.digits);
  const BigReal tol = r.tolerance.empty() ? default_tolerance(r.digits) : BigReal::from_string(r.tolerance, 64);
  std::vector<VerificationOutcome> results;
  if (r.command == "report") {
    results = verify_catalog(p, tol);
    for (auto& o : verify_supplementary(p, tol)) results.push_back(std::move(o));
  } else {
    if (!r.all) {
      std::vector<std::string> known;
      for (const auto& rec : identity_catalog()) known.push_back(rec.id);
      for (const auto& id : r.ids)
        if (std::find(known.begin(), known.end(), id) == known.end())
          throw Error(ErrorCode::DomainError, "unknown catalog id '" + id + "'");
    }
    results = verify_catalog(p, tol, r.all ? std::vector<std::string>{} : r.ids);
  }
  emit_report(results, r.format, r.digits, !r.no_timing, r.command, os);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& o) { return o.pass; });
  return ok ? 0 : 3;
}

}  // namespace detail

/// Executes a parsed request. Library errors go to err with exit 2 (1 for
/// usage errors).
inline int run(const CommandRequest& r, std::ostream& out, std::ostream& err) {
  try {
    if (r.command == "eval") return detail::run_eval(r, out);
    if (r.command == "closed") return detail::run_closed(r, out);
    if (r.command == "algebraic") return detail::run_algebraic(r, out);
    if (r.command == "seq") return detail::run_seq(r, out);
    if (r.command == "verify" || r.command == "report") return detail::run_verify(r, out);
    throw Error(ErrorCode::UsageError, "unknown command '" + r.command + "'");
  } catch (const Error& e) {
    err << "foldprod: " << e.what() << '\n';
    return e.code() == ErrorCode::UsageError ? 1 : 2;
  }
}

/// parse_args + run.
inline int run_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CommandRequest req;
  try {
    req = parse_args(argv);
  } catch (const HelpRequested& h) {
    out << h.text << '\n';
    return 0;
  } catch (const Error& e) {
    err << "foldprod: " << e.what() << '\n';
    return 1;
  }
  return run(req, out, err);
}

}  // namespace foldprod
