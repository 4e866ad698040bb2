#pragma once

// Command-line front end. run() parses, dispatches, and returns the exit code:
// 0 when every verdict matches its expectation, 1 on an unexpected verdict or
// a stabilization failure, 2 on usage or precondition errors.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strange_lab/cache.hpp"
#include "strange_lab/json_io.hpp"
#include "strange_lab/verify.hpp"

namespace strange_lab::cli {

enum exit_code : int { ok = 0, unexpected = 1, usage = 2 };

/// Upper limits for verification sweeps.
struct ParamBox {
  long max_lambda = 2;
  long max_m = 3;
  long max_p = 23;
  int max_t = 3;

  static ParamBox from_json(const json& j) {
    ParamBox b;
    b.max_lambda = j.value("max_lambda", b.max_lambda);
    b.max_m = j.value("max_m", b.max_m);
    b.max_p = j.value("max_p", b.max_p);
    b.max_t = j.value("max_t", b.max_t);
    return b;
  }

  void check(long p, long lambda, long m_max, int t) const {
    auto fail = [](const std::string& what) { throw precondition_error("outside parameter box: " + what); };
    if (p > max_p) fail("p = " + std::to_string(p) + " > " + std::to_string(max_p));
    if (lambda > max_lambda) fail("lambda = " + std::to_string(lambda) + " > " + std::to_string(max_lambda));
    if (m_max > max_m) fail("m_max = " + std::to_string(m_max) + " > " + std::to_string(max_m));
    if (t > max_t) fail("t = " + std::to_string(t) + " > " + std::to_string(max_t));
  }
};

struct CliConfig {
  std::filesystem::path cache_dir = ".strange_lab_cache";
  std::string output_format = "json";
  bool use_cache = true;
  ParamBox box;
};

namespace detail {

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw precondition_error(path + ": " + e.what());
  }
}

inline std::string csv_coords(const CycNum& x) {
  std::string out;
  for (const auto& c : x.coords()) out += "," + rat_to_string(c);
  return out;
}

inline std::string join(const std::vector<long>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return out;
}

struct SpecFlags {
  std::string family = "F";
  int t = 1;
  long r = 1;
  long s = 0;
  long N = 1;

  void add_to(CLI::App* app) {
    app->add_option("--family", family, "Series family")->check(CLI::IsMember({"F", "Ft"}));
    app->add_option("--t", t, "Torus index (Ft only)");
    app->add_option("--r", r, "Exponent r in (zeta_N - q)^r");
    app->add_option("--s", s, "Prefactor exponent s");
    app->add_option("--N", N, "Root of unity order");
  }

  StrangeSpec spec() const {
    StrangeSpec sp;
    sp.family = family == "Ft" ? Family::Ft : Family::F;
    sp.t = t;
    sp.r = r;
    sp.s = s;
    sp.N = N;
    return sp.normalized();
  }
};

class Runner {
 public:
  Runner(CliConfig cfg, std::ostream& out, std::ostream& err) : cfg_(std::move(cfg)), out_(out), err_(err) {}

  XiTable table(const StrangeSpec& spec, long M) {
    if (!cfg_.use_cache) return xi_series(spec, M);
    XiCache& c = cache();
    const long before = c.hits();
    XiTable t = c.get_or_compute(spec, M);
    err_ << "cache " << (c.hits() > before ? "hit" : "miss") << ": " << c.path_for(spec, M).string() << '\n';
    return t;
  }

  XiProvider provider() {
    return [this](const StrangeSpec& s, long M) { return table(s, M); };
  }

  bool csv() const { return cfg_.output_format == "csv"; }
  const CliConfig& config() const { return cfg_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

 private:
  XiCache& cache() {
    if (!cache_) cache_.emplace(cfg_.cache_dir);
    return *cache_;
  }

  CliConfig cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<XiCache> cache_;
};

inline int cmd_expand(Runner& R, const SpecFlags& f, long order) {
  const XiTable t = R.table(f.spec(), order);
  if (R.csv()) {
    R.out() << "n";
    for (long i = 0; i < euler_phi(t.spec.N); ++i) R.out() << ",coord" << i;
    R.out() << '\n';
    for (long n = 0; n < t.M; ++n) R.out() << n << csv_coords(t.values[static_cast<std::size_t>(n)]) << '\n';
  } else {
    R.out() << to_json(t).dump(2) << '\n';
  }
  return ok;
}

struct VerifyCase {
  std::string name;
  std::string theorem = "main1";
  StrangeSpec spec;
  long p = 5;
  long lambda = 1;
  long m_max = 1;
  bool star = false;
  std::optional<std::vector<long>> js;
  bool expect_pass = true;
  std::map<long, BigInt> values;  // pinned coefficients xi(n), integers only
  std::string known_divergence;
};

inline StrangeSpec theorem_spec(const std::string& theorem, StrangeSpec spec) {
  if (theorem == "main1") {
    if (spec.family != Family::F) throw precondition_error("main1 applies to family F");
  } else if (theorem == "main2") {
    if (spec.family != Family::Ft) throw precondition_error("main2 applies to family Ft with t >= 2");
  } else if (theorem == "cor3") {
    spec.family = Family::Ft;
    spec.t = 2;
  } else {
    throw precondition_error("unknown theorem '" + theorem + "'");
  }
  return spec.normalized();
}

struct CaseOutcome {
  json report;
  std::string status;  // ok, divergent, unexpected
};

inline CaseOutcome run_case(Runner& R, const VerifyCase& c) {
  const StrangeSpec spec = theorem_spec(c.theorem, c.spec);
  R.config().box.check(c.p, c.lambda, c.m_max, spec.family == Family::Ft ? spec.t : 1);
  const CongruenceReport rep = verify_family(spec, c.p, c.lambda, c.m_max, c.star, c.js, R.provider());
  json j = to_json(rep);
  bool matches = c.expect_pass ? rep.all_pass() : rep.all_fail();
  if (!c.values.empty()) {
    const XiTable t = R.table(spec, ipow(BigInt(c.p), static_cast<unsigned long>(c.lambda)).get_si() * c.m_max);
    json pins = json::array();
    for (const auto& [n, want] : c.values) {
      const bool eq = n < t.M && t.values[static_cast<std::size_t>(n)] == CycNum(spec.N, want);
      matches = matches && eq;
      json pin{{"n", n}, {"expected", want.get_str()}, {"equal", eq}};
      if (n < t.M) pin["actual"] = to_json(t.values[static_cast<std::size_t>(n)]);
      pins.push_back(std::move(pin));
    }
    j["pinned_values"] = std::move(pins);
  }
  CaseOutcome o;
  o.status = matches ? "ok" : (c.known_divergence.empty() ? "unexpected" : "divergent");
  json head{{"name", c.name}, {"theorem", c.theorem}, {"expect", c.expect_pass ? "pass" : "fail"}, {"outcome", o.status}};
  if (!c.known_divergence.empty()) head["known_divergence"] = c.known_divergence;
  head.update(j);
  o.report = std::move(head);
  return o;
}

inline VerifyCase case_from_json(const json& j) {
  VerifyCase c;
  c.name = j.value("name", std::string());
  c.theorem = j.value("theorem", std::string("main1"));
  c.spec = j.contains("spec") ? spec_from_json(j.at("spec")) : StrangeSpec{};
  c.p = j.at("p").get<long>();
  c.lambda = j.value("lambda", 1L);
  c.m_max = j.value("m_max", 1L);
  c.star = j.value("star", false);
  if (j.contains("j")) c.js = j.at("j").get<std::vector<long>>();
  const std::string expect = j.value("expect", std::string("pass"));
  if (expect != "pass" && expect != "fail") throw precondition_error("fixture expect must be pass or fail");
  c.expect_pass = expect == "pass";
  if (j.contains("values"))
    for (const auto& [k, v] : j.at("values").items()) c.values[std::stol(k)] = BigInt(v.get<std::string>());
  c.known_divergence = j.value("known_divergence", std::string());
  return c;
}

inline void print_case_csv(std::ostream& os, const json& r) {
  for (const auto& v : r.at("verdicts")) {
    os << r.at("name").get<std::string>() << ',' << r.at("p") << ',' << r.at("lambda") << ',' << v.at("m") << ','
       << v.at("j") << ',' << v.at("n") << ',' << (v.at("pass").get<bool>() ? "pass" : "fail") << ','
       << r.at("outcome").get<std::string>();
    if (v.contains("value"))
      for (const auto& c : v.at("value").at("coords")) os << ',' << c.get<std::string>();
    os << '\n';
  }
}

inline int emit_cases(Runner& R, const std::vector<CaseOutcome>& outs) {
  bool bad = false;
  for (const auto& o : outs) {
    bad = bad || o.status == "unexpected";
    if (o.status == "divergent")
      R.err() << "known divergence in '" << o.report.at("name").get<std::string>() << "'\n";
  }
  if (R.csv()) {
    R.out() << "name,p,lambda,m,j,n,verdict,outcome,coords\n";
    for (const auto& o : outs) print_case_csv(R.out(), o.report);
  } else if (outs.size() == 1) {
    R.out() << outs.front().report.dump(2) << '\n';
  } else {
    json arr = json::array();
    for (const auto& o : outs) arr.push_back(o.report);
    R.out() << json{{"cases", arr}, {"all_expected", !bad}}.dump(2) << '\n';
  }
  return bad ? unexpected : ok;
}

struct LemmaRow {
  std::string name;
  json params;
  bool pass = false;
};

inline std::vector<LemmaRow> lemma_suite(int t, long p) {
  std::vector<LemmaRow> rows;
  auto add = [&](std::string name, json params, bool pass) { rows.push_back({std::move(name), std::move(params), pass}); };
  for (long j = 0; j < p; ++j)
    for (long k = 0; k <= 1; ++k)
      add("alpha_stability", {{"M", 2}, {"Nbig", 3}, {"j", j}, {"k", k}}, check_alpha_stability(t, p, 2, 3, j, k));
  for (int tt : {t, 1}) {
    const ResidueSet set = tt == 1 ? residue_set(SetKind::S, p, 1, 0) : residue_set(SetKind::St, p, 1, 0, tt);
    for (long i = 0; i < p; ++i) {
      if (set.contains(i)) continue;
      const auto d = check_strong_divisibility(tt, p, p, 2 * p - 1, i);
      add(tt == 1 ? "strong_divisibility_F" : "strong_divisibility", {{"u", p}, {"Nbig", 2 * p - 1}, {"i", i}, {"lambda", d.lambda}},
          d.divisible);
    }
  }
  for (long lam = 1; lam <= 2; ++lam)
    for (long m = lam; m <= lam + 2; ++m)
      add("nilpotence", {{"k", 1}, {"r", 1}, {"lambda", lam}, {"m_exp", m}}, check_nilpotence(1, 1, p, lam, m).holds);
  const bool classed = prime_class(t, p) != PrimeClass::None;
  if (classed) {
    for (long n = 1; n <= 2; ++n) {
      const auto d = check_dissection_identity(t, p, n);
      add("dissection", {{"n", n}, {"i0", d.i0}, {"e", d.e}, {"sign", d.sign_found()}}, d.passes());
    }
  }
  for (long n = 0; n <= 1; ++n)
    for (long i = 0; i < p; ++i) add("moment", {{"n", n}, {"i", i}}, check_moment_identity(t, p, n, i).equal());
  if (classed)
    for (long n = 0; n <= 1; ++n) add("inversion", {{"n", n}}, check_gar_inversion(t, p, n).equal());
  return rows;
}

inline int cmd_lemmas(Runner& R, int t, long p) {
  if (t < 2) throw precondition_error("lemmas need t >= 2");
  if (p < 5 || !is_prime(p)) throw precondition_error("lemmas need a prime p >= 5");
  R.config().box.check(p, 1, 1, t);
  const auto rows = lemma_suite(t, p);
  const bool all = std::all_of(rows.begin(), rows.end(), [](const LemmaRow& r) { return r.pass; });
  if (R.csv()) {
    R.out() << "check,params,pass\n";
    for (const auto& r : rows) R.out() << r.name << ",\"" << r.params.dump() << "\"," << (r.pass ? "true" : "false") << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"check", r.name}, {"params", r.params}, {"pass", r.pass}});
    json doc{{"t", t}, {"p", p}, {"prime_class", to_string(prime_class(t, p))}, {"checks", arr}, {"all_pass", all}};
    R.out() << doc.dump(2) << '\n';
  }
  return all ? ok : unexpected;
}

inline int cmd_sets(Runner& R, long p, long r, long s, int t, bool star) {
  const ResidueSet set = t >= 2 ? residue_set(star ? SetKind::St_star : SetKind::St, p, r, s, t)
                                : residue_set(star ? SetKind::S_star : SetKind::S, p, r, s);
  if (R.csv()) {
    R.out() << "p,kind,r,s,t,members,max\n"
            << set.p << ',' << to_string(set.kind) << ',' << set.r << ',' << set.s << ',' << (set.t ? std::to_string(set.t) : "")
            << ',' << join(set.members, ';') << ',' << (set.members.empty() ? "" : std::to_string(set.max())) << '\n';
  } else {
    R.out() << to_json(set).dump(2) << '\n';
  }
  return ok;
}

inline int cmd_dissect(Runner& R, const std::string& family, int t, long p, long height) {
  if (p < 2) throw precondition_error("dissect needs p >= 2");
  if (height < 0) throw precondition_error("dissect needs height >= 0");
  const int tt = family == "F" ? 1 : t;
  const IntPoly f = truncation_nonneg(tt, height);
  const auto d = dissect(f, p);
  const IntPoly back = reassemble(d);
  const std::uint64_t h0 = fnv1a(to_json(f).dump()), h1 = fnv1a(to_json(back).dump());
  if (R.csv()) {
    R.out() << "i,exponent,coeff\n";
    for (long i = 0; i < p; ++i) {
      const IntPoly& a = d.parts[static_cast<std::size_t>(i)];
      for (long e = a.min_exp(); e <= a.max_exp(); ++e) R.out() << i << ',' << e << ',' << a.coeff(e).get_str() << '\n';
    }
  } else {
    json parts = json::array();
    for (long i = 0; i < p; ++i) {
      json e{{"i", i}};
      e.update(to_json(d.parts[static_cast<std::size_t>(i)]));
      parts.push_back(std::move(e));
    }
    std::ostringstream hs;
    hs << std::hex << h1;
    R.out() << json{{"family", family}, {"t", tt}, {"p", p}, {"height", height}, {"parts", parts},
                    {"reassembly_hash", hs.str()}, {"reassembles", h0 == h1 && back == f}}
                   .dump(2)
            << '\n';
  }
  return back == f ? ok : unexpected;
}

inline int cmd_coeffs(Runner& R, int t, long p, long n_max, const std::string& convention) {
  if (n_max < 0) throw precondition_error("coeffs needs n-max >= 0");
  const SignConvention conv = convention == "printed" ? SignConvention::printed : SignConvention::series;
  bool all = true;
  json rows = json::array();
  if (R.csv()) R.out() << "n,route,coords\n";
  for (long n = 0; n <= n_max; ++n) {
    const LCoeffs L = l_coeffs(t, p, n, conv);
    const CycNum bd = b_via_derivative(t, p, n);
    const bool equal = L.b == bd && L.b_from_c == bd;
    const bool negated = L.b == -bd && L.b_from_c == -bd;
    all = all && (conv == SignConvention::series ? equal : negated);
    if (R.csv()) {
      R.out() << n << ",formula" << csv_coords(L.b) << '\n'
              << n << ",from_c" << csv_coords(L.b_from_c) << '\n'
              << n << ",derivative" << csv_coords(bd) << '\n';
    } else {
      json c = json::array();
      for (const auto& x : L.c) c.push_back(to_json(x));
      rows.push_back({{"n", n}, {"c", c}, {"b", to_json(L.b)}, {"b_from_c", to_json(L.b_from_c)},
                      {"b_via_derivative", to_json(bd)}, {"equal", equal}, {"negated", negated}});
    }
  }
  if (!R.csv())
    R.out() << json{{"t", t}, {"p", p}, {"convention", convention}, {"rows", rows}, {"all_expected", all}}.dump(2) << '\n';
  return all ? ok : unexpected;
}

}  // namespace detail

/// args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact expansions and congruence checks for strange q-series", "strange_lab"};
  app.require_subcommand(1);
  CliConfig cfg;
  cfg.cache_dir = resolve_cache_dir(cfg.cache_dir);
  std::string box_file;
  bool no_cache = false;
  app.add_option("--format", cfg.output_format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--cache-dir", cfg.cache_dir, "Cache directory (STRANGE_LAB_CACHE overrides the default)");
  app.add_flag("--no-cache", no_cache, "Compute without reading or writing the cache");
  app.add_option("--box", box_file, "JSON file with parameter box limits")->check(CLI::ExistingFile);
  std::optional<long> box_lambda, box_m, box_p;
  std::optional<int> box_t;
  app.add_option("--max-lambda", box_lambda);
  app.add_option("--max-m", box_m);
  app.add_option("--max-p", box_p);
  app.add_option("--max-t", box_t);

  detail::SpecFlags ef;
  long order = 0;
  auto* expand = app.add_subcommand("expand", "Coefficient table xi(0..order-1)")->fallthrough();
  ef.add_to(expand);
  expand->add_option("--order", order, "Number of coefficients")->required();

  detail::SpecFlags vf;
  std::string theorem = "main1", fixture, expect = "pass";
  long p = 5, lambda = 1, m_max = 1;
  bool star = false;
  std::vector<long> js;
  auto* verify = app.add_subcommand("verify", "Congruence sweep or lemma suite")->fallthrough();
  vf.add_to(verify);
  verify->add_option("--theorem", theorem)->check(CLI::IsMember({"main1", "main2", "cor3", "lemmas"}));
  verify->add_option("--p", p);
  verify->add_option("--lambda", lambda);
  verify->add_option("--m-max", m_max);
  verify->add_flag("--star", star);
  verify->add_option("--j", js, "Explicit j list instead of the derived range");
  verify->add_option("--expect", expect)->check(CLI::IsMember({"pass", "fail"}));
  verify->add_option("--fixture", fixture, "JSON file of cases with expectations")->check(CLI::ExistingFile);

  long sp = 5, sr = 1, ss = 0;
  int st = 0;
  bool sstar = false;
  auto* sets = app.add_subcommand("sets", "Residue set and its maximum")->fallthrough();
  sets->add_option("--p", sp)->required();
  sets->add_option("--r", sr);
  sets->add_option("--s", ss);
  sets->add_option("--t", st, "Torus index; omit for the pentagonal sets");
  sets->add_flag("--star", sstar);

  std::string dfam = "F";
  int dt = 2;
  long dp = 5, dh = 0;
  auto* dis = app.add_subcommand("dissect", "p-dissection of a truncation")->fallthrough();
  dis->add_option("--family", dfam)->check(CLI::IsMember({"F", "Ft"}));
  dis->add_option("--t", dt);
  dis->add_option("--p", dp)->required();
  dis->add_option("--height", dh)->required();

  int ct = 2;
  long cp = 5, cn = 0;
  std::string conv = "series";
  auto* coeffs = app.add_subcommand("coeffs", "Coefficient formulas against the derivative route")->fallthrough();
  coeffs->add_option("--t", ct);
  coeffs->add_option("--p", cp)->required();
  coeffs->add_option("--n-max", cn)->required();
  coeffs->add_option("--convention", conv)->check(CLI::IsMember({"series", "printed"}));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    cfg.use_cache = !no_cache;
    if (!box_file.empty()) cfg.box = ParamBox::from_json(detail::read_json_file(box_file));
    if (box_lambda) cfg.box.max_lambda = *box_lambda;
    if (box_m) cfg.box.max_m = *box_m;
    if (box_p) cfg.box.max_p = *box_p;
    if (box_t) cfg.box.max_t = *box_t;
    detail::Runner R(cfg, out, err);

    if (*expand) {
      if (order < 1) throw precondition_error("--order must be >= 1");
      return detail::cmd_expand(R, ef, order);
    }
    if (*verify) {
      if (!fixture.empty()) {
        const json doc = detail::read_json_file(fixture);
        std::vector<detail::CaseOutcome> outs;
        for (const auto& c : doc.at("cases")) outs.push_back(detail::run_case(R, detail::case_from_json(c)));
        return detail::emit_cases(R, outs);
      }
      if (theorem == "lemmas") return detail::cmd_lemmas(R, vf.t < 2 ? 2 : vf.t, p);
      detail::VerifyCase c;
      c.name = theorem;
      c.theorem = theorem;
      detail::SpecFlags f = vf;
      if (theorem == "main2" || theorem == "cor3") {
        f.family = "Ft";
        if (f.t < 2) f.t = 2;
      }
      c.spec = f.spec();
      c.p = p;
      c.lambda = lambda;
      c.m_max = m_max;
      c.star = star;
      if (!js.empty()) c.js = js;
      c.expect_pass = expect == "pass";
      return detail::emit_cases(R, {detail::run_case(R, c)});
    }
    if (*sets) return detail::cmd_sets(R, sp, sr, ss, st, sstar);
    if (*dis) return detail::cmd_dissect(R, dfam, dt, dp, dh);
    if (*coeffs) return detail::cmd_coeffs(R, ct, cp, cn, conv);
  } catch (const gate_violation& e) {
    err << "star gate violated: " << e.what() << '\n';
    return usage;
  } catch (const std::invalid_argument& e) {
    err << "precondition: " << e.what() << '\n';
    return usage;
  } catch (const arithmetic_error& e) {
    err << "arithmetic: " << e.what() << '\n';
    return usage;
  } catch (const stabilization_error& e) {
    err << "stabilization failure: " << e.what() << '\n';
    return unexpected;
  } catch (const json::exception& e) {
    err << "malformed input: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}

}  // namespace strange_lab::cli
