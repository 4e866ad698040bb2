// One PASS/FAIL line per acceptance criterion, with timings and details.
// Exit status is 0 when every outcome matches its recorded status.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strange_lab/verify.hpp"

using namespace strange_lab;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<Outcome()> run;
  std::string known_red;  // analysis when the criterion is expected to be red
};

// Every table built by criteria 1-5, rechecked at doubled height in criterion 9.
std::vector<XiTable> built_tables;

XiTable recorded(const StrangeSpec& s, long M) {
  XiTable t = xi_series(s, M);
  built_tables.push_back(t);
  return t;
}

std::string join(const std::vector<long>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return "{" + out + "}";
}

std::string sweep_line(const CongruenceReport& r) {
  std::ostringstream os;
  os << r.spec.label() << " p=" << r.p << " lambda=" << r.lambda << " m<=" << r.m_max << " j=" << join(r.j_range) << ": ";
  long bad = 0;
  for (const auto& v : r.verdicts) bad += !v.pass;
  os << r.verdicts.size() - static_cast<std::size_t>(bad) << "/" << r.verdicts.size() << " pass";
  for (const auto& v : r.verdicts)
    if (!v.pass) os << "; xi(" << v.n << ") = " << v.value->to_string() << " not divisible";
  return os.str();
}

CongruenceReport sweep(Outcome& o, const StrangeSpec& s, long p, long lambda, long m_max, bool star,
                       std::optional<std::vector<long>> js = std::nullopt) {
  CongruenceReport r = verify_family(s, p, lambda, m_max, star, js, recorded);
  o.note(sweep_line(r));
  o.require(r.all_pass(), r.spec.label() + " at p=" + std::to_string(p));
  return r;
}

Outcome golden() {
  Outcome o;
  const XiTable t = recorded({Family::F, 1, 1, 0, 1}, 6);
  const long want[] = {1, 1, 2, 5, 15, 53};
  std::string got;
  for (long n = 0; n < 6; ++n) {
    o.require(t.values[static_cast<std::size_t>(n)] == CycNum(1, BigInt(want[n])), "xi(" + std::to_string(n) + ")");
    got += (n ? "," : "") + t.values[static_cast<std::size_t>(n)].to_string();
  }
  o.note("xi(0..5) = " + got);
  return o;
}

Outcome large_values() {
  Outcome o;
  const StrangeSpec s{Family::F, 1, 1, 0, 2};
  const XiTable t = recorded(s, 23);
  const std::vector<CycNum> h30 = xi_at_height(s, 23, 30);
  const char* listed[] = {"1362966752518988604618378515", "37985301942246535793275853285", "184970580844281275291492442891",
                          "-47914053901185858013549651979546", "-3374324885490973100341136883972043"};
  bool all_h30 = true;
  for (long n = 18; n <= 22; ++n) {
    const BigInt want(listed[n - 18]);
    const CycNum& got = t.values[static_cast<std::size_t>(n)];
    const BigInt got_int = got.as_rational().get_num();
    const BigInt got_mod = ((got_int % 23) + 23) % 23;
    const BigInt want_mod = ((want % 23) + 23) % 23;
    o.require(got == CycNum(2, want), "xi(" + std::to_string(n) + ") equals the listed value");
    o.require(got_mod != 0, "xi(" + std::to_string(n) + ") not divisible by 23");
    all_h30 = all_h30 && h30[static_cast<std::size_t>(n)] == CycNum(2, want);
    o.note("n=" + std::to_string(n) + " stabilized " + got_int.get_str() + " (mod 23: " + got_mod.get_str() + "), listed " +
           want.get_str() + " (mod 23: " + want_mod.get_str() + ")");
  }
  o.note(std::string("listed values equal the height-30 truncation coefficients: ") + (all_h30 ? "yes" : "no"));
  o.note("stabilization height used: " + std::to_string(t.height_used) + ", confirmed at " +
         std::to_string(t.height_used + stabilization_step(s)));
  return o;
}

Outcome sweeps() {
  Outcome o;
  for (long lambda : {1L, 2L}) {
    auto r = sweep(o, {Family::F, 1, 1, 0, 1}, 5, lambda, 3, false);
    o.require(r.j_range == std::vector<long>({1, 2}), "derived j range at p=5");
  }
  auto r7 = sweep(o, {Family::F, 1, 2, 0, 1}, 7, 1, 3, true);
  o.require(r7.j_range == std::vector<long>({1, 2, 3}), "star j range for r=2 at p=7");
  auto r19 = sweep(o, {Family::F, 1, 3, 0, 1}, 19, 1, 3, false);
  o.require(r19.j_range == std::vector<long>({1}), "j range for r=3 at p=19");
  const std::vector<std::pair<long, std::vector<long>>> lists = {
      {5, {1, 2}}, {7, {1}}, {11, {1, 2, 3}}, {17, {1}}, {19, {1, 2, 3}}};
  bool derived_ok = true;
  for (const auto& [p, js] : lists) {
    sweep(o, {Family::F, 1, 1, 0, 2}, p, 1, 3, false, js);
    const auto d = verify_family({Family::F, 1, 1, 0, 2}, p, 1, 3, false, std::nullopt, recorded);
    derived_ok = derived_ok && d.all_pass();
    if (d.j_range != js) o.note("p=" + std::to_string(p) + ": derived range " + join(d.j_range) + " differs from list " + join(js));
  }
  o.note(std::string("(r,s,N)=(1,0,2) over the derived ranges: ") + (derived_ok ? "all pass" : "FAILURES"));
  return o;
}

Outcome star_202() {
  Outcome o;
  const StrangeSpec s{Family::F, 1, 2, 0, 2};
  for (long p : {7L, 11L}) {
    const StarGate g = star_gate(s, p);
    o.require(g.ok(), "star gate at p=" + std::to_string(p));
    o.note("gate p=" + std::to_string(p) + ": N|rp " + (g.N_divides_rp ? "true" : "false") + ", digit_1 = " +
           std::to_string(g.digit) + " < p-1 " + (g.digit_ok ? "true" : "false"));
  }
  auto r7 = sweep(o, s, 7, 1, 3, true);
  o.require(std::find(r7.j_range.begin(), r7.j_range.end(), 3) != r7.j_range.end(), "j=3 in star range at p=7");
  o.require(r7.j_range == std::vector<long>({1, 2, 3}), "star range at p=7");
  auto plain7 = congruence_set(s.normalized(), 7, false);
  o.note("plain range at p=7: " + join(j_range(plain7)));
  auto r11 = sweep(o, s, 11, 1, 2, true);
  o.require(r11.j_range == std::vector<long>({1, 2}), "star range at p=11");
  return o;
}

Outcome torus_23() {
  Outcome o;
  const StrangeSpec s{Family::Ft, 2, 1, 0, 1};
  const ResidueSet plain = congruence_set(s, 23, false), star = congruence_set(s, 23, true);
  o.note("S = " + join(plain.members) + " (range " + join(j_range(plain)) + "), S* = " + join(star.members) + " (range " +
         join(j_range(star)) + ")");
  o.require(j_range(star) == std::vector<long>({1, 2, 3, 4, 5}), "star range 1..5");
  o.require(star_gate(s, 23).ok(), "star gate");
  sweep(o, s, 23, 1, 2, true);
  return o;
}

Outcome coeff_routes() {
  Outcome o;
  for (long p : {5L, 7L})
    for (long n = 0; n <= 3; ++n) {
      const LCoeffs L = l_coeffs(2, p, n);
      const CycNum d = b_via_derivative(2, p, n);
      o.require(L.b == d && L.b_from_c == d, "p=" + std::to_string(p) + " n=" + std::to_string(n));
      o.note("p=" + std::to_string(p) + " n=" + std::to_string(n) + ": b = " + L.b.to_string());
    }
  return o;
}

Outcome strong_div() {
  Outcome o;
  long checks = 0;
  for (int t : {2, 1}) {
    const ResidueSet set = t == 1 ? residue_set(SetKind::S, 5, 1, 0) : residue_set(SetKind::St, 5, 1, 0, 2);
    std::vector<long> admissible;
    for (long i = 0; i < 5; ++i)
      if (!set.contains(i)) admissible.push_back(i);
    for (long Nbig = 0; Nbig <= 14; ++Nbig)
      for (long i : admissible) {
        const auto d = check_strong_divisibility(t, 5, 5, Nbig, i);
        ++checks;
        o.require(d.divisible, (t == 1 ? std::string("F") : std::string("Ft")) + " Nbig=" + std::to_string(Nbig) +
                                   " i=" + std::to_string(i) + " fails at k=" + std::to_string(d.failed_at));
      }
    o.note((t == 1 ? std::string("F") : std::string("Ft t=2")) + ": admissible i = " + join(admissible) + ", Nbig = 0..14");
  }
  o.note(std::to_string(checks) + " divisions, zero remainders required");
  return o;
}

Outcome dissection() {
  Outcome o;
  for (long n = 1; n <= 3; ++n) {
    const auto d = check_dissection_identity(2, 7, n);
    o.require(d.passes() && d.sign_found() == -1 && d.e == 3, "p=7 n=" + std::to_string(n));
    o.note("p=7 n=" + std::to_string(n) + ": class " + to_string(d.cls) + ", i0=" + std::to_string(d.i0) + ", e=" +
           std::to_string(d.e) + ", sign " + std::to_string(d.sign_found()));
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = check_dissection_identity(2, 73, 1);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(d.passes() && d.sign_found() == 1, "p=73 n=1");
  std::ostringstream os;
  os << "p=73 n=1: class " << to_string(d.cls) << ", i0=" << d.i0 << ", e=" << d.e << ", sign " << d.sign_found() << " ("
     << std::fixed << std::setprecision(2) << s << " s)";
  o.note(os.str());
  return o;
}

Outcome structural() {
  Outcome o;
  long count = 0;
  for (int t = 2; t <= 5; ++t)
    for (long p = 5; p < 1000; ++p) {
      if (!is_prime(p)) continue;
      ++count;
      o.require((prime_class(t, p) != PrimeClass::None) == ((p * p - 1) % (3L << (t + 2)) == 0),
                "class equivalence t=" + std::to_string(t) + " p=" + std::to_string(p));
    }
  o.note("class equivalence: " + std::to_string(count) + " (t,p) pairs");
  count = 0;
  for (int t = 2; t <= 5; ++t)
    for (long p = 5; p < 500; ++p) {
      if (!is_prime(p) || prime_class(t, p) == PrimeClass::None) continue;
      const PrimeClass c = prime_class(t, p);
      const int sign = c == PrimeClass::P1 || c == PrimeClass::P2 ? 1 : -1;
      for (long m = 0; m < chi_period(t); ++m)
        if (chi(t, m * p) != 0) {
          ++count;
          o.require(chi(t, m * p) == sign * chi(t, m), "sign preservation t=" + std::to_string(t) + " p=" + std::to_string(p));
        }
    }
  o.note("sign preservation: " + std::to_string(count) + " character values");
  count = 0;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
    for (long n = 0; n <= 200; ++n)
      for (long k = 0; k <= n; ++k) {
        ++count;
        if (kummer_valuation(n, k, p) != oracle::legendre(n, p) - oracle::legendre(k, p) - oracle::legendre(n - k, p))
          o.require(false, "Kummer n=" + std::to_string(n) + " k=" + std::to_string(k) + " p=" + std::to_string(p));
      }
  o.note("Kummer vs Legendre: " + std::to_string(count) + " binomials");

  const long order = 8;
  using RS = std::vector<BigRat>;
  auto mul = [&](const RS& a, const RS& b) {
    RS out(order + 1, BigRat(0));
    for (long i = 0; i <= order; ++i)
      for (long j = 0; i + j <= order; ++j)
        out[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return out;
  };
  RS log1(order + 1, BigRat(0)), one_minus(order + 1, BigRat(0));
  for (long n = 1; n <= order; ++n) log1[static_cast<std::size_t>(n)] = make_rat(1, n);
  one_minus[0] = 1;
  one_minus[1] = -1;
  for (long k = 0; k <= 3; ++k)
    for (long j = 0; j <= 3; ++j) {
      RS rhs(order + 1, BigRat(0));
      rhs[0] = 1;
      for (long u = 0; u < k; ++u) rhs = mul(rhs, one_minus);
      for (long u = 0; u < j; ++u) rhs = mul(rhs, log1);
      for (auto& x : rhs) x /= BigRat(factorial(j));
      for (long n = 0; n <= order; ++n) {
        const BigRat lhs = n >= j ? BigRat(s1_poly(n, k)[static_cast<std::size_t>(j)]) / BigRat(factorial(n)) : BigRat(0);
        o.require(lhs == rhs[static_cast<std::size_t>(n)], "Stirling generating identity j=" + std::to_string(j) +
                                                              " k=" + std::to_string(k) + " n=" + std::to_string(n));
      }
    }
  o.note("Stirling generating identity: j,k <= 3 to order 8");

  count = 0;
  for (long k : {1L, 2L, 3L})
    for (long r : {-1L, 1L, 2L})
      for (long p : {5L, 7L})
        for (long lambda = 1; lambda <= 2; ++lambda)
          for (long m = lambda; m <= lambda + 3; ++m) {
            ++count;
            o.require(check_nilpotence(k, r, p, lambda, m).holds, "nilpotence k=" + std::to_string(k) + " r=" + std::to_string(r) +
                                                                  " p=" + std::to_string(p) + " lambda=" + std::to_string(lambda) +
                                                                  " m=" + std::to_string(m));
          }
  o.note("higher divisibility: " + std::to_string(count) + " expansions");

  count = 0;
  for (long M = 1; M <= 3; ++M)
    for (long Nbig = M; Nbig <= 4; ++Nbig)
      for (long j = 0; j < 5; ++j)
        for (long k = 0; k < M; ++k) {
          ++count;
          o.require(check_alpha_stability(2, 5, M, Nbig, j, k), "alpha stability M=" + std::to_string(M) + " Nbig=" +
                                                                   std::to_string(Nbig) + " j=" + std::to_string(j) +
                                                                   " k=" + std::to_string(k));
        }
  o.note("alpha stability t=2 p=5: " + std::to_string(count) + " comparisons");

  std::set<std::pair<std::string, long>> seen;
  count = 0;
  for (const auto& t : built_tables) {
    if (!seen.insert({t.spec.label(), t.M}).second) continue;
    ++count;
    const auto doubled = xi_at_height(t.spec, t.M, 2 * t.height_used);
    o.require(t.stabilized && doubled == t.values,
              t.spec.label() + " order " + std::to_string(t.M) + " changes at height " + std::to_string(2 * t.height_used));
  }
  o.note("stabilization doubling: " + std::to_string(count) + " distinct tables from criteria 1-5");
  o.require(count > 0, "criteria 1-5 built tables");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden coefficients of F(1-q)", 1, golden, ""},
      {2, "bit-exact large values xi_{1,0,2}(18..22) and non-divisibility by 23", 10, large_values,
       "The listed integers are the coefficients of the height-30 truncation F(-1-q;30), which is not stable for n >= 18. "
       "Stabilized values differ, and all five are divisible by 23."},
      {3, "congruence sweeps for the family F", 120, sweeps,
       "The reference j-list for (r,s,N)=(1,0,2), p=19 includes j=3, outside the derived range {1,2}; xi(16) is 9 mod 19. "
       "Every check inside the derived ranges passes."},
      {4, "star congruences for (r,s,N)=(2,0,2)", 60, star_202, ""},
      {5, "torus star congruences at p=23", 120, torus_23, ""},
      {6, "coefficient formula against derivative route", 120, coeff_routes, ""},
      {7, "strong divisibility of dissection parts", 30, strong_div, ""},
      {8, "dissection identity signs", 180, dissection, ""},
      {9, "structural property suites", 120, structural, ""},
  };

  int mismatches = 0, passed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.limit_s) o.require(false, "runtime over limit");
    passed += o.pass;
    const bool expected_pass = c.known_red.empty();
    const bool as_recorded = o.pass == expected_pass;
    mismatches += !as_recorded;
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << "  (" << std::fixed
              << std::setprecision(2) << s << " s, limit " << std::setprecision(0) << c.limit_s << " s)";
    if (!o.pass && !as_recorded) std::cout << "  [unexpected]";
    if (o.pass && !as_recorded) std::cout << "  [recorded as red, now green]";
    std::cout << '\n';
    for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    if (!c.known_red.empty()) std::cout << "    known divergence: " << c.known_red << '\n';
  }
  std::cout << "summary: " << passed << "/" << criteria.size() << " PASS, " << mismatches
            << " outcome(s) differ from the recorded status\n";
  return mismatches == 0 ? 0 : 1;
}
