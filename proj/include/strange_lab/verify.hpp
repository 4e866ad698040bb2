#pragma once

// Instance checks of the congruences and of the structural identities
// behind them. Every check computes both sides exactly and reports; nothing
// is assumed.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "strange_lab/arith.hpp"
#include "strange_lab/series.hpp"
#include "strange_lab/strange.hpp"

namespace strange_lab {

/// Raised when a star-set check is requested for parameters outside its hypotheses.
class gate_violation : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

struct Verdict {
  long m = 0;
  long j = 0;
  long n = 0;  // p^lambda m - j
  bool pass = false;
  std::optional<CycNum> value;  // kept on failure
};

struct CongruenceReport {
  StrangeSpec spec;
  long p = 0;
  long lambda = 0;
  long m_max = 0;
  bool use_star = false;
  ResidueSet set_used;
  std::vector<long> j_range;
  bool explicit_j = false;  // j-list supplied by the caller instead of derived from the set
  std::vector<Verdict> verdicts;
  long height_used = 0;
  bool stabilized = false;
  double seconds = 0;

  bool all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
  bool all_fail() const {
    return std::none_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
};

struct StarGate {
  bool p_coprime_r = false;
  bool N_divides_rp = false;
  bool digit_ok = false;
  bool class_ok = true;  // only constrains the torus family
  long digit = 0;

  bool ok() const { return p_coprime_r && N_divides_rp && digit_ok && class_ok; }
  std::string first_violation() const {
    if (!p_coprime_r) return "p divides r";
    if (!N_divides_rp) return "N does not divide r*p";
    if (!class_ok) return "p is in none of the prime classes P1..P4";
    if (!digit_ok) return "digit_1 condition fails (digit = " + std::to_string(digit) + ")";
    return "";
  }
};

inline StarGate star_gate(const StrangeSpec& raw, long p) {
  const StrangeSpec spec = raw.normalized();
  StarGate g;
  g.p_coprime_r = floor_mod(spec.r, p) != 0;
  g.N_divides_rp = (spec.r * p) % spec.N == 0;
  BigRat x;
  if (spec.family == Family::F) {
    x = BigRat(spec.s) - make_rat(spec.r, 24);
  } else {
    const auto [a, b] = torus_ab(spec.t);
    x = BigRat(spec.s) - make_rat(BigInt(a) * spec.r, b);
    g.class_ok = prime_class(spec.t, p) != PrimeClass::None;
  }
  g.digit = padic_digit(x, 1, p);
  g.digit_ok = g.digit < p - 1;
  return g;
}

using XiProvider = std::function<XiTable(const StrangeSpec&, long)>;

inline ResidueSet congruence_set(const StrangeSpec& spec, long p, bool star) {
  if (spec.family == Family::F) return residue_set(star ? SetKind::S_star : SetKind::S, p, spec.r, spec.s);
  return residue_set(star ? SetKind::St_star : SetKind::St, p, spec.r, spec.s, spec.t);
}

/// Checks xi(p^lambda m - j) = 0 (mod p^lambda) for m <= m_max over the
/// derived j-range, or over `js` when given (used for negative controls).
inline CongruenceReport verify_family(const StrangeSpec& raw, long p, long lambda, long m_max, bool use_star,
                                      std::optional<std::vector<long>> js = std::nullopt,
                                      const XiProvider& provider = xi_series) {
  const auto t0 = std::chrono::steady_clock::now();
  const StrangeSpec spec = raw.normalized();
  if (p < 5 || !is_prime(p)) throw precondition_error("verify_family: p must be a prime >= 5");
  if (floor_mod(spec.r, p) == 0) throw precondition_error("verify_family: p divides r");
  if (lambda < 1 || m_max < 1) throw precondition_error("verify_family: lambda and m_max must be positive");
  if (use_star) {
    const StarGate g = star_gate(spec, p);
    if (!g.ok()) throw gate_violation("star set not admissible: " + g.first_violation());
  }
  CongruenceReport rep;
  rep.spec = spec;
  rep.p = p;
  rep.lambda = lambda;
  rep.m_max = m_max;
  rep.use_star = use_star;
  rep.set_used = congruence_set(spec, p, use_star);
  rep.explicit_j = js.has_value();
  rep.j_range = js ? *js : j_range(rep.set_used);
  const long pl = ipow(BigInt(p), static_cast<unsigned long>(lambda)).get_si();
  const long M = pl * m_max;
  const XiTable table = provider(spec, M);
  rep.height_used = table.height_used;
  rep.stabilized = table.stabilized;
  for (long m = 1; m <= m_max; ++m) {
    for (long j : rep.j_range) {
      Verdict v;
      v.m = m;
      v.j = j;
      v.n = pl * m - j;
      if (v.n < 0 || v.n >= M) throw precondition_error("verify_family: index out of table range");
      const CycNum& x = table.values[static_cast<std::size_t>(v.n)];
      v.pass = cyc_divisible(x, p, lambda);
      if (!v.pass) v.value = x;
      rep.verdicts.push_back(std::move(v));
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// alpha_t(p, n, j, k): coefficient k of A_{p,t}(pn - 1, j, 1 - q).
inline BigInt alpha_coeff(int t, long p, long n, long j, long k) {
  return recentre_at_one(dissection_part(t, p * n - 1, p, j)).coeff(k);
}

inline bool check_alpha_stability(int t, long p, long M, long Nbig, long j, long k) {
  if (j < 0 || j >= p || k < 0 || k > M - 1 || M > Nbig)
    throw precondition_error("check_alpha_stability: need 0 <= j < p, 0 <= k <= M-1 <= Nbig-1");
  return alpha_coeff(t, p, M, j, k) == alpha_coeff(t, p, Nbig, j, k);
}

namespace detail {

// Divides in place by (1 - q^k); false if the division leaves a remainder.
inline bool divide_one_minus_qk(Coeffs& a, std::size_t k) {
  strip(a);
  if (a.empty()) return true;
  if (a.size() <= k) return false;
  for (std::size_t i = k; i < a.size(); ++i) a[i] += a[i - k];
  for (std::size_t i = a.size() - k; i < a.size(); ++i)
    if (a[i] != 0) return false;
  a.resize(a.size() - k);
  return true;
}

}  // namespace detail

struct DivisibilityCheck {
  long lambda = 0;
  bool divisible = false;
  long failed_at = 0;  // first k with (1 - q^k) not dividing, 0 if none
};

/// (q;q)_lambda | A_{p,t}(Nbig, i, q) with lambda = floor((Nbig + 1) / u). t = 1 is the F analog.
inline DivisibilityCheck check_strong_divisibility(int t, long p, long u, long Nbig, long i) {
  const ResidueSet set = t == 1 ? residue_set(SetKind::S, u, 1, 0) : residue_set(SetKind::St, u, 1, 0, t);
  if (set.contains(floor_mod(i, u))) throw precondition_error("check_strong_divisibility: i lies in the residue set");
  const IntPoly part = dissection_part(t, Nbig, p, i);
  DivisibilityCheck out;
  out.lambda = (Nbig + 1) / u;
  detail::Coeffs c(part.coeffs().begin(), part.coeffs().end());
  // part has min_exp >= 0; restore leading zeros.
  c.insert(c.begin(), static_cast<std::size_t>(part.min_exp()), BigInt(0));
  for (long k = 1; k <= out.lambda; ++k) {
    if (!detail::divide_one_minus_qk(c, static_cast<std::size_t>(k))) {
      out.failed_at = k;
      return out;
    }
  }
  out.divisible = true;
  return out;
}

struct NilpotenceCheck {
  long bound = 0;
  bool vacuous = false;
  bool holds = false;
  long failed_at = -1;
};

/// (1 - (zeta_k - q)^{k r p})^{m_exp} has all coefficients below q^bound
/// divisible by p^lambda, bound = lambda - 1 + p (m_exp - lambda - 1).
inline NilpotenceCheck check_nilpotence(long k, long r, long p, long lambda, long m_exp) {
  if (m_exp < lambda) throw precondition_error("check_nilpotence: need m_exp >= lambda");
  NilpotenceCheck out;
  out.bound = lambda - 1 + p * (m_exp - lambda - 1);
  if (out.bound <= 0) {
    out.vacuous = out.holds = true;
    return out;
  }
  const QSeries one = QSeries::monomial(CycNum(k, BigInt(1)), 0, out.bound);
  const QSeries x = (one - base_substitution(k, k * r * p, out.bound)).pow(m_exp, out.bound);
  const BigInt P = p;
  for (long e = 0; e < out.bound; ++e) {
    if (!cyc_divisible(x.coeff(e), P, lambda)) {
      out.failed_at = e;
      return out;
    }
  }
  out.holds = true;
  return out;
}

struct DissectionCheck {
  int t = 2;
  long p = 0;
  long n = 0;
  PrimeClass cls = PrimeClass::None;
  long i0 = 0;
  long C = 0;
  long e = 0;
  int expected_sign = 0;  // +1 for P1, P2; -1 for P3, P4
  bool plus_divides = false;
  bool minus_divides = false;

  /// Sign that makes (1 - q)^n divide the remainder, 0 if neither, 2 if both.
  int sign_found() const {
    if (plus_divides && minus_divides) return 2;
    if (plus_divides) return 1;
    if (minus_divides) return -1;
    return 0;
  }
  bool passes() const { return expected_sign == 1 ? plus_divides : minus_divides; }
};

/// Tests (1 - q)^n | A_{p,t}(pn - 1, i0, q) -+ p q^e Ft(q^p; pn - 1) for both signs,
/// by the vanishing of the first n derivatives at q = 1; Ft(q^p) is never expanded.
inline DissectionCheck check_dissection_identity(int t, long p, long n) {
  if (t < 2) throw precondition_error("check_dissection_identity: t must be >= 2");
  if (n < 1) throw precondition_error("check_dissection_identity: n must be >= 1");
  DissectionCheck out;
  out.t = t;
  out.p = p;
  out.n = n;
  out.cls = prime_class(t, p);
  if (out.cls == PrimeClass::None) throw precondition_error("check_dissection_identity: p is in no prime class");
  const auto [a, b] = torus_ab(t);
  const LeastSolution ls = least_solution_full(a, b, p);
  out.i0 = ls.x0;
  out.C = ls.C;
  out.e = ls.exponent;
  out.expected_sign = out.cls == PrimeClass::P1 || out.cls == PrimeClass::P2 ? 1 : -1;
  const IntPoly f = ft_partial(t, p * n - 1);
  const IntPoly A = dissect(f, p).parts[static_cast<std::size_t>(out.i0)];
  out.plus_divides = out.minus_divides = true;
  for (long j = 0; j < n; ++j) {
    const BigInt lhs = series_derivative_at_one(A, j);
    const BigInt rhs = BigInt(p) * derivative_at_one_dilated(f, j, p, out.e);
    if (lhs - rhs != 0) out.plus_divides = false;
    if (lhs + rhs != 0) out.minus_divides = false;
  }
  return out;
}

struct MomentCheck {
  BigRat lhs;
  BigRat rhs;
  bool equal() const { return lhs == rhs; }
};

/// sum_j C(n,i,j,p) A^{(j)}_{p,t}(p(n+1)-1, i, 1) against (-1)^n (a/b)^n sum_l C(n,l) gamma_t(l,i).
inline MomentCheck check_moment_identity(int t, long p, long n, long i, SignConvention conv = SignConvention::series) {
  if (i < 0 || i >= p) throw precondition_error("check_moment_identity: residue out of range");
  const IntPoly A = dissection_part(t, p * (n + 1) - 1, p, i);
  const auto C = stirling_C_row(n, i, p);
  MomentCheck out;
  BigInt lhs = 0;
  for (long j = 0; j <= n; ++j) lhs += C[static_cast<std::size_t>(j)] * series_derivative_at_one(A, j);
  out.lhs = BigRat(lhs);
  const LCoeffs L = l_coeffs(t, p, n, conv);
  const auto [a, b] = torus_ab(t);
  BigRat acc = 0;
  for (long l = 0; l <= n; ++l) acc += BigRat(binomial(n, l)) * L.gamma[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
  acc *= BigRat(ipow(BigInt(a), static_cast<unsigned long>(n))) / BigRat(ipow(BigInt(b), static_cast<unsigned long>(n)));
  out.rhs = n % 2 ? BigRat(-acc) : acc;
  return out;
}

struct GarCheck {
  BigRat direct;       // A^{(n)}(p(n+1)-1, i0, 1)
  BigRat from_gamma;   // inversion formula with X(k) = gamma(k, i0)
  BigRat from_c_one;   // inversion formula with X(k) = +-p^{2k+1} c_k(1) / a^k
  bool equal() const { return direct == from_gamma && direct == from_c_one; }
};

/// The inverted moment identity at i0 (z = a/b, m = e), against the directly computed derivative.
inline GarCheck check_gar_inversion(int t, long p, long n) {
  const PrimeClass cls = prime_class(t, p);
  if (cls == PrimeClass::None) throw precondition_error("check_gar_inversion: p is in no prime class");
  const auto [a, b] = torus_ab(t);
  const LeastSolution ls = least_solution_full(a, b, p);
  GarCheck out;
  out.direct = BigRat(series_derivative_at_one(dissection_part(t, p * (n + 1) - 1, p, ls.x0), n));
  const LCoeffs L = l_coeffs(t, p, n);
  const int sign = cls == PrimeClass::P1 || cls == PrimeClass::P2 ? 1 : -1;
  std::vector<BigRat> Xg, Xc;
  for (long k = 0; k <= n; ++k) {
    Xg.push_back(L.gamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(ls.x0)]);
    Xc.push_back(BigRat(sign) * c_at_one(t, k) * BigRat(ipow(BigInt(p), static_cast<unsigned long>(2 * k + 1))) /
                 BigRat(ipow(BigInt(a), static_cast<unsigned long>(k))));
  }
  const BigRat z = make_rat(a, b);
  out.from_gamma = gar_inversion(n, z, ls.exponent, p, Xg);
  out.from_c_one = gar_inversion(n, z, ls.exponent, p, Xc);
  return out;
}

}  // namespace strange_lab
