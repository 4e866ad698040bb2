#pragma once

// Number-theoretic toolbox: chi_t, residue sets, prime classes, p-adic digits,
// Bernoulli polynomials, the L-value coefficient formulas and Stirling arrays.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "strange_lab/exactnum.hpp"
#include "strange_lab/strange.hpp"

namespace strange_lab {

/// Period 3 * 2^{t+1} of chi_t.
inline long chi_period(int t) {
  if (t < 2) throw precondition_error("chi: t must be >= 2");
  return 3L << (t + 1);
}

inline int chi(int t, long n) {
  const long P = chi_period(t);
  const long x = floor_mod(n, P);
  const long two = 1L << (t + 1);
  if (x == floor_mod(two - 3, P) || x == floor_mod(3 + 2 * two, P)) return 1;
  if (x == floor_mod(two + 3, P) || x == floor_mod(2 * two - 3, P)) return -1;
  return 0;
}

/// a = (2^{t+1} - 3)^2 and b = 3 * 2^{t+2}.
struct TorusAB {
  long a;
  long b;
};

inline TorusAB torus_ab(int t) {
  const long u = (1L << (t + 1)) - 3;
  return {u * u, 3L << (t + 2)};
}

enum class SetKind { S, S_star, St, St_star };

inline std::string to_string(SetKind k) {
  switch (k) {
    case SetKind::S: return "S";
    case SetKind::S_star: return "S_star";
    case SetKind::St: return "St";
    case SetKind::St_star: return "St_star";
  }
  return "?";
}

struct ResidueSet {
  long p = 0;
  SetKind kind = SetKind::S;
  long r = 0;
  long s = 0;
  int t = 0;  // 0 for the pentagonal kinds
  std::vector<long> members;
  std::optional<long> excluded;  // residue removed by a star kind, if it was present

  long max() const {
    if (members.empty()) throw precondition_error("ResidueSet: empty set has no max");
    return members.back();
  }
  bool contains(long j) const { return std::binary_search(members.begin(), members.end(), j); }
};

namespace detail {

inline long inv_mod(long x, long p) {
  BigInt out, xb = floor_mod(x, p), pb = p;
  if (mpz_invert(out.get_mpz_t(), xb.get_mpz_t(), pb.get_mpz_t()) == 0)
    throw arithmetic_error("inv_mod: not invertible");
  return out.get_si();
}

}  // namespace detail

inline ResidueSet residue_set(SetKind kind, long p, long r, long s, int t = 0) {
  if (p < 5 || !is_prime(p)) throw precondition_error("residue_set: p must be a prime >= 5");
  if (floor_mod(r, p) == 0) throw precondition_error("residue_set: p divides r");
  ResidueSet out;
  out.p = p;
  out.kind = kind;
  out.r = r;
  out.s = s;
  std::set<long> hit;
  long excluded = 0;
  if (kind == SetKind::S || kind == SetKind::S_star) {
    for (long n = 0; n < p; ++n) hit.insert(floor_mod(s + r * floor_mod(n * (3 * n - 1) / 2, p), p));
    // 24 (j - s) = -r.
    excluded = floor_mod(s + floor_mod(-r, p) * detail::inv_mod(24, p), p);
  } else {
    if (t < 2) throw precondition_error("residue_set: torus kinds need t >= 2");
    out.t = t;
    const auto [a, b] = torus_ab(t);
    const long period = chi_period(t) * p;
    for (long n = 0; n < period; ++n) {
      if (chi(t, n) == 0) continue;
      const long num = n * n - a;
      if (floor_mod(num, b) != 0) throw arithmetic_error("residue_set: non-integral quotient");
      hit.insert(floor_mod(s + r * floor_mod(num / b, p), p));
    }
    excluded = floor_mod(s + floor_mod(-r * a, p) * detail::inv_mod(b, p), p);
  }
  out.members.assign(hit.begin(), hit.end());
  if (kind == SetKind::S_star || kind == SetKind::St_star) {
    auto it = std::find(out.members.begin(), out.members.end(), excluded);
    if (it != out.members.end()) {
      out.members.erase(it);
      out.excluded = excluded;
    }
  }
  return out;
}

/// j-range 1 .. p - 1 - max(set).
inline std::vector<long> j_range(const ResidueSet& set) {
  std::vector<long> out;
  for (long j = 1; j <= set.p - 1 - set.max(); ++j) out.push_back(j);
  return out;
}

enum class PrimeClass { P1, P2, P3, P4, None };

inline std::string to_string(PrimeClass c) {
  switch (c) {
    case PrimeClass::P1: return "P1";
    case PrimeClass::P2: return "P2";
    case PrimeClass::P3: return "P3";
    case PrimeClass::P4: return "P4";
    case PrimeClass::None: return "None";
  }
  return "?";
}

inline PrimeClass prime_class(int t, long p) {
  if (p < 5) throw precondition_error("prime_class: p must be >= 5");
  const long P = chi_period(t);
  const long x = floor_mod(p, P);
  const long r1 = t % 2 == 0 ? (1L << (t + 1)) - 1 : (1L << (t + 1)) + 1;
  const long r2 = t % 2 == 0 ? (1L << (t + 2)) + 1 : (1L << (t + 2)) - 1;
  if (x == 1) return PrimeClass::P1;
  if (x == P - 1) return PrimeClass::P2;
  if (x == floor_mod(r1, P)) return PrimeClass::P3;
  if (x == floor_mod(r2, P)) return PrimeClass::P4;
  return PrimeClass::None;
}

/// The constant C_{a,b,p} = a (p^2 - 1) / b - p floor(ap/b) and derived quantities.
struct LeastSolution {
  long C = 0;
  long x0 = 0;        // least non-negative solution of b x = -a (mod p)
  long exponent = 0;  // floor(ap/b) + floor(C/p)
};

inline LeastSolution least_solution_full(long a, long b, long p) {
  if (a <= 0 || b <= 0) throw precondition_error("least_solution: a, b must be positive");
  if (std::gcd(p, a * b) != 1) throw precondition_error("least_solution: p must be coprime to ab");
  const BigInt pp = BigInt(p) * p - 1;
  if (pp % b != 0) throw precondition_error("least_solution: p^2 != 1 (mod b)");
  const BigInt Cb = BigInt(a) * (pp / b) - BigInt(p) * ((BigInt(a) * p) / b);
  LeastSolution out;
  out.C = Cb.get_si();
  out.x0 = out.C - p * floor_div(out.C, p);
  out.exponent = (a * p) / b + floor_div(out.C, p);
  return out;
}

inline long least_solution(long a, long b, long p) { return least_solution_full(a, b, p).x0; }

/// digit_k(x; p) of a p-integral rational.
inline long padic_digit(const BigRat& x, long k, long p) {
  if (k < 0) throw precondition_error("padic_digit: negative digit index");
  const BigInt den = x.get_den();
  if (den % p == 0) throw precondition_error("padic_digit: p divides the denominator");
  const BigInt mod = ipow(BigInt(p), static_cast<unsigned long>(k + 1));
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  BigInt v = BigInt(x.get_num()) * inv;
  mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
  const BigInt pk = ipow(BigInt(p), static_cast<unsigned long>(k));
  return BigInt(v / pk).get_si();
}

/// Carries when adding k and n - k in base p.
inline long kummer_valuation(long n, long k, long p) {
  if (k < 0 || k > n) throw precondition_error("kummer_valuation: need 0 <= k <= n");
  long x = k, y = n - k, carry = 0, count = 0;
  while (x > 0 || y > 0 || carry > 0) {
    const long d = x % p + y % p + carry;
    carry = d >= p ? 1 : 0;
    count += carry;
    x /= p;
    y /= p;
  }
  return count;
}

struct BernoulliPoly {
  long n = 0;
  std::vector<BigRat> coeffs;  // ascending powers of x

  BigRat operator()(const BigRat& x) const {
    BigRat acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }
};

inline BigRat bernoulli_number(long n) {
  static std::mutex mu;
  static std::vector<BigRat> table{BigRat(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<long>(table.size()) <= n) {
    // sum_{k=0}^{m} C(m+1, k) B_k = 0.
    const long m = static_cast<long>(table.size());
    BigRat acc = 0;
    for (long k = 0; k < m; ++k) acc += BigRat(binomial(m + 1, k)) * table[static_cast<std::size_t>(k)];
    table.push_back(-acc / BigRat(m + 1));
  }
  return table[static_cast<std::size_t>(n)];
}

/// B_n(x) = sum_k C(n,k) B_k x^{n-k}; cached.
inline const BernoulliPoly& bernoulli_poly(long n) {
  if (n < 0) throw precondition_error("bernoulli_poly: negative degree");
  static std::mutex mu;
  static std::map<long, std::unique_ptr<const BernoulliPoly>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return *it->second;
  }
  auto fresh = std::make_unique<BernoulliPoly>();
  fresh->n = n;
  fresh->coeffs.assign(static_cast<std::size_t>(n) + 1, BigRat(0));
  for (long k = 0; k <= n; ++k)
    fresh->coeffs[static_cast<std::size_t>(n - k)] = BigRat(binomial(n, k)) * bernoulli_number(k);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(n, std::move(fresh));
  return *it->second;
}

/// Overall sign applied to the L-value formulas. `series` multiplies by
/// (-1)^{h''(t)} so that the values agree with the expansion of the series as
/// defined by its truncations; `printed` keeps the formulas unmodified.
enum class SignConvention { series, printed };

inline int convention_sign(int t, SignConvention conv) {
  if (conv == SignConvention::printed) return 1;
  return torus_constants(t).h2 % 2 ? -1 : 1;
}

/// Residue weights w_j(i), i < period_p, of the half-period Bernoulli sum:
/// (-1)^j N_t^{2j+1} / (2j+2) * sum_{m <= N_t/2, (m^2-a)/b = i mod p} chi(m) B_{2j+2}(m / N_t).
/// With full_period the sum runs over m < N_t and is halved.
inline std::vector<BigRat> l_weights(int t, long p, long j, bool full_period = false) {
  const auto [a, b] = torus_ab(t);
  const long Nt = chi_period(t) * p;
  const BernoulliPoly& B = bernoulli_poly(2 * j + 2);
  std::vector<BigRat> w(static_cast<std::size_t>(p), BigRat(0));
  const long upper = full_period ? Nt - 1 : Nt / 2;
  for (long m = 1; m <= upper; ++m) {
    const int c = chi(t, m);
    if (c == 0) continue;
    const long num = m * m - a;
    if (floor_mod(num, b) != 0) throw arithmetic_error("l_weights: non-integral exponent");
    const long i = floor_mod(num / b, p);
    const BigRat v = B(make_rat(m, Nt));
    if (c > 0)
      w[static_cast<std::size_t>(i)] += v;
    else
      w[static_cast<std::size_t>(i)] -= v;
  }
  BigRat scale = make_rat(ipow(BigInt(Nt), static_cast<unsigned long>(2 * j + 1)), 2 * j + 2);
  if (j % 2) scale = -scale;
  if (full_period) scale /= 2;
  for (auto& x : w) x *= scale;
  return w;
}

struct LCoeffs {
  int t = 2;
  long p = 0;
  long n = 0;
  SignConvention convention = SignConvention::series;
  std::vector<CycNum> c;                   // c_{j,t}(zeta_p), j = 0..n
  std::vector<std::vector<BigRat>> gamma;  // gamma_t(j, i), j <= n, i < p
  CycNum b;                                // from the gamma table
  CycNum b_from_c;                         // from c via the binomial relation
};

inline LCoeffs l_coeffs(int t, long p, long n, SignConvention conv = SignConvention::series) {
  if (n < 0) throw precondition_error("l_coeffs: negative n");
  if (p < 5 || !is_prime(p)) throw precondition_error("l_coeffs: p must be a prime >= 5");
  const auto [a, b] = torus_ab(t);
  const int sign = convention_sign(t, conv);
  LCoeffs out;
  out.t = t;
  out.p = p;
  out.n = n;
  out.convention = conv;
  for (long j = 0; j <= n; ++j) {
    std::vector<BigRat> w = l_weights(t, p, j);
    if (sign < 0)
      for (auto& x : w) x = -x;
    out.c.push_back(CycNum::from_residue_weights(p, w));
    const BigRat aj(ipow(BigInt(a), static_cast<unsigned long>(j)));
    for (auto& x : w) x /= aj;
    out.gamma.push_back(std::move(w));
  }
  const BigRat an(ipow(BigInt(a), static_cast<unsigned long>(n)));
  const BigRat bn(ipow(BigInt(b), static_cast<unsigned long>(n)));
  const BigRat pref = an / bn;
  std::vector<BigRat> acc(static_cast<std::size_t>(p), BigRat(0));
  CycNum via_c(p);
  for (long j = 0; j <= n; ++j) {
    const BigRat cj(binomial(n, j));
    for (long i = 0; i < p; ++i) acc[static_cast<std::size_t>(i)] += cj * out.gamma[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    via_c += out.c[static_cast<std::size_t>(j)] * (cj / BigRat(ipow(BigInt(a), static_cast<unsigned long>(j))));
  }
  for (auto& x : acc) x *= pref;
  out.b = CycNum::from_residue_weights(p, acc);
  out.b_from_c = via_c * pref;
  return out;
}

/// c_{n,t}(1): the coefficient formula at zeta = 1 over the base period 3 * 2^{t+1}.
inline BigRat c_at_one(int t, long n, SignConvention conv = SignConvention::series) {
  const long Nt = chi_period(t);
  const BernoulliPoly& B = bernoulli_poly(2 * n + 2);
  BigRat acc = 0;
  for (long m = 1; m <= Nt / 2; ++m) {
    const int c = chi(t, m);
    if (c) acc += BigRat(c) * B(make_rat(m, Nt));
  }
  BigRat scale = make_rat(ipow(BigInt(Nt), static_cast<unsigned long>(2 * n + 1)), 2 * n + 2);
  if (n % 2) scale = -scale;
  return acc * scale * BigRat(convention_sign(t, conv));
}

/// (-1)^n (q d/dq)^n Ft(q; p(n+1)-1) at q = zeta_p.
inline CycNum b_via_derivative(int t, long p, long n) {
  const IntPoly f = ft_partial(t, p * (n + 1) - 1);
  std::vector<BigInt> w(static_cast<std::size_t>(p));
  for (long e = f.min_exp(); e <= f.max_exp(); ++e) {
    const BigInt* c = f.find(e);
    if (!c || *c == 0) continue;
    w[static_cast<std::size_t>(floor_mod(e, p))] += *c * ipow(BigInt(e), static_cast<unsigned long>(n));
  }
  if (n % 2)
    for (auto& x : w) x = -x;
  return CycNum::from_residue_weights(p, std::span<const BigInt>(w));
}

/// C(n, i, j, p) with C(n+1,i,j,p) = (i + jp) C(n,i,j,p) + p C(n,i,j-1,p), C(0,i,0,p) = 1.
inline std::vector<BigInt> stirling_C_row(long n, long i, long p) {
  if (n < 0) throw precondition_error("stirling_C: negative n");
  std::vector<BigInt> row{BigInt(1)};
  for (long k = 0; k < n; ++k) {
    std::vector<BigInt> next(row.size() + 1);
    for (std::size_t j = 0; j < next.size(); ++j) {
      if (j < row.size()) next[j] += BigInt(i + static_cast<long>(j) * p) * row[j];
      if (j >= 1) next[j] += BigInt(p) * row[j - 1];
    }
    row = std::move(next);
  }
  return row;
}

inline BigInt stirling_C(long n, long i, long j, long p) {
  if (n < 0 || j < 0 || j > n) return 0;
  return stirling_C_row(n, i, p)[static_cast<std::size_t>(j)];
}

/// Coefficients s_1(n, j, m), j = 0..n, of (x - m)(x - m + 1)...(x - m + n - 1).
inline std::vector<BigInt> s1_poly(long n, long m) {
  if (n < 0) throw precondition_error("s1_poly: negative n");
  std::vector<BigInt> poly{BigInt(1)};
  for (long k = 0; k < n; ++k) {
    const BigInt root = m - k;  // multiply by (x - root)
    std::vector<BigInt> next(poly.size() + 1);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= root * poly[j];
    }
    poly = std::move(next);
  }
  return poly;
}

/// (-1)^n sum_k sum_{j>=k} C(j,k) s_1(n,j,m) p^{j-2k} X(k) z^j.
inline BigRat gar_inversion(long n, const BigRat& z, long m, long p, const std::vector<BigRat>& X) {
  if (static_cast<long>(X.size()) <= n) throw precondition_error("gar_inversion: X too short");
  const auto s1 = s1_poly(n, m);
  BigRat acc = 0;
  for (long k = 0; k <= n; ++k) {
    for (long j = k; j <= n; ++j) {
      BigRat term(binomial(j, k) * s1[static_cast<std::size_t>(j)]);
      const long e = j - 2 * k;
      const BigInt pw = ipow(BigInt(p), static_cast<unsigned long>(e < 0 ? -e : e));
      if (e < 0)
        term /= BigRat(pw);
      else
        term *= BigRat(pw);
      BigRat zj = 1;
      for (long u = 0; u < j; ++u) zj *= z;
      acc += term * X[static_cast<std::size_t>(k)] * zj;
    }
  }
  return n % 2 ? -acc : acc;
}

}  // namespace strange_lab
