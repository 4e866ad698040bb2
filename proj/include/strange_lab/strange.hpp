#pragma once

// Truncations of the strange series F(q) = sum (q)_n and of the torus-knot
// family Ft(q), and the coefficient tables of (zeta_N - q)^s * family((zeta_N - q)^r).

#include <chrono>
#include <future>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "strange_lab/exactnum.hpp"
#include "strange_lab/series.hpp"

namespace strange_lab {

struct TorusConstants {
  int t = 2;
  long h2 = 0;  // h''(t)
  long h1 = 0;  // h'(t)
  long a = 0;
  long m = 0;
};

inline TorusConstants torus_constants(int t) {
  if (t < 2) throw precondition_error("torus_constants: t must be >= 2");
  if (t > 20) throw precondition_error("torus_constants: t too large");
  const long p2 = 1L << t;
  TorusConstants c;
  c.t = t;
  c.m = p2 / 2;
  if (t % 2 == 0) {
    c.h2 = (p2 - 1) / 3;
    c.h1 = (p2 - 4) / 3;
    c.a = (p2 / 2 + 1) / 3;
  } else {
    c.h2 = (p2 - 2) / 3;
    c.h1 = (p2 - 5) / 3;
    c.a = (p2 + 1) / 3;
  }
  return c;
}

enum class Family { F, Ft };

inline std::string to_string(Family f) { return f == Family::F ? "F" : "Ft"; }

struct StrangeSpec {
  Family family = Family::F;
  int t = 1;  // ignored for F
  long r = 1;
  long s = 0;
  long N = 1;

  /// Validated copy with Ft at t = 1 folded into F.
  StrangeSpec normalized() const {
    if (r == 0) throw precondition_error("StrangeSpec: r must be nonzero");
    if (N < 1) throw precondition_error("StrangeSpec: N must be positive");
    StrangeSpec out = *this;
    if (family == Family::Ft) {
      if (t < 1) throw precondition_error("StrangeSpec: t must be >= 1");
      if (t == 1) out.family = Family::F;
    }
    if (out.family == Family::F) out.t = 1;
    return out;
  }

  /// h'(t) for Ft, 0 for F.
  long h1() const { return family == Family::Ft && t >= 2 ? torus_constants(t).h1 : 0; }

  std::string label() const {
    std::string out = to_string(family);
    if (family == Family::Ft) out += "[t=" + std::to_string(t) + "]";
    return out + "(r=" + std::to_string(r) + ",s=" + std::to_string(s) + ",N=" + std::to_string(N) + ")";
  }

  friend bool operator==(const StrangeSpec&, const StrangeSpec&) = default;
};

/// Raised when a truncation of Ft has a negative exponent after assembly.
class negative_exponent_error : public arithmetic_error {
 public:
  using arithmetic_error::arithmetic_error;
};

/// Raised when heights H and H+d disagree on requested coefficients.
class stabilization_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F(q;H) = sum_{n<=H} (q)_n, by nested Horner: 1 + (1-q)(1 + (1-q^2)(1 + ...)).
inline IntPoly f_partial(long H) {
  if (H < 0) throw precondition_error("f_partial: negative height");
  detail::Coeffs acc{BigInt(1)};
  for (long n = H; n >= 1; --n) {
    detail::mul_one_minus_qk(acc, static_cast<std::size_t>(n));
    acc[0] += 1;
  }
  detail::strip(acc);
  return int_poly(std::move(acc));
}

namespace detail {

// Inner polynomial of the torus-knot sum at outer index n, before the
// prefactor: sum over admissible tuples of q^{exponent} * sum_k prod_l [n + I(l<=k), j_l].
// lo = Gaussian rows at n, hi = rows at n + 1.
inline Coeffs torus_inner(const TorusConstants& tc, long n, const GaussRows& lo, const GaussRows& hi) {
  const long m = tc.m;
  const long len = m - 1;
  Coeffs total;
  std::vector<long> js(static_cast<std::size_t>(len), 0);
  const long jmax = n + 1;
  while (true) {
    long S = 0, bin2 = 0;
    for (long l = 1; l <= len; ++l) {
      const long j = js[static_cast<std::size_t>(l - 1)];
      S += j * l;
      bin2 += j * (j - 1) / 2;
    }
    if (floor_mod(3 * S - 1, m) == 0) {
      const long num = S - tc.a;
      if (floor_mod(num, m) != 0)
        throw arithmetic_error("torus series: non-integral exponent at n=" + std::to_string(n));
      const long expo = num / m + bin2;
      // sum_k prod_{l<=k} hi[j_l] * prod_{l>k} lo[j_l], via suffix products of lo.
      std::vector<Coeffs> suffix(static_cast<std::size_t>(len) + 2);
      suffix[static_cast<std::size_t>(len) + 1] = Coeffs{BigInt(1)};
      bool dead = false;
      for (long l = len; l >= 1; --l) {
        const auto& g = lo.at(js[static_cast<std::size_t>(l - 1)]);
        suffix[static_cast<std::size_t>(l)] = g.empty() ? Coeffs{} : mul(g, suffix[static_cast<std::size_t>(l) + 1]);
      }
      Coeffs sum;
      Coeffs prefix{BigInt(1)};
      for (long k = 0; k <= len && !dead; ++k) {
        if (k >= 1) {
          const auto& g = hi.at(js[static_cast<std::size_t>(k - 1)]);
          if (g.empty()) {
            dead = true;
            break;
          }
          prefix = mul(prefix, g);
        }
        const Coeffs term = mul(prefix, suffix[static_cast<std::size_t>(k) + 1]);
        add_shifted(sum, term, 0);
      }
      if (expo < 0) throw arithmetic_error("torus series: negative inner exponent");
      add_shifted(total, sum, static_cast<std::size_t>(expo));
    }
    long pos = 0;
    while (pos < len && js[static_cast<std::size_t>(pos)] == jmax) js[static_cast<std::size_t>(pos++)] = 0;
    if (pos == len) break;
    ++js[static_cast<std::size_t>(pos)];
  }
  strip(total);
  return total;
}

}  // namespace detail

/// Ft(q;H) as an exact Laurent polynomial (prefactor (-1)^{h''} q^{-h'} applied).
inline IntPoly ft_partial_laurent(int t, long H) {
  if (t == 1) return f_partial(H);
  const TorusConstants tc = torus_constants(t);
  if (H < 0) throw precondition_error("ft_partial: negative height");
  std::vector<detail::Coeffs> inner;
  inner.reserve(static_cast<std::size_t>(H) + 1);
  detail::GaussRows lo, hi;
  hi.advance();
  for (long n = 0; n <= H; ++n) {
    inner.push_back(detail::torus_inner(tc, n, lo, hi));
    lo.advance();
    hi.advance();
  }
  detail::Coeffs acc = std::move(inner.back());
  for (long n = H - 1; n >= 0; --n) {
    detail::mul_one_minus_qk(acc, static_cast<std::size_t>(n) + 1);
    detail::add_shifted(acc, inner[static_cast<std::size_t>(n)], 0);
  }
  detail::strip(acc);
  if (tc.h2 % 2)
    for (auto& v : acc) v = -v;
  return int_poly(std::move(acc), -tc.h1).trimmed();
}

/// Ft(q;H) with the nonnegativity of its exponents asserted.
inline IntPoly ft_partial(int t, long H) {
  IntPoly f = ft_partial_laurent(t, H);
  if (f.size() > 0 && f.min_exp() < 0)
    throw negative_exponent_error("ft_partial: t=" + std::to_string(t) + ", H=" + std::to_string(H) +
                                  " has minimal exponent " + std::to_string(f.min_exp()));
  return f;
}

/// Truncation at height H of the family named by spec (Laurent form for Ft).
inline IntPoly truncation(const StrangeSpec& spec, long H) {
  const StrangeSpec s = spec.normalized();
  return s.family == Family::F ? f_partial(H) : ft_partial_laurent(s.t, H);
}

/// Asserting truncation, t = 1 meaning F. Used by the dissection machinery.
inline IntPoly truncation_nonneg(int t, long H) { return t == 1 ? f_partial(H) : ft_partial(t, H); }

/// Coefficients of q^0..q^{M-1} in (zeta_N - q)^s * T((zeta_N - q)^r) for an
/// exact Laurent polynomial T, via (zeta_N - q)^E = sum_k C(E,k) zeta_N^{E-k} (-q)^k.
inline std::vector<CycNum> expand_substitution(const IntPoly& T, long N, long r, long s, long M) {
  if (M < 1) throw precondition_error("expand_substitution: M must be >= 1");
  if (!T.is_exact()) throw precondition_error("expand_substitution: truncation must be exact");
  std::vector<std::vector<BigInt>> buckets(static_cast<std::size_t>(M), std::vector<BigInt>(static_cast<std::size_t>(N)));
  BigInt b, term;
  for (long e = T.min_exp(); e <= T.max_exp(); ++e) {
    const BigInt* c = T.find(e);
    if (!c || *c == 0) continue;
    const long E = s + r * e;
    b = *c;  // c_e * C(E,k) * (-1)^k, advanced in k
    for (long k = 0; k < M; ++k) {
      if (b == 0) break;
      buckets[static_cast<std::size_t>(k)][static_cast<std::size_t>(floor_mod(E - k, N))] += b;
      // C(E,k+1) = C(E,k) (E-k)/(k+1); the sign flip supplies (-1)^{k+1}.
      b *= (k - E);
      mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k + 1));
    }
  }
  std::vector<CycNum> out;
  out.reserve(static_cast<std::size_t>(M));
  for (auto& row : buckets) out.push_back(CycNum::from_residue_weights(N, std::span<const BigInt>(row)));
  return out;
}

struct XiTable {
  StrangeSpec spec;
  long M = 0;
  std::vector<CycNum> values;
  long height_used = 0;
  bool stabilized = false;
  double seconds = 0;
};

/// Height rule d (M + h' + 1), d = N / gcd(|r|, N).
inline long stabilization_step(const StrangeSpec& spec) {
  const StrangeSpec s = spec.normalized();
  return s.N / std::gcd(s.r < 0 ? -s.r : s.r, s.N);
}

inline long default_height(const StrangeSpec& spec, long M) {
  const StrangeSpec s = spec.normalized();
  return stabilization_step(s) * (M + s.h1() + 1);
}

/// Coefficients at an explicit height, without any stabilization claim.
inline std::vector<CycNum> xi_at_height(const StrangeSpec& spec, long M, long H) {
  const StrangeSpec s = spec.normalized();
  return expand_substitution(truncation(s, H), s.N, s.r, s.s, M);
}

/// xi(0..M-1) at height H, confirmed against height H + d.
inline XiTable xi_series(const StrangeSpec& spec, long M) {
  if (M < 1) throw precondition_error("xi_series: M must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const StrangeSpec s = spec.normalized();
  const long d = stabilization_step(s);
  const long H = default_height(s, M);
  auto upper = std::async(std::launch::async, [&] { return xi_at_height(s, M, H + d); });
  std::vector<CycNum> lower = xi_at_height(s, M, H);
  std::vector<CycNum> check = upper.get();
  for (long n = 0; n < M; ++n) {
    if (!(lower[static_cast<std::size_t>(n)] == check[static_cast<std::size_t>(n)]))
      throw stabilization_error("xi_series: " + s.label() + " differs between heights " + std::to_string(H) + " and " +
                                std::to_string(H + d) + " at n=" + std::to_string(n));
  }
  XiTable out;
  out.spec = s;
  out.M = M;
  out.values = std::move(lower);
  out.height_used = H;
  out.stabilized = true;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/// Dissection part A_{p,t}(H, i, q) (t = 1 means F).
inline IntPoly dissection_part(int t, long H, long p, long i) {
  if (i < 0 || i >= p) throw precondition_error("dissection_part: residue out of range");
  return dissect(truncation_nonneg(t, H), p).parts[static_cast<std::size_t>(i)];
}

}  // namespace strange_lab
