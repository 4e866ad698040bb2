#pragma once

// Reference implementations used only by tests. Each takes a different route
// from the library code it checks.

#include <map>
#include <vector>

#include "strange_lab/series.hpp"
#include "strange_lab/strange.hpp"

namespace oracle {

using strange_lab::BigInt;
using Poly = std::map<long, BigInt>;  // sparse, exponent -> coefficient

inline Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) out[i + j] += x * y;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline Poly add(Poly a, const Poly& b, int sign = 1) {
  for (const auto& [e, v] : b) a[e] += sign > 0 ? v : BigInt(-v);
  std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
  return a;
}

inline Poly shift(const Poly& a, long k) {
  Poly out;
  for (const auto& [e, v] : a) out[e + k] = v;
  return out;
}

// (q;q)_n by direct product.
inline Poly qpoch(long n) {
  Poly acc{{0, BigInt(1)}};
  for (long k = 1; k <= n; ++k) acc = mul(acc, Poly{{0, BigInt(1)}, {k, BigInt(-1)}});
  return acc;
}

// Exact division by a polynomial with constant term +-1; asserts zero remainder.
inline Poly divide(Poly num, const Poly& den, bool* exact = nullptr) {
  Poly q;
  const BigInt d0 = den.begin()->second;
  const long dlo = den.begin()->first;
  const long dhi = den.rbegin()->first;
  while (!num.empty()) {
    const long e = num.begin()->first;
    if (num.rbegin()->first - dhi < e - dlo) break;
    const BigInt c = num.begin()->second / d0;
    q[e - dlo] = c;
    num = add(num, shift(mul(Poly{{0, c}}, den), e - dlo), -1);
  }
  if (exact) *exact = num.empty();
  return q;
}

// Gaussian binomial by the product formula (q)_n / ((q)_k (q)_{n-k}).
inline Poly gauss(long n, long k) {
  if (k < 0 || k > n) return {};
  return divide(qpoch(n), mul(qpoch(k), qpoch(n - k)));
}

inline strange_lab::IntPoly to_intpoly(const Poly& p) {
  if (p.empty()) return strange_lab::int_poly({});
  const long lo = p.begin()->first, hi = p.rbegin()->first;
  std::vector<BigInt> c(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [e, v] : p) c[static_cast<std::size_t>(e - lo)] = v;
  return strange_lab::int_poly(std::move(c), lo);
}

// Inner torus polynomial at outer index n by plain tuple enumeration.
inline Poly torus_inner(int t, long n) {
  const auto tc = strange_lab::torus_constants(t);
  const long len = tc.m - 1;
  Poly total;
  std::vector<long> js(static_cast<std::size_t>(len), 0);
  while (true) {
    long S = 0, b2 = 0;
    for (long l = 1; l <= len; ++l) {
      S += js[static_cast<std::size_t>(l - 1)] * l;
      b2 += js[static_cast<std::size_t>(l - 1)] * (js[static_cast<std::size_t>(l - 1)] - 1) / 2;
    }
    if (((3 * S - 1) % tc.m + tc.m) % tc.m == 0) {
      Poly sum;
      for (long k = 0; k < tc.m; ++k) {
        Poly prod{{0, BigInt(1)}};
        for (long l = 1; l <= len; ++l) prod = mul(prod, gauss(n + (l <= k ? 1 : 0), js[static_cast<std::size_t>(l - 1)]));
        sum = add(sum, prod);
      }
      total = add(total, shift(sum, (S - tc.a) / tc.m + b2));
    }
    long pos = 0;
    while (pos < len && js[static_cast<std::size_t>(pos)] == n + 1) js[static_cast<std::size_t>(pos++)] = 0;
    if (pos == len) break;
    ++js[static_cast<std::size_t>(pos)];
  }
  return total;
}

// Ft(q;H) summed term by term with (q)_n multiplied out.
inline Poly ft(int t, long H) {
  const auto tc = strange_lab::torus_constants(t);
  Poly total;
  for (long n = 0; n <= H; ++n) total = add(total, mul(qpoch(n), torus_inner(t, n)));
  total = shift(total, -tc.h1);
  if (tc.h2 % 2)
    for (auto& [e, v] : total) v = -v;
  return total;
}

inline Poly f(long H) {
  Poly total;
  for (long n = 0; n <= H; ++n) total = add(total, qpoch(n));
  return total;
}

// Coefficients of (zeta_N - q)^s family((zeta_N - q)^r) by series composition
// at height H: base substitution, Pochhammer products in B, inner factor composed with B.
inline std::vector<strange_lab::CycNum> xi_by_series(const strange_lab::StrangeSpec& raw, long M, long H) {
  using namespace strange_lab;
  const StrangeSpec spec = raw.normalized();
  const long N = spec.N;
  const QSeries B = base_substitution(N, spec.r, M);
  QSeries acc = QSeries::zero_series(CycNum(N), M);
  for (long n = 0; n <= H; ++n) {
    QSeries term = series_pochhammer(B, n);
    if (spec.family == Family::Ft) term = (term * compose(to_intpoly(torus_inner(spec.t, n)), B, M)).truncated(M);
    acc += term;
  }
  if (spec.family == Family::Ft) {
    const auto tc = torus_constants(spec.t);
    acc = (acc * B.pow(-tc.h1, M)).truncated(M);
    if (tc.h2 % 2) acc = -acc;
  }
  if (spec.s != 0) acc = (acc * base_substitution(N, spec.s, M)).truncated(M);
  std::vector<CycNum> out;
  for (long k = 0; k < M; ++k) out.push_back(acc.coeff(k));
  return out;
}

// nu_p(n!) by Legendre's formula.
inline long legendre(long n, long p) {
  long v = 0;
  for (long pk = p; pk <= n; pk *= p) v += n / pk;
  return v;
}

}  // namespace oracle
