#pragma once

// Truncated Laurent series with explicit precision, generic over the
// coefficient ring (BigInt for integer polynomials, CycNum for Z[zeta_N]).
//
// A Series stores coefficients for exponents min_exp .. min_exp+size-1.
// Every exponent below prec() is known exactly (missing entries are zero);
// exponents at or above prec() are unknown. Polynomials carry prec() == exact.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strange_lab/exactnum.hpp"

namespace strange_lab {

template <class C>
struct coeff_traits;

template <>
struct coeff_traits<BigInt> {
  static BigInt zero_like(const BigInt&) { return 0; }
  static BigInt one_like(const BigInt&) { return 1; }
  static bool is_zero(const BigInt& x) { return sgn(x) == 0; }
  static void add_product(BigInt& acc, const BigInt& a, const BigInt& b) {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  static BigInt inverse(const BigInt& x) {
    if (x == 1 || x == -1) return x;
    throw arithmetic_error("integer series: constant term is not a unit");
  }
};

template <>
struct coeff_traits<CycNum> {
  static CycNum zero_like(const CycNum& x) { return CycNum(x.order()); }
  static CycNum one_like(const CycNum& x) { return CycNum(x.order(), BigInt(1)); }
  static bool is_zero(const CycNum& x) { return x.is_zero(); }
  static void add_product(CycNum& acc, const CycNum& a, const CycNum& b) { acc.add_product(a, b); }
  static CycNum inverse(const CycNum& x) { return x.inverse(); }
};

template <class C>
class Series {
  using traits = coeff_traits<C>;

 public:
  static constexpr long exact = std::numeric_limits<long>::max() / 4;

  Series() : zero_(), min_exp_(0), prec_(exact) {}

  Series(C zero, long min_exp, long prec, std::vector<C> coeffs)
      : zero_(std::move(zero)), min_exp_(min_exp), prec_(prec), c_(std::move(coeffs)) {
    if (prec_ < min_exp_) throw precondition_error("Series: prec below min_exp");
    clip();
  }

  static Series polynomial(C zero, long min_exp, std::vector<C> coeffs) {
    return Series(std::move(zero), min_exp, exact, std::move(coeffs));
  }

  static Series zero_series(C zero, long prec = exact) { return Series(std::move(zero), 0, prec, {}); }

  static Series monomial(C value, long e, long prec = exact) {
    C z = traits::zero_like(value);
    if (e >= prec) return Series(std::move(z), std::min(e, prec), prec, {});
    return Series(std::move(z), e, prec, {std::move(value)});
  }

  const C& zero() const { return zero_; }
  long min_exp() const { return min_exp_; }
  long prec() const { return prec_; }
  bool is_exact() const { return prec_ >= exact; }
  std::size_t size() const { return c_.size(); }
  std::span<const C> coeffs() const { return c_; }

  /// Highest stored exponent (min_exp - 1 when empty).
  long max_exp() const { return min_exp_ + static_cast<long>(c_.size()) - 1; }

  /// Coefficient of q^e; throws if e is at or beyond the precision bound.
  C coeff(long e) const {
    if (e >= prec_) throw precondition_error("Series::coeff: exponent " + std::to_string(e) + " beyond precision");
    if (e < min_exp_ || e > max_exp()) return zero_;
    return c_[static_cast<std::size_t>(e - min_exp_)];
  }

  const C* find(long e) const {
    if (e < min_exp_ || e > max_exp()) return nullptr;
    return &c_[static_cast<std::size_t>(e - min_exp_)];
  }

  /// Lowest exponent carrying a nonzero coefficient, or prec() if none.
  long valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!traits::is_zero(c_[i])) return min_exp_ + static_cast<long>(i);
    return prec_;
  }

  /// Drops zero coefficients at both ends; min_exp moves up to the valuation.
  Series trimmed() const {
    Series out = *this;
    std::size_t lo = 0;
    while (lo < out.c_.size() && traits::is_zero(out.c_[lo])) ++lo;
    if (lo == out.c_.size()) {
      out.c_.clear();
      out.min_exp_ = std::min(out.prec_, std::max(out.min_exp_, 0L));
      return out;
    }
    out.c_.erase(out.c_.begin(), out.c_.begin() + static_cast<long>(lo));
    out.min_exp_ += static_cast<long>(lo);
    out.strip_high();
    return out;
  }

  Series truncated(long prec) const {
    Series out = *this;
    out.prec_ = std::max(std::min(prec_, prec), out.min_exp_);
    out.clip();
    return out;
  }

  /// Multiplication by q^k.
  Series shifted(long k) const {
    Series out = *this;
    out.min_exp_ += k;
    if (!is_exact()) out.prec_ += k;
    return out;
  }

  /// The series f(q^k) for k >= 1.
  Series dilated(long k) const {
    if (k < 1) throw precondition_error("Series::dilated: factor must be positive");
    if (c_.empty()) return Series(zero_, min_exp_ * k, is_exact() ? exact : prec_ * k, {});
    std::vector<C> out((c_.size() - 1) * static_cast<std::size_t>(k) + 1, zero_);
    for (std::size_t i = 0; i < c_.size(); ++i) out[i * static_cast<std::size_t>(k)] = c_[i];
    // Exponents between multiples of k are genuinely zero up to k*prec - (k-1).
    long p = is_exact() ? exact : (prec_ - 1) * k + 1;
    return Series(zero_, min_exp_ * k, p, std::move(out));
  }

  Series& operator+=(const Series& o) { return combine(o, false); }
  Series& operator-=(const Series& o) { return combine(o, true); }

  Series operator-() const {
    Series out = *this;
    for (auto& v : out.c_) v = -v;
    return out;
  }

  Series& operator*=(const C& k) {
    for (auto& v : c_) v = v * k;
    return *this;
  }

  Series& operator*=(const BigInt& k) requires(!std::is_same_v<C, BigInt>) {
    for (auto& v : c_) v *= k;
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }

  /// Naive product; coefficient at e is exact iff every contributing pair is known.
  friend Series operator*(const Series& a, const Series& b) {
    const long lo = a.min_exp_ + b.min_exp_;
    long prec = exact;
    if (!a.is_exact()) prec = std::min(prec, a.prec_ + b.min_exp_);
    if (!b.is_exact()) prec = std::min(prec, b.prec_ + a.min_exp_);
    if (a.c_.empty() || b.c_.empty()) return Series(a.zero_, std::min(lo, prec), prec, {});
    std::size_t len = a.c_.size() + b.c_.size() - 1;
    if (prec != exact) len = std::min<std::size_t>(len, static_cast<std::size_t>(std::max(0L, prec - lo)));
    std::vector<C> out(len, a.zero_);
    for (std::size_t i = 0; i < a.c_.size() && i < len; ++i) {
      if (traits::is_zero(a.c_[i])) continue;
      const std::size_t jmax = std::min(b.c_.size(), len - i);
      for (std::size_t j = 0; j < jmax; ++j) traits::add_product(out[i + j], a.c_[i], b.c_[j]);
    }
    return Series(a.zero_, std::min(lo, prec), prec, std::move(out));
  }

  Series& operator*=(const Series& o) { return *this = *this * o; }

  /// Equality of everything known: same precision and identical coefficients below it.
  friend bool operator==(const Series& a, const Series& b) {
    if (a.prec_ != b.prec_) return false;
    const long lo = std::min(a.min_exp_, b.min_exp_);
    const long hi = std::max(a.max_exp(), b.max_exp());
    for (long e = lo; e <= hi; ++e) {
      const C* x = a.find(e);
      const C* y = b.find(e);
      const bool zx = !x || traits::is_zero(*x);
      const bool zy = !y || traits::is_zero(*y);
      if (zx && zy) continue;
      if (zx != zy || !(*x == *y)) return false;
    }
    return true;
  }

  /// Multiplicative inverse to precision prec (constant term at min_exp must be a unit).
  Series inverse(long prec) const {
    Series t = trimmed();
    if (t.c_.empty()) throw arithmetic_error("Series::inverse: series is zero to its precision");
    const long v = t.min_exp_;
    // Output spans exponents -v .. prec-1, limited by the relative precision of t.
    const long out_len = std::max(0L, prec + v);
    const long known_rel = t.is_exact() ? exact : t.prec_ - v;
    const long len = std::min(out_len, known_rel);
    std::vector<C> out(static_cast<std::size_t>(std::max(0L, len)), t.zero_);
    if (len > 0) {
      const C inv0 = traits::inverse(t.c_[0]);
      out[0] = inv0;
      for (long n = 1; n < len; ++n) {
        C acc = t.zero_;
        const long kmax = std::min<long>(n, static_cast<long>(t.c_.size()) - 1);
        for (long k = 1; k <= kmax; ++k)
          traits::add_product(acc, t.c_[static_cast<std::size_t>(k)], out[static_cast<std::size_t>(n - k)]);
        out[static_cast<std::size_t>(n)] = -(acc * inv0);
      }
    }
    return Series(t.zero_, -v, len - v, std::move(out));
  }

  /// Non-negative power by repeated squaring, truncated to prec.
  Series pow(long e, long prec) const {
    if (e < 0) return inverse(prec).pow(-e, prec);
    Series acc = monomial(traits::one_like(zero_), 0, prec);
    Series base = truncated(prec);
    while (e) {
      if (e & 1L) acc = (acc * base).truncated(prec);
      e >>= 1;
      if (e) base = (base * base).truncated(prec);
    }
    return acc;
  }

 private:
  C zero_;
  long min_exp_;
  long prec_;
  std::vector<C> c_;

  void clip() {
    if (!is_exact()) {
      const long keep = std::max(0L, prec_ - min_exp_);
      if (static_cast<long>(c_.size()) > keep) c_.resize(static_cast<std::size_t>(keep), zero_);
    }
    strip_high();
  }

  void strip_high() {
    while (!c_.empty() && traits::is_zero(c_.back())) c_.pop_back();
  }

  Series& combine(const Series& o, bool negate) {
    const long prec = std::min(prec_, o.prec_);
    const long lo = std::min(min_exp_, o.min_exp_);
    const long hi = std::min(std::max(max_exp(), o.max_exp()), prec - 1);
    std::vector<C> out(static_cast<std::size_t>(std::max(0L, hi - lo + 1)), zero_);
    for (long e = lo; e <= hi; ++e) {
      auto& slot = out[static_cast<std::size_t>(e - lo)];
      if (const C* x = find(e)) slot = *x;
      if (const C* y = o.find(e)) {
        if (negate)
          slot -= *y;
        else
          slot += *y;
      }
    }
    min_exp_ = std::min(lo, prec);
    prec_ = prec;
    c_ = std::move(out);
    clip();
    return *this;
  }
};

using IntPoly = Series<BigInt>;
using QSeries = Series<CycNum>;

/// p-dissection f(q) = sum_i q^i parts[i](q^p).
template <class C>
struct DissectionResult {
  long p = 0;
  std::vector<Series<C>> parts;
};

inline IntPoly int_poly(std::vector<BigInt> coeffs, long min_exp = 0) {
  return IntPoly::polynomial(BigInt(0), min_exp, std::move(coeffs));
}

/// (zeta_N - q)^r to precision prec; r < 0 uses series inversion, r = 0 gives 1.
inline QSeries base_substitution(long N, long r, long prec) {
  if (prec < 1) throw precondition_error("base_substitution: prec must be >= 1");
  const CycNum zero(N);
  if (r == 0) return QSeries::monomial(CycNum(N, BigInt(1)), 0, prec);
  const long k = r < 0 ? -r : r;
  // Binomial expansion: sum_j C(k,j) zeta^{k-j} (-q)^j.
  std::vector<CycNum> c;
  for (long j = 0; j <= k && j < prec; ++j) {
    CycNum term = CycNum::zeta(N, k - j);
    BigInt b = binomial(k, j);
    if (j % 2) b = -b;
    term *= b;
    c.push_back(std::move(term));
  }
  QSeries pos(zero, 0, prec, std::move(c));
  if (r > 0) return pos;
  return pos.inverse(prec);
}

/// prod_{k=1..n} (1 - B^k), to B's precision.
template <class C>
Series<C> series_pochhammer(const Series<C>& B, long n) {
  using traits = coeff_traits<C>;
  if (B.prec() < 1) throw precondition_error("series_pochhammer: base must have prec >= 1");
  const long prec = B.prec();
  const Series<C> one = Series<C>::monomial(traits::one_like(B.zero()), 0, prec);
  Series<C> acc = one;
  Series<C> power = one;
  for (long k = 1; k <= n; ++k) {
    power = (power * B).truncated(prec);
    acc = (acc * (one - power)).truncated(prec);
  }
  return acc;
}

namespace detail {

// Integer coefficient vectors with exponent offset 0, used in hot loops.
using Coeffs = std::vector<BigInt>;

inline void add_shifted(Coeffs& acc, const Coeffs& src, std::size_t shift, int sign = 1) {
  if (src.empty()) return;
  if (acc.size() < src.size() + shift) acc.resize(src.size() + shift);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (sign > 0)
      acc[i + shift] += src[i];
    else
      acc[i + shift] -= src[i];
  }
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

// In place: a <- a * (1 - q^k).
inline void mul_one_minus_qk(Coeffs& a, std::size_t k) {
  if (a.empty()) return;
  const std::size_t old = a.size();
  a.resize(old + k);
  for (std::size_t i = old + k; i-- > k;) a[i] -= a[i - k];
}

inline void strip(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Rows of Gaussian binomials [n, k]_q, k = 0..n, advanced by the q-Pascal rule
/// [n, k] = [n-1, k-1] + q^k [n-1, k].
class GaussRows {
 public:
  GaussRows() : n_(0), row_{Coeffs{BigInt(1)}} {}

  long n() const { return n_; }
  const Coeffs& at(long k) const {
    static const Coeffs empty;
    if (k < 0 || k > n_) return empty;
    return row_[static_cast<std::size_t>(k)];
  }

  void advance() {
    std::vector<Coeffs> next(static_cast<std::size_t>(n_) + 2);
    next[0] = Coeffs{BigInt(1)};
    next[static_cast<std::size_t>(n_) + 1] = Coeffs{BigInt(1)};
    for (long k = 1; k <= n_; ++k) {
      Coeffs c = row_[static_cast<std::size_t>(k) - 1];
      add_shifted(c, row_[static_cast<std::size_t>(k)], static_cast<std::size_t>(k));
      next[static_cast<std::size_t>(k)] = std::move(c);
    }
    row_ = std::move(next);
    ++n_;
  }

 private:
  long n_;
  std::vector<Coeffs> row_;
};

}  // namespace detail

/// Gaussian binomial (n choose k)_q via the q-Pascal recursion.
inline IntPoly gauss_binom(long n, long k) {
  if (n < 0 || k < 0) throw precondition_error("gauss_binom: negative argument");
  if (k > n) return IntPoly::zero_series(BigInt(0));
  // Row recursion restricted to the needed column band.
  const long kk = std::min(k, n - k);
  std::vector<detail::Coeffs> col(static_cast<std::size_t>(kk) + 1);
  col[0] = {BigInt(1)};
  // col[j] holds [m, j] for the current m; start at m = 0.
  for (long m = 1; m <= n; ++m) {
    for (long j = std::min(m, kk); j >= 1; --j) {
      detail::Coeffs c = col[static_cast<std::size_t>(j) - 1];
      detail::add_shifted(c, col[static_cast<std::size_t>(j)], static_cast<std::size_t>(j));
      col[static_cast<std::size_t>(j)] = std::move(c);
    }
  }
  return int_poly(col[static_cast<std::size_t>(kk)]);
}

/// Splits f by exponent residue mod p: exponent e = i + p*e' goes to parts[i] at e'.
template <class C>
DissectionResult<C> dissect(const Series<C>& f, long p) {
  if (p < 1) throw precondition_error("dissect: p must be positive");
  if (f.min_exp() < 0)
    throw precondition_error("dissect: negative minimal exponent " + std::to_string(f.min_exp()));
  DissectionResult<C> out;
  out.p = p;
  for (long i = 0; i < p; ++i) {
    std::vector<C> part;
    long prec = Series<C>::exact;
    if (!f.is_exact()) prec = i < f.prec() ? floor_div(f.prec() - i - 1, p) + 1 : 0;
    for (long e = i; e <= f.max_exp(); e += p) {
      if (!f.is_exact() && e >= f.prec()) break;
      const C* v = f.find(e);
      part.push_back(v ? *v : f.zero());
    }
    out.parts.emplace_back(f.zero(), 0, prec, std::move(part));
  }
  return out;
}

/// Inverse of dissect: sum_i q^i parts[i](q^p).
template <class C>
Series<C> reassemble(const DissectionResult<C>& d) {
  Series<C> acc = Series<C>::zero_series(d.parts.at(0).zero());
  for (long i = 0; i < d.p; ++i) acc += d.parts[static_cast<std::size_t>(i)].dilated(d.p).shifted(i);
  return acc;
}

/// f(1-q) for a (Laurent-free) polynomial f, by the binomial transform.
inline IntPoly recentre_at_one(const IntPoly& f) {
  if (!f.is_exact()) throw precondition_error("recentre_at_one: needs an exact polynomial");
  if (f.min_exp() < 0) throw precondition_error("recentre_at_one: negative exponents");
  const long deg = f.max_exp();
  if (deg < 0) return f;
  std::vector<BigInt> out(static_cast<std::size_t>(deg) + 1);
  for (long e = f.min_exp(); e <= deg; ++e) {
    const BigInt* c = f.find(e);
    if (!c || *c == 0) continue;
    BigInt b = 1;  // C(e, k)
    for (long k = 0; k <= e; ++k) {
      if (k % 2)
        out[static_cast<std::size_t>(k)] -= *c * b;
      else
        out[static_cast<std::size_t>(k)] += *c * b;
      b = b * (e - k) / (k + 1);
    }
  }
  return int_poly(std::move(out));
}

/// j-th derivative at q = 1: sum_e c_e * e(e-1)...(e-j+1). Laurent exponents allowed.
template <class C>
C series_derivative_at_one(const Series<C>& f, long j) {
  if (!f.is_exact()) throw precondition_error("series_derivative_at_one: needs an exact polynomial");
  C acc = f.zero();
  for (long e = f.min_exp(); e <= f.max_exp(); ++e) {
    const C* c = f.find(e);
    if (!c || coeff_traits<C>::is_zero(*c)) continue;
    BigInt ff = 1;
    for (long i = 0; i < j; ++i) ff *= (e - i);
    if (ff == 0) continue;
    acc += (*c) * ff;
  }
  return acc;
}

/// Derivative at 1 of q^shift * f(q^scale), without expanding the dilation.
inline BigInt derivative_at_one_dilated(const IntPoly& f, long j, long scale, long shift) {
  BigInt acc = 0;
  for (long e = f.min_exp(); e <= f.max_exp(); ++e) {
    const BigInt* c = f.find(e);
    if (!c || *c == 0) continue;
    const long x = shift + scale * e;
    BigInt ff = 1;
    for (long i = 0; i < j; ++i) ff *= (x - i);
    acc += *c * ff;
  }
  return acc;
}

/// Composition f(B) for an exact integer Laurent polynomial f and a series B
/// with min_exp 0; B's constant term must be a unit when f has negative exponents.
inline QSeries compose(const IntPoly& f, const QSeries& B, long prec) {
  const CycNum& zero = B.zero();
  QSeries acc = QSeries::zero_series(zero, prec);
  if (f.size() == 0) return acc;
  const QSeries b = B.truncated(prec);
  for (long e = f.max_exp(); e >= f.min_exp(); --e) {
    acc = (acc * b).truncated(prec);
    if (const BigInt* c = f.find(e); c && *c != 0)
      acc += QSeries::monomial(CycNum(zero.order(), *c), 0, prec);
  }
  if (f.min_exp() != 0) acc = (acc * b.pow(f.min_exp(), prec)).truncated(prec);
  return acc;
}

}  // namespace strange_lab
