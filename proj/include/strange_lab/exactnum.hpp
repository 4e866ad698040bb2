#pragma once

// Exact integers, rationals and the cyclotomic field Q(zeta_N).
//
// zeta_N is the abstract root obtained by reducing modulo the N-th cyclotomic
// polynomial; no complex embedding is ever chosen. Elements are stored in the
// power basis 1, zeta, ..., zeta^{phi(N)-1} as integer numerators over one
// positive common denominator.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strange_lab {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Raised when an operation's documented precondition does not hold.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on arithmetic that has no result (division by zero, mixed fields).
class arithmetic_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline BigRat make_rat(const BigInt& num, const BigInt& den = 1) {
  if (den == 0) throw arithmetic_error("zero denominator");
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

inline BigInt factorial(long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

/// Floor division and modulus on machine integers (result of mod in [0, |m|)).
inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline long floor_mod(long a, long m) { return a - m * floor_div(a, m); }

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long euler_phi(long n) {
  if (n < 1) throw precondition_error("euler_phi: n must be positive");
  long result = n;
  long m = n;
  for (long d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      while (m % d == 0) m /= d;
      result -= result / d;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

/// Monic N-th cyclotomic polynomial, coefficients listed from x^0 upwards.
struct CyclotomicPoly {
  long N = 1;
  std::vector<BigInt> coeffs;

  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
};

namespace detail {

// Exact division of integer polynomials by a monic divisor; throws on remainder.
inline std::vector<BigInt> divide_monic(std::vector<BigInt> num, const std::vector<BigInt>& den) {
  const std::size_t dd = den.size() - 1;
  if (num.size() < den.size()) throw arithmetic_error("divide_monic: degree too small");
  std::vector<BigInt> quot(num.size() - dd);
  for (std::size_t k = num.size(); k-- > dd;) {
    const BigInt c = num[k];
    quot[k - dd] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dd; ++i) num[k - dd + i] -= c * den[i];
  }
  for (std::size_t i = 0; i < dd; ++i)
    if (num[i] != 0) throw arithmetic_error("divide_monic: nonzero remainder");
  return quot;
}

}  // namespace detail

const CyclotomicPoly& cyclotomic_cached(long N);

/// Phi_N computed as (x^N - 1) / prod_{d | N, d < N} Phi_d.
inline CyclotomicPoly cyclotomic_poly(long N) {
  if (N < 1) throw precondition_error("cyclotomic_poly: N must be positive");
  std::vector<BigInt> poly(static_cast<std::size_t>(N) + 1);
  poly[0] = -1;
  poly[static_cast<std::size_t>(N)] = 1;
  for (long d = 1; d < N; ++d)
    if (N % d == 0) poly = detail::divide_monic(std::move(poly), cyclotomic_cached(d).coeffs);
  return CyclotomicPoly{N, std::move(poly)};
}

/// Process-wide, write-once cache of cyclotomic polynomials.
inline const CyclotomicPoly& cyclotomic_cached(long N) {
  static std::mutex mu;
  static std::map<long, std::unique_ptr<const CyclotomicPoly>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return *it->second;
  }
  auto fresh = std::make_unique<const CyclotomicPoly>(cyclotomic_poly(N));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(N, std::move(fresh));
  return *it->second;
}

/// Element of Q(zeta_N).
class CycNum {
 public:
  /// Zero of Q(zeta_1) = Q.
  CycNum() : CycNum(1) {}

  /// Zero of Q(zeta_N).
  explicit CycNum(long N) : N_(N), num_(static_cast<std::size_t>(euler_phi(N))), den_(1) {}

  CycNum(long N, const BigInt& value) : CycNum(N) { num_[0] = value; }

  static CycNum from_rat(long N, const BigRat& value) {
    CycNum x(N);
    x.num_[0] = value.get_num();
    x.den_ = value.get_den();
    x.normalize();
    return x;
  }

  /// zeta_N^k for any integer k.
  static CycNum zeta(long N, long k = 1) {
    std::vector<BigInt> buf(static_cast<std::size_t>(N));
    buf[static_cast<std::size_t>(floor_mod(k, N))] = 1;
    return from_folded(N, std::move(buf), 1);
  }

  /// Builds sum_i coords[i] zeta^i; coords may be longer than phi(N).
  static CycNum from_coords(long N, std::span<const BigRat> coords) {
    BigInt den = 1;
    for (const auto& c : coords) den = lcm(den, BigInt(c.get_den()));
    std::vector<BigInt> buf(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      BigInt scaled = coords[i].get_num() * (den / coords[i].get_den());
      buf[i % static_cast<std::size_t>(N)] += scaled;
    }
    return from_folded(N, std::move(buf), std::move(den));
  }

  /// sum_{i<N} weights[i] zeta^i, i.e. a value given by residue classes of exponents.
  static CycNum from_residue_weights(long N, std::span<const BigRat> weights) {
    if (static_cast<long>(weights.size()) != N)
      throw precondition_error("from_residue_weights: need exactly N weights");
    return from_coords(N, weights);
  }

  static CycNum from_residue_weights(long N, std::span<const BigInt> weights) {
    if (static_cast<long>(weights.size()) != N)
      throw precondition_error("from_residue_weights: need exactly N weights");
    std::vector<BigInt> buf(weights.begin(), weights.end());
    return from_folded(N, std::move(buf), 1);
  }

  long order() const { return N_; }
  long dim() const { return static_cast<long>(num_.size()); }

  BigRat coord(long i) const { return make_rat(num_.at(static_cast<std::size_t>(i)), den_); }

  std::vector<BigRat> coords() const {
    std::vector<BigRat> out;
    out.reserve(num_.size());
    for (const auto& n : num_) out.push_back(make_rat(n, den_));
    return out;
  }

  const std::vector<BigInt>& numerators() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const BigInt& v) { return v == 0; });
  }
  bool is_integral() const { return den_ == 1; }
  bool is_rational() const {
    return std::all_of(num_.begin() + 1, num_.end(), [](const BigInt& v) { return v == 0; });
  }

  /// The rational value; throws unless the element lies in Q.
  BigRat as_rational() const {
    if (!is_rational()) throw arithmetic_error("CycNum is not rational");
    return make_rat(num_[0], den_);
  }

  CycNum operator-() const {
    CycNum out = *this;
    for (auto& v : out.num_) v = -v;
    return out;
  }

  CycNum& operator+=(const CycNum& o) { return accumulate(o, 1); }
  CycNum& operator-=(const CycNum& o) { return accumulate(o, -1); }

  CycNum& operator*=(const BigInt& k) {
    for (auto& v : num_) v *= k;
    if (den_ != 1) normalize();
    if (k == 0) den_ = 1;
    return *this;
  }

  CycNum& operator*=(const BigRat& k) {
    for (auto& v : num_) v *= k.get_num();
    den_ *= k.get_den();
    normalize();
    return *this;
  }

  CycNum& operator*=(const CycNum& o) {
    check_same_field(o);
    const std::size_t phi = num_.size();
    if (phi == 1) {
      num_[0] *= o.num_[0];
    } else {
      std::vector<BigInt> buf(static_cast<std::size_t>(N_));
      for (std::size_t i = 0; i < phi; ++i) {
        if (num_[i] == 0) continue;
        for (std::size_t j = 0; j < phi; ++j) {
          if (o.num_[j] == 0) continue;
          std::size_t e = i + j;
          if (e >= static_cast<std::size_t>(N_)) e -= static_cast<std::size_t>(N_);
          mpz_addmul(buf[e].get_mpz_t(), num_[i].get_mpz_t(), o.num_[j].get_mpz_t());
        }
      }
      reduce_into(N_, buf, num_);
    }
    if (den_ != 1 || o.den_ != 1) {
      den_ *= o.den_;
      normalize();
    }
    return *this;
  }

  /// Fused this += a * b, the hot operation of series multiplication.
  void add_product(const CycNum& a, const CycNum& b) {
    if (num_.size() == 1 && den_ == 1 && a.den_ == 1 && b.den_ == 1) {
      a.check_same_field(b);
      check_same_field(a);
      mpz_addmul(num_[0].get_mpz_t(), a.num_[0].get_mpz_t(), b.num_[0].get_mpz_t());
      return;
    }
    CycNum t = a;
    t *= b;
    *this += t;
  }

  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend CycNum operator*(CycNum a, const BigInt& k) { return a *= k; }
  friend CycNum operator*(const BigInt& k, CycNum a) { return a *= k; }
  friend CycNum operator*(CycNum a, const BigRat& k) { return a *= k; }

  friend bool operator==(const CycNum& a, const CycNum& b) {
    return a.N_ == b.N_ && a.den_ == b.den_ && a.num_ == b.num_;
  }

  /// Multiplicative inverse via the extended Euclidean algorithm in Q[x] against Phi_N.
  CycNum inverse() const;

  /// Image under the automorphism zeta -> zeta^k, gcd(k, N) = 1.
  CycNum galois(long k) const {
    if (std::gcd(floor_mod(k, N_), N_) != 1) throw precondition_error("galois: k must be a unit mod N");
    std::vector<BigInt> buf(static_cast<std::size_t>(N_));
    for (std::size_t i = 0; i < num_.size(); ++i)
      buf[static_cast<std::size_t>(floor_mod(static_cast<long>(i) * k, N_))] += num_[i];
    return from_folded(N_, std::move(buf), den_);
  }

  std::string to_string() const {
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      BigRat c = make_rat(num_[i], den_);
      if (!first) out += " + ";
      first = false;
      out += c.get_str();
      if (i > 0) out += "*z^" + std::to_string(i);
    }
    return first ? "0" : out;
  }

 private:
  long N_;
  std::vector<BigInt> num_;
  BigInt den_;

  void check_same_field(const CycNum& o) const {
    if (N_ != o.N_)
      throw arithmetic_error("CycNum: mismatched root orders " + std::to_string(N_) + " and " +
                             std::to_string(o.N_));
  }

  CycNum& accumulate(const CycNum& o, int sign) {
    check_same_field(o);
    if (den_ == o.den_) {
      for (std::size_t i = 0; i < num_.size(); ++i) {
        if (sign > 0)
          num_[i] += o.num_[i];
        else
          num_[i] -= o.num_[i];
      }
      if (den_ != 1) normalize();
      return *this;
    }
    for (std::size_t i = 0; i < num_.size(); ++i) {
      num_[i] *= o.den_;
      if (sign > 0)
        mpz_addmul(num_[i].get_mpz_t(), o.num_[i].get_mpz_t(), den_.get_mpz_t());
      else
        mpz_submul(num_[i].get_mpz_t(), o.num_[i].get_mpz_t(), den_.get_mpz_t());
    }
    den_ *= o.den_;
    normalize();
    return *this;
  }

  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      for (auto& v : num_) v = -v;
    }
    if (den_ == 1) return;
    BigInt g = den_;
    for (const auto& v : num_) {
      if (g == 1) break;
      g = gcd(g, v);
    }
    if (g != 1) {
      den_ /= g;
      for (auto& v : num_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    }
    if (is_zero()) den_ = 1;
  }

  // buf holds exponents 0..N-1 (already folded by zeta^N = 1); reduce modulo Phi_N.
  static void reduce_into(long N, std::vector<BigInt>& buf, std::vector<BigInt>& out) {
    const auto& phi_poly = cyclotomic_cached(N).coeffs;
    const std::size_t phi = phi_poly.size() - 1;
    for (std::size_t k = buf.size(); k-- > phi;) {
      if (buf[k] == 0) continue;
      const BigInt c = buf[k];
      for (std::size_t i = 0; i < phi; ++i) {
        const BigInt& f = phi_poly[i];
        if (f == 0) continue;
        mpz_submul(buf[k - phi + i].get_mpz_t(), c.get_mpz_t(), f.get_mpz_t());
      }
      buf[k] = 0;
    }
    out.assign(std::make_move_iterator(buf.begin()), std::make_move_iterator(buf.begin() + static_cast<long>(phi)));
  }

  static CycNum from_folded(long N, std::vector<BigInt> buf, BigInt den) {
    CycNum x(N);
    reduce_into(N, buf, x.num_);
    x.den_ = std::move(den);
    x.normalize();
    return x;
  }
};

namespace detail {

using RatPoly = std::vector<BigRat>;

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Quotient and remainder of a by b over Q (b nonzero).
inline std::pair<RatPoly, RatPoly> divmod(RatPoly a, const RatPoly& b) {
  trim(a);
  RatPoly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, BigRat(0));
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    BigRat c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    a.pop_back();
    trim(a);
  }
  return {q, a};
}

inline RatPoly sub_mul(const RatPoly& a, const RatPoly& q, const RatPoly& b) {
  RatPoly out(std::max(a.size(), q.empty() || b.empty() ? 0 : q.size() + b.size() - 1), BigRat(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
  trim(out);
  return out;
}

}  // namespace detail

inline CycNum CycNum::inverse() const {
  if (is_zero()) throw arithmetic_error("CycNum: inversion of zero");
  const auto& phi_poly = cyclotomic_cached(N_).coeffs;
  detail::RatPoly f, g;
  for (const auto& c : phi_poly) f.emplace_back(c);
  for (const auto& c : num_) g.emplace_back(c);
  detail::trim(g);
  // Invariant: s_f * g == f (mod Phi), s_g * g == g (mod Phi).
  detail::RatPoly s_prev{BigRat(0)}, s_cur{BigRat(1)};
  detail::RatPoly r_prev = f, r_cur = g;
  while (r_cur.size() > 1) {
    auto [q, r] = detail::divmod(r_prev, r_cur);
    auto s_next = detail::sub_mul(s_prev, q, s_cur);
    r_prev = std::move(r_cur);
    r_cur = std::move(r);
    s_prev = std::move(s_cur);
    s_cur = std::move(s_next);
  }
  if (r_cur.empty()) throw arithmetic_error("CycNum: element is a zero divisor");
  const BigRat lead = r_cur[0];
  for (auto& c : s_cur) c /= lead;
  // Scale by den_: (num/den)^{-1} = den * num^{-1}.
  for (auto& c : s_cur) c *= den_;
  return from_coords(N_, s_cur);
}

inline CycNum pow(const CycNum& x, long e) {
  CycNum base = e < 0 ? x.inverse() : x;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  CycNum acc(x.order(), BigInt(1));
  while (k) {
    if (k & 1UL) acc *= base;
    k >>= 1UL;
    if (k) base *= base;
  }
  return acc;
}

/// True iff x = p^lambda * y for some y in Z[zeta_N]. Coordinate-wise in the
/// power basis, which is a Z-basis of the full ring of integers.
inline bool cyc_divisible(const CycNum& x, const BigInt& p, long lambda) {
  if (!x.is_integral()) throw precondition_error("cyc_divisible: argument is not integral");
  if (lambda < 0) throw precondition_error("cyc_divisible: negative exponent");
  const BigInt mod = ipow(p, static_cast<unsigned long>(lambda));
  return std::all_of(x.numerators().begin(), x.numerators().end(),
                     [&](const BigInt& v) { return mpz_divisible_p(v.get_mpz_t(), mod.get_mpz_t()) != 0; });
}

}  // namespace strange_lab
