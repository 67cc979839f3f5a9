#pragma once

// Dense polynomials over an integral domain, nested for several variables:
// Dense<BigInt> is Z[t], Dense<Dense<BigInt>> is Z[t][u], and so on.
// All heavy elimination (resultants, Bareiss) runs on these.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace saddleloop {

template <class R>
struct Dense {
  std::vector<R> c;  // c[i] multiplies t^i

  Dense() = default;
  explicit Dense(std::vector<R> v) : c(std::move(v)) { trim(); }
  explicit Dense(R constant) {
    c.push_back(std::move(constant));
    trim();
  }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const R& lc() const { return c.back(); }
  R coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : R(); }
  void trim();

  friend bool operator==(const Dense& a, const Dense& b) { return a.c == b.c; }
  friend bool operator!=(const Dense& a, const Dense& b) { return !(a == b); }
};

using ZPoly = Dense<BigInt>;
using ZPoly2 = Dense<ZPoly>;
using ZPoly3 = Dense<ZPoly2>;

// ring primitives -------------------------------------------------------

inline bool ring_is_zero(const BigInt& a) { return sgn(a) == 0; }
template <class R>
bool ring_is_zero(const Dense<R>& a) {
  return a.is_zero();
}

template <class R>
void Dense<R>::trim() {
  while (!c.empty() && ring_is_zero(c.back())) c.pop_back();
}

template <class R>
struct RingOne;
template <>
struct RingOne<BigInt> {
  static BigInt get() { return BigInt(1); }
};
template <class R>
struct RingOne<Dense<R>> {
  static Dense<R> get() { return Dense<R>(RingOne<R>::get()); }
};
template <class R>
R ring_one() {
  return RingOne<R>::get();
}

inline BigInt divexact(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline BigInt scale_int(const BigInt& a, long k) { return a * k; }
template <class R>
Dense<R> scale_int(const Dense<R>& a, long k) {
  Dense<R> r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(scale_int(x, k));
  r.trim();
  return r;
}

// arithmetic ------------------------------------------------------------

template <class R>
Dense<R> operator+(const Dense<R>& a, const Dense<R>& b) {
  Dense<R> r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size())
      r.c[i] = a.c[i] + b.c[i];
    else
      r.c[i] = i < a.c.size() ? a.c[i] : b.c[i];
  }
  r.trim();
  return r;
}

template <class R>
Dense<R> operator-(const Dense<R>& a) {
  Dense<R> r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(-x);
  return r;
}

template <class R>
Dense<R> operator-(const Dense<R>& a, const Dense<R>& b) {
  Dense<R> r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size())
      r.c[i] = a.c[i] - b.c[i];
    else
      r.c[i] = i < a.c.size() ? R(a.c[i]) : R(-b.c[i]);
  }
  r.trim();
  return r;
}

template <class R>
Dense<R> scale(const Dense<R>& a, const R& k) {
  if (ring_is_zero(k)) return {};
  Dense<R> r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(x * k);
  r.trim();
  return r;
}

template <class R>
Dense<R> shift_up(const Dense<R>& a, int k) {
  if (a.is_zero()) return a;
  Dense<R> r;
  r.c.assign(static_cast<std::size_t>(k), R());
  r.c.insert(r.c.end(), a.c.begin(), a.c.end());
  return r;
}

namespace detail {

inline std::size_t max_bits(const std::vector<BigInt>& v) {
  std::size_t b = 0;
  for (const auto& x : v)
    if (sgn(x) != 0) b = std::max(b, bit_size(x));
  return b;
}

inline std::size_t ceil_log2(std::size_t n) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < n) ++r;
  return r;
}

// Kronecker substitution t = 2^k with signed digits.
inline BigInt kpack(const std::vector<BigInt>& c, mp_bitcnt_t k) {
  // split in halves so the packing cost stays near-linear
  struct Packer {
    mp_bitcnt_t k;
    BigInt run(const std::vector<BigInt>& c, std::size_t lo, std::size_t hi) const {
      if (hi - lo <= 8) {
        BigInt v = 0;
        for (std::size_t i = hi; i-- > lo;) {
          mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), k);
          v += c[i];
        }
        return v;
      }
      std::size_t mid = lo + (hi - lo) / 2;
      BigInt low = run(c, lo, mid);
      BigInt high = run(c, mid, hi);
      mpz_mul_2exp(high.get_mpz_t(), high.get_mpz_t(), k * (mid - lo));
      return high + low;
    }
  };
  return Packer{k}.run(c, 0, c.size());
}

inline std::vector<BigInt> kunpack(BigInt v, mp_bitcnt_t k) {
  std::vector<BigInt> out;
  BigInt r, half, full;
  mpz_setbit(half.get_mpz_t(), k - 1);
  mpz_setbit(full.get_mpz_t(), k);
  while (sgn(v) != 0) {
    mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), k);
    if (r >= half) r -= full;
    v -= r;
    mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), k);
    out.push_back(r);
  }
  return out;
}

}  // namespace detail

inline ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::size_t na = a.c.size(), nb = b.c.size();
  if (std::min(na, nb) >= 12) {
    std::size_t bits = detail::max_bits(a.c) + detail::max_bits(b.c) + detail::ceil_log2(std::min(na, nb)) + 2;
    BigInt pa = detail::kpack(a.c, bits), pb = detail::kpack(b.c, bits);
    ZPoly r(detail::kunpack(pa * pb, bits));
    r.c.resize(na + nb - 1);
    return r;
  }
  ZPoly r;
  r.c.assign(na + nb - 1, BigInt(0));
  for (std::size_t i = 0; i < na; ++i) {
    if (sgn(a.c[i]) == 0) continue;
    for (std::size_t j = 0; j < nb; ++j)
      mpz_addmul(r.c[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
  }
  r.trim();
  return r;
}

template <class R>
Dense<R> operator*(const Dense<R>& a, const Dense<R>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Dense<R> r;
  r.c.assign(a.c.size() + b.c.size() - 1, R());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (ring_is_zero(a.c[i])) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      if (ring_is_zero(b.c[j])) continue;
      r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
  }
  r.trim();
  return r;
}

template <class R>
R ring_pow(const R& a, unsigned e) {
  R result = ring_one<R>();
  R base = a;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

// Exact division; throws std::logic_error when b does not divide a.
template <class R>
Dense<R> divexact(const Dense<R>& a, const Dense<R>& b);

inline ZPoly divexact_schoolbook(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {};
  int da = a.degree(), db = b.degree();
  if (da < db) throw std::logic_error("inexact polynomial division");
  std::vector<BigInt> r = a.c;
  ZPoly q;
  q.c.assign(static_cast<std::size_t>(da - db + 1), BigInt(0));
  for (int i = da - db; i >= 0; --i) {
    BigInt& top = r[static_cast<std::size_t>(i + db)];
    if (sgn(top) == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.lc().get_mpz_t())) throw std::logic_error("inexact polynomial division");
    BigInt t = divexact(top, b.lc());
    for (int j = 0; j <= db; ++j)
      mpz_submul(r[static_cast<std::size_t>(i + j)].get_mpz_t(), t.get_mpz_t(), b.c[static_cast<std::size_t>(j)].get_mpz_t());
    q.c[static_cast<std::size_t>(i)] = t;
  }
  for (int i = 0; i < db; ++i)
    if (sgn(r[static_cast<std::size_t>(i)]) != 0) throw std::logic_error("inexact polynomial division");
  q.trim();
  return q;
}

template <>
inline ZPoly divexact(const ZPoly& a, const ZPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {};
  if (b.degree() == 0) {
    ZPoly q;
    for (const auto& x : a.c) {
      if (!mpz_divisible_p(x.get_mpz_t(), b.c[0].get_mpz_t())) throw std::logic_error("inexact polynomial division");
      q.c.push_back(divexact(x, b.c[0]));
    }
    return q;
  }
  int dq = a.degree() - b.degree();
  if (dq < 0) throw std::logic_error("inexact polynomial division");
  if (b.c.size() < 12 || dq < 12) return divexact_schoolbook(a, b);
  // Quotient coefficients obey the Mignotte bound 2^dq * |a|_2.
  std::size_t bits = std::max(detail::max_bits(a.c) + static_cast<std::size_t>(dq) + detail::ceil_log2(a.c.size()) + 3,
                              detail::max_bits(b.c) + 3);
  BigInt pa = detail::kpack(a.c, bits), pb = detail::kpack(b.c, bits);
  BigInt q, rem;
  mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), pa.get_mpz_t(), pb.get_mpz_t());
  if (sgn(rem) != 0) throw std::logic_error("inexact polynomial division");
  ZPoly out(detail::kunpack(q, bits));
  if (out.degree() != dq) throw std::logic_error("inexact polynomial division");
  return out;
}

template <class R>
Dense<R> divexact(const Dense<R>& a, const Dense<R>& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return {};
  int da = a.degree(), db = b.degree();
  if (da < db) throw std::logic_error("inexact polynomial division");
  std::vector<R> r = a.c;
  Dense<R> q;
  q.c.assign(static_cast<std::size_t>(da - db + 1), R());
  for (int i = da - db; i >= 0; --i) {
    const R& top = r[static_cast<std::size_t>(i + db)];
    if (ring_is_zero(top)) continue;
    R t = divexact(top, b.lc());
    for (int j = 0; j <= db; ++j) {
      auto& slot = r[static_cast<std::size_t>(i + j)];
      slot = slot - t * b.c[static_cast<std::size_t>(j)];
    }
    q.c[static_cast<std::size_t>(i)] = std::move(t);
  }
  for (int i = 0; i < db; ++i)
    if (!ring_is_zero(r[static_cast<std::size_t>(i)])) throw std::logic_error("inexact polynomial division");
  q.trim();
  return q;
}

// Divides every coefficient exactly by a scalar of the coefficient ring.
template <class R>
Dense<R> divexact_scalar(const Dense<R>& a, const R& k) {
  Dense<R> r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(divexact(x, k));
  return r;
}

// lc(b)^(deg a - deg b + 1) * a  mod  b
template <class R>
Dense<R> prem(const Dense<R>& a, const Dense<R>& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  int db = b.degree();
  if (a.degree() < db) return a;
  std::vector<R> r = a.c;
  int e = a.degree() - db + 1;
  const R& l = b.lc();
  for (int top = a.degree(); top >= db; --top) {
    R t = r[static_cast<std::size_t>(top)];
    for (auto& x : r) x = x * l;
    --e;
    if (!ring_is_zero(t))
      for (int j = 0; j <= db; ++j) {
        auto& slot = r[static_cast<std::size_t>(top - db + j)];
        slot = slot - t * b.c[static_cast<std::size_t>(j)];
      }
    r.pop_back();
  }
  Dense<R> out(std::move(r));
  if (e > 0) out = scale(out, ring_pow(l, static_cast<unsigned>(e)));
  return out;
}

template <class R>
Dense<R> derivative(const Dense<R>& a) {
  Dense<R> r;
  for (std::size_t i = 1; i < a.c.size(); ++i) r.c.push_back(scale_int(a.c[i], static_cast<long>(i)));
  r.trim();
  return r;
}

template <class R, class V>
V horner(const Dense<R>& a, const V& x) {
  V acc = V();
  for (std::size_t i = a.c.size(); i-- > 0;) acc = acc * x + V(a.c[i]);
  return acc;
}

// Resultant in the outer variable via the subresultant PRS. The sign is
// that of the Sylvester determinant.
template <class R>
R resultant_subres(Dense<R> a, Dense<R> b) {
  if (a.is_zero() || b.is_zero()) return R();
  bool negate = false;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() & 1) && (b.degree() & 1)) negate = !negate;
  }
  if (b.degree() == 0) {
    R r = ring_pow(b.lc(), static_cast<unsigned>(a.degree()));
    return negate ? R(-r) : r;
  }
  R g = ring_one<R>(), h = ring_one<R>();
  while (true) {
    int delta = a.degree() - b.degree();
    if ((a.degree() & 1) && (b.degree() & 1)) negate = !negate;
    Dense<R> r = prem(a, b);
    a = std::move(b);
    R denom = g * ring_pow(h, static_cast<unsigned>(delta));
    b = divexact_scalar(r, denom);
    g = a.lc();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = divexact(ring_pow(g, static_cast<unsigned>(delta)), ring_pow(h, static_cast<unsigned>(delta - 1)));
    }
    if (b.is_zero()) return R();
    if (b.degree() == 0) break;
  }
  int da = a.degree();
  R res;
  if (da == 1)
    res = b.lc();
  else
    res = divexact(ring_pow(b.lc(), static_cast<unsigned>(da)), ring_pow(h, static_cast<unsigned>(da - 1)));
  return negate ? R(-res) : res;
}

// integer content ---------------------------------------------------------

inline BigInt int_content(const BigInt& a) { return abs(a); }
template <class R>
BigInt int_content(const Dense<R>& a) {
  BigInt g = 0;
  for (const auto& x : a.c) {
    g = gcd_z(g, int_content(x));
    if (g == 1) break;
  }
  return g;
}

inline BigInt divexact_int(const BigInt& a, const BigInt& k) { return divexact(a, k); }
template <class R>
Dense<R> divexact_int(const Dense<R>& a, const BigInt& k) {
  Dense<R> r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(divexact_int(x, k));
  return r;
}

inline BigInt mul_int(const BigInt& a, const BigInt& k) { return a * k; }
template <class R>
Dense<R> mul_int(const Dense<R>& a, const BigInt& k) {
  if (sgn(k) == 0) return {};
  Dense<R> r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(mul_int(x, k));
  return r;
}

inline int leading_sign(const BigInt& a) { return sgn(a); }
template <class R>
int leading_sign(const Dense<R>& a) {
  return a.is_zero() ? 0 : leading_sign(a.lc());
}

// Removes the integer content and makes the innermost leading coefficient positive.
template <class R>
Dense<R> int_primitive(const Dense<R>& a) {
  if (a.is_zero()) return a;
  BigInt g = int_content(a);
  if (leading_sign(a) < 0) g = -g;
  return divexact_int(a, g);
}

// gcd in Z[t] ---------------------------------------------------------------

inline bool try_divide(const ZPoly& a, const ZPoly& b, ZPoly* q = nullptr) {
  try {
    ZPoly r = divexact_schoolbook(a, b);
    if (q) *q = std::move(r);
    return true;
  } catch (const std::logic_error&) {
    return false;
  }
}

inline ZPoly gcd_prs(ZPoly a, ZPoly b) {
  a = int_primitive(a);
  b = int_primitive(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    ZPoly r = prem(a, b);
    a = std::move(b);
    b = int_primitive(r);
  }
  return int_primitive(a);
}

// gcd with positive leading coefficient; integer content included.
inline ZPoly gcd(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero()) return mul_int(int_primitive(b), int_content(b));
  if (b.is_zero()) return mul_int(int_primitive(a), int_content(a));
  BigInt ca = int_content(a), cb = int_content(b), cg = gcd_z(ca, cb);
  ZPoly pa = divexact_int(a, ca), pb = divexact_int(b, cb);
  if (pa.degree() == 0 || pb.degree() == 0) return ZPoly(cg);
  // heuristic gcd: evaluate at a large integer, take the integer gcd and lift back
  BigInt ma = 0, mb = 0;
  for (const auto& x : pa.c) ma = std::max(ma, BigInt(abs(x)));
  for (const auto& x : pb.c) mb = std::max(mb, BigInt(abs(x)));
  BigInt xi = 2 * std::min(ma, mb) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (bit_size(xi) * static_cast<std::size_t>(std::max(pa.degree(), pb.degree())) > 40'000'000) break;
    BigInt va = horner(pa, xi), vb = horner(pb, xi);
    BigInt gv = gcd_z(va, vb);
    std::vector<BigInt> coeffs;
    BigInt half = xi / 2;
    while (sgn(gv) != 0) {
      BigInt r;
      mpz_fdiv_r(r.get_mpz_t(), gv.get_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      coeffs.push_back(r);
      gv -= r;
      gv = divexact(gv, xi);
    }
    ZPoly cand = int_primitive(ZPoly(coeffs));
    if (!cand.is_zero() && try_divide(pa, cand) && try_divide(pb, cand)) return mul_int(cand, cg);
    xi = xi * 73794 / 27011;
  }
  return mul_int(gcd_prs(pa, pb), cg);
}

}  // namespace saddleloop
