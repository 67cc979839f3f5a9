#pragma once

// Exact real-root machinery for integer polynomials: Descartes (Vincent-Collins-Akritas)
// isolation, bisection refinement, signs at algebraic points.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dense.hpp"
#include "rational.hpp"
#include "unipoly.hpp"

namespace saddleloop {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Interval endpoint that may be infinite.
struct Endpoint {
  enum Kind { NegInf, Finite, PosInf } kind = Finite;
  BigRational value;

  static Endpoint neg_inf() { return {NegInf, 0}; }
  static Endpoint pos_inf() { return {PosInf, 0}; }
  static Endpoint at(const BigRational& v) { return {Finite, v}; }
  bool finite() const { return kind == Finite; }
};

// Open-closed interval (lo, hi] holding exactly one root. `exact` marks a rational root equal to hi.
struct IsolatingInterval {
  BigRational lo, hi;
  bool multiplicity_free = true;
  bool exact = false;

  BigRational mid() const { return (lo + hi) / 2; }
  double approx() const { return exact ? hi.get_d() : mid().get_d(); }
};

// sign of p(x) computed without rational normalization
inline int sign_at(const ZPoly& p, const BigRational& x) {
  if (p.is_zero()) return 0;
  const BigInt& n = x.get_num();
  const BigInt& d = x.get_den();
  BigInt acc = p.lc();
  BigInt dp = 1;
  for (int i = p.degree() - 1; i >= 0; --i) {
    dp *= d;
    acc = acc * n + p.c[static_cast<std::size_t>(i)] * dp;
  }
  return sgn(acc);
}

inline int sign_at(const ZPoly& p, const Endpoint& e) {
  if (p.is_zero()) return 0;
  if (e.kind == Endpoint::Finite) return sign_at(p, e.value);
  int s = sgn(p.lc());
  return (e.kind == Endpoint::NegInf && (p.degree() & 1)) ? -s : s;
}

// 2^k bounding the absolute value of every real root (Cauchy).
inline BigInt root_bound(const ZPoly& p) {
  BigInt m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, BigInt(abs(p.c[static_cast<std::size_t>(i)])));
  BigInt ratio = m / abs(p.lc()) + 2;
  BigInt b = 1;
  while (b < ratio) b *= 2;
  return b;
}

namespace detail {

inline void taylor_shift1(std::vector<BigInt>& c) {
  std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] += c[j + 1];
}

inline int sign_variations(const std::vector<BigInt>& c) {
  int v = 0, last = 0;
  for (const auto& x : c) {
    int s = sgn(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

// Descartes bound for roots of q in (0,1): variations of (1+t)^n q(1/(1+t)).
inline int descartes01(const std::vector<BigInt>& q) {
  std::vector<BigInt> r(q.rbegin(), q.rend());
  taylor_shift1(r);
  return sign_variations(r);
}

// q on (0,1) -> polynomials for (0,1/2) and (1/2,1) rescaled to (0,1)
inline void split_halves(const std::vector<BigInt>& q, std::vector<BigInt>& left, std::vector<BigInt>& right) {
  std::size_t n = q.size() - 1;
  left.resize(q.size());
  for (std::size_t i = 0; i <= n; ++i) mpz_mul_2exp(left[i].get_mpz_t(), q[i].get_mpz_t(), n - i);
  right = left;
  taylor_shift1(right);
}

struct VcaNode {
  std::vector<BigInt> q;
  BigRational lo, width;
};

// Roots of squarefree p strictly inside (lo, hi): open intervals with one root each, plus exact rational roots.
inline void vca_isolate(const ZPoly& p, const BigRational& lo, const BigRational& hi, std::vector<IsolatingInterval>& out) {
  if (p.degree() < 1) return;
  BigRational w = hi - lo;
  // q(t) = (cf)^n p(lo + w t) with lo = a/c, w = e/f, via Horner on integer polynomials
  ZPoly lin(std::vector<BigInt>{lo.get_num() * w.get_den(), w.get_num() * lo.get_den()});
  BigInt D = lo.get_den() * w.get_den();
  ZPoly q0(p.lc());
  BigInt dp = 1;
  for (int i = p.degree() - 1; i >= 0; --i) {
    dp *= D;
    q0 = q0 * lin + ZPoly(BigInt(p.c[static_cast<std::size_t>(i)] * dp));
  }
  q0 = int_primitive(q0);
  std::vector<VcaNode> stack;
  stack.push_back({q0.c, lo, w});
  std::vector<BigInt> left, right;
  while (!stack.empty()) {
    VcaNode node = std::move(stack.back());
    stack.pop_back();
    // exact root at t=0 cannot occur for interior nodes except at split points, handled below
    int v = descartes01(node.q);
    if (v == 0) continue;
    if (v == 1) {
      out.push_back({node.lo, node.lo + node.width, true, false});
      continue;
    }
    split_halves(node.q, left, right);
    BigRational half = node.width / 2;
    // right[0] = value at the midpoint (scaled)
    if (sgn(right[0]) == 0) {
      BigRational m = node.lo + half;
      out.push_back({m, m, true, true});
      // divide out t from the right piece so the midpoint root is not counted again
      right.erase(right.begin());
    }
    stack.push_back({right, node.lo + half, half});
    stack.push_back({left, node.lo, half});
  }
}

}  // namespace detail

// Isolates the distinct real roots of p in (a, b]. Returned intervals are disjoint, sorted, and each holds
// exactly one root in (lo, hi]; exact rational roots come back with exact=true and lo = hi - tiny gap.
inline std::vector<IsolatingInterval> isolate_roots(const ZPoly& p_in, const Endpoint& a, const Endpoint& b) {
  std::vector<IsolatingInterval> out;
  if (p_in.degree() < 1) return out;
  ZPoly p = squarefree_part(p_in);
  BigInt bound = root_bound(p);
  BigRational lo = a.finite() ? a.value : BigRational(-bound);
  BigRational hi = b.finite() ? b.value : BigRational(bound);
  if (a.finite() && !b.finite() && lo >= hi) return out;
  if (lo >= hi) return out;
  std::vector<IsolatingInterval> raw;
  detail::vca_isolate(p, lo, hi, raw);
  if (b.finite() && sign_at(p, hi) == 0) raw.push_back({hi, hi, true, true});
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo); });
  // give exact roots a genuine interval (lo, r] that does not meet its neighbours
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].exact) continue;
    BigRational r = raw[i].hi;
    BigRational left_limit = lo;
    if (i > 0) {
      auto& prev = raw[i - 1];
      if (!prev.exact) {
        // shrink prev until its right end is below r
        int s_lo = sign_at(p, prev.lo);
        if (s_lo == 0) s_lo = sign_at(derivative(p), prev.lo);
        while (prev.hi >= r) {
          BigRational m = prev.mid();
          int sm = sign_at(p, m);
          if (sm == 0) {
            prev.lo = m;
            prev.hi = m;
            prev.exact = true;
            break;
          }
          if (sm == s_lo)
            prev.lo = m;
          else
            prev.hi = m;
        }
      }
      left_limit = prev.hi;
    }
    raw[i].lo = r - (r - left_limit) / 2;
  }
  // exact roots produced at split points may precede interval roots sharing the same right end; re-sort
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.hi < y.hi; });
  return raw;
}

// Number of distinct real roots in (a, b] by Descartes isolation.
inline int count_roots_descartes(const ZPoly& p, const Endpoint& a, const Endpoint& b) {
  return static_cast<int>(isolate_roots(p, a, b).size());
}

// Shrinks an isolating interval of a root of squarefree-or-not p until its width is below tol.
inline void refine(const ZPoly& p, IsolatingInterval& iv, const BigRational& tol) {
  if (iv.exact) {
    if (iv.hi - iv.lo >= tol) iv.lo = iv.hi - tol / 2;
    return;
  }
  ZPoly sp = squarefree_part(p);
  ZPoly dsp = derivative(sp);
  int s_lo = sign_at(sp, iv.lo);
  if (s_lo == 0) s_lo = sign_at(dsp, iv.lo);
  while (iv.hi - iv.lo >= tol) {
    BigRational m = iv.mid();
    int sm = sign_at(sp, m);
    if (sm == 0) {
      iv.hi = m;
      iv.exact = true;
      iv.lo = m - std::min(BigRational(tol / 2), BigRational((m - iv.lo) / 2));
      return;
    }
    if (sm == s_lo)
      iv.lo = m;
    else
      iv.hi = m;
  }
}

inline std::vector<std::pair<IsolatingInterval, double>> isolate_and_refine(const UniPoly& p, const Endpoint& a, const Endpoint& b,
                                                                            const BigRational& tol) {
  if (sgn(tol) <= 0) throw ParameterError("tolerance must be positive");
  ZPoly z = p.to_primitive_z();
  auto ivs = isolate_roots(z, a, b);
  std::vector<std::pair<IsolatingInterval, double>> out;
  for (auto& iv : ivs) {
    refine(z, iv, tol);
    out.emplace_back(iv, iv.approx());
  }
  return out;
}

// Number of distinct roots of p in the closed interval [lo, hi].
inline int count_closed(const ZPoly& p, const BigRational& lo, const BigRational& hi) {
  int n = count_roots_descartes(p, Endpoint::at(lo), Endpoint::at(hi));
  return n + (sign_at(p, lo) == 0 ? 1 : 0);
}

// Rational with the smallest denominator in the open interval (lo, hi); ties go to the smallest magnitude.
inline BigRational simplest_rational_between(const BigRational& lo, const BigRational& hi) {
  if (!(lo < hi)) throw ParameterError("empty interval");
  if (sgn(lo) < 0 && sgn(hi) > 0) return 0;
  if (sgn(hi) <= 0) return -simplest_rational_between(-hi, -lo);
  BigInt fl = floor_q(lo);
  if (BigRational(fl + 1) < hi) return BigRational(fl + 1);
  BigRational l = lo - fl, h = hi - fl;  // 0 <= l < h <= 1
  if (sgn(l) == 0) return fl + make_q(BigInt(1), floor_q(BigRational(1 / h)) + 1);
  return fl + 1 / simplest_rational_between(BigRational(1 / h), BigRational(1 / l));
}

// All rational roots of p, ascending. A root p/q has q | lc(p), and two such rationals are at least
// 1/lc^2 apart, so the simplest rational in a narrow enough isolating interval is the only candidate.
inline std::vector<BigRational> rational_roots(const ZPoly& p) {
  std::vector<BigRational> out;
  if (p.degree() < 1) return out;
  BigRational tol = BigRational(1) / (BigRational(p.lc()) * p.lc() * 2);
  if (sgn(tol) < 0) tol = -tol;
  for (auto iv : isolate_roots(p, Endpoint::neg_inf(), Endpoint::pos_inf())) {
    if (!iv.exact) refine(p, iv, tol);
    BigRational c = iv.exact ? iv.hi : simplest_rational_between(iv.lo, iv.hi);
    if (iv.exact || sign_at(p, c) == 0) out.push_back(c);
  }
  return out;
}

// A root xi of q given by an isolating interval (lo, hi]; q need not be squarefree.
struct AlgebraicPoint {
  ZPoly q;
  IsolatingInterval iv;
};

// Sign of f at the algebraic point; refines the point's interval as a side effect.
inline int sign_at(const ZPoly& f, AlgebraicPoint& pt) {
  if (f.is_zero()) return 0;
  if (pt.iv.exact) return sign_at(f, pt.iv.hi);
  ZPoly g = gcd(f, pt.q);
  if (g.degree() > 0 && count_roots_descartes(g, Endpoint::at(pt.iv.lo), Endpoint::at(pt.iv.hi)) > 0) return 0;
  BigRational tol = (pt.iv.hi - pt.iv.lo) / 2;
  while (count_closed(f, pt.iv.lo, pt.iv.hi) > 0) {
    refine(pt.q, pt.iv, tol);
    if (pt.iv.exact) return sign_at(f, pt.iv.hi);
    tol /= 2;
  }
  return sign_at(f, pt.iv.hi);
}

// Number of distinct roots of f in [xi, b) (include_xi) or (xi, b), xi an algebraic point below b.
inline int count_from_point(const ZPoly& f, AlgebraicPoint& pt, const BigRational& b, bool include_xi) {
  int at = sign_at(f, pt) == 0 ? 1 : 0;
  // after sign_at, [lo,hi] contains no root of f other than possibly xi itself
  if (at) {
    // make sure xi is the only root of f in the interval
    BigRational tol = (pt.iv.hi - pt.iv.lo) / 2;
    while (!pt.iv.exact && count_closed(f, pt.iv.lo, pt.iv.hi) > 1) {
      refine(pt.q, pt.iv, tol);
      tol /= 2;
    }
  }
  BigRational start = pt.iv.hi;
  int n = count_roots_descartes(f, Endpoint::at(start), Endpoint::at(b));
  if (sign_at(f, b) == 0) --n;  // (start, b) excludes b
  return n + (include_xi ? at : 0);
}

}  // namespace saddleloop
