#pragma once

// Independent oracles shared by the kernel tests and the acceptance run.

#include <gmpxx.h>

#include <random>
#include <vector>

#include "saddleloop/exactalg.hpp"

namespace saddleloop::oracle {

inline UniPoly random_uni(std::mt19937& rng, int max_deg, int height, const std::string& var = "x") {
  std::uniform_int_distribution<int> dd(1, max_deg), cc(-height, height);
  int d = dd(rng);
  std::vector<BigRational> c;
  for (int i = 0; i <= d; ++i) c.emplace_back(cc(rng));
  if (sgn(c.back()) == 0) c.back() = 1;
  return UniPoly(c, var);
}

// Independent root-count oracle: real roots live one per monotone piece, and the pieces are cut at
// the critical points, found recursively the same way. Floating evaluation at 256 bits.
using F = mpf_class;
inline F evalf(const UniPoly& p, const F& x) {
  F acc(0, 256);
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + F(p.coeff(i), 256);
  return acc;
}
inline int sgnf(const F& v) { return sgn(v); }

inline std::vector<F> oracle_roots(const UniPoly& p, const F& lo, const F& hi) {
  std::vector<F> cuts{lo};
  if (p.degree() >= 2)
    for (const auto& c : oracle_roots(p.derivative(), lo, hi)) cuts.push_back(c);
  cuts.push_back(hi);
  std::vector<F> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    F a = cuts[i], b = cuts[i + 1];
    int sa = sgnf(evalf(p, a)), sb = sgnf(evalf(p, b));
    if (sa == 0 || sb == 0 || sa == sb) continue;
    for (int it = 0; it < 200; ++it) {
      F m(0, 256);
      m = (a + b) / 2;
      if (sgnf(evalf(p, m)) == sa)
        a = m;
      else
        b = m;
    }
    out.push_back(a);
  }
  return out;
}

// Distinct roots of p in (a, b]; an infinite endpoint is replaced by a root bound.
inline int oracle_count(const UniPoly& p_in, const BigRational& a, const BigRational& b, bool a_inf, bool b_inf) {
  UniPoly g = gcd(p_in, p_in.derivative());
  UniPoly p = p_in.divmod(g).first;
  if (p.degree() < 1) return 0;
  BigRational bound = 1;
  for (int i = 0; i < p.degree(); ++i) bound = std::max(bound, BigRational(abs(p.coeff(i) / p.lc()) + 1));
  bound += 1;
  BigRational lo = a_inf ? -bound : a, hi = b_inf ? bound : b;
  if (lo >= hi) return 0;
  // sign-change roots within rounding of an endpoint are endpoint roots; those are decided exactly
  F flo(lo, 256), fhi(hi, 256), eps(1e-40);
  int n = 0;
  for (const auto& r : oracle_roots(p, flo, fhi))
    if (r - flo > eps && fhi - r > eps) ++n;
  if (sgn(p(hi)) == 0) ++n;
  return n;
}

}  // namespace saddleloop::oracle
