#pragma once

// Algebraic trapping loops along the line 7b = 5m, written in the s-chart
//     M = (7s + 3s^2)/(6s + 7),  B = 3s^2/(6s + 7),
// with the y-quadratic ansatz
//     C(x,y) = C2(x,y) + sum_{k=3}^{2(N+1)} (c_{k,0} x^k + c_{k-1,1} x^{k-1} y + c_{k-2,2} x^{k-2} y^2),
//     C2 = (y - (B+M)x)(y - (B-M)x).
// The c's make C(x, Phi^+(x)) and C(x, Phi^-(x)) vanish to order 3N+2. The numerator U = T2 y^2 + T1 y + T0
// of C, its discriminant Delta = x^2 R and the contact resultant res_y(U, U') = x^e S feed the
// certificate checks (i), (ii), (I), (II), (III).

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "exactalg.hpp"
#include "separatrix.hpp"

namespace saddleloop {

struct DegenerateParameter : std::domain_error {
  using std::domain_error::domain_error;
};

struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------- matching schedules

// Which orders g_k^+ and g_k^- are set to zero, for an ansatz of the given degree.
struct MatchSchedule {
  int ansatz_degree = 4;
  std::vector<int> plus, minus;
  int max_order() const {
    int k = 0;
    for (int v : plus) k = std::max(k, v);
    for (int v : minus) k = std::max(k, v);
    return k;
  }
};

// k = 3..3N+2 on both branches, ansatz degree 2(N+1).
inline MatchSchedule symmetric_schedule(int N) {
  if (N != 1 && N != 2) throw ParameterError("loop order N must be 1 or 2");
  MatchSchedule s;
  s.ansatz_degree = 2 * (N + 1);
  for (int k = 3; k <= 3 * N + 2; ++k) {
    s.plus.push_back(k);
    s.minus.push_back(k);
  }
  return s;
}

// Degree-4 ansatz, g_3..g_6 on the unstable branch and g_3, g_4 on the stable one.
inline MatchSchedule asymmetric_schedule() { return {4, {3, 4, 5, 6}, {3, 4}}; }

// (i, j) exponents of the free monomials x^i y^j, three per degree k = 3..degree.
inline std::vector<std::pair<int, int>> ansatz_monomials(int degree) {
  std::vector<std::pair<int, int>> m;
  for (int k = 3; k <= degree; ++k) {
    m.emplace_back(k, 0);
    m.emplace_back(k - 1, 1);
    m.emplace_back(k - 2, 2);
  }
  return m;
}

namespace detail {

template <class T>
std::vector<T> series_product(const std::vector<T>& p, const std::vector<T>& q, int K, const T& zero) {
  std::vector<T> r(static_cast<std::size_t>(K + 1), zero);
  for (std::size_t i = 0; i < p.size() && static_cast<int>(i) <= K; ++i) {
    if (coeff_is_zero(p[i])) continue;
    for (std::size_t j = 0; j < q.size() && static_cast<int>(i + j) <= K; ++j) {
      if (coeff_is_zero(q[j])) continue;
      r[i + j] = r[i + j] + p[i] * q[j];
    }
  }
  return r;
}

// Rows of the matching system for one branch: g_k = sum_m A[k][m] c_m + rhs[k], one row per order k.
// Phi = a (index 0 is the zero constant term); C2 = Phi^2 - (a1p + a1m) x Phi + a1p a1m x^2.
template <class T>
void append_match_rows(const std::vector<T>& a, const T& a1p, const T& a1m, const std::vector<std::pair<int, int>>& mons,
                       const std::vector<int>& orders, std::vector<std::vector<T>>& A, std::vector<T>& rhs) {
  int K = 0;
  for (int k : orders) K = std::max(K, k);
  const T zero = lift<T>(0, a1p), one = lift<T>(1, a1p);
  std::vector<T> phi(static_cast<std::size_t>(K + 1), zero);
  for (int k = 1; k <= K && k < static_cast<int>(a.size()); ++k) phi[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
  std::vector<T> phi0(static_cast<std::size_t>(K + 1), zero);
  phi0[0] = one;
  std::vector<T> phi2 = series_product(phi, phi, K, zero);
  const std::vector<T>* pw[3] = {&phi0, &phi, &phi2};
  T sum = a1p + a1m, prod = a1p * a1m;
  for (int k : orders) {
    std::vector<T> row;
    for (auto [i, j] : mons) row.push_back(k - i >= 0 ? (*pw[j])[static_cast<std::size_t>(k - i)] : zero);
    T c2 = phi2[static_cast<std::size_t>(k)] - sum * phi[static_cast<std::size_t>(k - 1)];
    if (k == 2) c2 = c2 + prod;
    A.push_back(std::move(row));
    rhs.push_back(std::move(c2));
  }
}

inline ZPoly zlcm(const ZPoly& a, const ZPoly& b) { return divexact(a * b, gcd(a, b)); }

// Fraction-free elimination of the augmented n x (n+1) system [A | r] over Z[s].
// Returns d (the last Bareiss pivot, +-det A) and y with A (y/d) = r.
inline std::pair<ZPoly, std::vector<ZPoly>> fraction_free_solve(std::vector<std::vector<ZPoly>> M) {
  std::size_t n = M.size();
  ZPoly prev(BigInt(1));
  for (std::size_t k = 0; k < n; ++k) {
    if (M[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && M[p][k].is_zero()) ++p;
      if (p == n) return {ZPoly(), {}};
      std::swap(M[k], M[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) M[i][j] = divexact(M[k][k] * M[i][j] - M[i][k] * M[k][j], prev);
      M[i][k] = ZPoly();
    }
    prev = M[k][k];
  }
  ZPoly d = M[n - 1][n - 1];
  std::vector<ZPoly> y(n);
  for (std::size_t i = n; i-- > 0;) {
    ZPoly acc = d * M[i][n];
    for (std::size_t j = i + 1; j < n; ++j) acc = acc - M[i][j] * y[j];
    y[i] = divexact(acc, M[i][i]);
  }
  return {d, y};
}

inline std::vector<BigRational> rational_solve(std::vector<std::vector<BigRational>> M) {
  std::size_t n = M.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(M[p][c]) == 0) ++p;
    if (p == n) return {};
    std::swap(M[c], M[p]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(M[r][c]) == 0) continue;
      BigRational f = M[r][c] / M[c][c];
      for (std::size_t k = c; k <= n; ++k) M[r][k] -= f * M[c][k];
    }
  }
  std::vector<BigRational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n] / M[i][i];
  return x;
}

inline MultiPoly zpoly_in(const ZPoly& p, const std::vector<std::string>& vars, const std::string& var, Exponents base) {
  MultiPoly::TermMap t;
  int idx = static_cast<int>(std::find(vars.begin(), vars.end(), var) - vars.begin());
  for (std::size_t k = 0; k < p.c.size(); ++k) {
    if (sgn(p.c[k]) == 0) continue;
    Exponents e = base;
    e[static_cast<std::size_t>(idx)] += static_cast<int>(k);
    t[e] += BigRational(p.c[k]);
  }
  return MultiPoly(vars, std::move(t));
}

// x^-k p for the largest k with x^k | p; returns k.
inline int strip_power(MultiPoly& p, const std::string& var) {
  int k = p.min_degree(var);
  if (k <= 0) return 0;
  int idx = p.index_of(var);
  MultiPoly::TermMap t;
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    f[static_cast<std::size_t>(idx)] -= k;
    t[f] = c;
  }
  p = MultiPoly(p.vars(), std::move(t));
  return k;
}

inline ZPoly uni_z(const MultiPoly& p, const std::string& var) { return p.to_uni(var).to_primitive_z(); }

}  // namespace detail

// ---------------------------------------------------------------- the loop curve

struct LoopCurveU {
  int N = 1;
  bool symbolic = true;
  std::optional<BigRational> s;  // numeric mode
  MatchSchedule schedule;
  std::vector<std::pair<int, int>> monomials;
  // vars {x, y, s} (symbolic) or {x, y} (numeric); T's, Delta, R, S drop y
  MultiPoly U, T0, T1, T2, Delta, R, Udot;
  std::optional<MultiPoly> S;
  int contact_exponent = -1;

  std::vector<std::string> xs_vars() const { return symbolic ? std::vector<std::string>{"x", "s"} : std::vector<std::string>{"x"}; }
};

// c1 = M^2 - B^2 = 7s^2/(6s+7) and c2 = 2B = 6s^2/(6s+7) at a rational s.
inline BigRational s_chart_c1(const BigRational& s) { return 7 * s * s / (6 * s + 7); }
inline BigRational s_chart_c2(const BigRational& s) { return 6 * s * s / (6 * s + 7); }

namespace detail {

inline void derive_loop_objects(LoopCurveU& L) {
  std::vector<std::string> xs = L.xs_vars();
  L.T0 = L.U.coefficient("y", 0).with_vars(xs);
  L.T1 = L.U.coefficient("y", 1).with_vars(xs);
  L.T2 = L.U.coefficient("y", 2).with_vars(xs);
  if (L.U.degree("y") != 2) throw InternalConsistencyError("loop curve is not quadratic in y");
  L.Delta = L.T1 * L.T1 - L.T2 * L.T0 * BigRational(4);
  if (L.Delta.min_degree("x") < 2) throw InternalConsistencyError("Delta is not divisible by x^2");
  L.R = L.Delta;
  strip_power(L.R, "x");
  // R keeps any extra powers of x it may have: restore to exactly Delta / x^2
  {
    int extra = L.Delta.min_degree("x") - 2;
    if (extra > 0) L.R = L.R * MultiPoly::variable(xs, "x").pow(static_cast<unsigned>(extra));
  }
  const std::vector<std::string>& v = L.U.vars();
  MultiPoly x = MultiPoly::variable(v, "x"), y = MultiPoly::variable(v, "y");
  MultiPoly Ux = L.U.derivative("x"), Uy = L.U.derivative("y");
  if (L.symbolic) {
    MultiPoly s = MultiPoly::variable(v, "s");
    MultiPoly den = s * 6 + MultiPoly::constant(v, 7);
    MultiPoly num = den * Ux * y + Uy * (s * s * x * 7 + s * s * y * 6 + den * (x * x + x * y));
    L.Udot = divexact(num, den);
  } else {
    BigRational c1 = s_chart_c1(*L.s), c2 = s_chart_c2(*L.s);
    L.Udot = Ux * y + Uy * (x * c1 + y * c2 + x * x + x * y);
  }
}

inline LoopCurveU build_symbolic(int N) {
  MatchSchedule sched = symmetric_schedule(N);
  int K = sched.max_order();
  auto mons = ansatz_monomials(sched.ansatz_degree);
  RationalFunction a1p = s_slope(Branch::Unstable), a1m = s_slope(Branch::Stable);
  auto ap = separatrix_coefficients(a1p, a1m, K), am = separatrix_coefficients(a1m, a1p, K);
  std::vector<std::vector<RationalFunction>> A;
  std::vector<RationalFunction> rhs;
  append_match_rows(ap, a1p, a1m, mons, sched.plus, A, rhs);
  append_match_rows(am, a1p, a1m, mons, sched.minus, A, rhs);
  // clear denominators row by row: A c = -rhs
  std::vector<std::vector<ZPoly>> Z;
  for (std::size_t r = 0; r < A.size(); ++r) {
    ZPoly l(BigInt(1));
    for (const auto& e : A[r]) l = zlcm(l, e.den_z());
    l = zlcm(l, rhs[r].den_z());
    std::vector<ZPoly> row;
    for (const auto& e : A[r]) row.push_back(e.num_z() * divexact(l, e.den_z()));
    row.push_back(-(rhs[r].num_z() * divexact(l, rhs[r].den_z())));
    Z.push_back(std::move(row));
  }
  auto [d, y] = fraction_free_solve(std::move(Z));
  if (d.is_zero()) throw DegenerateParameter("matching system is singular for symbolic s");
  // W = (6s+7) d C, a polynomial: (6s+7) d y^2 - 6 s^2 d x y - 7 s^2 d x^2 + (6s+7) sum y_m x^i y^j
  ZPoly den(std::vector<BigInt>{7, 6}), s2(std::vector<BigInt>{0, 0, 1});
  std::map<std::pair<int, int>, ZPoly> W;
  W[{0, 2}] = den * d;
  W[{1, 1}] = -(mul_int(s2, 6) * d);
  W[{2, 0}] = -(mul_int(s2, 7) * d);
  for (std::size_t m = 0; m < mons.size(); ++m) W[mons[m]] = W[mons[m]] + den * y[m];
  ZPoly g;
  for (const auto& [k, p] : W)
    if (!p.is_zero()) g = gcd(g, p);
  const std::vector<std::string> vars{"x", "y", "s"};
  MultiPoly U(vars);
  for (const auto& [k, p] : W) {
    if (p.is_zero()) continue;
    U = U + zpoly_in(den * divexact(p, g), vars, "s", Exponents{k.first, k.second, 0});
  }
  // orientation: T2(0, 1) > 0
  if (sgn(U.coefficient("y", 2).coefficient("x", 0).eval("s", 1).eval_all({0, 0, 0})) < 0) U = -U;
  LoopCurveU L;
  L.N = N;
  L.symbolic = true;
  L.schedule = sched;
  L.monomials = mons;
  L.U = std::move(U);
  derive_loop_objects(L);
  return L;
}

inline LoopCurveU build_numeric(int N, const BigRational& s) {
  if (sgn(s) <= 0) throw DomainError("numeric loop needs s > 0");
  MatchSchedule sched = symmetric_schedule(N);
  int K = sched.max_order();
  auto mons = ansatz_monomials(sched.ansatz_degree);
  BigRational a1p = s, a1m = -7 * s / (6 * s + 7);
  auto ap = separatrix_coefficients(a1p, a1m, K), am = separatrix_coefficients(a1m, a1p, K);
  std::vector<std::vector<BigRational>> A;
  std::vector<BigRational> rhs;
  append_match_rows(ap, a1p, a1m, mons, sched.plus, A, rhs);
  append_match_rows(am, a1p, a1m, mons, sched.minus, A, rhs);
  for (std::size_t r = 0; r < A.size(); ++r) A[r].push_back(-rhs[r]);
  std::vector<BigRational> c = rational_solve(std::move(A));
  if (c.empty()) throw DegenerateParameter("matching system is singular at s = " + to_fraction(s));
  const std::vector<std::string> vars{"x", "y"};
  MultiPoly::TermMap t;
  t[{0, 2}] += 1;
  t[{1, 1}] -= a1p + a1m;
  t[{2, 0}] += a1p * a1m;
  for (std::size_t m = 0; m < mons.size(); ++m) t[{mons[m].first, mons[m].second}] += c[m];
  MultiPoly C(vars, std::move(t));
  LoopCurveU L;
  L.N = N;
  L.symbolic = false;
  L.s = s;
  L.schedule = sched;
  L.monomials = mons;
  L.U = C * BigRational(C.denominator_lcm());
  derive_loop_objects(L);
  return L;
}

}  // namespace detail

// Symbolic in s, or numeric at a rational s > 0.
inline LoopCurveU build_loop(int N) { return detail::build_symbolic(N); }
inline LoopCurveU build_loop(int N, const BigRational& s) { return detail::build_numeric(N, s); }

inline int expected_contact_exponent(int N) { return N == 1 ? 12 : 18; }

// S with res_y(U, U') = x^e S; e must be 12 (N=1) or 18 (N=2).
inline MultiPoly contact_resultant(LoopCurveU& L) {
  if (L.S) return *L.S;
  MultiPoly r = resultant(L.U, L.Udot, "y").with_vars(L.xs_vars());
  if (r.is_zero()) throw InternalConsistencyError("contact resultant vanishes identically");
  int e = detail::strip_power(r, "x");
  if (e != expected_contact_exponent(L.N))
    throw InternalConsistencyError("contact resultant has x^" + std::to_string(e) + " instead of x^" +
                                   std::to_string(expected_contact_exponent(L.N)));
  L.contact_exponent = e;
  L.S = r;
  return r;
}

// Largest K such that g_1 = ... = g_K = 0 on both branches (re-substitution of the separatrix series).
inline int matched_order(const LoopCurveU& L, int through) {
  int best = through;
  for (Branch br : {Branch::Unstable, Branch::Stable}) {
    if (L.symbolic) {
      SeparatrixSeries sr = series_symbolic(br, through);
      std::vector<RationalFunction> phi = sr.symbolic;
      phi[0] = RationalFunction(BigRational(0));
      const RationalFunction zero(BigRational(0));
      auto as_series = [&](const MultiPoly& T) {
        std::vector<RationalFunction> out(static_cast<std::size_t>(through + 1), zero);
        for (int i = 0; i <= through; ++i) {
          MultiPoly c = T.coefficient("x", i);
          if (c.is_zero()) continue;
          out[static_cast<std::size_t>(i)] = RationalFunction(c.with_vars({"s"}).to_uni("s"), UniPoly::constant(1, "s"));
        }
        return out;
      };
      auto t0 = as_series(L.T0), t1 = as_series(L.T1), t2 = as_series(L.T2);
      auto phi2 = detail::series_product(phi, phi, through, zero);
      auto g = detail::series_product(t1, phi, through, zero);
      auto h = detail::series_product(t2, phi2, through, zero);
      for (int k = 0; k <= through; ++k) {
        RationalFunction v = t0[static_cast<std::size_t>(k)] + g[static_cast<std::size_t>(k)] + h[static_cast<std::size_t>(k)];
        if (!v.is_zero()) {
          best = std::min(best, k - 1);
          break;
        }
      }
    } else {
      BigRational a1p = *L.s, a1m = -7 * *L.s / (6 * *L.s + 7);
      std::vector<BigRational> phi = br == Branch::Unstable ? separatrix_coefficients(a1p, a1m, through)
                                                            : separatrix_coefficients(a1m, a1p, through);
      phi[0] = 0;
      auto as_series = [&](const MultiPoly& T) {
        std::vector<BigRational> out(static_cast<std::size_t>(through + 1), BigRational(0));
        for (const auto& [e, c] : T.terms())
          if (e[0] <= through) out[static_cast<std::size_t>(e[0])] += c;
        return out;
      };
      auto t0 = as_series(L.T0), t1 = as_series(L.T1), t2 = as_series(L.T2);
      auto phi2 = detail::series_product(phi, phi, through, BigRational(0));
      auto g = detail::series_product(t1, phi, through, BigRational(0));
      auto h = detail::series_product(t2, phi2, through, BigRational(0));
      for (int k = 0; k <= through; ++k)
        if (sgn(BigRational(t0[static_cast<std::size_t>(k)] + g[static_cast<std::size_t>(k)] + h[static_cast<std::size_t>(k)])) != 0) {
          best = std::min(best, k - 1);
          break;
        }
    }
  }
  return best;
}

// ---------------------------------------------------------------- certificates

struct NamedInterval {
  std::string name;
  BigRational lo, hi;
  bool exact = false;
};

struct CheckRecord {
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<std::pair<std::string, int>> degrees;
  std::vector<std::pair<std::string, int>> counts;
  std::vector<NamedInterval> intervals;
  std::vector<std::string> witnesses;
};

struct Certificate {
  int N = 1;
  std::string scope;  // "s=1" or "(0,5]"
  std::vector<CheckRecord> checks;
  std::vector<Certificate> samples;  // per-subinterval spot checks of an interval certificate

  bool pass() const {
    if (checks.empty()) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    for (const auto& s : samples)
      if (!s.pass()) return false;
    return true;
  }
  // Name of the first failing check ("" when everything passes).
  std::string failing() const {
    for (const auto& c : checks)
      if (!c.pass) return c.name;
    for (const auto& s : samples)
      if (!s.pass()) return s.scope + ": " + s.failing();
    return "";
  }
  const CheckRecord* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline nlohmann::ordered_json to_json(const Certificate& c) {
  using J = nlohmann::ordered_json;
  J out;
  out["N"] = c.N;
  out["scope"] = c.scope;
  out["pass"] = c.pass();
  J checks = J::array();
  for (const auto& k : c.checks) {
    J r;
    r["name"] = k.name;
    r["status"] = k.pass ? "pass" : "fail";
    if (!k.detail.empty()) r["detail"] = k.detail;
    if (!k.degrees.empty()) {
      J d = J::object();
      for (const auto& [n, v] : k.degrees) d[n] = v;
      r["degrees"] = d;
    }
    if (!k.counts.empty()) {
      J d = J::object();
      for (const auto& [n, v] : k.counts) d[n] = v;
      r["root_counts"] = d;
    }
    if (!k.intervals.empty()) {
      J iv = J::array();
      for (const auto& i : k.intervals)
        iv.push_back({{"name", i.name}, {"lo", to_fraction(i.lo)}, {"hi", to_fraction(i.hi)}, {"exact", i.exact}});
      r["intervals"] = iv;
    }
    if (!k.witnesses.empty()) r["witnesses"] = k.witnesses;
    checks.push_back(r);
  }
  out["checks"] = checks;
  if (!c.samples.empty()) {
    J s = J::array();
    for (const auto& x : c.samples) s.push_back(to_json(x));
    out["samples"] = s;
  }
  return out;
}

namespace detail {

inline NamedInterval named(const std::string& n, const IsolatingInterval& iv) { return {n, iv.lo, iv.hi, iv.exact}; }

inline IsolatingInterval refined(const ZPoly& p, IsolatingInterval iv, const BigRational& tol) {
  refine(p, iv, tol);
  return iv;
}

// Process-wide cache of symbolic loops with their contact cofactor.
inline const LoopCurveU& cached_symbolic_loop(int N) {
  static std::mutex mu;
  static std::map<int, LoopCurveU> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end()) {
    LoopCurveU L = build_loop(N);
    contact_resultant(L);
    it = cache.emplace(N, std::move(L)).first;
  }
  return it->second;
}

}  // namespace detail

inline const LoopCurveU& symbolic_loop(int N) { return detail::cached_symbolic_loop(N); }

// Roots of S(0, s) in (0, hi], each refined below 1/100: the places where the contact check (II)
// changes status at x = 0.
inline std::vector<IsolatingInterval> contact_origin_roots(int N, const BigRational& hi) {
  const LoopCurveU& L = symbolic_loop(N);
  ZPoly s0 = detail::uni_z(L.S->coefficient("x", 0).with_vars({"s"}), "s");
  auto ivs = isolate_roots(s0, Endpoint::at(0), Endpoint::at(hi));
  for (auto& iv : ivs) refine(s0, iv, make_q(1, 100));
  return ivs;
}

// Steps (i), (ii), (I), (II), (III) at a fixed rational s, in exact arithmetic.
inline Certificate certify_at_s(int N, const BigRational& s) {
  if (!(sgn(s) > 0 && s < 7)) throw ParameterError("certify_at_s needs 0 < s < 7");
  Certificate cert;
  cert.N = N;
  cert.scope = "s=" + to_fraction(s);
  LoopCurveU L = build_loop(N, s);
  MultiPoly S = contact_resultant(L);
  const BigRational tol = make_q(1, 1 << 20);
  ZPoly R = detail::uni_z(L.R, "x"), T2 = detail::uni_z(L.T2, "x"), Sz = detail::uni_z(S, "x");

  // (i)
  CheckRecord ci{"(i)"};
  ci.degrees = {{"R", R.degree()}, {"T2", T2.degree()}, {"S", Sz.degree()}, {"contact_exponent", L.contact_exponent}};
  bool r0 = sgn(R.c.front()) > 0, r_top = sgn(R.lc()) > 0;
  bool simple = sgn(resultant_subres(R, derivative(R))) != 0;
  auto neg = isolate_roots(R, Endpoint::neg_inf(), Endpoint::at(0));
  ci.counts = {{"negative_zeros_of_R", static_cast<int>(neg.size())}};
  bool count_ok = N == 1 ? neg.size() == 2 : !neg.empty();
  ci.pass = r0 && r_top && simple && count_ok;
  ci.detail = std::string("r0 ") + (r0 ? ">" : "<=") + " 0, leading coefficient " + (r_top ? ">" : "<=") + " 0, " +
              (simple ? "no double zeros" : "double zero present") + ", " + std::to_string(neg.size()) + " negative zeros";
  std::optional<AlgebraicPoint> xt;
  if (!neg.empty()) {
    xt = AlgebraicPoint{R, detail::refined(R, neg.back(), tol)};
    ci.intervals.push_back(detail::named("x_tilde", xt->iv));
    for (std::size_t i = 0; i + 1 < neg.size(); ++i) ci.intervals.push_back(detail::named("R_zero", detail::refined(R, neg[i], tol)));
  }
  cert.checks.push_back(ci);

  // (ii)
  CheckRecord cii{"(ii)"};
  if (xt) {
    int n = count_from_point(T2, *xt, 0, true);
    cii.counts = {{"T2_zeros_in_strip", n}};
    cii.pass = n == 0;
    cii.detail = n == 0 ? "T2 has no zeros in [x_tilde, 0)" : "T2 vanishes in [x_tilde, 0)";
    if (n) {
      for (auto& iv : isolate_roots(T2, Endpoint::at(xt->iv.lo), Endpoint::at(0)))
        cii.intervals.push_back(detail::named("T2_zero", detail::refined(T2, iv, tol)));
    }
  } else {
    cii.detail = "no negative zero of R";
  }
  cert.checks.push_back(cii);

  // (I): the loop exists and encloses the focus at B^2 - M^2 = -c1
  CheckRecord cI{"(I)"};
  BigRational focus = -s_chart_c1(s);
  bool inside = xt && count_closed(R, focus, 0) == 0;
  cI.pass = ci.pass && cii.pass && inside;
  cI.detail = std::string("(i) and (ii) ") + (ci.pass && cii.pass ? "hold" : "fail") + "; focus abscissa " + to_fraction(focus) +
              (inside ? " lies in (x_tilde, 0)" : " is not inside the strip");
  cI.intervals.push_back({"focus", focus, focus, true});
  cert.checks.push_back(cI);

  // (II)
  CheckRecord cII{"(II)"};
  bool s_origin = sgn(Sz.c.empty() ? BigInt(0) : Sz.c.front()) != 0;
  int nS = xt ? count_from_point(Sz, *xt, 0, true) : -1;
  cII.counts = {{"S_zeros_in_strip", nS}};
  cII.pass = xt && s_origin && nS == 0;
  cII.detail = std::string("S(0) ") + (s_origin ? "!= 0" : "= 0") + ", " + std::to_string(nS) + " zeros of S in [x_tilde, 0)";
  if (!cII.pass && xt) {
    for (auto& iv : isolate_roots(Sz, Endpoint::at(xt->iv.lo), Endpoint::at(0)))
      cII.intervals.push_back(detail::named("S_zero", detail::refined(Sz, iv, tol)));
    if (N == 1) {
      for (const auto& iv : contact_origin_roots(1, s)) {
        cII.intervals.push_back(detail::named("S(0,s)_zero_in_s", iv));
        cII.witnesses.push_back("S(0,s) changes sign at s in (" + to_fraction(iv.lo) + ", " + to_fraction(iv.hi) + "]");
      }
    }
  }
  cert.checks.push_back(cII);

  // (III): crossing of the loop with the negative x axis
  CheckRecord cIII{"(III)"};
  MultiPoly q0 = L.T0;
  int e = detail::strip_power(q0, "x");
  ZPoly q = detail::uni_z(q0, "x");
  auto qneg = isolate_roots(q, Endpoint::neg_inf(), Endpoint::at(0));
  if (!qneg.empty() && qneg.back().exact && sgn(qneg.back().hi) == 0) qneg.pop_back();
  if (e < 2 || qneg.empty()) {
    cIII.detail = "U(x, 0) has no negative zero";
  } else {
    AlgebraicPoint x0{q, detail::refined(q, qneg.back(), tol)};
    ZPoly ud = detail::uni_z(L.Udot.coefficient("y", 0).with_vars({"x"}), "x");
    ZPoly ux = derivative(detail::uni_z(L.T0, "x")), uy = detail::uni_z(L.T1, "x");
    int sd = sign_at(ud, x0), sx = sign_at(ux, x0), sy = sign_at(uy, x0);
    bool in_strip = xt && count_closed(R, x0.iv.hi, 0) == 0;
    cIII.pass = sd < 0 && sx < 0 && sy < 0 && in_strip;
    auto sg = [](int v) { return v < 0 ? "-" : (v > 0 ? "+" : "0"); };
    cIII.detail = std::string("signs at x0: U' ") + sg(sd) + ", U_x " + sg(sx) + ", U_y " + sg(sy) +
                  (in_strip ? "; x0 in (x_tilde, 0)" : "; x0 outside the strip");
    cIII.intervals.push_back(detail::named("x0", x0.iv));
  }
  cert.checks.push_back(cIII);
  return cert;
}

// ---------------------------------------------------------------- interval certification

struct GatePoly {
  std::string name;
  ZPoly p;               // in s
  int expected_degree;   // -1 when no degree is asserted
  bool subdivision;      // roots split the interval instead of failing it
};

// Reference degrees of the N = 1 objects.
struct LoopDegrees {
  int T2_x = 2, T2_s = 14, R_x = 4, R_s = 30, S_x = 4, S_s = 65;
};

struct IntervalOptions {
  std::optional<std::string> cache_dir;  // defaults to $SADDLELOOP_CACHE_DIR
  int jobs = 1;
  bool exhaustive = false;  // evaluate every gate even after a failure
  std::function<void(const std::string&)> progress;
};

namespace detail {

inline std::optional<std::string> cache_dir_from(const IntervalOptions& o) {
  if (o.cache_dir) return o.cache_dir;
  if (const char* e = std::getenv("SADDLELOOP_CACHE_DIR"); e && *e) return std::string(e);
  return std::nullopt;
}

// Loads a cached polynomial; a missing, corrupt or mismatching file is recomputed and rewritten.
inline MultiPoly cached_poly(const std::optional<std::string>& dir, const std::string& key, const std::function<MultiPoly()>& compute) {
  namespace fs = std::filesystem;
  if (dir) {
    fs::path p = fs::path(*dir) / (key + ".poly");
    if (fs::exists(p)) {
      try {
        DataFile d = load_data_file(p.string());
        if (d.title == key) return d.poly;
      } catch (const MalformedInput&) {
      }
    }
  }
  MultiPoly v = compute();
  if (dir) {
    std::error_code ec;
    fs::create_directories(*dir, ec);
    std::ofstream out(fs::path(*dir) / (key + ".poly"));
    out << write_data_file({key, v});
  }
  return v;
}

inline MultiPoly s_only(const MultiPoly& p) { return p.with_vars({"s"}); }

}  // namespace detail

inline const LoopDegrees& reference_degrees() {
  static const LoopDegrees d;
  return d;
}

namespace detail {

struct GateSpec {
  std::string name;
  int expected_degree;
  bool subdivision;
  std::function<MultiPoly()> compute;
};

// Gate recipes in evaluation order, cheapest first. S(0,s) and T2(0,s) come first so that the
// known failure near s = 5.08 is found without the large resultants.
inline std::vector<GateSpec> gate_specs(const LoopCurveU& L) {
  const MultiPoly* S = &*L.S;
  int rx = L.R.degree("x");
  return {
      {"S(0,s)", -1, false, [=] { return S->coefficient("x", 0); }},
      {"r0", 30, false, [&L] { return L.R.coefficient("x", 0); }},
      {"r4", 26, false, [&L, rx] { return L.R.coefficient("x", rx); }},
      {"T2(0,s)", 14, false, [&L] { return L.T2.coefficient("x", 0); }},
      {"disc(T2)", 26, false, [&L] { return discriminant(L.T2, "x"); }},
      {"(III)", 69, false,
       [&L] {
         MultiPoly p = L.T0, q = L.Udot.coefficient("y", 0).with_vars({"x", "s"});
         strip_power(p, "x");
         strip_power(q, "x");
         return resultant(p, q, "x");
       }},
      {"res(R,T2)", 106, false, [&L] { return resultant(L.R, L.T2, "x"); }},
      {"res(R,R')", 190, false, [&L] { return resultant(L.R, L.R.derivative("x"), "x"); }},
      {"res(R,S)", 362, false, [&L, S] { return resultant(L.R, *S, "x"); }},
      {"res(S,S')", 438, true, [S] { return resultant(*S, S->derivative("x"), "x"); }},
  };
}

inline GatePoly evaluate_gate(int N, const GateSpec& g, const IntervalOptions& opt) {
  if (opt.progress) opt.progress("gate " + g.name);
  MultiPoly p = cached_poly(cache_dir_from(opt), "loop_n" + std::to_string(N) + "_" + g.name, [&] { return s_only(g.compute()); });
  return GatePoly{g.name, uni_z(p, "s"), N == 1 ? g.expected_degree : -1, g.subdivision};
}

}  // namespace detail

// The gate polynomials in s for the loop of order N, in evaluation order.
inline std::vector<GatePoly> gate_polynomials(int N, const IntervalOptions& opt = {}) {
  std::vector<GatePoly> out;
  for (const auto& g : detail::gate_specs(symbolic_loop(N))) out.push_back(detail::evaluate_gate(N, g, opt));
  return out;
}

// The continuum argument on (a, b]: no gate polynomial vanishes there, and certify_at_s passes at one
// rational sample in each piece cut out by the roots of res(S, S').
inline Certificate certify_interval(int N, const BigRational& a, const BigRational& b, const IntervalOptions& opt = {}) {
  if (!(sgn(a) >= 0 && a < b && b < 7)) throw ParameterError("certify_interval needs 0 <= a < b < 7");
  Certificate cert;
  cert.N = N;
  cert.scope = "(" + to_fraction(a) + "," + to_fraction(b) + "]";
  const LoopCurveU& L = symbolic_loop(N);

  CheckRecord deg{"degrees"};
  deg.degrees = {{"T2_x", L.T2.degree("x")}, {"T2_s", L.T2.degree("s")}, {"R_x", L.R.degree("x")},
                 {"R_s", L.R.degree("s")},   {"S_x", L.S->degree("x")},  {"S_s", L.S->degree("s")},
                 {"contact_exponent", L.contact_exponent}};
  if (N == 1) {
    const LoopDegrees& p = reference_degrees();
    deg.pass = L.T2.degree("x") == p.T2_x && L.T2.degree("s") == p.T2_s && L.R.degree("x") == p.R_x && L.R.degree("s") == p.R_s &&
               L.S->degree("x") == p.S_x && L.S->degree("s") == p.S_s && L.contact_exponent == 12;
  } else {
    deg.pass = L.R.degree("x") == 8 && L.contact_exponent == 18;
  }
  deg.detail = deg.pass ? "loop degrees match" : "loop degrees differ from the expected ones";
  cert.checks.push_back(deg);
  if (!deg.pass && !opt.exhaustive) return cert;

  ZPoly cut_poly;
  std::vector<IsolatingInterval> cuts;
  for (const auto& gs : detail::gate_specs(L)) {
    GatePoly g = detail::evaluate_gate(N, gs, opt);
    CheckRecord c{"gate " + g.name};
    c.degrees = {{g.name, g.p.degree()}};
    bool deg_ok = g.expected_degree < 0 || g.p.degree() == g.expected_degree;
    auto roots = isolate_roots(g.p, Endpoint::at(a), Endpoint::at(b));
    c.counts = {{"roots_in_interval", static_cast<int>(roots.size())}};
    for (auto iv : roots) {
      refine(g.p, iv, make_q(1, 1000));
      c.intervals.push_back(detail::named(g.name + "_root", iv));
    }
    if (g.subdivision) {
      c.pass = deg_ok;
      cut_poly = g.p;
      cuts = roots;
      c.detail = std::to_string(roots.size()) + " subdivision roots";
    } else {
      c.pass = deg_ok && roots.empty();
      c.detail = !deg_ok ? "degree " + std::to_string(g.p.degree()) + ", expected " + std::to_string(g.expected_degree)
                         : (roots.empty() ? "no roots in the interval" : "vanishes in the interval");
    }
    cert.checks.push_back(c);
    if (!c.pass && !opt.exhaustive) return cert;
  }
  if (!cert.pass()) return cert;

  // separate the cut intervals from each other and from a, so every gap has interior
  for (BigRational tol = make_q(1, 1000);; tol /= 2) {
    bool ok = true;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      bool left_ok = i == 0 ? a < cuts[i].lo || cuts[i].exact : cuts[i - 1].hi < cuts[i].lo;
      if (!left_ok) ok = false;
    }
    if (ok) break;
    for (auto& iv : cuts) refine(cut_poly, iv, tol);
  }
  std::vector<BigRational> samples;
  BigRational left = a;
  for (const auto& iv : cuts) {
    BigRational root_lo = iv.exact ? iv.hi : iv.lo;
    samples.push_back(simplest_rational_between(left, root_lo));
    left = iv.hi;
  }
  if (left < b) samples.push_back(simplest_rational_between(left, b));

  CheckRecord sc{"samples"};
  for (const auto& s : samples) sc.witnesses.push_back("s=" + to_fraction(s));
  sc.counts = {{"pieces", static_cast<int>(samples.size())}};
  std::vector<Certificate> results(samples.size());
  std::size_t next = 0;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, opt.jobs); ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= samples.size()) return;
          i = next++;
          if (opt.progress) opt.progress("sample s=" + to_fraction(samples[i]));
        }
        results[i] = certify_at_s(N, samples[i]);
      }
    });
  for (auto& th : pool) th.join();
  sc.pass = true;
  for (const auto& r : results) sc.pass = sc.pass && r.pass();
  sc.detail = sc.pass ? "every sample passes" : "a sample fails";
  cert.checks.push_back(sc);
  cert.samples = std::move(results);
  return cert;
}

}  // namespace saddleloop
