#pragma once

// Large-parameter machinery.
//
// The piecewise loop around the focus (x1, 0), x1 = B^2 - M^2, for the MB form
//     F1 = y - (B-M)x                           segment from the origin to (x1, y1), y1 = (B-M)x1
//     F2 = 1 + a10 x + a01 y + a20 x^2 + a11 xy + a02 y^2
//                                               arc from (x1, y1) to (x2, 0), x2 = -3M
//     F3 = C2 + c30 x^3 + c21 x^2 y + c12 x y^2 + c03 y^3
//                                               arc from (x2, 0) back to the origin
// F2 is tangent to F1 at (x1, y1) and osculates the trajectory through (x2, 0); F3 follows the unstable
// separatrix to order 4 and passes vertically through (x2, 0).
//
// Also: the curve B = M - 1 + a/M^2 in the (m,b) chart with its 1/m series and Sturm ledger, and the
// thresholds m~ ~ 6.93 and M_{51/40} ~ 7.58.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btmodel.hpp"
#include "data.hpp"
#include "exactalg.hpp"
#include "loopcert.hpp"
#include "separatrix.hpp"

namespace saddleloop {

namespace detail {

template <class T>
using CoeffPoly = std::map<std::pair<int, int>, T>;  // x^i y^j -> coefficient

template <class T>
T cp_eval(const CoeffPoly<T>& p, const T& x, const T& y, const T& zero) {
  T acc = zero;
  for (const auto& [e, c] : p) {
    T t = c;
    for (int i = 0; i < e.first; ++i) t = t * x;
    for (int j = 0; j < e.second; ++j) t = t * y;
    acc = acc + t;
  }
  return acc;
}

template <class T>
CoeffPoly<T> cp_diff(const CoeffPoly<T>& p, int var) {
  CoeffPoly<T> r;
  for (const auto& [e, c] : p) {
    int k = var == 0 ? e.first : e.second;
    if (k == 0) continue;
    auto f = e;
    (var == 0 ? f.first : f.second) -= 1;
    r[f] = lift<T>(k, c) * c;
  }
  return r;
}

// Gauss-Jordan on an augmented system over a field; empty result when singular.
template <class T>
std::vector<T> field_solve(std::vector<std::vector<T>> A) {
  std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && coeff_is_zero(A[p][c])) ++p;
    if (p == n) return {};
    std::swap(A[c], A[p]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || coeff_is_zero(A[r][c])) continue;
      T f = A[r][c] / A[c][c];
      for (std::size_t k = c; k <= n; ++k) A[r][k] = A[r][k] - f * A[c][k];
    }
  }
  std::vector<T> x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(A[i][n] / A[i][i]);
  return x;
}

template <class T>
struct PiecewiseCoeffs {
  T M, B, x1, y1, x2;
  CoeffPoly<T> F1, F2, F3;
};

// Solves both matching systems; throws DegenerateParameter when one is singular.
template <class T>
PiecewiseCoeffs<T> build_piecewise_coeffs(const T& M, const T& B) {
  const T zero = lift<T>(0, M), one = lift<T>(1, M);
  PiecewiseCoeffs<T> L;
  L.M = M;
  L.B = B;
  L.x1 = B * B - M * M;
  L.y1 = (B - M) * L.x1;
  L.x2 = lift<T>(-3, M) * M;
  L.F1 = {{{0, 1}, one}, {{1, 0}, M - B}};
  const T c1 = M * M - B * B, c2 = lift<T>(2, M) * B;
  auto Qv = [&](const T& x, const T& y) -> T { return c1 * x + c2 * y + x * x + x * y; };

  // F2: unknowns a10, a01, a20, a11, a02 with constant term 1
  const std::vector<std::pair<int, int>> m2{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  const T Q0 = Qv(L.x2, zero);
  if (coeff_is_zero(Q0)) throw DegenerateParameter("the field vanishes at (x2, 0)");
  using Fn = std::function<T(const CoeffPoly<T>&)>;
  std::vector<Fn> conds2 = {
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(f, L.x1, L.y1, zero); },
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(cp_diff(f, 0), L.x1, L.y1, zero) - (M - B) * cp_eval(cp_diff(f, 1), L.x1, L.y1, zero); },
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(f, L.x2, zero, zero); },
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(cp_diff(f, 1), L.x2, zero, zero); },
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(cp_diff(f, 0), L.x2, zero, zero) / Q0 + cp_eval(cp_diff(cp_diff(f, 1), 1), L.x2, zero, zero); },
  };
  CoeffPoly<T> fixed2{{{0, 0}, one}};
  std::vector<std::vector<T>> A2;
  for (const auto& cond : conds2) {
    std::vector<T> row;
    for (auto mono : m2) row.push_back(cond(CoeffPoly<T>{{mono, one}}));
    row.push_back(zero - cond(fixed2));
    A2.push_back(std::move(row));
  }
  auto sol2 = field_solve(std::move(A2));
  if (sol2.empty()) throw DegenerateParameter("F2 matching system is singular");
  L.F2 = fixed2;
  for (std::size_t i = 0; i < m2.size(); ++i)
    if (!coeff_is_zero(sol2[i])) L.F2[m2[i]] = sol2[i];

  // F3: C2 plus a homogeneous cubic; g3 = g4 = 0 along the unstable separatrix
  CoeffPoly<T> C2{{{0, 2}, one}, {{1, 1}, zero - c2}, {{2, 0}, zero - c1}};
  auto a = separatrix_coefficients<T>(B + M, B - M, 3);
  std::vector<T> phi{zero, a[1], a[2], a[3]};
  auto phi_pow = [&](int j) {
    std::vector<T> r{one};
    for (int k = 0; k < j; ++k) r = series_product(r, phi, 4, zero);
    r.resize(5, zero);
    return r;
  };
  std::vector<std::vector<T>> pw{phi_pow(0), phi_pow(1), phi_pow(2), phi_pow(3)};
  auto along = [&](const CoeffPoly<T>& f, int k) {
    T acc = zero;
    for (const auto& [e, c] : f)
      if (k - e.first >= 0) acc = acc + c * pw[static_cast<std::size_t>(e.second)][static_cast<std::size_t>(k - e.first)];
    return acc;
  };
  std::vector<Fn> conds3 = {
      [&](const CoeffPoly<T>& f) -> T { return along(f, 3); },
      [&](const CoeffPoly<T>& f) -> T { return along(f, 4); },
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(f, L.x2, zero, zero); },
      [&](const CoeffPoly<T>& f) -> T { return cp_eval(cp_diff(f, 1), L.x2, zero, zero); },
  };
  const std::vector<std::pair<int, int>> m3{{3, 0}, {2, 1}, {1, 2}, {0, 3}};
  std::vector<std::vector<T>> A3;
  for (const auto& cond : conds3) {
    std::vector<T> row;
    for (auto mono : m3) row.push_back(cond(CoeffPoly<T>{{mono, one}}));
    row.push_back(zero - cond(C2));
    A3.push_back(std::move(row));
  }
  auto sol3 = field_solve(std::move(A3));
  if (sol3.empty()) throw DegenerateParameter("F3 matching system is singular");
  L.F3 = C2;
  for (std::size_t i = 0; i < m3.size(); ++i)
    if (!coeff_is_zero(sol3[i])) L.F3[m3[i]] = sol3[i];
  return L;
}

inline MultiPoly to_multipoly(const CoeffPoly<BigRational>& p) {
  MultiPoly::TermMap t;
  for (const auto& [e, c] : p) t[{e.first, e.second}] += c;
  return MultiPoly({"x", "y"}, std::move(t));
}

// Clears the denominators of rational functions in M: a polynomial in {x, y, M}.
inline MultiPoly to_multipoly(const CoeffPoly<RationalFunction>& p) {
  ZPoly l(BigInt(1));
  for (const auto& [e, c] : p) l = zlcm(l, c.den_z());
  const std::vector<std::string> vars{"x", "y", "M"};
  MultiPoly out(vars);
  for (const auto& [e, c] : p) out = out + zpoly_in(c.num_z() * divexact(l, c.den_z()), vars, "M", Exponents{e.first, e.second, 0});
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- the piecewise loop

struct PiecewiseLoop {
  BigRational M, B, x1, y1, x2;
  MultiPoly F1, F2, F3;  // in {x, y}
  MultiPoly Q;           // y' of the MB form

  // F' = F_x y + F_y Q along the MB field
  MultiPoly derivative_along(const MultiPoly& F) const {
    MultiPoly y = MultiPoly::variable({"x", "y"}, "y");
    return F.derivative("x") * y + F.derivative("y") * Q;
  }
};

// B = M - 1 + a/M^2
inline BigRational alpha_curve_B(const BigRational& M, const BigRational& a) { return M - 1 + a / (M * M); }

inline PiecewiseLoop build_piecewise_loop(const BigRational& M, const BigRational& B) {
  if (!(sgn(B) > 0 && B < M)) throw DomainError("piecewise loop needs 0 < B < M");
  auto c = detail::build_piecewise_coeffs(M, B);
  PiecewiseLoop L{M, B, c.x1, c.y1, c.x2, detail::to_multipoly(c.F1), detail::to_multipoly(c.F2), detail::to_multipoly(c.F3), {}};
  L.Q = mb_form(ParamsMB::exact(M, B)).Q.with_vars({"x", "y"});
  return L;
}

struct PiecewiseIdentities {
  bool junctions = false;   // F1, F2 tangent at (x1, y1); F2, F3 vanish at (x2, 0) with F_y = 0
  bool osculation = false;  // F2_x / Q + F2_yy = 0 at (x2, 0)
  bool separatrix = false;  // F3 along the unstable separatrix is O(x^5)
  bool gradients = false;   // closed forms of grad F2 and grad F3 at (x2, 0)
  BigRational gradF2_x, gradF3_x;
  bool all() const { return junctions && osculation && separatrix && gradients; }
};

// Re-verifies every imposed condition by substitution, and the gradients at (x2, 0) against
//   grad F2 = (2(-B^2 - 3M + M^2)^3 / (3(B+M)^2 (M-B)^4 M), 0),   grad F3 = (-3(B+M)(M-B)M, 0).
inline PiecewiseIdentities verify_piecewise(const PiecewiseLoop& L) {
  PiecewiseIdentities r;
  const BigRational &M = L.M, &B = L.B;
  auto at = [](const MultiPoly& f, const BigRational& x, const BigRational& y) { return f.eval_all({x, y}); };
  MultiPoly F2x = L.F2.derivative("x"), F2y = L.F2.derivative("y"), F3x = L.F3.derivative("x"), F3y = L.F3.derivative("y");
  r.junctions = sgn(at(L.F1, L.x1, L.y1)) == 0 && sgn(at(L.F2, L.x1, L.y1)) == 0 &&
                sgn(at(F2x, L.x1, L.y1) - (M - B) * at(F2y, L.x1, L.y1)) == 0 && sgn(at(L.F2, L.x2, 0)) == 0 &&
                sgn(at(F2y, L.x2, 0)) == 0 && sgn(at(L.F3, L.x2, 0)) == 0 && sgn(at(F3y, L.x2, 0)) == 0;
  BigRational Q0 = at(L.Q, L.x2, 0);
  r.osculation = sgn(at(F2x, L.x2, 0) / Q0 + at(F2y.derivative("y"), L.x2, 0)) == 0;
  auto a = separatrix_coefficients<BigRational>(B + M, B - M, 4);
  const std::vector<std::string> xv{"x"};
  MultiPoly x = MultiPoly::variable(xv, "x"), phi(xv);
  for (int k = 1; k <= 4; ++k) phi = phi + x.pow(static_cast<unsigned>(k)) * a[static_cast<std::size_t>(k)];
  MultiPoly G(xv);
  for (const auto& [e, c] : L.F3.terms()) G = G + x.pow(static_cast<unsigned>(e[0])) * phi.pow(static_cast<unsigned>(e[1])) * c;
  r.separatrix = G.is_zero() || G.min_degree("x") >= 5;
  r.gradF2_x = at(F2x, L.x2, 0);
  r.gradF3_x = at(F3x, L.x2, 0);
  BigRational g2 = 2 * pow_q(BigRational(-B * B - 3 * M + M * M), 3) / (3 * (B + M) * (B + M) * pow_q(BigRational(M - B), 4) * M);
  BigRational g3 = -3 * (B + M) * (M - B) * M;
  r.gradients = r.gradF2_x == g2 && r.gradF3_x == g3 && sgn(at(F2y, L.x2, 0)) == 0 && sgn(at(F3y, L.x2, 0)) == 0 &&
                at(L.F1.derivative("x"), L.x1, L.y1) == M - B && at(L.F1.derivative("y"), L.x1, L.y1) == 1;
  return r;
}

struct ContactResult {
  bool pass = false;
  std::string detail;
  int stripped_exponent = 0;
  ZPoly cofactor;                       // p4 in x, or q3 in y
  std::vector<IsolatingInterval> roots;  // all real roots of the cofactor
  std::vector<int> coefficient_signs;    // highest degree first
  std::optional<double> hat_low, hat_high;  // F2: roots of p4 bracketing [x2, x1]
};

namespace detail {

inline std::vector<int> signs_high_first(const ZPoly& p) {
  std::vector<int> s;
  for (std::size_t i = p.c.size(); i-- > 0;) s.push_back(sgn(p.c[i]));
  return s;
}

}  // namespace detail

// R2 = res_y(F2, F2') = (x - x2)^2 p4(x); passes when p4 has no root in [x2, x1].
inline ContactResult contact_check_F2(const PiecewiseLoop& L) {
  ContactResult out;
  MultiPoly R2 = resultant(L.F2, L.derivative_along(L.F2), "y").with_vars({"x"});
  if (R2.is_zero()) throw InternalConsistencyError("R2 vanishes identically");
  MultiPoly lin = MultiPoly::variable({"x"}, "x") - MultiPoly::constant({"x"}, L.x2);
  MultiPoly p = R2, q;
  while (try_divexact(p, lin, q)) {
    p = q;
    ++out.stripped_exponent;
  }
  if (out.stripped_exponent != 2)
    throw InternalConsistencyError("R2 carries (x - x2)^" + std::to_string(out.stripped_exponent) + " instead of (x - x2)^2");
  out.cofactor = detail::uni_z(p, "x");
  out.coefficient_signs = detail::signs_high_first(out.cofactor);
  out.roots = isolate_roots(out.cofactor, Endpoint::neg_inf(), Endpoint::pos_inf());
  for (auto& iv : out.roots) refine(out.cofactor, iv, make_q(1, 1 << 20));
  int inside = count_closed(out.cofactor, L.x2, L.x1);
  for (const auto& iv : out.roots) {
    double v = iv.approx();
    if (v < to_double(L.x2)) out.hat_low = v;
    if (v > to_double(L.x1) && !out.hat_high) out.hat_high = v;
  }
  out.pass = inside == 0;
  out.detail = std::to_string(inside) + " zeros of p4 in [x2, x1] = [" + to_fraction(L.x2) + ", " + to_fraction(L.x1) + "]";
  return out;
}

// R3 = res_x(F3, F3') = y^9 q3(y); passes when q3 has no negative root.
inline ContactResult contact_check_F3(const PiecewiseLoop& L) {
  ContactResult out;
  MultiPoly R3 = resultant(L.F3, L.derivative_along(L.F3), "x").with_vars({"y"});
  if (R3.is_zero()) throw InternalConsistencyError("R3 vanishes identically");
  out.stripped_exponent = detail::strip_power(R3, "y");
  if (out.stripped_exponent != 9)
    throw InternalConsistencyError("R3 carries y^" + std::to_string(out.stripped_exponent) + " instead of y^9");
  out.cofactor = detail::uni_z(R3, "y");
  out.coefficient_signs = detail::signs_high_first(out.cofactor);
  out.roots = isolate_roots(out.cofactor, Endpoint::neg_inf(), Endpoint::pos_inf());
  for (auto& iv : out.roots) refine(out.cofactor, iv, make_q(1, 1 << 20));
  int neg = count_roots_descartes(out.cofactor, Endpoint::neg_inf(), Endpoint::at(0));
  if (sign_at(out.cofactor, BigRational(0)) == 0) --neg;
  out.pass = neg == 0;
  out.detail = std::to_string(neg) + " negative zeros of q3";
  return out;
}

// Asymptotic anchors for the p4 roots: x^1 ~ -2M + 2 (a/9)^(1/3) M^(2/3), x^2 ~ -4M.
inline std::pair<double, double> p4_root_anchors(double M, double alpha) {
  return {-2 * M + 2 * std::cbrt(alpha / 9) * std::pow(M, 2.0 / 3), -4 * M};
}

struct JunctionProbe {
  std::string name;
  BigRational x;
  double y = 0;
  int sign = 0;  // sign of <outward normal, field>; +1 means the field exits the loop
};

// Probes next to the three junctions: the midpoint of F1, and F2 and F3 just to the right of (x2, 0).
// The outward normal is sigma grad F with sigma = -sign F(focus), the focus (x1, 0) lying inside.
inline std::vector<JunctionProbe> junction_probes(const PiecewiseLoop& L) {
  std::vector<JunctionProbe> out;
  auto probe = [&](const std::string& name, const MultiPoly& F, const BigRational& x, bool upper) {
    JunctionProbe p{name, x};
    int sigma = -sgn(F.eval_all({L.x1, BigRational(0)}));
    ZPoly fy = detail::uni_z(F.eval("x", x).with_vars({"y"}), "y");
    ZPoly dy = detail::uni_z(L.derivative_along(F).eval("x", x).with_vars({"y"}), "y");
    auto ivs = upper ? isolate_roots(fy, Endpoint::at(0), Endpoint::pos_inf()) : isolate_roots(fy, Endpoint::neg_inf(), Endpoint::at(0));
    if (ivs.empty()) throw InternalConsistencyError(name + ": the arc has no point above x = " + to_fraction(x));
    // the arc leaves (x2, 0) vertically: take the root nearest to y = 0
    AlgebraicPoint pt{fy, upper ? ivs.front() : ivs.back()};
    p.sign = sigma * sign_at(dy, pt);
    refine(fy, pt.iv, make_q(1, 1 << 20));
    p.y = pt.iv.approx();
    out.push_back(p);
  };
  {
    JunctionProbe p{"F1 midpoint", L.x1 / 2, to_double(L.y1 / 2)};
    int sigma = -sgn(L.F1.eval_all({L.x1, BigRational(0)}));
    p.sign = sigma * sgn(L.derivative_along(L.F1).eval_all({L.x1 / 2, L.y1 / 2}));
    out.push_back(p);
  }
  BigRational dx = -L.x2 / 100;
  probe("F2 near (x2, 0)", L.F2, L.x2 + dx, true);
  probe("F3 near (x2, 0)", L.F3, L.x2 + dx, false);
  return out;
}

// ---------------------------------------------------------------- symbolic dominant term of p4

// p4 for B = M - 1 + a/M^2 with M symbolic, and its dominant part at M = infinity in the scaling x = M xi.
struct P4Asymptotics {
  MultiPoly p4;        // in {x, M}
  MultiPoly dominant;  // in {xi}, primitive
  bool matches_expected = false;  // dominant proportional to (xi + 2)^3 (xi + 4)
};

inline P4Asymptotics p4_asymptotics(const BigRational& alpha) {
  RationalFunction Mv = RationalFunction::variable("M");
  RationalFunction B = Mv - RationalFunction(BigRational(1), "M") + RationalFunction(alpha, "M") / (Mv * Mv);
  auto c = detail::build_piecewise_coeffs(Mv, B);
  MultiPoly F2 = detail::to_multipoly(c.F2);
  const std::vector<std::string> v{"x", "y", "M"};
  MultiPoly x = MultiPoly::variable(v, "x"), y = MultiPoly::variable(v, "y"), M = MultiPoly::variable(v, "M");
  // M^4 Q with M^2 - B^2 and 2B over the common denominator M^4
  MultiPoly Bn = M.pow(3) - M.pow(2) + MultiPoly::constant(v, alpha);  // M^2 B
  MultiPoly Q4 = (M.pow(6) - Bn * Bn) * x + Bn * M.pow(2) * 2 * y + M.pow(4) * (x * x + x * y);
  MultiPoly dF = F2.derivative("x") * y * M.pow(4) + F2.derivative("y") * Q4;
  MultiPoly R2 = resultant(F2, dF, "y").with_vars({"x", "M"});
  MultiPoly lin = MultiPoly::variable({"x", "M"}, "x") + MultiPoly::variable({"x", "M"}, "M") * 3;
  MultiPoly p4 = divexact(R2, lin * lin);
  P4Asymptotics out;
  out.p4 = p4.primitive();
  int top = -1000000;
  for (const auto& [e, cf] : p4.terms()) top = std::max(top, e[0] + e[1]);
  MultiPoly::TermMap t;
  for (const auto& [e, cf] : p4.terms())
    if (e[0] + e[1] == top) t[{e[0]}] += cf;
  out.dominant = MultiPoly({"xi"}, std::move(t)).primitive();
  MultiPoly xi = MultiPoly::variable({"xi"}, "xi"), two = MultiPoly::constant({"xi"}, 2), four = MultiPoly::constant({"xi"}, 4);
  out.matches_expected = sgn(constant_ratio(out.dominant, (xi + two).pow(3) * (xi + four))) != 0;
  return out;
}

// ---------------------------------------------------------------- threshold search for general alpha

struct ThresholdSearch {
  std::optional<BigRational> M;  // smallest sampled M where both contact checks pass (heuristic)
  bool confirmed = false;        // exact checks at that M pass, and junction probes point outward
  std::vector<std::pair<BigRational, bool>> samples;
};

inline bool piecewise_passes(const BigRational& M, const BigRational& alpha) {
  BigRational B = alpha_curve_B(M, alpha);
  if (!(sgn(B) > 0 && B < M)) return false;
  try {
    PiecewiseLoop L = build_piecewise_loop(M, B);
    return contact_check_F2(L).pass && contact_check_F3(L).pass;
  } catch (const DegenerateParameter&) {
    return false;
  }
}

// Scans M = start, start + step, ... up to hi. The first M from which every later sample also
// passes is returned; the scan is a heuristic, the confirmation at that M is exact.
inline ThresholdSearch search_threshold(const BigRational& alpha, const BigRational& hi, const BigRational& step) {
  if (sgn(alpha) <= 0 || sgn(step) <= 0) throw ParameterError("threshold search needs alpha > 0 and step > 0");
  ThresholdSearch out;
  BigRational start = BigRational(floor_q(BigRational(std::sqrt(to_double(alpha)) / to_double(step))) + 1) * step;
  for (BigRational M = start; M <= hi; M += step) out.samples.emplace_back(M, piecewise_passes(M, alpha));
  for (std::size_t i = out.samples.size(); i-- > 0;) {
    if (!out.samples[i].second) break;
    out.M = out.samples[i].first;
  }
  if (out.M) {
    PiecewiseLoop L = build_piecewise_loop(*out.M, alpha_curve_B(*out.M, alpha));
    bool outward = true;
    for (const auto& p : junction_probes(L)) outward = outward && p.sign > 0;
    out.confirmed = contact_check_F2(L).pass && contact_check_F3(L).pass && outward;
  }
  return out;
}

// ---------------------------------------------------------------- the alpha curve in the (m,b) chart

// Elimination of M, B from B = M - 1 + a/M^2, m = (M^2 - B^2)/2, b = 2B - m: with B = (b+m)/2 and
// M^2 = ((b+m)^2 + 8m)/4 the curve is M^2 * M^4 = (M^2 (B+1) - a)^2; times 64.
inline MultiPoly alpha_curve_elimination() {
  const std::vector<std::string> v{"m", "b", "a"};
  MultiPoly m = MultiPoly::variable(v, "m"), b = MultiPoly::variable(v, "b"), a = MultiPoly::variable(v, "a");
  MultiPoly Q = ((b + m) * (b + m) + m * 8) * make_q(1, 4), B = (b + m) * make_q(1, 2);
  MultiPoly one = MultiPoly::constant(v, 1);
  MultiPoly w = Q * (B + one) - a;
  return (Q.pow(3) - w * w) * 64;
}

// b = m - 1 + sum_{k>=1} u_k(a) / m^k along the curve; returns u_1..u_order as polynomials in a.
inline std::vector<MultiPoly> alpha_curve_series(int order) {
  if (order < 1) throw ParameterError("series order must be at least 1");
  const MultiPoly& P = data::alpha_curve();
  const std::vector<std::string> v{"t", "u", "a"};
  // m = 1/t, b = 1/t - 1 + u; multiply by t^deg
  MultiPoly t = MultiPoly::variable(v, "t"), u = MultiPoly::variable(v, "u"), a = MultiPoly::variable(v, "a");
  MultiPoly Pv = P.with_vars({"m", "b", "a"});
  int d = Pv.total_degree();
  MultiPoly G(v);
  for (const auto& [e, c] : Pv.terms()) {
    // m^i b^j a^k t^d = t^(d-i-j) (1 - t + t u)^j a^k
    MultiPoly base = MultiPoly::constant(v, 1) - t + t * u;
    G = G + t.pow(static_cast<unsigned>(d - e[0] - e[1])) * base.pow(static_cast<unsigned>(e[1])) * a.pow(static_cast<unsigned>(e[2])) * c;
  }
  detail::strip_power(G, "t");
  // G(0, u) must have the simple root u = 0 with a constant slope
  MultiPoly g0 = G.coefficient("t", 0);
  if (!g0.coefficient("u", 0).is_zero()) throw InternalConsistencyError("b = m - 1 is not the leading behaviour of the curve");
  MultiPoly slope = g0.coefficient("u", 1);
  if (slope.degree("a") > 0 || slope.is_zero()) throw InternalConsistencyError("series slope is not a nonzero constant");
  BigRational s = slope.eval_all({0, 0, 0});
  // lift u(t) = sum_{k>=0} w_k t^k, w_0 = 0; u_k is w_k
  std::vector<MultiPoly> w(static_cast<std::size_t>(order + 1), MultiPoly(v));
  int du = G.degree("u");
  for (int j = 1; j <= order; ++j) {
    std::vector<std::vector<MultiPoly>> wp{{MultiPoly::constant(v, 1)}};
    for (int p = 1; p <= du; ++p) {
      std::vector<MultiPoly> next(static_cast<std::size_t>(j + 1), MultiPoly(v));
      const auto& prev = wp.back();
      for (std::size_t i = 0; i < prev.size(); ++i)
        for (std::size_t q = 0; i + q <= static_cast<std::size_t>(j); ++q) next[i + q] = next[i + q] + prev[i] * w[q];
      wp.push_back(std::move(next));
    }
    MultiPoly r(v);
    for (const auto& [e, c] : G.terms()) {
      if (e[0] > j) continue;
      const auto& pw = wp[static_cast<std::size_t>(e[1])];
      if (static_cast<std::size_t>(j - e[0]) < pw.size())
        r = r + pw[static_cast<std::size_t>(j - e[0])] * a.pow(static_cast<unsigned>(e[2])) * c;
    }
    w[static_cast<std::size_t>(j)] = r * (-1 / s);
  }
  std::vector<MultiPoly> out;
  for (int k = 1; k <= order; ++k) out.push_back(w[static_cast<std::size_t>(k)].with_vars({"a"}));
  return out;
}

struct QSturmLedger {
  BigRational alpha;
  UniPoly q;  // P(m, m - 1 + 2a/m) with denominators and content removed
  SignSequence at_zero, at_infinity;
  int positive_roots = 0;
  bool below_at_sample = false;  // the curve's branch lies below b = m - 1 + 2a/m at m = 10
  bool matches_reference = false;  // sign sequences equal the reference pair
};

inline const SignSequence& reference_sturm_at_zero() {
  static const SignSequence s = parse_signs("+,-,-,-,+,+,-,-");
  return s;
}
inline const SignSequence& reference_sturm_at_infinity() {
  static const SignSequence s = parse_signs("+,+,+,-,-,+,-,-");
  return s;
}

// Substitutes b = m - 1 + 2a/m into the curve for symbolic a, clears m and removes the content a^k * integer.
inline MultiPoly q_polynomial_symbolic() {
  const std::vector<std::string> v{"m", "a"};
  MultiPoly P = data::alpha_curve().with_vars({"m", "b", "a"});
  MultiPoly m = MultiPoly::variable(v, "m"), a = MultiPoly::variable(v, "a");
  MultiPoly bn = m * m - m + a * 2;  // m b
  int db = P.degree("b");
  MultiPoly q(v);
  for (const auto& [e, c] : P.terms())
    q = q + m.pow(static_cast<unsigned>(e[0] + db - e[1])) * bn.pow(static_cast<unsigned>(e[1])) * a.pow(static_cast<unsigned>(e[2])) * c;
  detail::strip_power(q, "m");
  detail::strip_power(q, "a");
  q = q.primitive();
  if (sgn(q.coefficient("m", q.degree("m")).eval_all({0, 1})) < 0) q = q * -1;
  return q;
}

inline UniPoly q_polynomial(const BigRational& alpha) {
  static const MultiPoly q = q_polynomial_symbolic();
  return q.eval("a", alpha).with_vars({"m"}).to_uni("m");
}

inline QSturmLedger q_sturm_ledger(const BigRational& alpha) {
  if (sgn(alpha) <= 0) throw ParameterError("alpha must be positive");
  QSturmLedger L;
  L.alpha = alpha;
  L.q = q_polynomial(alpha);
  auto chain = sturm_sequence(L.q);
  L.at_zero = sign_sequence_at(chain, ChainPoint::at(0));
  L.at_infinity = sign_sequence_at(chain, ChainPoint::plus_infinity());
  L.positive_roots = count_roots_descartes(L.q.to_primitive_z(), Endpoint::at(0), Endpoint::pos_inf());
  L.matches_reference = L.at_zero == reference_sturm_at_zero() && L.at_infinity == reference_sturm_at_infinity();
  // sample: the root of P(10, b) nearest to 9 + a/5 lies below it
  BigRational m0 = 10, ref = m0 - 1 + 2 * alpha / m0;
  ZPoly pb = detail::uni_z(data::alpha_curve().with_vars({"m", "b", "a"}).eval("m", m0).eval("a", alpha).with_vars({"b"}), "b");
  auto ivs = isolate_roots(pb, Endpoint::neg_inf(), Endpoint::pos_inf());
  for (auto& iv : ivs) refine(pb, iv, make_q(1, 1 << 30));
  if (!ivs.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ivs.size(); ++i)
      if (std::abs(ivs[i].approx() - to_double(ref)) < std::abs(ivs[best].approx() - to_double(ref))) best = i;
    L.below_at_sample = ivs[best].hi < ref;
  }
  return L;
}

// ---------------------------------------------------------------- thresholds

struct ThresholdReport {
  IsolatingInterval m_tilde;    // unique positive root of the degree-17 polynomial in m
  IsolatingInterval M_alpha;    // largest positive root of the degree-17 polynomial in M (alpha = 51/40)
  int m_tilde_positive_roots = 0;
  bool resultant_reconstruction = false;  // res_b(alpha curve, MM in (m,b)) = L5 * mirrored cofactor
  bool parametric_reconstruction = false;  // res_M(MM(M), 2mM^4 - M^6 + (M^3 - M^2 + a)^2) ~ L5
};

inline BigRational reference_alpha() { return make_q(51, 40); }

namespace detail {

// MM(M) = 0 rewritten in (m, b): E(Q)^2 - Q O(Q)^2 with MM = E(M^2) + M O(M^2) and Q = M^2.
inline MultiPoly mm_in_mb(const MultiPoly& mm) {
  const std::vector<std::string> v{"m", "b"};
  MultiPoly m = MultiPoly::variable(v, "m"), b = MultiPoly::variable(v, "b");
  MultiPoly Q = ((b + m) * (b + m) + m * 8) * make_q(1, 4);
  MultiPoly E(v), O(v);
  UniPoly u = mm.with_vars({"M"}).to_uni("M");
  std::vector<MultiPoly> qp{MultiPoly::constant(v, 1)};
  for (int k = 1; k <= u.degree() / 2; ++k) qp.push_back(qp.back() * Q);
  for (int k = 0; k <= u.degree(); ++k) {
    if (sgn(u.coeff(k)) == 0) continue;
    if (k % 2 == 0)
      E = E + qp[static_cast<std::size_t>(k / 2)] * u.coeff(k);
    else
      O = O + qp[static_cast<std::size_t>(k / 2)] * u.coeff(k);
  }
  return E * E - Q * O * O;
}

// res_M(mm(M), 2mM^4 - M^6 + (M^3 - M^2 + a)^2) as a polynomial in m; `mirror` uses mm(-M).
inline MultiPoly parametric_resultant(const MultiPoly& mm, const BigRational& a, bool mirror) {
  const std::vector<std::string> v{"M", "m"};
  MultiPoly M = MultiPoly::variable(v, "M"), m = MultiPoly::variable(v, "m");
  MultiPoly f = mm.with_vars(v);
  if (mirror) {
    MultiPoly::TermMap t;
    for (const auto& [e, c] : f.terms()) t[e] = (e[0] % 2) ? BigRational(-c) : c;
    f = MultiPoly(v, std::move(t));
  }
  MultiPoly w = M.pow(3) - M.pow(2) + MultiPoly::constant(v, a);
  MultiPoly g = m * M.pow(4) * 2 - M.pow(6) + w * w;
  return resultant(f, g, "M").with_vars({"m"});
}

}  // namespace detail

inline ThresholdReport thresholds() {
  ThresholdReport r;
  ZPoly L5 = detail::uni_z(data::threshold_m(), "m");
  ZPoly MM = detail::uni_z(data::threshold_M(), "M");
  auto pos = isolate_roots(L5, Endpoint::at(0), Endpoint::pos_inf());
  r.m_tilde_positive_roots = count_roots_descartes(L5, Endpoint::at(0), Endpoint::pos_inf());
  if (pos.empty()) throw InternalConsistencyError("the degree-17 polynomial in m has no positive root");
  r.m_tilde = pos.front();
  refine(L5, r.m_tilde, make_q(1, 1 << 30));
  auto posM = isolate_roots(MM, Endpoint::at(0), Endpoint::pos_inf());
  if (posM.empty()) throw InternalConsistencyError("the degree-17 polynomial in M has no positive root");
  r.M_alpha = posM.back();
  refine(MM, r.M_alpha, make_q(1, 1 << 30));

  const BigRational a = reference_alpha();
  MultiPoly P = data::alpha_curve().with_vars({"m", "b", "a"}).eval("a", a).with_vars({"m", "b"});
  MultiPoly res = resultant(P, detail::mm_in_mb(data::threshold_M()), "b").with_vars({"m"});
  MultiPoly L5p = data::threshold_m().with_vars({"m"});
  MultiPoly direct = detail::parametric_resultant(data::threshold_M(), a, false);
  MultiPoly mirrored = detail::parametric_resultant(data::threshold_M(), a, true);
  r.parametric_reconstruction = sgn(constant_ratio(direct, L5p)) != 0;
  MultiPoly cof;
  r.resultant_reconstruction = try_divexact(res, L5p, cof) && sgn(constant_ratio(cof, mirrored)) != 0;
  return r;
}

}  // namespace saddleloop
