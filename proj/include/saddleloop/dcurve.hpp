#pragma once

// The upper-bound curve D(M,B) = 0: a degree-4 loop ansatz with the asymmetric schedule
// g3+ = g4+ = g5+ = g6+ = g3- = g4- = 0, and D the obstruction g7+ once the six coefficients are eliminated.
//
// Over Q(M,B) every separatrix coefficient has a denominator made of the linear forms
//     L_k^+ = (k-1)B + (k+1)M,   L_k^- = (k-1)B - (k+1)M,
// so the elimination runs on "LinFrac" values: a polynomial numerator over a product of those forms.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "btmodel.hpp"
#include "data.hpp"
#include "exactalg.hpp"
#include "loopcert.hpp"

namespace saddleloop {

struct BranchTrackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr int kFormMaxK = 8;
inline constexpr std::size_t kNumForms = 2 * (kFormMaxK - 1);  // k = 2..8, both signs

inline const std::vector<std::string>& mb_vars() {
  static const std::vector<std::string> v{"M", "B"};
  return v;
}

// index 0..6: L_2^+..L_8^+, index 7..13: L_2^-..L_8^-
inline const MultiPoly& linear_form(std::size_t i) {
  static const std::vector<MultiPoly> forms = [] {
    std::vector<MultiPoly> f;
    MultiPoly M = MultiPoly::variable(mb_vars(), "M"), B = MultiPoly::variable(mb_vars(), "B");
    for (int sgn_ : {1, -1})
      for (int k = 2; k <= kFormMaxK; ++k) f.push_back(B * (k - 1) + M * (sgn_ * (k + 1)));
    return f;
  }();
  return forms.at(i);
}

inline std::size_t form_index(int k, bool plus) { return static_cast<std::size_t>((plus ? 0 : kFormMaxK - 1) + (k - 2)); }

struct LinFrac {
  MultiPoly num;
  std::array<int, kNumForms> den{};

  LinFrac() : num(mb_vars()) {}
  explicit LinFrac(MultiPoly n) : num(n.with_vars(mb_vars())) {}

  bool is_zero() const { return num.is_zero(); }

  MultiPoly den_poly() const {
    MultiPoly d = MultiPoly::constant(mb_vars(), 1);
    for (std::size_t i = 0; i < kNumForms; ++i)
      if (den[i]) d = d * linear_form(i).pow(static_cast<unsigned>(den[i]));
    return d;
  }
  // numerator over the denominator with exponents `target` (componentwise >= den)
  MultiPoly lifted(const std::array<int, kNumForms>& target) const {
    MultiPoly n = num;
    for (std::size_t i = 0; i < kNumForms; ++i)
      if (target[i] > den[i]) n = n * linear_form(i).pow(static_cast<unsigned>(target[i] - den[i]));
    return n;
  }
  void reduce() {
    if (num.is_zero()) {
      den.fill(0);
      return;
    }
    MultiPoly q;
    for (std::size_t i = 0; i < kNumForms; ++i)
      while (den[i] > 0 && try_divexact(num, linear_form(i), q)) {
        num = q;
        --den[i];
      }
  }
  LinFrac divided_by_form(std::size_t i) const {
    LinFrac r = *this;
    ++r.den[i];
    r.reduce();
    return r;
  }

  friend LinFrac operator+(const LinFrac& a, const LinFrac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    LinFrac r;
    for (std::size_t i = 0; i < kNumForms; ++i) r.den[i] = std::max(a.den[i], b.den[i]);
    r.num = a.lifted(r.den) + b.lifted(r.den);
    r.reduce();
    return r;
  }
  friend LinFrac operator-(const LinFrac& a) {
    LinFrac r = a;
    r.num = -r.num;
    return r;
  }
  friend LinFrac operator-(const LinFrac& a, const LinFrac& b) { return a + (-b); }
  friend LinFrac operator*(const LinFrac& a, const LinFrac& b) {
    LinFrac r;
    if (a.is_zero() || b.is_zero()) return r;
    r.num = a.num * b.num;
    for (std::size_t i = 0; i < kNumForms; ++i) r.den[i] = a.den[i] + b.den[i];
    r.reduce();
    return r;
  }
  friend LinFrac operator*(long k, const LinFrac& a) {
    LinFrac r = a;
    r.num = r.num * BigRational(k);
    return r;
  }
};

inline bool coeff_is_zero(const LinFrac& v) { return v.is_zero(); }

// a_1..a_K of one branch; the order-k step divides by k a_1 - a_1' = L_k^(branch sign).
inline std::vector<LinFrac> linfrac_separatrix(bool plus, int K) {
  MultiPoly M = MultiPoly::variable(mb_vars(), "M"), B = MultiPoly::variable(mb_vars(), "B");
  std::vector<LinFrac> a{LinFrac(), LinFrac(plus ? B + M : B - M)};
  for (int k = 2; k <= K; ++k) {
    LinFrac rhs = a[static_cast<std::size_t>(k - 1)];
    if (k == 2) rhs = rhs + LinFrac(MultiPoly::constant(mb_vars(), 1));
    for (int i = 2; i <= k - 1; ++i) {
      int j = k + 1 - i;
      if (j < 2 || j > k - 1) continue;
      rhs = rhs - i * (a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)]);
    }
    a.push_back(rhs.divided_by_form(form_index(k, plus)));
  }
  return a;
}

// Rows [A | C2_k] of g_k = A c + C2_k for the given orders on one branch.
inline std::vector<std::vector<LinFrac>> linfrac_rows(const std::vector<LinFrac>& a, const std::vector<std::pair<int, int>>& mons,
                                                     const std::vector<int>& orders) {
  MultiPoly M = MultiPoly::variable(mb_vars(), "M"), B = MultiPoly::variable(mb_vars(), "B");
  int K = 0;
  for (int k : orders) K = std::max(K, k);
  std::vector<LinFrac> phi(static_cast<std::size_t>(K + 1)), one(static_cast<std::size_t>(K + 1)), phi2(static_cast<std::size_t>(K + 1));
  for (int k = 1; k <= K; ++k) phi[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
  one[0] = LinFrac(MultiPoly::constant(mb_vars(), 1));
  for (int i = 1; i <= K; ++i)
    for (int j = 1; i + j <= K; ++j) phi2[static_cast<std::size_t>(i + j)] = phi2[static_cast<std::size_t>(i + j)] + phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)];
  const std::vector<LinFrac>* pw[3] = {&one, &phi, &phi2};
  LinFrac sum(B * 2);  // a1+ + a1-
  std::vector<std::vector<LinFrac>> rows;
  for (int k : orders) {
    std::vector<LinFrac> row;
    for (auto [i, j] : mons) row.push_back(k - i >= 0 ? (*pw[j])[static_cast<std::size_t>(k - i)] : LinFrac());
    row.push_back(phi2[static_cast<std::size_t>(k)] - sum * phi[static_cast<std::size_t>(k - 1)]);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Lines through rational zeros of two parallel slices, plus the coordinate axes.
inline std::vector<MultiPoly> linear_factor_candidates(const MultiPoly& D) {
  MultiPoly M = MultiPoly::variable(mb_vars(), "M"), B = MultiPoly::variable(mb_vars(), "B");
  std::vector<MultiPoly> out{M, B};
  auto slice = [&](const std::string& fix, long v, const std::string& free) {
    MultiPoly e = D.eval(fix, v).with_vars({free});
    return e.is_zero() ? std::vector<BigRational>{} : rational_roots(e.to_uni(free).to_primitive_z());
  };
  MultiPoly one = MultiPoly::constant(mb_vars(), 1);
  // M = r0 + (r1 - r0) B through (r0, 0) and (r1, 1)
  for (const auto& r0 : slice("B", 0, "M"))
    for (const auto& r1 : slice("B", 1, "M")) out.push_back(M - one * r0 - B * BigRational(r1 - r0));
  // B = r0 + (r1 - r0) M
  for (const auto& r0 : slice("M", 0, "B"))
    for (const auto& r1 : slice("M", 1, "B")) out.push_back(B - one * r0 - M * BigRational(r1 - r0));
  return out;
}

}  // namespace detail

struct DReconstruction {
  MultiPoly bordered;  // the fraction-free bordered determinant, before stripping
  MultiPoly D;         // primitive, degree 14
  std::vector<std::string> stripped;  // names of the removed factors, with multiplicity
  BigRational ratio_to_embedded;      // D / embedded D; 0 when not proportional
};

// Eliminates the six ansatz coefficients from g7+ = 0. Throws InternalConsistencyError if the elimination collapses.
inline DReconstruction reconstruct_D_full() {
  using namespace detail;
  MatchSchedule sch = asymmetric_schedule();
  auto mons = ansatz_monomials(sch.ansatz_degree);
  int K = 7;
  auto ap = linfrac_separatrix(true, K), am = linfrac_separatrix(false, K);
  auto rows = linfrac_rows(ap, mons, sch.plus);
  for (auto& r : linfrac_rows(am, mons, sch.minus)) rows.push_back(std::move(r));
  rows.push_back(linfrac_rows(ap, mons, {7}).front());
  std::vector<std::vector<MultiPoly>> P;
  for (const auto& row : rows) {
    std::array<int, kNumForms> d{};
    for (const auto& e : row)
      for (std::size_t i = 0; i < kNumForms; ++i) d[i] = std::max(d[i], e.den[i]);
    std::vector<MultiPoly> pr;
    for (const auto& e : row) pr.push_back(e.is_zero() ? MultiPoly(mb_vars()) : e.lifted(d));
    P.push_back(std::move(pr));
  }
  DReconstruction out;
  out.bordered = bareiss_determinant(std::move(P));
  if (out.bordered.is_zero()) throw InternalConsistencyError("bordered determinant of the D system vanishes");
  MultiPoly D = out.bordered.primitive();
  for (;;) {
    bool progress = false;
    for (const MultiPoly& f : linear_factor_candidates(D)) {
      MultiPoly q;
      while (try_divexact(D, f, q)) {
        D = q.primitive();
        out.stripped.push_back(f.to_string());
        progress = true;
      }
    }
    if (!progress) break;
  }
  if (D.total_degree() != 14)
    throw InternalConsistencyError("D has total degree " + std::to_string(D.total_degree()) + " after removing linear factors");
  out.D = D;
  out.ratio_to_embedded = constant_ratio(D, data::d_curve());
  return out;
}

inline MultiPoly reconstruct_D() { return reconstruct_D_full().D; }

// The (m,b) image of the embedded D: degree 25 with 257 monomials.
inline MultiPoly d_curve_image() { return mb_image(data::d_curve()); }

namespace detail {

// D(M, P(M) + M^k v) with the largest power of M divided out, in variables {M, v}.
inline MultiPoly branch_substitution(const MultiPoly& D, const MultiPoly& P, int k) {
  const std::vector<std::string> v{"M", "v"};
  MultiPoly F = D.with_vars({"M", "B"});
  MultiPoly Bsub = P.with_vars(v) + MultiPoly::variable(v, "M").pow(static_cast<unsigned>(k)) * MultiPoly::variable(v, "v");
  MultiPoly G(v);
  for (int j = F.degree("B"); j >= 0; --j) G = G * Bsub + F.coefficient("B", j).rename("B", "v").with_vars(v);
  strip_power(G, "M");
  return G;
}

// v_0..v_n with G(M, sum v_j M^j) = O(M^(n+1)), from a simple root v_0 of G(0, v).
inline std::vector<BigRational> lift_simple_root(const MultiPoly& G, const BigRational& v0, int n) {
  UniPoly g0 = G.coefficient("M", 0).with_vars({"v"}).to_uni("v");
  BigRational slope = g0.derivative()(v0);
  if (sgn(g0(v0)) != 0 || sgn(slope) == 0) throw BranchTrackingError("branch root is not simple");
  std::vector<BigRational> w(static_cast<std::size_t>(n + 1), BigRational(0));
  w[0] = v0;
  int dv = G.degree("v");
  for (int j = 1; j <= n; ++j) {
    std::vector<std::vector<BigRational>> wp{{BigRational(1)}};
    for (int b = 1; b <= dv; ++b) {
      std::vector<BigRational> next(static_cast<std::size_t>(j + 1), BigRational(0));
      const auto& prev = wp.back();
      for (std::size_t i = 0; i < prev.size(); ++i)
        for (std::size_t q = 0; i + q <= static_cast<std::size_t>(j); ++q) next[i + q] += prev[i] * w[q];
      wp.push_back(std::move(next));
    }
    BigRational r = 0;  // coefficient of M^j with w_j still zero
    for (const auto& [e, c] : G.terms()) {
      if (e[0] > j) continue;
      const auto& pw = wp[static_cast<std::size_t>(e[1])];
      if (static_cast<std::size_t>(j - e[0]) < pw.size()) r += c * pw[static_cast<std::size_t>(j - e[0])];
    }
    w[static_cast<std::size_t>(j)] = -r / slope;
  }
  return w;
}

}  // namespace detail

// Series B = sum_j c_j M^j of the branch of D(M,B) = 0 with B ~ (3/7) M^2, through M^order (order >= 4).
// Two branches leave the origin with B ~ (3/7) M^2 and split at order M^4. The one returned is tangent to
// the saddle-loop curve: in (m, b) it satisfies b - 5m/7 = c m^2 + O(m^3) with c the second Melnikov
// coefficient.
inline std::vector<BigRational> d_branch_series(int order, const MultiPoly& D = data::d_curve()) {
  if (order < 4) throw ParameterError("branch series order must be at least 4");
  const std::vector<std::string> v{"M", "v"};
  MultiPoly M = MultiPoly::variable(v, "M");
  const BigRational beta = make_q(3, 7);
  MultiPoly G1 = detail::branch_substitution(D, MultiPoly(v), 2);
  UniPoly g1 = G1.coefficient("M", 0).with_vars({"v"}).to_uni("v");
  if (sgn(g1(beta)) != 0) throw BranchTrackingError("D has no branch with B ~ (3/7) M^2");
  std::vector<BigRational> out(static_cast<std::size_t>(order + 1), BigRational(0));
  out[2] = beta;
  if (sgn(g1.derivative()(beta)) != 0) {
    auto w = detail::lift_simple_root(G1, beta, order - 2);
    for (int j = 0; j + 2 <= order; ++j) out[static_cast<std::size_t>(j + 2)] = w[static_cast<std::size_t>(j)];
    return out;
  }
  // B = beta M^2 + v M^4: b - 5m/7 = (2v + 6 beta^2/7) M^4 + ..., and m^2 = M^4/4 + ...
  MultiPoly G2 = detail::branch_substitution(D, M * M * beta, 4);
  BigRational c2 = melnikov_coefficients().at(1);
  BigRational target = (c2 / 4 - 6 * beta * beta / 7) / 2;
  std::optional<BigRational> v0;
  for (const auto& r : rational_roots(G2.coefficient("M", 0).with_vars({"v"}).to_uni("v").to_primitive_z()))
    if (r == target) v0 = r;
  if (!v0) throw BranchTrackingError("no branch of D is tangent to the saddle-loop curve at second order");
  auto w = detail::lift_simple_root(G2, *v0, order - 4);
  for (int j = 0; j + 4 <= order; ++j) out[static_cast<std::size_t>(j + 4)] = w[static_cast<std::size_t>(j)];
  return out;
}

// All candidate M^4 coefficients of the (3/7) M^2 branches (rational roots of the second-level equation).
inline std::vector<BigRational> d_branch_splitting(const MultiPoly& D = data::d_curve()) {
  const std::vector<std::string> v{"M", "v"};
  MultiPoly M = MultiPoly::variable(v, "M");
  MultiPoly G2 = detail::branch_substitution(D, M * M * make_q(3, 7), 4);
  return rational_roots(G2.coefficient("M", 0).with_vars({"v"}).to_uni("v").to_primitive_z());
}

struct DBranchPoint {
  BigRational M;
  IsolatingInterval B;  // isolating interval of the branch root of D(M, .)
  double value = 0;
};

// B on the (3/7) M^2 branch at 0 < M <= 30, by continuation in M from the series regime.
inline DBranchPoint eval_D_branch(const BigRational& M, const MultiPoly& D = data::d_curve()) {
  if (!(sgn(M) > 0 && M <= 30)) throw DomainError("eval_D_branch needs 0 < M <= 30");
  static const std::vector<BigRational> series = d_branch_series(6);
  auto series_at = [&](const BigRational& m) {
    double x = to_double(m), s = 0;
    for (std::size_t j = 0; j < series.size(); ++j) s += to_double(series[j]) * std::pow(x, static_cast<double>(j));
    return s;
  };
  MultiPoly F = D.with_vars({"M", "B"});
  auto roots_at = [&](const BigRational& m) {
    ZPoly p = F.eval("M", m).with_vars({"B"}).to_uni("B").to_primitive_z();
    auto ivs = isolate_roots(p, Endpoint::neg_inf(), Endpoint::pos_inf());
    for (auto& iv : ivs) refine(p, iv, make_q(1, 1 << 30) * (1 + m * m));
    return std::make_pair(p, ivs);
  };
  const BigRational start = make_q(1, 20);
  std::vector<BigRational> path;
  if (M <= start) {
    path.push_back(M);
  } else {
    int steps = static_cast<int>(std::ceil(to_double((M - start) / make_q(1, 20))));
    for (int i = 0; i <= steps; ++i) path.push_back(start + (M - start) * i / steps);
  }
  double prev = series_at(path.front()), prev2 = prev;
  BigRational prev_m = path.front(), prev2_m = prev_m;
  DBranchPoint out;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const BigRational& m = path[k];
    double guess = prev;
    if (k >= 2) guess = prev + (prev - prev2) * to_double((m - prev_m) / (prev_m - prev2_m));
    else if (k == 0) guess = series_at(m);
    auto [p, ivs] = roots_at(m);
    if (ivs.empty()) throw BranchTrackingError("D(M, .) has no real root at M = " + to_fraction(m));
    std::size_t best = 0;
    for (std::size_t i = 1; i < ivs.size(); ++i)
      if (std::abs(ivs[i].approx() - guess) < std::abs(ivs[best].approx() - guess)) best = i;
    double got = ivs[best].approx();
    double scale = std::max(1e-12, std::abs(guess));
    if (k == 0 && std::abs(got - guess) > 1e-2 * scale) throw BranchTrackingError("no root of D near (3/7) M^2 at M = " + to_fraction(m));
    prev2 = prev;
    prev2_m = prev_m;
    prev = got;
    prev_m = m;
    out = {m, ivs[best], got};
  }
  return out;
}

}  // namespace saddleloop
