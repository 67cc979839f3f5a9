#pragma once

// The Bogdanov-Takens system
//     x' = y,  y' = -m^2 + b y + x^2 + x y,   m > 0,
// in its three charts: original (m,b), shifted (saddle at the origin), and the (M,B) chart
//     y' = (M^2 - B^2) x + 2 B y + x^2 + x y,  M^2 = ((b+m)^2 + 8m)/4,  B = (b+m)/2.

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "multipoly.hpp"
#include "rational.hpp"
#include "roots.hpp"

namespace saddleloop {

struct UnsupportedOrder : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// (m, b). Exact values are kept when the parameters are rational.
struct ParamsMb {
  double m = 0, b = 0;
  std::optional<BigRational> m_exact, b_exact;

  static ParamsMb exact(const BigRational& m, const BigRational& b) { return {m.get_d(), b.get_d(), m, b}; }
  static ParamsMb approx(double m, double b) { return {m, b, std::nullopt, std::nullopt}; }
  bool is_exact() const { return m_exact && b_exact; }
  double n() const { return m * m; }
};

// (M, B). M^2 is exact whenever (m, b) was; M itself only when M^2 is a rational square.
struct ParamsMB {
  double M = 0, B = 0;
  std::optional<BigRational> Msquared, M_exact, B_exact;

  static ParamsMB exact(const BigRational& M, const BigRational& B) { return {M.get_d(), B.get_d(), M * M, M, B}; }
  static ParamsMB from_Msquared(const BigRational& M2, const BigRational& B) {
    if (sgn(M2) < 0) throw DomainError("M^2 must be nonnegative");
    ParamsMB p{std::sqrt(M2.get_d()), B.get_d(), M2, std::nullopt, B};
    BigInt rn, rd;
    if (mpz_perfect_square_p(M2.get_num_mpz_t()) && mpz_perfect_square_p(M2.get_den_mpz_t())) {
      mpz_sqrt(rn.get_mpz_t(), M2.get_num_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), M2.get_den_mpz_t());
      p.M_exact = make_q(rn, rd);
    }
    return p;
  }
  static ParamsMB approx(double M, double B) { return {M, B, std::nullopt, std::nullopt, std::nullopt}; }
  bool is_exact() const { return Msquared && B_exact; }
  // c1 = M^2 - B^2 (= 2m) and c2 = 2B, the linear coefficients of the MB form
  double c1() const { return is_exact() ? BigRational(*Msquared - *B_exact * *B_exact).get_d() : M * M - B * B; }
  double c2() const { return 2 * B; }
};

inline ParamsMB to_MB(const ParamsMb& p) {
  if (p.m <= 0 || (p.m_exact && sgn(*p.m_exact) <= 0)) throw DomainError("m must be positive");
  if (p.is_exact()) {
    const BigRational &m = *p.m_exact, &b = *p.b_exact;
    return ParamsMB::from_Msquared(BigRational(((b + m) * (b + m) + 8 * m) / 4), BigRational((b + m) / 2));
  }
  return ParamsMB::approx(std::sqrt(((p.b + p.m) * (p.b + p.m) + 8 * p.m) / 4), (p.b + p.m) / 2);
}

// Inverse chart map: m = (M^2 - B^2)/2, b = 2B - m. Requires M^2 > B^2.
inline ParamsMb to_mb(const ParamsMB& p) {
  if (p.is_exact()) {
    BigRational c1 = *p.Msquared - *p.B_exact * *p.B_exact;
    if (sgn(c1) <= 0) throw DomainError("inverse chart map needs M^2 > B^2");
    BigRational m = c1 / 2;
    return ParamsMb::exact(m, 2 * *p.B_exact - m);
  }
  double c1 = p.M * p.M - p.B * p.B;
  if (!(c1 > 0)) throw DomainError("inverse chart map needs M^2 > B^2");
  return ParamsMb::approx(c1 / 2, 2 * p.B - c1 / 2);
}

// Region R of the (M,B) chart: B>0, M>0, 3B^2+8B>3M^2, B^2+2B<M^2, B>M-1.
// Exact whenever M^2 and B are; B > M-1 is tested as B+1 > 0 and (B+1)^2 > M^2.
inline bool region_R_contains(const ParamsMB& p) {
  if (p.is_exact()) {
    const BigRational &M2 = *p.Msquared, &B = *p.B_exact;
    if (sgn(B) <= 0 || sgn(M2) <= 0) return false;
    if (p.M_exact && sgn(*p.M_exact) <= 0) return false;
    if (!(3 * B * B + 8 * B > 3 * M2)) return false;
    if (!(B * B + 2 * B < M2)) return false;
    BigRational B1 = B + 1;
    return B1 * B1 > M2;
  }
  double M = p.M, B = p.B;
  return B > 0 && M > 0 && 3 * B * B + 8 * B > 3 * M * M && B * B + 2 * B < M * M && B > M - 1;
}

// Lower and upper bounds of b*(m) with their midpoint:
//   b_l = max(5m/7, m-1),  b_u = min((5 + 37m/12) m / (7 + 37m/12), m - 1 + 25/(7m)).
struct BoundsPair {
  BigRational b_lower, b_upper, b_mid;
  BigRational half_gap() const { return (b_upper - b_lower) / 2; }
};

inline BigRational lower_bound_exact(const BigRational& m) { return std::max(BigRational(5 * m / 7), BigRational(m - 1)); }
inline BigRational upper_bound_exact(const BigRational& m) {
  BigRational k = 37 * m / 12;
  return std::min(BigRational((5 + k) * m / (7 + k)), BigRational(m - 1 + 25 / (7 * m)));
}

inline BoundsPair bounds_pair(const BigRational& m) {
  if (sgn(m) <= 0) throw DomainError("bounds need m > 0");
  BoundsPair r{lower_bound_exact(m), upper_bound_exact(m), 0};
  r.b_mid = (r.b_lower + r.b_upper) / 2;
  return r;
}

inline double lower_bound(double m) { return std::max(5 * m / 7, m - 1); }
inline double upper_bound(double m) {
  double k = 37 * m / 12;
  return std::min((5 + k) * m / (7 + k), m - 1 + 25 / (7 * m));
}

// Perko's parameters: mu1 = (b - m)/sqrt(2m), mu2 = sqrt(2m); so mu1*mu2 = b - m exactly.
struct PerkoParams {
  double mu1 = 0, mu2 = 0;
};

inline PerkoParams perko_transform(const ParamsMb& p) {
  if (!(p.m > 0)) throw DomainError("Perko form needs m > 0");
  double r = std::sqrt(2 * p.m);
  double diff = p.is_exact() ? BigRational(*p.b_exact - *p.m_exact).get_d() : p.b - p.m;
  return {diff / r, r};
}

inline ParamsMb perko_inverse(const PerkoParams& q) {
  if (!(q.mu2 > 0)) throw DomainError("the m > 0 branch needs mu2 > 0");
  double m = q.mu2 * q.mu2 / 2;
  return ParamsMb::approx(m, m + q.mu1 * q.mu2);
}

// mu1 * mu2 = b - m, kept exact.
inline BigRational perko_product(const ParamsMb& p) {
  if (!p.is_exact()) throw DomainError("exact parameters required");
  if (sgn(*p.m_exact) <= 0) throw DomainError("Perko form needs m > 0");
  return *p.b_exact - *p.m_exact;
}

// The curve mu1 = f(mu2) read in the (m,b) chart: b = m + sqrt(2m) f(sqrt(2m)).
template <class Fn>
double perko_pullback(Fn&& f, double m) {
  double r = std::sqrt(2 * m);
  return m + r * f(r);
}

// ---------------------------------------------------------------- vector field forms

enum class FormTag { Original, Shifted, MBForm };

// x' = P, y' = Q with numeric parameters substituted; P = y in every form.
struct VectorFieldForm {
  FormTag tag = FormTag::Original;
  MultiPoly P, Q;  // over {x, y}
  ParamsMb mb;     // the parameters it was built from (for Original/Shifted)
  ParamsMB MB;     // (for MBForm)
};

namespace detail {
inline BigRational exact_or_double(const std::optional<BigRational>& q, double v) { return q ? *q : from_double(v); }
inline MultiPoly field_poly(const BigRational& c0, const BigRational& cx, const BigRational& cy) {
  const std::vector<std::string> xy{"x", "y"};
  MultiPoly x = MultiPoly::variable(xy, "x"), y = MultiPoly::variable(xy, "y");
  return MultiPoly::constant(xy, c0) + x * cx + y * cy + x * x + x * y;
}
}  // namespace detail

inline VectorFieldForm original_form(const ParamsMb& p) {
  BigRational m = detail::exact_or_double(p.m_exact, p.m), b = detail::exact_or_double(p.b_exact, p.b);
  return {FormTag::Original, MultiPoly::variable({"x", "y"}, "y"), detail::field_poly(-m * m, 0, b), p, {}};
}

// (x, y) -> (x + m, y): y' = 2m x + (b + m) y + x^2 + x y.
inline VectorFieldForm shifted_form(const ParamsMb& p) {
  BigRational m = detail::exact_or_double(p.m_exact, p.m), b = detail::exact_or_double(p.b_exact, p.b);
  return {FormTag::Shifted, MultiPoly::variable({"x", "y"}, "y"), detail::field_poly(0, 2 * m, b + m), p, {}};
}

inline VectorFieldForm mb_form(const ParamsMB& p) {
  BigRational M2 = p.Msquared ? *p.Msquared : from_double(p.M * p.M);
  BigRational B = detail::exact_or_double(p.B_exact, p.B);
  return {FormTag::MBForm, MultiPoly::variable({"x", "y"}, "y"), detail::field_poly(0, M2 - B * B, 2 * B), {}, p};
}

struct CriticalPoint {
  enum Kind { Saddle, Focus, Node, Degenerate } kind = Degenerate;
  double x = 0, y = 0;
  std::complex<double> lambda1, lambda2;  // lambda1 >= lambda2 when real
  std::optional<BigRational> x_exact;
  // For a saddle: the eigendirections (1, lambda) have slopes lambda1 (unstable) and lambda2 (stable).
  double unstable_slope() const { return lambda1.real(); }
  double stable_slope() const { return lambda2.real(); }
};

// Critical points on y = 0: roots of Q(x, 0), classified through the Jacobian [[0,1],[Q_x, Q_y]].
inline std::vector<CriticalPoint> critical_points(const VectorFieldForm& f) {
  // Q(x,0) = x^2 + q1 x + q0
  BigRational q0 = f.Q.eval("x", 0).eval("y", 0).eval_all({0, 0});
  BigRational q1 = f.Q.derivative("x").eval("x", 0).eval("y", 0).eval_all({0, 0});
  double disc = to_double(q1 * q1 - 4 * q0);
  std::vector<CriticalPoint> out;
  if (disc < 0) return out;
  std::vector<double> xs;
  double sq = std::sqrt(disc);
  xs.push_back((-q1.get_d() + sq) / 2);
  if (sq > 0) xs.push_back((-q1.get_d() - sq) / 2);
  MultiPoly Qx = f.Q.derivative("x"), Qy = f.Q.derivative("y");
  for (double x : xs) {
    CriticalPoint c;
    c.x = x;
    double a = Qx.eval_double({x, 0}), t = Qy.eval_double({x, 0});
    // det J = -Q_x, tr J = Q_y
    double det = -a, d2 = t * t - 4 * det;
    std::complex<double> r = std::sqrt(std::complex<double>(d2, 0));
    c.lambda1 = (t + r) / 2.0;
    c.lambda2 = (t - r) / 2.0;
    c.kind = det < 0 ? CriticalPoint::Saddle : (det > 0 ? (d2 < 0 ? CriticalPoint::Focus : CriticalPoint::Node) : CriticalPoint::Degenerate);
    out.push_back(c);
  }
  // exact abscissae where they are rational
  BigRational dq = q1 * q1 - 4 * q0;
  if (mpz_perfect_square_p(dq.get_num_mpz_t()) && mpz_perfect_square_p(dq.get_den_mpz_t())) {
    BigInt rn, rd;
    mpz_sqrt(rn.get_mpz_t(), dq.get_num_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), dq.get_den_mpz_t());
    BigRational r = make_q(rn, rd);
    out[0].x_exact = (-q1 + r) / 2;
    if (out.size() > 1) out[1].x_exact = (-q1 - r) / 2;
  }
  return out;
}

// ---------------------------------------------------------------- chart images of curves

// The (m,b) image of a curve f(M,B) = 0. If f is even in M it is a direct substitution
// of M^2 = ((b+m)^2+8m)/4, B = (b+m)/2; otherwise, with f = f0(M^2,B) + M f1(M^2,B),
// the image is f0^2 - M^2 f1^2 (the product of the two sign branches of M).
inline MultiPoly mb_image(const MultiPoly& f) {
  const std::vector<std::string> mb{"m", "b"};
  MultiPoly m = MultiPoly::variable(mb, "m"), b = MultiPoly::variable(mb, "b");
  MultiPoly Q = ((b + m) * (b + m) + m * BigRational(8)) * make_q(1, 4);
  MultiPoly Bv = (b + m) * make_q(1, 2);
  MultiPoly F = f.with_vars({"M", "B"});
  MultiPoly f0(mb), f1(mb);
  int dM = std::max(0, F.degree("M")), dB = std::max(0, F.degree("B"));
  std::vector<MultiPoly> qp{MultiPoly::constant(mb, 1)}, bp{MultiPoly::constant(mb, 1)};
  for (int i = 1; i <= dM / 2; ++i) qp.push_back(qp.back() * Q);
  for (int j = 1; j <= dB; ++j) bp.push_back(bp.back() * Bv);
  for (const auto& [e, c] : F.terms()) {
    MultiPoly t = qp[static_cast<std::size_t>(e[0] / 2)] * bp[static_cast<std::size_t>(e[1])] * c;
    if (e[0] % 2 == 0)
      f0 = f0 + t;
    else
      f1 = f1 + t;
  }
  if (f1.is_zero()) return f0;
  return f0 * f0 - Q * f1 * f1;
}

// ---------------------------------------------------------------- invariant line and Dulac function

struct DulacCertificate {
  bool holds = false;
  MultiPoly residual;  // (P_x + Q_y) L - (P L_x + Q L_y) + L
};

// Residual of div(P/L, Q/L) = -1/L for the original form with L = x + y - m, the parameters given as
// polynomials over any parameter variables. The identity is exact when the residual is zero.
inline DulacCertificate dulac_residual(const MultiPoly& m, const MultiPoly& b) {
  std::vector<std::string> vars{"x", "y"};
  for (const auto* p : {&m, &b})
    for (const auto& v : p->vars())
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  MultiPoly M = m.with_vars(vars), Bp = b.with_vars(vars);
  MultiPoly x = MultiPoly::variable(vars, "x"), y = MultiPoly::variable(vars, "y");
  MultiPoly P = y, Q = -(M * M) + Bp * y + x * x + x * y;
  MultiPoly L = x + y - M;
  MultiPoly div = P.derivative("x") + Q.derivative("y");
  MultiPoly res = div * L - (P * L.derivative("x") + Q * L.derivative("y")) + L;
  return {res.is_zero(), res};
}

// b = m - 1 with m symbolic.
inline DulacCertificate dulac_identity_check() {
  MultiPoly m = MultiPoly::variable({"m"}, "m");
  return dulac_residual(m, m - MultiPoly::constant({"m"}, 1));
}

// ---------------------------------------------------------------- Melnikov series near m = 0

inline const std::vector<BigRational>& melnikov_coefficients() {
  static const std::vector<BigRational> c{make_q(5, 7), make_q(72, 2401), make_q(-30024, 45294865),
                                          make_q(BigInt("-2352961656"), BigInt("11108339166925"))};
  return c;
}

struct MelnikovValue {
  std::vector<BigRational> coefficients;  // of m, m^2, ..., m^order
  double value = 0;
};

inline BigRational melnikov_partial_sum(const BigRational& m, int order) {
  if (order < 1 || order > 4) throw UnsupportedOrder("only the first four series coefficients are known");
  BigRational acc = 0;
  for (int k = order; k >= 1; --k) acc = (acc + melnikov_coefficients()[static_cast<std::size_t>(k - 1)]) * m;
  return acc;
}

inline MelnikovValue melnikov_series(double m, int order = 4) {
  if (order < 1 || order > 4) throw UnsupportedOrder("only the first four series coefficients are known");
  MelnikovValue r;
  r.coefficients.assign(melnikov_coefficients().begin(), melnikov_coefficients().begin() + order);
  double acc = 0;
  for (int k = order; k >= 1; --k) acc = (acc + r.coefficients[static_cast<std::size_t>(k - 1)].get_d()) * m;
  r.value = acc;
  return r;
}

}  // namespace saddleloop
