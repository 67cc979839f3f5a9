#pragma once

// Taylor coefficients of the saddle separatrices y = Phi(x) = sum a_k x^k of the MB form,
// from the invariance identity  Phi'(x) Phi(x) = c1 x + c2 Phi(x) + x^2 + x Phi(x).
// Order by order (k >= 2):
//   a_k (k a_1 - a_1') = [k == 2] + a_{k-1} - sum_{i+j=k+1, 2<=i,j<=k-1} i a_i a_j,
// where a_1 is the branch's eigenvalue and a_1' the other one (a_1 + a_1' = c2, a_1 a_1' = -c1).

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "btmodel.hpp"
#include "ratfunc.hpp"

namespace saddleloop {

struct ResonanceError : std::domain_error {
  using std::domain_error::domain_error;
};

namespace detail {

inline bool coeff_is_zero(const BigRational& v) { return sgn(v) == 0; }
inline bool coeff_is_zero(const RationalFunction& v) { return v.is_zero(); }
inline bool coeff_is_zero(double v) { return v == 0.0; }

template <class T>
T lift(long k, const T& like);
template <>
inline BigRational lift(long k, const BigRational&) {
  return BigRational(k);
}
template <>
inline double lift(long k, const double&) {
  return static_cast<double>(k);
}
template <>
inline RationalFunction lift(long k, const RationalFunction& like) {
  return RationalFunction(BigRational(k), like.var());
}

}  // namespace detail

// a_1..a_N (index 0 unused and zero).
template <class T>
std::vector<T> separatrix_coefficients(const T& a1, const T& a1_other, int N) {
  std::vector<T> a{detail::lift<T>(0, a1), a1};
  for (int k = 2; k <= N; ++k) {
    T rhs = a[static_cast<std::size_t>(k - 1)];
    if (k == 2) rhs = rhs + detail::lift<T>(1, a1);
    for (int i = 2; i <= k - 1; ++i) {
      int j = k + 1 - i;
      if (j < 2 || j > k - 1) continue;
      rhs = rhs - detail::lift<T>(i, a1) * a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)];
    }
    T den = detail::lift<T>(k, a1) * a1 - a1_other;
    if (detail::coeff_is_zero(den)) throw ResonanceError("resonant separatrix recurrence at order " + std::to_string(k));
    a.push_back(rhs / den);
  }
  return a;
}

enum class Branch { Unstable, Stable };  // slope B+M resp. B-M at the origin
enum class SeriesMode { Exact, Floating, SymbolicS };

struct SeparatrixSeries {
  Branch branch = Branch::Unstable;
  SeriesMode mode = SeriesMode::Exact;
  std::vector<BigRational> exact;        // Exact mode
  std::vector<double> floating;          // Floating mode
  std::vector<RationalFunction> symbolic;  // SymbolicS mode, rational functions of s
  // linear data of the field: c1 = M^2 - B^2, c2 = 2B, in the mode's representation
  BigRational c1_exact, c2_exact;
  double c1_float = 0, c2_float = 0;
  RationalFunction c1_sym, c2_sym;

  int order() const {
    switch (mode) {
      case SeriesMode::Exact:
        return static_cast<int>(exact.size()) - 1;
      case SeriesMode::Floating:
        return static_cast<int>(floating.size()) - 1;
      default:
        return static_cast<int>(symbolic.size()) - 1;
    }
  }
  double value_double(int k) const {
    switch (mode) {
      case SeriesMode::Exact:
        return exact[static_cast<std::size_t>(k)].get_d();
      case SeriesMode::Floating:
        return floating[static_cast<std::size_t>(k)];
      default:
        throw DomainError("symbolic coefficient has no numeric value");
    }
  }
};

// Along 7b = 5m with M = (7s+3s^2)/(6s+7), B = 3s^2/(6s+7): c1 = 7s^2/(6s+7), c2 = 6s^2/(6s+7),
// a_1^+ = s and a_1^- = -7s/(6s+7).
inline RationalFunction s_c1() { return RationalFunction(ZPoly(std::vector<BigInt>{0, 0, 7}), ZPoly(std::vector<BigInt>{7, 6}), "s"); }
inline RationalFunction s_c2() { return RationalFunction(ZPoly(std::vector<BigInt>{0, 0, 6}), ZPoly(std::vector<BigInt>{7, 6}), "s"); }
inline RationalFunction s_slope(Branch b) {
  if (b == Branch::Unstable) return RationalFunction::variable("s");
  return RationalFunction(ZPoly(std::vector<BigInt>{0, -7}), ZPoly(std::vector<BigInt>{7, 6}), "s");
}

inline SeparatrixSeries series_symbolic(Branch branch, int N) {
  if (N < 1) throw ParameterError("series order must be at least 1");
  Branch other = branch == Branch::Unstable ? Branch::Stable : Branch::Unstable;
  SeparatrixSeries s;
  s.branch = branch;
  s.mode = SeriesMode::SymbolicS;
  s.symbolic = separatrix_coefficients(s_slope(branch), s_slope(other), N);
  s.c1_sym = s_c1();
  s.c2_sym = s_c2();
  return s;
}

// Exact mode needs M rational; floating mode works from any (M,B).
inline SeparatrixSeries series_numeric(const ParamsMB& p, Branch branch, int N, bool exact = true) {
  if (N < 1) throw ParameterError("series order must be at least 1");
  SeparatrixSeries s;
  s.branch = branch;
  if (exact) {
    if (!p.M_exact || !p.B_exact) throw DomainError("exact series needs rational M and B");
    const BigRational &M = *p.M_exact, &B = *p.B_exact;
    if (sgn(M) == 0) throw DomainError("degenerate saddle: M = 0");
    BigRational up = B + M, down = B - M;
    s.mode = SeriesMode::Exact;
    s.exact = branch == Branch::Unstable ? separatrix_coefficients(up, down, N) : separatrix_coefficients(down, up, N);
    s.c1_exact = M * M - B * B;
    s.c2_exact = 2 * B;
  } else {
    if (p.M == 0) throw DomainError("degenerate saddle: M = 0");
    double up = p.B + p.M, down = p.B - p.M;
    s.mode = SeriesMode::Floating;
    s.floating = branch == Branch::Unstable ? separatrix_coefficients(up, down, N) : separatrix_coefficients(down, up, N);
    s.c1_float = p.M * p.M - p.B * p.B;
    s.c2_float = 2 * p.B;
  }
  return s;
}

inline SeparatrixSeries series_numeric(const ParamsMb& p, Branch branch, int N, bool exact = true) {
  return series_numeric(to_MB(p), branch, N, exact);
}

// The symbolic series with s replaced by a rational value.
inline SeparatrixSeries substitute_s(const SeparatrixSeries& s, const BigRational& v) {
  if (s.mode != SeriesMode::SymbolicS) throw DomainError("series is not symbolic");
  SeparatrixSeries r;
  r.branch = s.branch;
  r.mode = SeriesMode::Exact;
  r.exact.push_back(0);
  for (std::size_t k = 1; k < s.symbolic.size(); ++k) r.exact.push_back(s.symbolic[k](v));
  r.c1_exact = s.c1_sym(v);
  r.c2_exact = s.c2_sym(v);
  return r;
}

namespace detail {

// coefficient of x^k in Phi' Phi - c1 x - c2 Phi - x^2 - x Phi, using a_1..a_k
template <class T>
T residual_coefficient(const std::vector<T>& a, const T& c1, const T& c2, int k) {
  T r = lift<T>(0, c1);
  for (int i = 1; i <= k; ++i) {
    int j = k + 1 - i;
    if (j < 1 || j > k) continue;
    r = r + lift<T>(i, c1) * a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)];
  }
  if (k == 1) r = r - c1;
  r = r - c2 * a[static_cast<std::size_t>(k)];
  if (k == 2) r = r - lift<T>(1, c1);
  if (k >= 2) r = r - a[static_cast<std::size_t>(k - 1)];
  return r;
}

template <class T>
int residual_order(const std::vector<T>& a, const T& c1, const T& c2, double tol) {
  int N = static_cast<int>(a.size()) - 1;
  for (int k = 1; k <= N; ++k) {
    T r = residual_coefficient(a, c1, c2, k);
    bool ok;
    if constexpr (std::is_same_v<T, double>)
      ok = std::abs(r) <= tol * (1 + std::abs(a[static_cast<std::size_t>(k)]));
    else
      ok = coeff_is_zero(r);
    if (!ok) return k - 1;
  }
  return N;
}

}  // namespace detail

// Largest K such that the invariance identity holds through x^K (exactly; relatively within
// 1e-12 in floating mode).
inline int verify_residual(const SeparatrixSeries& s) {
  switch (s.mode) {
    case SeriesMode::Exact:
      return detail::residual_order(s.exact, s.c1_exact, s.c2_exact, 0);
    case SeriesMode::Floating:
      return detail::residual_order(s.floating, s.c1_float, s.c2_float, 1e-12);
    default:
      return detail::residual_order(s.symbolic, s.c1_sym, s.c2_sym, 0);
  }
}

}  // namespace saddleloop
