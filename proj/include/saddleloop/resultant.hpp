#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "dense.hpp"
#include "multipoly.hpp"

namespace saddleloop {

namespace detail {

template <class D>
MultiPoly resultant_nested(const MultiPoly& p, const MultiPoly& q, const std::vector<std::string>& order) {
  BigInt sp, sq;
  D a = to_dense<D>(p, order, &sp), b = to_dense<D>(q, order, &sq);
  auto r = resultant_subres(a, b);
  // res(a/sp, b/sq) = res(a, b) / (sp^deg b * sq^deg a)
  BigInt scale = pow_z(sp, static_cast<unsigned long>(b.degree())) * pow_z(sq, static_cast<unsigned long>(a.degree()));
  std::vector<std::string> rest(order.begin() + 1, order.end());
  return from_dense(r, rest, BigRational(1) / BigRational(scale));
}

}  // namespace detail

// Resultant with respect to `var`, equal to the Sylvester determinant of (p, q).
inline MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
  if (!(p.has_var(var) || q.has_var(var))) throw DegreeError("resultant variable '" + var + "' absent from both inputs");
  std::vector<std::string> all = p.vars();
  for (const auto& v : q.vars())
    if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
  if (std::find(all.begin(), all.end(), var) == all.end()) all.push_back(var);
  MultiPoly P = p.with_vars(all), Q = q.with_vars(all);
  if (P.degree(var) <= 0 && Q.degree(var) <= 0) throw DegreeError("resultant variable '" + var + "' absent from both inputs");
  std::vector<std::string> order{var};
  for (const auto& v : all)
    if (v != var && (P.degree(v) > 0 || Q.degree(v) > 0)) order.push_back(v);
  std::vector<std::string> rest;
  for (const auto& v : all)
    if (v != var) rest.push_back(v);
  MultiPoly r;
  switch (order.size()) {
    case 1: {
      BigInt sp, sq;
      ZPoly a = to_dense<ZPoly>(P, order, &sp), b = to_dense<ZPoly>(Q, order, &sq);
      BigInt v = resultant_subres(a, b);
      BigInt scale = pow_z(sp, static_cast<unsigned long>(b.degree())) * pow_z(sq, static_cast<unsigned long>(a.degree()));
      r = MultiPoly::constant({}, make_q(v, scale));
      break;
    }
    case 2:
      r = detail::resultant_nested<ZPoly2>(P, Q, order);
      break;
    case 3:
      r = detail::resultant_nested<ZPoly3>(P, Q, order);
      break;
    default:
      throw DegreeError("resultant supports at most two parameters besides the eliminated variable");
  }
  return r.with_vars(rest);
}

// (-1)^(n(n-1)/2) res(p, dp/dvar) / lc(p), n = deg_var p.
inline MultiPoly discriminant(const MultiPoly& p, const std::string& var) {
  int n = p.degree(var);
  if (n < 1) throw DegreeError("discriminant needs positive degree");
  MultiPoly r = resultant(p, p.derivative(var), var);
  MultiPoly lc = p.coefficient(var, n);
  std::vector<std::string> rest;
  for (const auto& v : p.vars())
    if (v != var) rest.push_back(v);
  MultiPoly d = divexact(r, lc.with_vars(rest));
  return ((n * (n - 1) / 2) % 2) ? -d : d;
}

// Sylvester matrix of p, q in var (rows of q-shifts follow rows of p-shifts).
inline std::vector<std::vector<MultiPoly>> sylvester_matrix(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
  int m = p.degree(var), n = q.degree(var);
  std::vector<std::string> rest;
  std::vector<std::string> all = p.vars();
  for (const auto& v : q.vars())
    if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
  for (const auto& v : all)
    if (v != var) rest.push_back(v);
  MultiPoly zero(rest);
  int size = m + n;
  std::vector<std::vector<MultiPoly>> S(static_cast<std::size_t>(size), std::vector<MultiPoly>(static_cast<std::size_t>(size), zero));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= m; ++k) S[i][i + k] = p.coefficient(var, m - k).with_vars(all).with_vars(rest);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k <= n; ++k) S[n + i][i + k] = q.coefficient(var, n - k).with_vars(all).with_vars(rest);
  return S;
}

// Fraction-free (Bareiss) determinant.
inline MultiPoly bareiss_determinant(std::vector<std::vector<MultiPoly>> A) {
  std::size_t n = A.size();
  if (n == 0) return MultiPoly::constant({}, 1);
  std::vector<std::string> vars = A[0][0].vars();
  MultiPoly prev = MultiPoly::constant(vars, 1);
  bool neg = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && A[p][k].is_zero()) ++p;
      if (p == n) return MultiPoly(vars);
      std::swap(A[k], A[p]);
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) A[i][j] = divexact(A[k][k] * A[i][j] - A[i][k] * A[k][j], prev);
      A[i][k] = MultiPoly(vars);
    }
    prev = A[k][k];
  }
  return neg ? -A[n - 1][n - 1] : A[n - 1][n - 1];
}

// Determinant of a rational matrix by Gaussian elimination over Q.
inline BigRational rational_determinant(std::vector<std::vector<BigRational>> A) {
  std::size_t n = A.size();
  BigRational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && sgn(A[p][k]) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(A[p], A[k]);
      det = -det;
    }
    det *= A[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(A[i][k]) == 0) continue;
      BigRational f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
    }
  }
  return det;
}

// Oracle resultant straight from the Sylvester determinant.
inline MultiPoly sylvester_resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var) {
  return bareiss_determinant(sylvester_matrix(p, q, var));
}

}  // namespace saddleloop
