#pragma once

#include <string>
#include <utility>

#include "dense.hpp"
#include "multipoly.hpp"
#include "unipoly.hpp"

namespace saddleloop {

// Quotient of integer polynomials in one variable, kept reduced:
// gcd(num, den) = 1 (including integer content) and den has a positive leading coefficient.
class RationalFunction {
 public:
  RationalFunction() : den_(BigInt(1)) {}
  RationalFunction(const BigRational& q, std::string var = "s")
      : var_(std::move(var)), num_(BigInt(q.get_num())), den_(BigInt(q.get_den())) {}
  RationalFunction(ZPoly num, ZPoly den, std::string var = "s") : var_(std::move(var)), num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }
  RationalFunction(const UniPoly& num, const UniPoly& den) : var_(num.var()) {
    if (den.is_zero()) throw MalformedInput("rational function with zero denominator");
    // bring both to a common integer scale
    BigInt ln = 1, ld = 1;
    for (const auto& q : num.coeffs()) ln = lcm_z(ln, q.get_den());
    for (const auto& q : den.coeffs()) ld = lcm_z(ld, q.get_den());
    BigInt l = lcm_z(ln, ld);
    for (const auto& q : num.coeffs()) num_.c.push_back(q.get_num() * (l / q.get_den()));
    for (const auto& q : den.coeffs()) den_.c.push_back(q.get_num() * (l / q.get_den()));
    num_.trim();
    den_.trim();
    normalize();
  }
  static RationalFunction variable(std::string var = "s") {
    return RationalFunction(ZPoly(std::vector<BigInt>{0, 1}), ZPoly(BigInt(1)), std::move(var));
  }

  const std::string& var() const { return var_; }
  const ZPoly& num_z() const { return num_; }
  const ZPoly& den_z() const { return den_; }
  UniPoly numerator() const { return UniPoly::from_z(num_, var_); }
  UniPoly denominator() const { return UniPoly::from_z(den_, var_); }
  bool is_zero() const { return num_.is_zero(); }

  BigRational operator()(const BigRational& x) const {
    BigRational d = eval_q(den_, x);
    if (sgn(d) == 0) throw DomainError("rational function pole at evaluation point");
    return eval_q(num_, x) / d;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_, a.var_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, a.var_);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction(BigRational(0), a.var_);
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_, a.var_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DomainError("division by zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_, a.var_);
  }
  friend RationalFunction operator*(long k, const RationalFunction& a) { return RationalFunction(BigRational(k), a.var_) * a; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  std::string to_string() const {
    return "(" + numerator().to_string() + ")/(" + denominator().to_string() + ")";
  }

 private:
  static BigRational eval_q(const ZPoly& p, const BigRational& x) {
    BigRational acc = 0;
    for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * x + p.c[i];
    return acc;
  }
  void normalize() {
    if (den_.is_zero()) throw MalformedInput("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = ZPoly(BigInt(1));
      return;
    }
    ZPoly g = gcd(num_, den_);
    if (!(g.degree() == 0 && g.c[0] == 1)) {
      num_ = divexact(num_, g);
      den_ = divexact(den_, g);
    }
    if (sgn(den_.lc()) < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  std::string var_ = "s";
  ZPoly num_;
  ZPoly den_;
};

// p with `var` replaced by value = n/d: returns (numerator, d^k) where k = deg_var p, so that
// p(var = value) = numerator / d^k identically. The value's own variable joins the variable list.
inline std::pair<MultiPoly, UniPoly> substitute(const MultiPoly& p, const std::string& var, const RationalFunction& value) {
  if (value.den_z().is_zero()) throw MalformedInput("substituted value has zero denominator");
  int k = p.degree(var);
  if (k < 0) k = 0;
  std::vector<std::string> nv;
  for (const auto& v : p.vars())
    if (v != var) nv.push_back(v);
  if (std::find(nv.begin(), nv.end(), value.var()) == nv.end()) nv.push_back(value.var());
  MultiPoly n = MultiPoly::from_uni(value.numerator(), nv, value.var());
  MultiPoly d = MultiPoly::from_uni(value.denominator(), nv, value.var());
  std::vector<MultiPoly> npow{MultiPoly::constant(nv, 1)}, dpow{MultiPoly::constant(nv, 1)};
  for (int i = 1; i <= k; ++i) {
    npow.push_back(npow.back() * n);
    dpow.push_back(dpow.back() * d);
  }
  MultiPoly out(nv);
  for (int e = 0; e <= k; ++e) {
    MultiPoly c = p.coefficient(var, e);
    if (c.is_zero()) continue;
    std::vector<std::string> keep;
    for (const auto& v : c.vars())
      if (v != var) keep.push_back(v);
    MultiPoly rest = c.with_vars(keep);
    out = out + rest * npow[static_cast<std::size_t>(e)] * dpow[static_cast<std::size_t>(k - e)];
  }
  UniPoly den = UniPoly::constant(1, value.var());
  UniPoly dd = value.denominator();
  for (int i = 0; i < k; ++i) den = den * dd;
  return {out, den};
}

}  // namespace saddleloop
