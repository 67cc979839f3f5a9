#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dense.hpp"
#include "rational.hpp"

namespace saddleloop {

// Univariate polynomial with rational coefficients, lowest degree first.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<BigRational> coeffs, std::string var = "x") : var_(std::move(var)), c_(std::move(coeffs)) {
    trim();
  }
  static UniPoly constant(const BigRational& v, std::string var = "x") { return UniPoly({v}, std::move(var)); }
  static UniPoly monomial(const BigRational& v, int e, std::string var = "x") {
    std::vector<BigRational> c(static_cast<std::size_t>(e) + 1, BigRational(0));
    c.back() = v;
    return UniPoly(std::move(c), std::move(var));
  }
  static UniPoly from_z(const ZPoly& z, std::string var = "x") {
    std::vector<BigRational> c;
    c.reserve(z.c.size());
    for (const auto& v : z.c) c.emplace_back(v);
    return UniPoly(std::move(c), std::move(var));
  }

  const std::string& var() const { return var_; }
  void set_var(std::string v) { var_ = std::move(v); }
  const std::vector<BigRational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  BigRational coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[static_cast<std::size_t>(i)] : BigRational(0); }
  const BigRational& lc() const { return c_.back(); }

  BigRational operator()(const BigRational& x) const {
    BigRational acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }
  double eval_double(double x) const {
    double acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].get_d();
    return acc;
  }

  // Sign at +infinity (dir > 0) or -infinity (dir < 0).
  int sign_at_infinity(int dir) const {
    if (is_zero()) return 0;
    int s = sgn(lc());
    return (dir < 0 && (degree() & 1)) ? -s : s;
  }

  UniPoly derivative() const {
    std::vector<BigRational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
    return UniPoly(std::move(d), var_);
  }

  // Primitive integer polynomial that is a positive rational multiple of *this.
  ZPoly to_primitive_z() const {
    BigInt l = 1;
    for (const auto& q : c_) l = lcm_z(l, q.get_den());
    ZPoly z;
    z.c.reserve(c_.size());
    for (const auto& q : c_) z.c.push_back(q.get_num() * (l / q.get_den()));
    z.trim();
    if (z.is_zero()) return z;
    BigInt g = int_content(z);
    return divexact_int(z, g);
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    std::vector<BigRational> c = c_;
    BigRational l = lc();
    for (auto& q : c) q /= l;
    return UniPoly(std::move(c), var_);
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<BigRational> r(std::max(a.c_.size(), b.c_.size()), BigRational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r), a.pick_var(b));
  }
  friend UniPoly operator-(const UniPoly& a) {
    std::vector<BigRational> r = a.c_;
    for (auto& q : r) q = -q;
    return UniPoly(std::move(r), a.var_);
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly({}, a.pick_var(b));
    std::vector<BigRational> r(a.c_.size() + b.c_.size() - 1, BigRational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(r), a.pick_var(b));
  }
  friend UniPoly operator*(const BigRational& k, const UniPoly& a) {
    std::vector<BigRational> r = a.c_;
    for (auto& q : r) q *= k;
    return UniPoly(std::move(r), a.var_);
  }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  // Euclidean division over Q.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    std::vector<BigRational> r = c_;
    int dd = d.degree();
    if (degree() < dd) return {UniPoly({}, var_), *this};
    std::vector<BigRational> q(static_cast<std::size_t>(degree() - dd + 1), BigRational(0));
    for (int i = degree() - dd; i >= 0; --i) {
      BigRational t = r[static_cast<std::size_t>(i + dd)] / d.lc();
      q[static_cast<std::size_t>(i)] = t;
      if (sgn(t) == 0) continue;
      for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i + j)] -= t * d.c_[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(dd));
    return {UniPoly(std::move(q), var_), UniPoly(std::move(r), var_)};
  }

  std::string to_string() const;

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  const std::string& pick_var(const UniPoly& b) const { return var_.empty() ? b.var_ : var_; }

  std::string var_ = "x";
  std::vector<BigRational> c_;
};

// Monic gcd over Q (zero if both are zero).
inline UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() && b.is_zero()) return a;
  ZPoly g = gcd(a.to_primitive_z(), b.to_primitive_z());
  return UniPoly::from_z(g, a.var()).monic();
}

// Squarefree part p / gcd(p, p'), as a primitive integer polynomial.
inline ZPoly squarefree_part(const ZPoly& p) {
  if (p.degree() <= 0) return int_primitive(p);
  ZPoly g = gcd(p, derivative(p));
  return int_primitive(divexact(int_primitive(p), int_primitive(g)));
}

inline UniPoly squarefree_part(const UniPoly& p) { return UniPoly::from_z(squarefree_part(p.to_primitive_z()), p.var()); }

inline std::string UniPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const BigRational& q = c_[static_cast<std::size_t>(i)];
    if (sgn(q) == 0) continue;
    std::string coef = q.get_str();
    if (!out.empty()) {
      out += sgn(q) < 0 ? " - " : " + ";
      if (sgn(q) < 0) coef = BigRational(-q).get_str();
    }
    out += coef;
    if (i > 0) out += "*" + var_ + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.to_string(); }

}  // namespace saddleloop
