#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dense.hpp"
#include "rational.hpp"
#include "unipoly.hpp"

namespace saddleloop {

struct DegreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Exponents = std::vector<int>;

// Sparse polynomial over named variables with exact rational coefficients.
// Terms are kept in lexicographic order of their exponent tuples.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, BigRational>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}
  MultiPoly(std::vector<std::string> vars, TermMap terms) : vars_(std::move(vars)), terms_(std::move(terms)) { prune(); }

  static MultiPoly constant(std::vector<std::string> vars, const BigRational& c) {
    MultiPoly p(std::move(vars));
    if (sgn(c) != 0) p.terms_[Exponents(p.vars_.size(), 0)] = c;
    return p;
  }
  static MultiPoly variable(std::vector<std::string> vars, const std::string& name) {
    MultiPoly p(std::move(vars));
    Exponents e(p.vars_.size(), 0);
    e[static_cast<std::size_t>(p.index_of(name))] = 1;
    p.terms_[e] = 1;
    return p;
  }
  static MultiPoly from_uni(const UniPoly& u, std::vector<std::string> vars, const std::string& name) {
    MultiPoly p(std::move(vars));
    int k = p.index_of(name);
    for (int i = 0; i <= u.degree(); ++i) {
      if (sgn(u.coeff(i)) == 0) continue;
      Exponents e(p.vars_.size(), 0);
      e[static_cast<std::size_t>(k)] = i;
      p.terms_[e] = u.coeff(i);
    }
    return p;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  int index_of(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw DegreeError("variable '" + name + "' not present");
    return static_cast<int>(it - vars_.begin());
  }
  bool has_var(const std::string& name) const { return std::find(vars_.begin(), vars_.end(), name) != vars_.end(); }

  int degree(const std::string& name) const {
    if (!has_var(name)) return is_zero() ? -1 : 0;
    if (is_zero()) return -1;
    int k = index_of(name), d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(k)]);
    return d;
  }
  int min_degree(const std::string& name) const {
    int k = index_of(name), d = -1;
    for (const auto& [e, c] : terms_) d = d < 0 ? e[static_cast<std::size_t>(k)] : std::min(d, e[static_cast<std::size_t>(k)]);
    return d;
  }
  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (int x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  // Re-embeds into a variable list that must contain all variables carrying a nonzero exponent.
  MultiPoly with_vars(const std::vector<std::string>& nv) const {
    MultiPoly r(nv);
    std::vector<int> map(vars_.size(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto it = std::find(nv.begin(), nv.end(), vars_[i]);
      if (it != nv.end()) map[i] = static_cast<int>(it - nv.begin());
    }
    for (const auto& [e, c] : terms_) {
      Exponents ne(nv.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (map[i] < 0) throw DegreeError("variable '" + vars_[i] + "' dropped while still in use");
        ne[static_cast<std::size_t>(map[i])] = e[i];
      }
      r.terms_[ne] += c;
    }
    r.prune();
    return r;
  }

  MultiPoly rename(const std::string& from, const std::string& to) const {
    MultiPoly r = *this;
    r.vars_[static_cast<std::size_t>(index_of(from))] = to;
    return r;
  }

  // Coefficient of name^k as a polynomial over the same variable list.
  MultiPoly coefficient(const std::string& name, int k) const {
    int idx = index_of(name);
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_)
      if (e[static_cast<std::size_t>(idx)] == k) {
        Exponents ne = e;
        ne[static_cast<std::size_t>(idx)] = 0;
        r.terms_[ne] = c;
      }
    return r;
  }

  MultiPoly derivative(const std::string& name) const {
    int idx = index_of(name);
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
      int k = e[static_cast<std::size_t>(idx)];
      if (k == 0) continue;
      Exponents ne = e;
      ne[static_cast<std::size_t>(idx)] = k - 1;
      r.terms_[ne] = c * k;
    }
    return r;
  }

  // Evaluates one variable at a rational value; the variable stays in the list with exponent 0.
  MultiPoly eval(const std::string& name, const BigRational& v) const {
    int idx = index_of(name);
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
      Exponents ne = e;
      int k = ne[static_cast<std::size_t>(idx)];
      ne[static_cast<std::size_t>(idx)] = 0;
      r.terms_[ne] += c * pow_q(v, static_cast<unsigned long>(k));
    }
    r.prune();
    return r;
  }

  BigRational eval_all(const std::vector<BigRational>& point) const {
    if (point.size() != vars_.size()) throw DegreeError("point arity mismatch");
    BigRational acc = 0;
    for (const auto& [e, c] : terms_) {
      BigRational t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) t *= pow_q(point[i], static_cast<unsigned long>(e[i]));
      acc += t;
    }
    return acc;
  }

  double eval_double(const std::vector<double>& point) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
      double t = c.get_d();
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  // Univariate view; every other variable must be absent from the support.
  UniPoly to_uni(const std::string& name) const {
    int idx = index_of(name);
    std::vector<BigRational> c(static_cast<std::size_t>(std::max(degree(name), -1) + 1), BigRational(0));
    for (const auto& [e, q] : terms_) {
      for (std::size_t i = 0; i < e.size(); ++i)
        if (static_cast<int>(i) != idx && e[i] != 0) throw DegreeError("polynomial is not univariate in '" + name + "'");
      c[static_cast<std::size_t>(e[static_cast<std::size_t>(idx)])] = q;
    }
    return UniPoly(std::move(c), name);
  }

  BigInt denominator_lcm() const {
    BigInt l = 1;
    for (const auto& [e, c] : terms_) l = lcm_z(l, c.get_den());
    return l;
  }
  BigInt numerator_gcd() const {
    BigInt g = 0;
    for (const auto& [e, c] : terms_) g = gcd_z(g, c.get_num());
    return g;
  }

  // Integer polynomial with coprime coefficients and positive leading (lex-largest) coefficient.
  MultiPoly primitive() const {
    if (is_zero()) return *this;
    BigRational k(denominator_lcm(), numerator_gcd());
    k.canonicalize();
    if (sgn(terms_.rbegin()->second) < 0) k = -k;
    return *this * k;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    auto [x, y] = unify(a, b);
    for (const auto& [e, c] : y.terms_) x.terms_[e] += c;
    x.prune();
    return x;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r = a;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    auto [x, y] = unify(a, b);
    MultiPoly r(x.vars_);
    Exponents e(x.vars_.size());
    for (const auto& [ea, ca] : x.terms_)
      for (const auto& [eb, cb] : y.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.terms_[e] += ca * cb;
      }
    r.prune();
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, const BigRational& k) {
    if (sgn(k) == 0) return MultiPoly(a.vars_);
    MultiPoly r = a;
    for (auto& [e, c] : r.terms_) c *= k;
    return r;
  }
  friend MultiPoly operator*(const BigRational& k, const MultiPoly& a) { return a * k; }
  MultiPoly pow(unsigned e) const {
    MultiPoly r = constant(vars_, 1), b = *this;
    while (e) {
      if (e & 1u) r = r * b;
      e >>= 1u;
      if (e) b = b * b;
    }
    return r;
  }

  // Exact equality after aligning variable lists.
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    auto [x, y] = unify(a, b);
    return x.terms_ == y.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  // a/b if b is a nonzero constant multiple of a, otherwise 0.
  friend BigRational constant_ratio(const MultiPoly& a, const MultiPoly& b) {
    auto [x, y] = unify(a, b);
    if (x.is_zero() || y.is_zero() || x.terms_.size() != y.terms_.size()) return 0;
    BigRational k = x.terms_.begin()->second / y.terms_.begin()->second;
    auto it = y.terms_.begin();
    for (const auto& [e, c] : x.terms_) {
      if (it->first != e || c != k * it->second) return 0;
      ++it;
    }
    return k;
  }

  std::string to_string() const;

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) it = sgn(it->second) == 0 ? terms_.erase(it) : std::next(it);
  }
  static std::pair<MultiPoly, MultiPoly> unify(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ == b.vars_) return {a, b};
    std::vector<std::string> nv = a.vars_;
    for (const auto& v : b.vars_)
      if (std::find(nv.begin(), nv.end(), v) == nv.end()) nv.push_back(v);
    return {a.with_vars(nv), b.with_vars(nv)};
  }

  std::vector<std::string> vars_;
  TermMap terms_;
};

inline std::string MultiPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string coef = c.get_str();
    if (!out.empty()) {
      out += sgn(c) < 0 ? " - " : " + ";
      if (sgn(c) < 0) coef = BigRational(-c).get_str();
    }
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) mono += "*" + vars_[i] + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    bool unit = (c == 1 || c == -1) && !mono.empty();
    if (unit && out.empty() && sgn(c) < 0)
      out += "-" + mono.substr(1);
    else if (unit)
      out += mono.substr(1);
    else
      out += coef + mono;
  }
  return out;
}

// Nested dense integer form -------------------------------------------------

namespace detail {

inline void dense_put(BigInt& t, const int*, const BigInt& c) { t += c; }
template <class R>
void dense_put(Dense<R>& t, const int* e, const BigInt& c) {
  if (static_cast<int>(t.c.size()) <= e[0]) t.c.resize(static_cast<std::size_t>(e[0]) + 1);
  dense_put(t.c[static_cast<std::size_t>(e[0])], e + 1, c);
}
inline void dense_trim(BigInt&) {}
template <class R>
void dense_trim(Dense<R>& t) {
  for (auto& x : t.c) dense_trim(x);
  t.trim();
}
inline void dense_collect(const BigInt& t, Exponents& e, std::size_t, MultiPoly::TermMap& out) {
  if (sgn(t) != 0) out[e] = BigRational(t);
}
template <class R>
void dense_collect(const Dense<R>& t, Exponents& e, std::size_t depth, MultiPoly::TermMap& out) {
  for (std::size_t i = 0; i < t.c.size(); ++i) {
    e[depth] = static_cast<int>(i);
    dense_collect(t.c[i], e, depth + 1, out);
  }
  e[depth] = 0;
}

template <class T>
struct Depth {
  static constexpr std::size_t value = 0;
};
template <class R>
struct Depth<Dense<R>> {
  static constexpr std::size_t value = 1 + Depth<R>::value;
};

}  // namespace detail

// Clears denominators: returns integer D with D * scale == p, nested in the given variable order
// (outermost first). Variables of p outside `order` must not occur.
template <class D>
D to_dense(const MultiPoly& p, const std::vector<std::string>& order, BigInt* scale = nullptr) {
  static_assert(detail::Depth<D>::value > 0);
  if (order.size() != detail::Depth<D>::value) throw DegreeError("dense depth does not match variable order");
  MultiPoly q = p.with_vars(order);
  BigInt l = q.denominator_lcm();
  D out;
  for (const auto& [e, c] : q.terms()) {
    BigInt v = c.get_num() * (l / c.get_den());
    detail::dense_put(out, e.data(), v);
  }
  detail::dense_trim(out);
  if (scale) *scale = l;
  return out;
}

template <class D>
MultiPoly from_dense(const D& d, const std::vector<std::string>& order, const BigRational& scale = 1) {
  MultiPoly::TermMap terms;
  Exponents e(order.size(), 0);
  detail::dense_collect(d, e, 0, terms);
  MultiPoly r(order, std::move(terms));
  return sgn(scale) == 0 || scale == 1 ? r : r * scale;
}

// Exact quotient a/b; throws when b does not divide a.
inline MultiPoly divexact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  std::vector<std::string> vars = a.vars();
  for (const auto& v : b.vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  // drop variables unused by both
  std::vector<std::string> used;
  MultiPoly A = a.with_vars(vars), B = b.with_vars(vars);
  for (const auto& v : vars)
    if (A.degree(v) > 0 || B.degree(v) > 0) used.push_back(v);
  if (B.num_terms() == 1 && B.terms().begin()->first == Exponents(vars.size(), 0)) return A * (1 / B.terms().begin()->second);
  if (used.empty()) return A * (1 / B.terms().begin()->second);
  BigInt sa, sb;
  MultiPoly q;
  switch (used.size()) {
    case 1: {
      auto da = to_dense<ZPoly>(A, used, &sa), db = to_dense<ZPoly>(B, used, &sb);
      BigInt cb = int_content(db);
      q = from_dense(divexact(da, divexact_int(db, cb)), used, BigRational(sb) / (BigRational(sa) * cb));
      break;
    }
    case 2: {
      auto da = to_dense<ZPoly2>(A, used, &sa), db = to_dense<ZPoly2>(B, used, &sb);
      BigInt cb = int_content(db);
      q = from_dense(divexact(da, divexact_int(db, cb)), used, BigRational(sb) / (BigRational(sa) * cb));
      break;
    }
    case 3: {
      auto da = to_dense<ZPoly3>(A, used, &sa), db = to_dense<ZPoly3>(B, used, &sb);
      BigInt cb = int_content(db);
      q = from_dense(divexact(da, divexact_int(db, cb)), used, BigRational(sb) / (BigRational(sa) * cb));
      break;
    }
    default:
      throw DegreeError("exact division supports at most three variables");
  }
  return q.with_vars(vars);
}

// q = a / b when the division is exact.
inline bool try_divexact(const MultiPoly& a, const MultiPoly& b, MultiPoly& q) {
  try {
    q = divexact(a, b);
    return true;
  } catch (const std::logic_error&) {
    return false;
  }
}

inline MultiPoly operator*(const MultiPoly& a, long k) { return a * BigRational(k); }

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.to_string(); }

}  // namespace saddleloop
