#pragma once

#include <string>
#include <vector>

#include "roots.hpp"
#include "unipoly.hpp"

namespace saddleloop {

// p, p', then negated Euclidean remainders until the remainder vanishes.
inline std::vector<UniPoly> sturm_sequence(const UniPoly& p) {
  std::vector<UniPoly> chain;
  if (p.is_zero()) throw ParameterError("Sturm sequence of the zero polynomial");
  chain.push_back(p);
  UniPoly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d);
  while (true) {
    UniPoly r = chain[chain.size() - 2].divmod(chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

struct SignSequence {
  std::vector<int> signs;  // each in {-1, 0, +1}

  int variations() const {
    int v = 0, last = 0;
    for (int s : signs) {
      if (s == 0) continue;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  }
  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (i) out += ",";
      out += signs[i] > 0 ? "+" : (signs[i] < 0 ? "-" : "0");
    }
    return out + "]";
  }
  friend bool operator==(const SignSequence& a, const SignSequence& b) { return a.signs == b.signs; }
};

inline SignSequence parse_signs(const std::string& text) {
  SignSequence s;
  for (char ch : text) {
    if (ch == '+') s.signs.push_back(1);
    if (ch == '-') s.signs.push_back(-1);
    if (ch == '0') s.signs.push_back(0);
  }
  return s;
}

// Where to read off the chain's signs.
struct ChainPoint {
  enum Kind { At, PlusInfinity, MinusInfinity, RightOf } kind = At;
  BigRational value;

  static ChainPoint at(const BigRational& v) { return {At, v}; }
  static ChainPoint plus_infinity() { return {PlusInfinity, 0}; }
  static ChainPoint minus_infinity() { return {MinusInfinity, 0}; }
  static ChainPoint right_of(const BigRational& v) { return {RightOf, v}; }
};

// Sign of p just to the right of x: first nonzero Taylor coefficient there.
inline int sign_right_of(const UniPoly& p, const BigRational& x) {
  UniPoly q = p;
  while (!q.is_zero()) {
    int s = sgn(q(x));
    if (s != 0) return s;
    q = q.derivative();
  }
  return 0;
}

inline SignSequence sign_sequence_at(const std::vector<UniPoly>& chain, const ChainPoint& pt) {
  SignSequence out;
  for (const auto& p : chain) {
    switch (pt.kind) {
      case ChainPoint::At:
        out.signs.push_back(sgn(p(pt.value)));
        break;
      case ChainPoint::PlusInfinity:
        out.signs.push_back(p.sign_at_infinity(+1));
        break;
      case ChainPoint::MinusInfinity:
        out.signs.push_back(p.sign_at_infinity(-1));
        break;
      case ChainPoint::RightOf:
        out.signs.push_back(sign_right_of(p, pt.value));
        break;
    }
  }
  return out;
}

namespace detail {

// Sturm chain of an integer polynomial, each member rescaled by a positive constant.
inline std::vector<ZPoly> sturm_chain_z(const ZPoly& p) {
  std::vector<ZPoly> chain{p};
  ZPoly d = derivative(p);
  if (d.is_zero()) return chain;
  chain.push_back(int_content(d) > 0 ? divexact_int(d, int_content(d)) : d);
  while (true) {
    const ZPoly& a = chain[chain.size() - 2];
    const ZPoly& b = chain.back();
    // prem = lc(b)^k * rem; an even power keeps the sign of rem
    int k = a.degree() - b.degree() + 1;
    ZPoly r = prem(a, b);
    if (sgn(b.lc()) < 0 && (k & 1)) r = -r;
    if (r.is_zero()) break;
    r = -r;
    chain.push_back(divexact_int(r, int_content(r)));
  }
  return chain;
}

inline int chain_variations(const std::vector<ZPoly>& chain, const Endpoint& e) {
  int v = 0, last = 0;
  for (const auto& p : chain) {
    int s = sign_at(p, e);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace detail

// Degree above which root counting switches from Sturm chains to Descartes isolation.
inline constexpr int kSturmDegreeLimit = 64;

// Distinct real roots of p in (a, b].
inline int count_real_roots(const ZPoly& p, const Endpoint& a, const Endpoint& b) {
  if (p.is_zero()) throw ParameterError("root count of the zero polynomial");
  ZPoly sp = squarefree_part(p);
  if (sp.degree() < 1) return 0;
  if (sp.degree() > kSturmDegreeLimit) return count_roots_descartes(sp, a, b);
  auto chain = detail::sturm_chain_z(sp);
  return detail::chain_variations(chain, a) - detail::chain_variations(chain, b);
}

inline int count_real_roots(const UniPoly& p, const Endpoint& a, const Endpoint& b) {
  if (p.is_zero()) throw ParameterError("root count of the zero polynomial");
  return count_real_roots(p.to_primitive_z(), a, b);
}

// Sturm count regardless of degree (used to cross-check the Descartes path).
inline int count_real_roots_sturm(const UniPoly& p, const Endpoint& a, const Endpoint& b) {
  ZPoly sp = squarefree_part(p.to_primitive_z());
  if (sp.degree() < 1) return 0;
  auto chain = detail::sturm_chain_z(sp);
  return detail::chain_variations(chain, a) - detail::chain_variations(chain, b);
}

}  // namespace saddleloop
