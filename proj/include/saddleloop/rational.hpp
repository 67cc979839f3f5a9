#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace saddleloop {

using BigInt = mpz_class;
using BigRational = mpq_class;

struct MalformedInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

inline BigRational make_q(long num, long den = 1) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

inline BigRational make_q(const BigInt& num, const BigInt& den) {
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

// Always "num/den", including integers ("3/1"), so JSON readers see one shape.
inline std::string to_fraction(const BigRational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "a", "a/b", and plain decimals such as "0.25" or "-1.5e-3".
inline BigRational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return MalformedInput("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (s.find('/') != std::string::npos) {
    BigRational q;
    if (q.set_str(s, 10) != 0) throw bad();
    if (q.get_den() == 0) throw bad();
    q.canonicalize();
    return q;
  }
  std::size_t epos = s.find_first_of("eE");
  long exp10 = 0;
  std::string mant = s.substr(0, epos);
  if (epos != std::string::npos) {
    try {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(epos + 1), &used);
      if (used != s.size() - epos - 1) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.erase(0, 1);
  }
  std::size_t dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw bad();
  BigInt n(digits, 10);
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  BigRational q = exp10 < 0 ? make_q(n, p) : BigRational(n * p);
  return neg ? BigRational(-q) : q;
}

// Exact value of a finite double.
inline BigRational from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  BigRational q(v);
  q.canonicalize();
  return q;
}

// Nearest double. get_d() truncates toward zero, so the answer is it or its outward neighbour.
inline double to_double(const BigRational& q) {
  double d = q.get_d();
  if (sgn(q) == 0 || !std::isfinite(d)) return d;
  double e = std::nextafter(d, sgn(q) > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(e)) return d;
  return abs(BigRational(from_double(e) - q)) < abs(BigRational(q - from_double(d))) ? e : d;
}

inline int sign(const BigRational& q) { return sgn(q); }
inline int sign(const BigInt& z) { return sgn(z); }

inline BigInt floor_q(const BigRational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigInt ceil_q(const BigRational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline BigRational pow_q(const BigRational& q, unsigned long e) {
  BigRational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
  return r;
}

inline BigInt pow_z(const BigInt& z, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), z.get_mpz_t(), e);
  return r;
}

inline BigInt lcm_z(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt gcd_z(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::size_t bit_size(const BigInt& z) { return mpz_sizeinbase(z.get_mpz_t(), 2); }

}  // namespace saddleloop
