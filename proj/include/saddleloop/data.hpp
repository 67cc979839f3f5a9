#pragma once

// The constant polynomials that ship with the library, checksummed at load time.

#include "saddleloop/embedded_data.hpp"
#include "serialize.hpp"

namespace saddleloop::data {

// Upper-bound curve D(M,B) = 0 in the (M,B) chart, total degree 14.
inline const MultiPoly& d_curve() {
  static const MultiPoly p = read_data_file(embedded::d_curve).poly;
  return p;
}

// Degree-17 polynomial in m whose unique positive root is the threshold m~ (about 6.93).
inline const MultiPoly& threshold_m() {
  static const MultiPoly p = read_data_file(embedded::threshold_m).poly;
  return p;
}

// Degree-17 polynomial in M for alpha = 51/40; its largest root (about 7.58) is the M threshold.
inline const MultiPoly& threshold_M() {
  static const MultiPoly p = read_data_file(embedded::threshold_M).poly;
  return p;
}

// Image of B = M - 1 + a/M^2 in the (m,b) chart, variables m, b, a.
inline const MultiPoly& alpha_curve() {
  static const MultiPoly p = read_data_file(embedded::alpha_curve).poly;
  return p;
}

}  // namespace saddleloop::data
