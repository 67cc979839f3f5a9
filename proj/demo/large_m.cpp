// The piecewise trapping loop along B = M - 1 + alpha/M^2, the threshold where it starts to work,
// and the measured crossing ratios it is built around.

#include <iostream>

#include "saddleloop/largeM.hpp"
#include "saddleloop/shooting.hpp"

using namespace saddleloop;

int main() {
  const BigRational alpha = reference_alpha();
  for (long M : {3L, 8L, 10L}) {
    PiecewiseLoop L = build_piecewise_loop(BigRational(M), alpha_curve_B(BigRational(M), alpha));
    ContactResult f2 = contact_check_F2(L), f3 = contact_check_F3(L);
    std::cout << "M = " << M << ": F2 " << (f2.pass ? "pass" : "fail") << ", F3 " << (f3.pass ? "pass" : "fail") << "\n";
  }
  ThresholdReport t = thresholds();
  std::cout << "threshold M_alpha ~ " << t.M_alpha.approx() << " (alpha = " << to_fraction(alpha) << ")\n";
  for (const auto& r : ratio_sweep(to_double(alpha), {10, 40, 320, 5120}))
    std::cout << "M = " << r.M << ": -P_u/M = " << r.ratio_u << ", -P_s/M = " << r.ratio_s << ", focus " << r.ratio_focus << "\n";
}
