// b* between its exact bounds at a few m, and the cycle probe on either side of it.

#include <iomanip>
#include <iostream>

#include "saddleloop/shooting.hpp"

using namespace saddleloop;

int main() {
  IntegratorConfig cfg;
  std::cout << std::setprecision(10);
  std::cout << "m        b_lower        b*             b_upper        below b*     above b*\n";
  for (const BigRational& m : {make_q(1, 2), make_q(1), make_q(7, 2), make_q(10)}) {
    BoundsPair b = bounds_pair(m);
    BStarEstimate e = estimate_bstar(to_double(m), 1e-10, cfg);
    double h = 1e-3 * to_double(m);
    auto lo = limit_cycle_probe(e.m, e.bstar - h, cfg), hi = limit_cycle_probe(e.m, e.bstar + h, cfg);
    std::cout << std::left << std::setw(9) << to_fraction(m) << std::setw(15) << to_double(b.b_lower) << std::setw(15) << e.bstar << std::setw(15)
              << to_double(b.b_upper) << std::setw(13) << to_string(lo.verdict) << to_string(hi.verdict) << "\n";
  }
}
