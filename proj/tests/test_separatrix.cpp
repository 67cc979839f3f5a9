#include <gtest/gtest.h>

#include <random>

#include "saddleloop/separatrix.hpp"
#include "saddleloop/serialize.hpp"
#include "saddleloop/sturm.hpp"

using namespace saddleloop;

namespace {

RationalFunction RF(const std::string& num, const std::string& den) {
  return RationalFunction(parse_uni(num, "s"), parse_uni(den, "s"));
}

}  // namespace

TEST(SeparatrixTable, FirstThreeOrdersBothBranches) {
  SeparatrixSeries up = series_symbolic(Branch::Unstable, 3), down = series_symbolic(Branch::Stable, 3);
  EXPECT_EQ(up.symbolic[1], RF("s", "1"));
  EXPECT_EQ(down.symbolic[1], RF("-7*s", "6*s+7"));
  EXPECT_EQ(up.symbolic[2], RF("(s+1)*(6*s+7)", "3*s*(4*s+7)"));
  EXPECT_EQ(down.symbolic[2], RF("s-7", "3*s*(2*s+7)"));
  EXPECT_EQ(up.symbolic[3], RF("-(s+1)*(6*s+7)^2*(5*s+14)", "18*s^3*(4*s+7)^2*(9*s+14)"));
  EXPECT_EQ(down.symbolic[3], RF("(7-s)*(6*s+7)^2*(s+2)", "18*s^3*(2*s+7)^2*(3*s+14)"));
}

TEST(SeparatrixTable, LinearDataOfTheLine) {
  EXPECT_EQ(s_c1(), RF("7*s^2", "6*s+7"));
  EXPECT_EQ(s_c2(), RF("6*s^2", "6*s+7"));
  // the s-chart of 7b = 5m: M = (7s+3s^2)/(6s+7), B = 3s^2/(6s+7), so c1 = M^2 - B^2, c2 = 2B
  RationalFunction M = RF("7*s+3*s^2", "6*s+7"), B = RF("3*s^2", "6*s+7");
  EXPECT_EQ(s_c1(), M * M - B * B);
  EXPECT_EQ(s_c2(), 2 * B);
  EXPECT_EQ(s_slope(Branch::Unstable), B + M);
  EXPECT_EQ(s_slope(Branch::Stable), B - M);
}

TEST(SeparatrixResidual, SymbolicOrderSix) {
  EXPECT_EQ(verify_residual(series_symbolic(Branch::Unstable, 6)), 6);
  EXPECT_EQ(verify_residual(series_symbolic(Branch::Stable, 6)), 6);
}

TEST(SeparatrixResidual, FaultInjectionAtOrderThree) {
  SeparatrixSeries s = series_symbolic(Branch::Unstable, 6);
  s.symbolic[3] = s.symbolic[3] + RationalFunction(BigRational(1));
  EXPECT_EQ(verify_residual(s), 2);
  SeparatrixSeries e = series_numeric(ParamsMB::exact(make_q(10, 13), make_q(3, 13)), Branch::Stable, 6);
  e.exact[3] += 1;
  EXPECT_EQ(verify_residual(e), 2);
}

TEST(SeparatrixNumeric, AtSEqualsOne) {
  ParamsMB p = ParamsMB::exact(make_q(10, 13), make_q(3, 13));
  SeparatrixSeries up = series_numeric(p, Branch::Unstable, 4), down = series_numeric(p, Branch::Stable, 4);
  EXPECT_EQ(up.exact[1], 1);
  EXPECT_EQ(down.exact[1], make_q(-7, 13));
  EXPECT_EQ(up.exact[2], make_q(26, 33));
  EXPECT_EQ(verify_residual(up), 4);
  // the same through the (m,b) chart: s = 1 is (m,b) = (7/26, 5/26)
  SeparatrixSeries via = series_numeric(ParamsMb::exact(make_q(7, 26), make_q(5, 26)), Branch::Unstable, 4);
  EXPECT_EQ(via.exact, up.exact);
}

TEST(SeparatrixNumeric, Floating) {
  SeparatrixSeries up = series_numeric(ParamsMB::approx(2.0, 1.5), Branch::Unstable, 8, false);
  SeparatrixSeries down = series_numeric(ParamsMB::approx(2.0, 1.5), Branch::Stable, 8, false);
  EXPECT_DOUBLE_EQ(up.floating[1], 3.5);
  EXPECT_DOUBLE_EQ(down.floating[1], -0.5);
  EXPECT_EQ(verify_residual(up), 8);
  EXPECT_EQ(verify_residual(down), 8);
  EXPECT_THROW(series_numeric(ParamsMB::approx(2.0, 1.5), Branch::Unstable, 3, true), DomainError);
  EXPECT_THROW(series_numeric(ParamsMB::approx(0.0, 1.5), Branch::Unstable, 3, false), DomainError);
}

TEST(SeparatrixNumeric, SymbolicAgreesAtSEqualsTwo) {
  for (Branch br : {Branch::Unstable, Branch::Stable}) {
    SeparatrixSeries sym = substitute_s(series_symbolic(br, 8), 2);
    // s = 2: M = 26/19, B = 12/19
    SeparatrixSeries num = series_numeric(ParamsMB::exact(make_q(26, 19), make_q(12, 19)), br, 8);
    EXPECT_EQ(sym.exact, num.exact);
    EXPECT_EQ(sym.c1_exact, num.c1_exact);
    EXPECT_EQ(sym.c2_exact, num.c2_exact);
  }
}

TEST(SeparatrixNumeric, SubstituteCommutesRandom) {
  SeparatrixSeries up = series_symbolic(Branch::Unstable, 10), down = series_symbolic(Branch::Stable, 10);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> nn(1, 60), dd(1, 17);
  for (int i = 0; i < 50; ++i) {
    BigRational s = make_q(nn(rng), dd(rng));
    BigRational M = (7 * s + 3 * s * s) / (6 * s + 7), B = 3 * s * s / (6 * s + 7);
    ParamsMB p = ParamsMB::exact(M, B);
    ASSERT_EQ(substitute_s(up, s).exact, series_numeric(p, Branch::Unstable, 10).exact);
    ASSERT_EQ(substitute_s(down, s).exact, series_numeric(p, Branch::Stable, 10).exact);
  }
}

TEST(SeparatrixDenominators, NoPositiveRootsThroughTwelve) {
  for (Branch br : {Branch::Unstable, Branch::Stable}) {
    SeparatrixSeries sr = series_symbolic(br, 12);
    for (int k = 1; k <= 12; ++k) {
      UniPoly den = sr.symbolic[static_cast<std::size_t>(k)].denominator();
      EXPECT_EQ(count_real_roots(den, Endpoint::at(0), Endpoint::pos_inf()), 0) << "k = " << k;
    }
  }
}

TEST(SeparatrixDenominators, RecurrenceDenominatorsSigned) {
  // (k-1)B + (k+1)M > 0 and (k-1)B - (k+1)M < 0 on region R, at sampled rational points
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> nn(1, 80), dd(1, 23);
  int seen = 0;
  while (seen < 40) {
    BigRational M = make_q(nn(rng), dd(rng)), B = make_q(nn(rng), dd(rng));
    ParamsMB p = ParamsMB::exact(M, B);
    if (!region_R_contains(p)) continue;
    ++seen;
    for (int k = 2; k <= 12; ++k) {
      EXPECT_GT(k * (B + M) - (B - M), 0);
      EXPECT_LT(k * (B - M) - (B + M), 0);
    }
  }
  // in the s-chart both are rational functions without zeros for s > 0
  for (int k = 2; k <= 12; ++k) {
    RationalFunction kp = k * s_slope(Branch::Unstable) - s_slope(Branch::Stable);
    RationalFunction km = k * s_slope(Branch::Stable) - s_slope(Branch::Unstable);
    EXPECT_EQ(count_real_roots(kp.numerator(), Endpoint::at(0), Endpoint::pos_inf()), 0);
    EXPECT_EQ(count_real_roots(km.numerator(), Endpoint::at(0), Endpoint::pos_inf()), 0);
  }
}

TEST(SeparatrixNumeric, ResonanceIsReported) {
  // a1 = 1, a1' = 2: k a1 - a1' vanishes at k = 2
  EXPECT_THROW(separatrix_coefficients(BigRational(1), BigRational(2), 4), ResonanceError);
  EXPECT_THROW(series_symbolic(Branch::Unstable, 0), ParameterError);
}
