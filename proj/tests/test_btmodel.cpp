#include <gtest/gtest.h>

#include <random>

#include "saddleloop/btmodel.hpp"
#include "saddleloop/serialize.hpp"

using namespace saddleloop;

namespace {

MultiPoly P(const std::string& text, const std::vector<std::string>& vars) { return parse_expression(text, vars); }

}  // namespace

TEST(Charts, ExampleForward) {
  ParamsMB p = to_MB(ParamsMb::exact(make_q(7, 26), make_q(5, 26)));
  ASSERT_TRUE(p.M_exact);
  EXPECT_EQ(*p.M_exact, make_q(10, 13));
  EXPECT_EQ(*p.B_exact, make_q(3, 13));
  EXPECT_EQ(*p.Msquared, make_q(400, 676));
}

TEST(Charts, RoundTripRandomRationals) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(1, 400), bn(-400, 400), den(1, 97);
  for (int i = 0; i < 1000; ++i) {
    BigRational m = make_q(num(rng), den(rng)), b = make_q(bn(rng), den(rng));
    ParamsMb back = to_mb(to_MB(ParamsMb::exact(m, b)));
    ASSERT_EQ(*back.m_exact, m);
    ASSERT_EQ(*back.b_exact, b);
  }
}

TEST(Charts, InverseNeedsPositiveM) {
  EXPECT_THROW(to_mb(ParamsMB::exact(1, 2)), DomainError);
  EXPECT_THROW(to_mb(ParamsMB::exact(1, 1)), DomainError);
  EXPECT_THROW(to_MB(ParamsMb::exact(0, 1)), DomainError);
}

TEST(Charts, NamedLinesMapExactly) {
  // m = (M^2-B^2)/2 and b = 2B - m; each line in (m,b) pulls back to the stated (M,B) curve
  const std::vector<std::string> v{"M", "B"};
  MultiPoly M = MultiPoly::variable(v, "M"), B = MultiPoly::variable(v, "B");
  MultiPoly m = (M * M - B * B) * make_q(1, 2), b = B * 2 - m;
  EXPECT_EQ(b - m, B * B + B * 2 - M * M);                                    // Hopf b = m
  EXPECT_EQ(b - m + MultiPoly::constant(v, 1), (B + MultiPoly::constant(v, 1)).pow(2) - M * M);  // b = m - 1
  EXPECT_EQ((b * 2 - m) * 4, (B * B * 3 + B * 8 - M * M * 3) * 2);                  // b = m/2
}

TEST(Region, Examples) {
  EXPECT_TRUE(region_R_contains(ParamsMB::exact(make_q(10, 13), make_q(3, 13))));
  EXPECT_FALSE(region_R_contains(ParamsMB::exact(2, 2)));
  EXPECT_FALSE(region_R_contains(ParamsMB::exact(3, 1)));
  EXPECT_TRUE(region_R_contains(ParamsMB::approx(10.0 / 13, 3.0 / 13)));
}

TEST(CriticalPoints, MBFormSaddleAndFocus) {
  BigRational M = make_q(10, 13), B = make_q(3, 13);
  auto cps = critical_points(mb_form(ParamsMB::exact(M, B)));
  ASSERT_EQ(cps.size(), 2u);
  const CriticalPoint* saddle = nullptr;
  const CriticalPoint* focus = nullptr;
  for (const auto& c : cps) (c.kind == CriticalPoint::Saddle ? saddle : focus) = &c;
  ASSERT_TRUE(saddle && focus);
  EXPECT_EQ(*saddle->x_exact, 0);
  EXPECT_EQ(*focus->x_exact, B * B - M * M);
  EXPECT_NEAR(saddle->unstable_slope(), to_double(B + M), 1e-12);
  EXPECT_NEAR(saddle->stable_slope(), to_double(B - M), 1e-12);
  EXPECT_EQ(focus->kind, CriticalPoint::Focus);
  // product -(M^2 - B^2), trace 2B
  EXPECT_NEAR((saddle->lambda1 * saddle->lambda2).real(), -to_double(M * M - B * B), 1e-12);
  EXPECT_NEAR((saddle->lambda1 + saddle->lambda2).real(), to_double(2 * B), 1e-12);
}

TEST(CriticalPoints, FocusAtMinusTwoM) {
  BigRational m = make_q(7, 26), b = make_q(5, 26);
  ParamsMB p = to_MB(ParamsMb::exact(m, b));
  EXPECT_EQ(*p.B_exact * *p.B_exact - *p.Msquared, -2 * m);
}

TEST(CriticalPoints, OriginalAtPlusMinusOne) {
  auto cps = critical_points(original_form(ParamsMb::exact(1, make_q(1, 2))));
  ASSERT_EQ(cps.size(), 2u);
  EXPECT_EQ(*cps[0].x_exact, 1);
  EXPECT_EQ(*cps[1].x_exact, -1);
  EXPECT_EQ(cps[0].kind, CriticalPoint::Saddle);
}

TEST(Forms, ShiftedMatchesTranslation) {
  ParamsMb p = ParamsMb::exact(make_q(3, 2), make_q(1, 3));
  VectorFieldForm o = original_form(p), s = shifted_form(p);
  // Q_shifted(x, y) = Q_original(x + m, y)
  MultiPoly x = MultiPoly::variable({"x", "y"}, "x"), y = MultiPoly::variable({"x", "y"}, "y");
  MultiPoly sub(o.Q.vars());
  for (const auto& [e, c] : o.Q.terms()) sub = sub + (x + MultiPoly::constant({"x", "y"}, make_q(3, 2))).pow(static_cast<unsigned>(e[0])) * y.pow(static_cast<unsigned>(e[1])) * c;
  EXPECT_EQ(sub, s.Q);
  EXPECT_EQ(s.P, y);
}

TEST(Bounds, MaxGapPoints) {
  BoundsPair b = bounds_pair(make_q(7, 2));
  EXPECT_EQ(b.b_lower, make_q(5, 2));
  EXPECT_EQ(b.b_upper, make_q(379, 122));
  EXPECT_EQ(b.half_gap(), make_q(37, 122));
  BigRational m = 7, k = 37 * m / 12;
  EXPECT_EQ(BigRational((5 + k) * m / (7 + k)), make_q(319, 49));
  EXPECT_EQ(BigRational(m - 1 + 25 / (7 * m)), make_q(319, 49));
  EXPECT_EQ(upper_bound_exact(7), make_q(319, 49));
  EXPECT_EQ(BigRational(5 * make_q(7, 2) / 7), BigRational(make_q(7, 2) - 1));
  EXPECT_THROW(bounds_pair(0), DomainError);
  EXPECT_EQ(bounds_pair(1).b_upper, make_q(97, 121));
}

TEST(Bounds, OrderedOnLogGrid) {
  for (int k = -30; k <= 30; ++k) {
    // rational approximations of 10^(k/10)
    BigRational m = from_double(std::pow(10.0, k / 10.0));
    BoundsPair b = bounds_pair(m);
    ASSERT_LT(b.b_lower, b.b_upper) << "m = " << m.get_d();
    EXPECT_NEAR(lower_bound(m.get_d()), b.b_lower.get_d(), 1e-12 * (1 + m.get_d()));
    EXPECT_NEAR(upper_bound(m.get_d()), b.b_upper.get_d(), 1e-12 * (1 + m.get_d()));
  }
}

TEST(Bounds, MaxGapOnGrid) {
  BigRational best_abs = -1, best_rel = -1, arg_abs, arg_rel;
  for (int k = 1; k <= 200; ++k) {
    BigRational m = make_q(k, 10);
    BoundsPair b = bounds_pair(m);
    BigRational h = b.half_gap(), r = h / b.b_lower;
    if (h > best_abs) best_abs = h, arg_abs = m;
    if (r > best_rel) best_rel = r, arg_rel = m;
  }
  EXPECT_EQ(best_abs, make_q(37, 122));
  EXPECT_EQ(best_rel, make_q(37, 305));
  EXPECT_EQ(arg_abs, make_q(7, 2));
  EXPECT_EQ(arg_rel, make_q(7, 2));
}

TEST(Perko, NamedCurves) {
  EXPECT_DOUBLE_EQ(perko_transform(ParamsMb::exact(2, 2)).mu1, 0.0);
  PerkoParams q = perko_transform(ParamsMb::exact(2, 1));
  EXPECT_NEAR(q.mu1 * q.mu2, -1.0, 1e-15);
  EXPECT_EQ(perko_product(ParamsMb::exact(2, 1)), -1);
  PerkoParams r = perko_transform(ParamsMb::exact(make_q(7, 3), make_q(5, 3)));
  EXPECT_NEAR(r.mu1, -r.mu2 / 7, 1e-15);
  ParamsMb back = perko_inverse(r);
  EXPECT_NEAR(back.m, 7.0 / 3, 1e-14);
  EXPECT_NEAR(back.b, 5.0 / 3, 1e-14);
  EXPECT_THROW(perko_transform(ParamsMb::approx(0, 1)), DomainError);
  // mu1 = -mu2/7 pulls back to b = 5m/7
  EXPECT_NEAR(perko_pullback([](double mu2) { return -mu2 / 7; }, 3.0), 15.0 / 7, 1e-14);
  EXPECT_NEAR(perko_pullback([](double mu2) { return -1 / mu2; }, 3.0), 2.0, 1e-14);
}

TEST(Dulac, IdentityOnInvariantLine) {
  DulacCertificate c = dulac_identity_check();
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.residual.is_zero());
}

TEST(Dulac, PerturbationBreaksIdentity) {
  const std::vector<std::string> v{"m", "e"};
  MultiPoly m = MultiPoly::variable(v, "m"), e = MultiPoly::variable(v, "e");
  DulacCertificate c = dulac_residual(m, m - MultiPoly::constant(v, 1) + e);
  EXPECT_FALSE(c.holds);
}

TEST(Dulac, NumericSpotCheck) {
  DulacCertificate c = dulac_residual(MultiPoly::constant({}, 2), MultiPoly::constant({}, 1));
  EXPECT_TRUE(c.holds);
}

TEST(MBImage, EvenAndOddPolynomials) {
  const std::vector<std::string> v{"M", "B"}, w{"m", "b"};
  // B^2 + 2B - M^2 is the Hopf line b = m
  MultiPoly hopf = mb_image(P("B^2 + 2*B - M^2", v));
  EXPECT_EQ(hopf, P("b - m", w));
  // odd in M: B - M + 1 maps to (B+1)^2 - M^2, the invariant line
  MultiPoly odd = mb_image(P("B + 1 - M", v));
  EXPECT_EQ(odd, P("b - m + 1", w));
}

TEST(Melnikov, CoefficientsAndValues) {
  MelnikovValue v = melnikov_series(0.2, 4);
  ASSERT_EQ(v.coefficients.size(), 4u);
  EXPECT_EQ(v.coefficients[0], make_q(5, 7));
  EXPECT_EQ(v.coefficients[1], make_q(72, 2401));
  EXPECT_EQ(v.coefficients[2], make_q(-30024, 45294865));
  EXPECT_EQ(v.coefficients[3], make_q(BigInt("-2352961656"), BigInt("11108339166925")));
  EXPECT_EQ(melnikov_partial_sum(make_q(1, 5), 4), make_q(BigInt("1000104612370819"), BigInt("6942711979328125")));
  EXPECT_NEAR(v.value, 0.144051, 1e-6);
  EXPECT_EQ(melnikov_series(0.0).value, 0.0);
  EXPECT_THROW(melnikov_series(0.2, 5), UnsupportedOrder);
  EXPECT_THROW(melnikov_series(0.2, 0), UnsupportedOrder);
}
