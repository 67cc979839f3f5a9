#include <gtest/gtest.h>

#include <cmath>

#include "saddleloop/largeM.hpp"

using namespace saddleloop;

namespace {

const BigRational kAlpha = make_q(51, 40);

PiecewiseLoop loop_at(long M) { return build_piecewise_loop(BigRational(M), alpha_curve_B(BigRational(M), kAlpha)); }

}  // namespace

TEST(Piecewise, ImposedConditionsAndGradients) {
  for (long M : {3L, 8L, 10L, 20L}) {
    PiecewiseIdentities id = verify_piecewise(loop_at(M));
    EXPECT_TRUE(id.junctions) << M;
    EXPECT_TRUE(id.osculation) << M;
    EXPECT_TRUE(id.separatrix) << M;
    EXPECT_TRUE(id.gradients) << M;
  }
  PiecewiseLoop L = build_piecewise_loop(make_q(7, 2), make_q(3, 2));
  EXPECT_EQ(L.x2, make_q(-21, 2));
  EXPECT_EQ(L.x1, make_q(-10));
  EXPECT_TRUE(verify_piecewise(L).all());
  EXPECT_THROW(build_piecewise_loop(2, 3), DomainError);
}

TEST(Piecewise, BothChecksPassAtTen) {
  PiecewiseLoop L = loop_at(10);
  ContactResult c2 = contact_check_F2(L), c3 = contact_check_F3(L);
  EXPECT_TRUE(c2.pass) << c2.detail;
  EXPECT_TRUE(c3.pass) << c3.detail;
  EXPECT_EQ(c2.stripped_exponent, 2);
  EXPECT_EQ(c3.stripped_exponent, 9);
  EXPECT_EQ(c3.coefficient_signs, (std::vector<int>{1, -1, 1, -1}));
  ASSERT_TRUE(c2.hat_low && c2.hat_high);
  auto [hi_anchor, lo_anchor] = p4_root_anchors(10, 51.0 / 40);
  EXPECT_LT(*c2.hat_low, to_double(L.x2));
  EXPECT_GT(*c2.hat_high, to_double(L.x1));
  EXPECT_NEAR(*c2.hat_low / lo_anchor, 1.0, 0.1);
}

TEST(Piecewise, RootsApproachTheAnchors) {
  // the anchors carry o(M) and o(M^(2/3)) corrections without explicit constants: check that the scaled gaps shrink
  double prev_lo = 1e9, prev_hi = 1e9;
  for (long M : {10L, 100L, 1000L}) {
    ContactResult c2 = contact_check_F2(loop_at(M));
    ASSERT_TRUE(c2.hat_low && c2.hat_high) << M;
    auto [hi_anchor, lo_anchor] = p4_root_anchors(static_cast<double>(M), 51.0 / 40);
    double gap_lo = std::abs(*c2.hat_low - lo_anchor) / M;
    double gap_hi = std::abs(*c2.hat_high - hi_anchor) / std::pow(M, 2.0 / 3);
    EXPECT_LT(gap_lo, prev_lo) << M;
    EXPECT_LT(gap_hi, prev_hi) << M;
    prev_lo = gap_lo;
    prev_hi = gap_hi;
  }
}

TEST(Piecewise, AtThreeOnlyTheQuadraticArcPasses) {
  PiecewiseLoop L = loop_at(3);
  ContactResult c2 = contact_check_F2(L), c3 = contact_check_F3(L);
  EXPECT_TRUE(c2.pass) << c2.detail;
  EXPECT_FALSE(c3.pass) << c3.detail;
  std::vector<double> neg;
  for (const auto& iv : c3.roots)
    if (iv.approx() < 0) neg.push_back(iv.approx());
  ASSERT_EQ(neg.size(), 2u);
  EXPECT_NEAR(neg[0], -248.4, 0.1);
  EXPECT_NEAR(neg[1], -1.79, 0.01);
  std::vector<double> p4;
  for (const auto& iv : c2.roots) p4.push_back(iv.approx());
  ASSERT_GE(p4.size(), 2u);
  EXPECT_NEAR(p4.front(), -18.27, 0.01);
}

TEST(Piecewise, ProbesPointOutward) {
  for (long M : {8L, 10L, 20L, 50L}) {
    PiecewiseLoop L = loop_at(M);
    EXPECT_TRUE(contact_check_F2(L).pass) << M;
    EXPECT_TRUE(contact_check_F3(L).pass) << M;
    for (const auto& p : junction_probes(L)) EXPECT_EQ(p.sign, 1) << M << " " << p.name;
  }
}

TEST(Piecewise, DominantTermOfP4) {
  P4Asymptotics a = p4_asymptotics(kAlpha);
  EXPECT_TRUE(a.matches_expected) << a.dominant;
  EXPECT_EQ(a.p4.degree("x"), 4);
}

TEST(AlphaCurve, EliminationMatchesEmbedded) {
  MultiPoly e = alpha_curve_elimination();
  EXPECT_NE(sgn(constant_ratio(e, data::alpha_curve().with_vars({"m", "b", "a"}))), 0);
}

TEST(AlphaCurve, SeriesInInverseM) {
  auto u = alpha_curve_series(2);
  const std::vector<std::string> v{"a"};
  MultiPoly a = MultiPoly::variable(v, "a");
  EXPECT_EQ(u[0], a * 2);
  EXPECT_EQ(u[1], a * -1);
}

TEST(AlphaCurve, TransformedPolynomial) {
  for (const BigRational& al : {make_q(1, 2), make_q(1), kAlpha, make_q(10)}) {
    UniPoly q = q_polynomial(al);
    EXPECT_EQ(q.lc(), 8);
    EXPECT_EQ(q.coeff(0), 16 * pow_q(al, 4));
  }
}

TEST(AlphaCurve, SturmLedger) {
  QSturmLedger L = q_sturm_ledger(kAlpha);
  EXPECT_EQ(L.at_zero, reference_sturm_at_zero()) << L.at_zero.to_string();
  EXPECT_EQ(L.at_infinity, reference_sturm_at_infinity()) << L.at_infinity.to_string();
  EXPECT_TRUE(L.matches_reference);
  for (const BigRational& al : {make_q(1, 2), make_q(1), kAlpha, make_q(10)}) {
    QSturmLedger l = q_sturm_ledger(al);
    EXPECT_EQ(l.positive_roots, l.at_zero.variations() - l.at_infinity.variations());
    EXPECT_TRUE(l.below_at_sample) << to_fraction(al);
  }
  // the reference pair is reproduced only at 51/40; the variation counts agree for every alpha
  EXPECT_EQ(q_sturm_ledger(1).at_infinity, parse_signs("+,+,+,-,-,+,+,-"));
  EXPECT_EQ(q_sturm_ledger(make_q(1, 2)).at_infinity, parse_signs("+,+,+,+,-,+,+,-"));
  EXPECT_EQ(q_sturm_ledger(10).at_zero, parse_signs("+,-,-,-,+,+,+,-"));
  EXPECT_EQ(q_sturm_ledger(10).at_infinity, parse_signs("+,+,+,-,+,+,-,-"));
  EXPECT_EQ(q_sturm_ledger(make_q(1, 100)).positive_roots, 0);
  EXPECT_THROW(q_sturm_ledger(0), ParameterError);
}

TEST(Thresholds, RootsAndReconstruction) {
  ThresholdReport r = thresholds();
  EXPECT_EQ(r.m_tilde_positive_roots, 1);
  EXPECT_GT(r.m_tilde.lo, make_q(692, 100));
  EXPECT_LT(r.m_tilde.hi, make_q(694, 100));
  EXPECT_GT(r.M_alpha.lo, make_q(757, 100));
  EXPECT_LT(r.M_alpha.hi, make_q(759, 100));
  EXPECT_TRUE(r.parametric_reconstruction);
  EXPECT_TRUE(r.resultant_reconstruction);
}

TEST(Thresholds, SearchAgreesNearTheReferenceValue) {
  ThresholdSearch s = search_threshold(kAlpha, 12, make_q(1, 4));
  ASSERT_TRUE(s.M);
  EXPECT_TRUE(s.confirmed);
  EXPECT_GE(*s.M, 7);
  EXPECT_LE(*s.M, 8);
  EXPECT_THROW(search_threshold(0, 12, 1), ParameterError);
}
