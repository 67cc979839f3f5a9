#include <gtest/gtest.h>

#include <random>

#include "saddleloop/data.hpp"
#include "saddleloop/exactalg.hpp"
#include "oracles.hpp"

using namespace saddleloop;
using namespace saddleloop::oracle;

namespace {

MultiPoly P(const std::string& text, const std::vector<std::string>& vars = {"x"}) { return parse_expression(text, vars); }
UniPoly U(const std::string& text, const std::string& var = "x") { return parse_uni(text, var); }
MultiPoly C(const BigRational& v, const std::vector<std::string>& vars = {}) { return MultiPoly::constant(vars, v); }

std::vector<std::string> signs_of(const SignSequence& s) {
  std::vector<std::string> out;
  for (int v : s.signs) out.push_back(v > 0 ? "+" : (v < 0 ? "-" : "0"));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- rationals and text forms

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), make_q(1, 2));
  EXPECT_EQ(parse_rational("-0.25"), make_q(-1, 4));
  EXPECT_EQ(parse_rational("1e-3"), make_q(1, 1000));
  EXPECT_EQ(to_fraction(make_q(4, 1)), "4/1");
  EXPECT_THROW(parse_rational("1/0"), MalformedInput);
  EXPECT_THROW(parse_rational("abc"), MalformedInput);
}

TEST(Serialize, CanonicalRoundTrip) {
  MultiPoly p = P("3/4*x^2*y - y^3 + 5", {"x", "y"});
  std::string text = to_canonical(p);
  EXPECT_EQ(text, "vars: x y\n5/1\n-1/1*y^3\n3/4*x^2*y^1\n");
  EXPECT_EQ(parse_canonical(text), p);
}

TEST(Serialize, DataFileChecksum) {
  DataFile d{"demo", P("x^2 - 2")};
  std::string text = write_data_file(d);
  EXPECT_EQ(read_data_file(text).poly, d.poly);
  std::string bad = text;
  bad[bad.size() - 3] = '3';
  EXPECT_THROW(read_data_file(bad), MalformedInput);
}

TEST(Serialize, EmbeddedConstants) {
  EXPECT_EQ(data::d_curve().total_degree(), 14);
  EXPECT_EQ(data::d_curve().num_terms(), 72u);
  EXPECT_EQ(data::threshold_m().degree("m"), 17);
  EXPECT_EQ(data::threshold_M().degree("M"), 17);
  EXPECT_EQ(data::alpha_curve().total_degree(), 5);
}

// ---------------------------------------------------------------- substitute

TEST(Substitute, DirectValue) {
  auto [num, den] = substitute(P("x^2 - s", {"x", "s"}), "x", RationalFunction(BigRational(1)));
  EXPECT_EQ(num, P("1 - s", {"s"}));
  EXPECT_EQ(den, UniPoly::constant(1, "s"));
}

TEST(Substitute, ClearsDenominator) {
  // s -> 3t^2/(6t+7) in y - s*x gives ((6t+7) y - 3 t^2 x) / (6t+7)
  RationalFunction v(ZPoly(std::vector<BigInt>{0, 0, 3}), ZPoly(std::vector<BigInt>{7, 6}), "t");
  auto [num, den] = substitute(P("y - s*x", {"x", "y", "s"}), "s", v);
  EXPECT_EQ(num.with_vars({"x", "y", "t"}), P("(6*t + 7)*y - 3*t^2*x", {"x", "y", "t"}));
  EXPECT_EQ(den, UniPoly({7, 6}, "t"));
}

TEST(Substitute, MbSystemAlongParametrizedLine) {
  // c1 = M^2 - B^2 and c2 = 2B at M = (7s+3s^2)/(6s+7), B = 3s^2/(6s+7)
  RationalFunction M(ZPoly(std::vector<BigInt>{0, 7, 3}), ZPoly(std::vector<BigInt>{7, 6}), "s");
  RationalFunction B(ZPoly(std::vector<BigInt>{0, 0, 3}), ZPoly(std::vector<BigInt>{7, 6}), "s");
  RationalFunction c1 = M * M - B * B, c2 = 2 * B;
  EXPECT_EQ(c1, RationalFunction(ZPoly(std::vector<BigInt>{0, 0, 7}), ZPoly(std::vector<BigInt>{7, 6}), "s"));
  EXPECT_EQ(c2, RationalFunction(ZPoly(std::vector<BigInt>{0, 0, 6}), ZPoly(std::vector<BigInt>{7, 6}), "s"));
  auto [num, den] = substitute(P("M^2 - B^2", {"M", "B"}), "M", M);
  auto [num2, den2] = substitute(num, "B", B);
  (void)den;
  (void)den2;
  EXPECT_FALSE(num2.is_zero());
}

TEST(Substitute, ZeroDenominatorRejected) {
  EXPECT_THROW(RationalFunction(ZPoly(BigInt(1)), ZPoly(), "s"), MalformedInput);
}

// ---------------------------------------------------------------- resultants

TEST(Resultant, HandExamples) {
  EXPECT_EQ(resultant(P("x^2 - 1"), P("2*x"), "x"), C(-4));
  std::vector<std::string> v{"x", "a", "b"};
  EXPECT_EQ(resultant(P("x - a", v), P("x - b", v), "x"), P("a - b", {"a", "b"}));
  EXPECT_TRUE(resultant(P("(x - s)*(x + 2)", {"x", "s"}), P("(x - s)*(x^2 + s)", {"x", "s"}), "x").is_zero());
}

TEST(Resultant, AbsentVariableIsDegreeError) {
  EXPECT_THROW(resultant(P("y + 1", {"y"}), P("y^2", {"y"}), "x"), DegreeError);
}

TEST(Resultant, CommutationLaw) {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    UniPoly a = random_uni(rng, 6, 9), b = random_uni(rng, 6, 9);
    MultiPoly pa = MultiPoly::from_uni(a, {"x"}, "x"), pb = MultiPoly::from_uni(b, {"x"}, "x");
    int sgn_law = ((a.degree() * b.degree()) & 1) ? -1 : 1;
    EXPECT_EQ(resultant(pa, pb, "x"), resultant(pb, pa, "x") * BigRational(sgn_law));
  }
  // with a parameter
  std::vector<std::string> v{"x", "s"};
  MultiPoly p = P("x^3 + s*x - 2", v), q = P("s*x^2 - 3*x + s^2", v);
  EXPECT_EQ(resultant(p, q, "x"), resultant(q, p, "x") * BigRational(1));  // 3*2 is even
}

TEST(Resultant, VanishesExactlyOnCommonFactor) {
  std::mt19937 rng(12);
  for (int t = 0; t < 80; ++t) {
    UniPoly a = random_uni(rng, 3, 6), b = random_uni(rng, 3, 6);
    if (t % 2 == 0) {
      UniPoly f = random_uni(rng, 3, 6);
      a = a * f;
      b = b * f;
    }
    if (a.degree() < 1 || b.degree() < 1) continue;
    bool common = gcd(a, b).degree() > 0;
    bool zero = resultant(MultiPoly::from_uni(a, {"x"}, "x"), MultiPoly::from_uni(b, {"x"}, "x"), "x").is_zero();
    EXPECT_EQ(common, zero) << a.to_string() << " | " << b.to_string();
  }
}

TEST(Resultant, SubresultantMatchesSylvesterDeterminant) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> cc(-7, 7), dd(1, 5);
  std::vector<std::string> v{"x", "s"};
  for (int t = 0; t < 120; ++t) {
    auto rand_bi = [&]() {
      MultiPoly p(v);
      int d = dd(rng);
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= 2; ++j) p = p + P(std::to_string(cc(rng)) + "*x^" + std::to_string(i) + "*s^" + std::to_string(j), v);
      if (p.degree("x") < 1) p = p + P("x", v);
      return p;
    };
    MultiPoly p = rand_bi(), q = rand_bi();
    EXPECT_EQ(resultant(p, q, "x"), sylvester_resultant(p, q, "x").with_vars({"s"}));
  }
  for (int t = 0; t < 120; ++t) {
    UniPoly a = random_uni(rng, 5, 20), b = random_uni(rng, 5, 20);
    MultiPoly pa = MultiPoly::from_uni(a, {"x"}, "x"), pb = MultiPoly::from_uni(b, {"x"}, "x");
    auto S = sylvester_matrix(pa, pb, "x");
    std::vector<std::vector<BigRational>> Q(S.size());
    for (std::size_t i = 0; i < S.size(); ++i)
      for (const auto& e : S[i]) Q[i].push_back(e.is_zero() ? BigRational(0) : e.terms().begin()->second);
    EXPECT_EQ(resultant(pa, pb, "x"), C(rational_determinant(Q)));
  }
}

TEST(Resultant, Discriminant) {
  std::vector<std::string> v{"x", "a", "c"};
  EXPECT_EQ(discriminant(P("a*x^2 + 3*x + c", v), "x"), P("9 - 4*a*c", {"a", "c"}));
  EXPECT_EQ(discriminant(P("x^3 - x"), "x"), C(4));
}

// ---------------------------------------------------------------- Sturm chains and counting

TEST(Sturm, HandChains) {
  auto ch = sturm_sequence(U("x^2 - 2"));
  ASSERT_EQ(ch.size(), 3u);
  EXPECT_EQ(ch[1], U("2*x"));
  EXPECT_EQ(ch[2], U("2"));
  auto lin = sturm_sequence(U("x"));
  ASSERT_EQ(lin.size(), 2u);
  EXPECT_EQ(lin[1], U("1"));
  auto dbl = sturm_sequence(U("(x - 1)^2"));
  EXPECT_GT(dbl.back().degree(), 0);  // stops at the nonconstant gcd
  EXPECT_THROW(sturm_sequence(UniPoly()), ParameterError);
}

TEST(Sturm, SignSequenceReportsZeros) {
  auto ch = sturm_sequence(U("x^2 - 2"));
  EXPECT_EQ(signs_of(sign_sequence_at(ch, ChainPoint::at(0))), (std::vector<std::string>{"-", "0", "+"}));
  EXPECT_EQ(sign_sequence_at(ch, ChainPoint::at(0)).to_string(), "[-,0,+]");
  EXPECT_EQ(signs_of(sign_sequence_at(ch, ChainPoint::plus_infinity())), (std::vector<std::string>{"+", "+", "+"}));
  EXPECT_EQ(parse_signs("[+,-,0]").signs, (std::vector<int>{1, -1, 0}));
}

TEST(Sturm, CountExamples) {
  EXPECT_EQ(count_real_roots(U("x^2 - 2"), Endpoint::at(0), Endpoint::at(5)), 1);
  EXPECT_EQ(count_real_roots(U("x^2 + 1"), Endpoint::neg_inf(), Endpoint::pos_inf()), 0);
  UniPoly l5 = data::threshold_m().to_uni("m");
  EXPECT_EQ(count_real_roots(l5, Endpoint::at(0), Endpoint::pos_inf()), 1);
  EXPECT_EQ(count_real_roots(U("(x - 1)^3*(x + 2)"), Endpoint::neg_inf(), Endpoint::pos_inf()), 2);
  EXPECT_EQ(count_real_roots(U("x^2 - 4"), Endpoint::at(-2), Endpoint::at(2)), 1);  // (-2, 2]
}

TEST(Sturm, InvariantUnderPositiveScaling) {
  std::mt19937 rng(14);
  for (int t = 0; t < 100; ++t) {
    UniPoly p = random_uni(rng, 8, 20);
    if (p.degree() < 1) continue;
    int n = count_real_roots(p, Endpoint::neg_inf(), Endpoint::pos_inf());
    EXPECT_EQ(count_real_roots(BigRational(t + 1, 7) * p, Endpoint::neg_inf(), Endpoint::pos_inf()), n);
  }
}

TEST(Sturm, AgreesWithBruteForceOracle) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> ep(-12, 12), kind(0, 5);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    UniPoly p = random_uni(rng, 8, 20);
    if (p.degree() < 1) p = p + U("x");
    int a = ep(rng), b = ep(rng);
    if (a > b) std::swap(a, b);
    if (a == b) ++b;
    bool a_inf = kind(rng) == 0, b_inf = kind(rng) == 0;
    BigRational qa(a, 2), qb(b, 2);
    Endpoint ea = a_inf ? Endpoint::neg_inf() : Endpoint::at(qa), eb = b_inf ? Endpoint::pos_inf() : Endpoint::at(qb);
    int got = count_real_roots(p, ea, eb);
    int want = oracle_count(p, qa, qb, a_inf, b_inf);
    EXPECT_EQ(got, want) << p.to_string() << " on (" << (a_inf ? "-inf" : qa.get_str()) << ", " << (b_inf ? "inf" : qb.get_str()) << "]";
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Sturm, DescartesAgreesWithSturmOnLargerDegrees) {
  std::mt19937 rng(15);
  for (int t = 0; t < 25; ++t) {
    UniPoly p = random_uni(rng, 30, 50);
    UniPoly q = p * random_uni(rng, 12, 9);
    ZPoly z = q.to_primitive_z();
    for (auto [a, b] : {std::pair{-3, 3}, std::pair{0, 1}, std::pair{-1, 0}}) {
      EXPECT_EQ(count_roots_descartes(squarefree_part(z), Endpoint::at(a), Endpoint::at(b)),
                count_real_roots_sturm(q, Endpoint::at(a), Endpoint::at(b)));
    }
    EXPECT_EQ(count_roots_descartes(squarefree_part(z), Endpoint::neg_inf(), Endpoint::pos_inf()),
              count_real_roots_sturm(q, Endpoint::neg_inf(), Endpoint::pos_inf()));
  }
}

// ---------------------------------------------------------------- isolation

TEST(Isolation, RefinesToTolerance) {
  auto r = isolate_and_refine(U("x^2 - 2"), Endpoint::at(0), Endpoint::at(5), make_q(1, 1000000));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].second, 1.41421356, 1e-6);
  EXPECT_LT(r[0].first.hi - r[0].first.lo, make_q(1, 1000000));
  EXPECT_THROW(isolate_and_refine(U("x^2 - 2"), Endpoint::at(0), Endpoint::at(5), 0), ParameterError);
}

TEST(Isolation, ThresholdPolynomials) {
  auto r = isolate_and_refine(data::threshold_m().to_uni("m"), Endpoint::at(0), Endpoint::pos_inf(), make_q(1, 1000));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_GT(r[0].first.lo, make_q(692, 100));
  EXPECT_LT(r[0].first.hi, make_q(694, 100));
  auto mm = isolate_and_refine(data::threshold_M().to_uni("M"), Endpoint::at(0), Endpoint::pos_inf(), make_q(1, 1000));
  ASSERT_FALSE(mm.empty());
  EXPECT_GT(mm.back().first.lo, make_q(757, 100));
  EXPECT_LT(mm.back().first.hi, make_q(759, 100));
}

TEST(Isolation, ExactRationalRootsAndOrdering) {
  UniPoly p = U("(x - 1/2)*(x - 1)*(x - 3/4)*(x^2 - 2)");
  auto r = isolate_and_refine(p, Endpoint::at(0), Endpoint::at(1), make_q(1, 1 << 20));
  ASSERT_EQ(r.size(), 3u);
  EXPECT_TRUE(r[0].first.exact && r[0].first.hi == make_q(1, 2));
  EXPECT_TRUE(r[1].first.exact && r[1].first.hi == make_q(3, 4));
  EXPECT_TRUE(r[2].first.exact && r[2].first.hi == 1);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) EXPECT_LE(r[i].first.hi, r[i + 1].first.lo);
}

TEST(Isolation, SignAtAlgebraicPoint) {
  ZPoly q = U("x^2 - 2").to_primitive_z();
  auto ivs = isolate_roots(q, Endpoint::at(0), Endpoint::at(2));
  AlgebraicPoint pt{q, ivs[0]};
  EXPECT_EQ(sign_at(U("x - 14142/10000").to_primitive_z(), pt), 1);
  EXPECT_EQ(sign_at(U("x - 14143/10000").to_primitive_z(), pt), -1);
  EXPECT_EQ(sign_at(U("x^3 - 2*x").to_primitive_z(), pt), 0);
}

// ---------------------------------------------------------------- dense kernel

TEST(Dense, KroneckerProductMatchesSchoolbook) {
  std::mt19937 rng(16);
  std::uniform_int_distribution<int> cc(-1000000, 1000000);
  std::vector<BigInt> a, b;
  for (int i = 0; i < 40; ++i) a.emplace_back(BigInt(cc(rng)) * BigInt(cc(rng)));
  for (int i = 0; i < 30; ++i) b.emplace_back(cc(rng));
  ZPoly pa(a), pb(b);
  ZPoly prod = pa * pb;
  for (int k = 0; k <= prod.degree(); ++k) {
    BigInt want = 0;
    for (int i = 0; i <= k; ++i)
      if (i < 40 && k - i < 30) want += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
    EXPECT_EQ(prod.c[static_cast<std::size_t>(k)], want);
  }
  EXPECT_EQ(divexact(prod, pb), pa);
  EXPECT_THROW(divexact(prod + ZPoly(BigInt(1)), pb), std::logic_error);
}

TEST(Dense, GcdAndSquarefree) {
  ZPoly a = U("(x - 1)^2*(x + 3)*(2*x + 1)").to_primitive_z();
  ZPoly b = U("(x - 1)*(2*x + 1)*(x^2 + 5)").to_primitive_z();
  EXPECT_EQ(UniPoly::from_z(gcd(a, b)).monic(), U("(x - 1)*(x + 1/2)"));
  EXPECT_EQ(UniPoly::from_z(squarefree_part(a)).monic(), U("(x - 1)*(x + 3)*(x + 1/2)"));
}

TEST(MultiPolyOps, ExactDivisionAndConstantRatio) {
  std::vector<std::string> v{"x", "s"};
  MultiPoly f = P("(x^2 + s*x - 3)*(s^3*x - 2)", v);
  EXPECT_EQ(divexact(f, P("s^3*x - 2", v)), P("x^2 + s*x - 3", v));
  EXPECT_EQ(constant_ratio(P("6*x + 4*s", v), P("3*x + 2*s", v)), 2);
  EXPECT_EQ(constant_ratio(P("6*x + 4*s", v), P("3*x + s", v)), 0);
}
