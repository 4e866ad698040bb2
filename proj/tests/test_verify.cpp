#include <gtest/gtest.h>

#include "oracles.hpp"
#include "strange_lab/verify.hpp"

using namespace strange_lab;

TEST(Gate, DigitAndDivisibility) {
  StarGate g = star_gate({Family::F, 1, 2, 0, 2}, 7);
  EXPECT_TRUE(g.ok());
  EXPECT_EQ(g.digit, padic_digit(make_rat(-1, 12), 1, 7));
  EXPECT_TRUE(star_gate({Family::F, 1, 2, 0, 2}, 11).ok());
  EXPECT_FALSE(star_gate({Family::F, 1, 1, 0, 2}, 23).N_divides_rp);
  StarGate torus = star_gate({Family::Ft, 2, 1, 0, 1}, 23);
  EXPECT_TRUE(torus.ok());
  EXPECT_EQ(torus.digit, 11);
  EXPECT_FALSE(star_gate({Family::Ft, 2, 1, 0, 1}, 5).class_ok);
}

TEST(VerifyFamily, PlainPentagonal) {
  auto rep = verify_family({Family::F, 1, 1, 0, 1}, 5, 2, 2, false);
  EXPECT_EQ(rep.j_range, std::vector<long>({1, 2}));
  EXPECT_EQ(rep.verdicts.size(), 4u);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_TRUE(rep.stabilized);
}

TEST(VerifyFamily, StarSquaredBase) {
  auto rep = verify_family({Family::F, 1, 2, 0, 2}, 11, 1, 2, true);
  EXPECT_EQ(rep.j_range, std::vector<long>({1, 2}));
  EXPECT_TRUE(rep.all_pass());
  auto rep7 = verify_family({Family::F, 1, 2, 0, 2}, 7, 1, 2, true);
  EXPECT_EQ(rep7.j_range, std::vector<long>({1, 2, 3}));
  EXPECT_TRUE(rep7.all_pass());
}

TEST(VerifyFamily, CubicBase) {
  auto rep = verify_family({Family::F, 1, 3, 0, 1}, 19, 1, 2, false);
  EXPECT_EQ(rep.j_range, std::vector<long>({1}));
  EXPECT_TRUE(rep.all_pass());
}

TEST(VerifyFamily, TorusStarAtTwentyThree) {
  auto rep = verify_family({Family::Ft, 2, 1, 0, 1}, 23, 1, 1, true);
  EXPECT_EQ(rep.j_range, std::vector<long>({1, 2, 3, 4, 5}));
  EXPECT_TRUE(rep.all_pass());
}

TEST(VerifyFamily, GateViolationRaised) {
  EXPECT_THROW(verify_family({Family::F, 1, 1, 0, 2}, 23, 1, 1, true), gate_violation);
  EXPECT_THROW(verify_family({Family::Ft, 2, 1, 0, 1}, 5, 1, 1, true), gate_violation);
  EXPECT_THROW(verify_family({Family::F, 1, 5, 0, 1}, 5, 1, 1, false), precondition_error);
}

TEST(VerifyFamily, ProbeReportsFailuresWithValues) {
  // j = 3 is outside the guaranteed range at p = 5; some value must fail and carry its coordinates.
  auto rep = verify_family({Family::F, 1, 1, 0, 1}, 5, 1, 3, false, std::vector<long>{3, 4});
  EXPECT_FALSE(rep.all_pass());
  for (const auto& v : rep.verdicts)
    if (!v.pass) EXPECT_TRUE(v.value.has_value());
}

TEST(VerifyFamily, NegativeRootAtTwentyThree) {
  // Stabilized values at n = 18..22, and the height-30 truncation that differs from them.
  XiTable t = xi_series({Family::F, 1, 1, 0, 2}, 23);
  const char* want[] = {"996347086019386652298515", "-47282079380337433342617115", "2358676029413923124109402891",
                        "-123394523584173651141263781146", "6755269265801720830066628757557"};
  for (int k = 0; k < 5; ++k) EXPECT_EQ(t.values[static_cast<std::size_t>(18 + k)], CycNum(2, BigInt(want[k])));
  auto low = xi_at_height({Family::F, 1, 1, 0, 2}, 23, 30);
  EXPECT_EQ(low[22], CycNum(2, BigInt("-3374324885490973100341136883972043")));
  auto rep = verify_family({Family::F, 1, 1, 0, 2}, 23, 1, 1, false, std::vector<long>{1, 2, 3, 4, 5});
  EXPECT_TRUE(rep.all_pass());
}

TEST(AlphaStability, SmallCases) {
  for (long j = 0; j < 5; ++j)
    for (long k = 0; k <= 1; ++k) EXPECT_TRUE(check_alpha_stability(2, 5, 2, 3, j, k));
  EXPECT_TRUE(check_alpha_stability(2, 5, 3, 4, 2, 2));
  EXPECT_TRUE(check_alpha_stability(2, 5, 2, 2, 1, 1));
  EXPECT_TRUE(check_alpha_stability(1, 5, 2, 4, 3, 1));
  EXPECT_THROW(check_alpha_stability(2, 5, 3, 2, 0, 0), precondition_error);
}

TEST(StrongDivisibility, AgainstDivisionOracle) {
  for (long i : {1L, 4L}) {
    auto r = check_strong_divisibility(2, 5, 5, 9, i);
    EXPECT_EQ(r.lambda, 2);
    EXPECT_TRUE(r.divisible);
    bool exact = false;
    oracle::divide(oracle::Poly([&] {
                     oracle::Poly p;
                     IntPoly a = dissection_part(2, 9, 5, i);
                     for (long e = a.min_exp(); e <= a.max_exp(); ++e)
                       if (a.coeff(e) != 0) p[e] = a.coeff(e);
                     return p;
                   }()),
                   oracle::qpoch(2), &exact);
    EXPECT_TRUE(exact);
  }
  for (long i : {3L, 4L}) EXPECT_TRUE(check_strong_divisibility(1, 5, 5, 9, i).divisible);
  EXPECT_THROW(check_strong_divisibility(2, 5, 5, 9, 0), precondition_error);
  // A residue inside the set is not divisible in general.
  IntPoly a = dissection_part(2, 9, 5, 0);
  detail::Coeffs c(a.coeffs().begin(), a.coeffs().end());
  EXPECT_FALSE(detail::divide_one_minus_qk(c, 1) && detail::divide_one_minus_qk(c, 2));
}

TEST(Nilpotence, Examples) {
  auto r = check_nilpotence(1, 1, 5, 2, 4);
  EXPECT_EQ(r.bound, 6);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(check_nilpotence(1, 1, 5, 2, 2).vacuous);
  auto r2 = check_nilpotence(2, 1, 5, 1, 3);
  EXPECT_EQ(r2.bound, 5);
  EXPECT_TRUE(r2.holds);
  for (long k : {1L, 2L, 3L})
    for (long r0 : {-1L, 1L, 2L})
      for (long lam = 1; lam <= 2; ++lam)
        for (long m = lam; m <= lam + 3; ++m) EXPECT_TRUE(check_nilpotence(k, r0, 5, lam, m).holds);
}

TEST(Dissection, SignsByClass) {
  for (long n = 1; n <= 3; ++n) {
    auto d = check_dissection_identity(2, 7, n);
    EXPECT_EQ(d.cls, PrimeClass::P3);
    EXPECT_EQ(d.i0, 4);
    EXPECT_EQ(d.e, 3);
    EXPECT_EQ(d.sign_found(), -1);
    EXPECT_TRUE(d.passes());
    EXPECT_EQ(floor_mod(d.C, 7), d.i0);
  }
  EXPECT_THROW(check_dissection_identity(2, 5, 1), precondition_error);
}

TEST(Dissection, ExplicitQuotient) {
  // Expanded form: A - (-7 q^3 Ft(q^7)) divided by (1-q)^2 with the division oracle.
  const long p = 7, n = 2;
  IntPoly f = ft_partial(2, p * n - 1);
  IntPoly A = dissect(f, p).parts[4];
  IntPoly D = A + (f.dilated(p).shifted(3) * IntPoly::monomial(BigInt(p), 0));
  oracle::Poly dp;
  for (long e = D.min_exp(); e <= D.max_exp(); ++e)
    if (D.coeff(e) != 0) dp[e] = D.coeff(e);
  bool exact = false;
  oracle::divide(dp, oracle::Poly{{0, BigInt(1)}, {1, BigInt(-2)}, {2, BigInt(1)}}, &exact);
  EXPECT_TRUE(exact);
}

TEST(Moments, IdentityHolds) {
  for (long i = 0; i < 5; ++i) EXPECT_TRUE(check_moment_identity(2, 5, 0, i).equal()) << i;
  EXPECT_TRUE(check_moment_identity(2, 5, 1, 0).equal());
  EXPECT_TRUE(check_moment_identity(2, 7, 2, 4).equal());
  auto printed = check_moment_identity(2, 5, 1, 2, SignConvention::printed);
  EXPECT_EQ(printed.lhs, -printed.rhs);
}

TEST(Moments, InversionFormula) {
  for (long n = 0; n <= 2; ++n) {
    auto g = check_gar_inversion(2, 7, n);
    EXPECT_TRUE(g.equal()) << n << " " << g.direct << " " << g.from_gamma << " " << g.from_c_one;
  }
}
