/** @file test_euler_factors.cpp @brief Hecke and Rankin-Selberg Euler factors, Weil bounds, interpolation factors, correction polynomial. */

#include <gtest/gtest.h>

#include "rsw/euler.hpp"

using namespace rsw;

namespace {

const Eigenform& f11() {
    static Eigenform f = ingest(default_data_dir() + "/f11.txt");
    return f;
}
const Eigenform& f37() {
    static Eigenform f = ingest(default_data_dir() + "/f37.txt");
    return f;
}
const Eigenform& g26() {
    static Eigenform g = ingest(default_data_dir() + "/g26.txt");
    return g;
}

FieldPoly rat_poly(const TowerPtr& K, std::vector<long> c) {
    FieldPoly P{K, {}};
    for (long x : c) P.c.push_back(TowerElt(K, x));
    return P;
}

}  // namespace

namespace rsw {
inline void PrintTo(const FieldPoly& P, std::ostream* os) { *os << P.to_string(); }
}  // namespace rsw

TEST(HeckePolynomial, Level11At2) {
    // a_2 = -2: X^2 + 2X + 2
    EXPECT_EQ(hecke_polynomial(f11(), 2), rat_poly(f11().field, {2, 2, 1}));
    EXPECT_THROW(hecke_polynomial(f11(), 11), MathError);
}

TEST(HeckePolynomial, VanishingTrace) {
    Eigenform f = parse_eigenform_string("level=1 weight=2 field=t\n1: 1\n2: 0\n3: 0\n", false);
    EXPECT_EQ(hecke_polynomial(f, 3), rat_poly(f.field, {3, 0, 1}));
}

TEST(HeckePolynomial, CharacterTwistedLevel26) {
    // a_5 = -3i, chi(5) = legendre(5, 13) = -1
    auto H = hecke_polynomial(g26(), 5);
    TowerElt i = TowerElt::var(g26().field, 0);
    EXPECT_EQ(H.coeff(1), i * Rational(3));
    EXPECT_EQ(H.coeff(0), TowerElt(g26().field, -5));
    EXPECT_THROW(hecke_polynomial(g26(), 13), MathError);
}

TEST(RankinFactor, DisplayIdentityInRoots) { EXPECT_TRUE(rankin_display_identity()); }

TEST(RankinFactor, ZeroTraces) {
    Eigenform f = parse_eigenform_string("level=1 weight=2 field=t\n1: 1\n2: 0\n3: 0\n", false);
    // 1 - 2p^2 X^2 + p^4 X^4 at p = 3
    EXPECT_EQ(rankin_euler_factor(f, f, 3).poly, rat_poly(f.field, {1, 0, -18, 0, 81}));
}

TEST(RankinFactor, TwoPathsAgree) {
    for (i64 p : {3, 5, 7, 17, 19, 47}) {
        auto a = rankin_euler_factor(f11(), g26(), p), b = rankin_euler_factor_factored(f11(), g26(), p);
        EXPECT_EQ(a.poly, b.poly) << p << ": " << a.to_string() << " vs " << b.to_string();
    }
    for (i64 p : {2, 3, 5, 7}) EXPECT_EQ(rankin_euler_factor(f37(), f37(), p).poly, rankin_euler_factor_factored(f37(), f37(), p).poly);
}

TEST(RankinFactor, Level11And26At3) {
    // a = -1, b = -1, chi_g(3) = 1: 1 - X + (3 + 3 - 18) X^2 - 9 X^3 + 81 X^4
    auto E = rankin_euler_factor(f11(), g26(), 3);
    EXPECT_EQ(E.poly, rat_poly(E.poly.field, {1, -1, -12, -9, 81}));
    EXPECT_THROW(rankin_euler_factor(f11(), g26(), 2), MathError);
    EXPECT_THROW(rankin_euler_factor(f11(), g26(), 11), MathError);
}

TEST(Weil, GoodPrimesUpTo50) {
    for (i64 p : primes_upto(50)) {
        if (p == 2 || p == 11 || p == 13) continue;
        auto w = weil_check(rankin_euler_factor(f11(), g26(), p));
        EXPECT_TRUE(w.holds) << p << " " << w.detail;
        // equality |lambda| = p for these weight 2 forms
        EXPECT_NEAR(w.max_abs, static_cast<double>(p), 1e-6 * p);
    }
}

TEST(Weil, AdversarialAndDegenerate) {
    EXPECT_FALSE(weil_check(euler_factor_from_rationals(3, 2, 2, {1, -9})).holds);  // 1 - p^2 X
    EXPECT_TRUE(weil_check(euler_factor_from_rationals(3, 2, 2, {1})).holds);
    EXPECT_TRUE(weil_check(euler_factor_from_rationals(3, 2, 2, {1, -3})).holds);
}

TEST(Interpolation, KnownValues) {
    auto F = interpolation_factors(1);
    // alpha = 2, beta = 3, p = 3: E(f) = 1 - 3/6
    std::vector<Rational> pt{2, 3, 5, 7, 3};
    EXPECT_EQ(F.E_f.eval(pt), Rational(1, 2));
    EXPECT_EQ(F.E_star_f.eval(pt), Rational(-1, 2));
    // j = 1: (1 - 15/3)(1 - 21/3)(1 - 1/10)(1 - 1/14)
    EXPECT_EQ(F.E_fg_j.eval(pt), Rational(-4) * Rational(-6) * Rational(9, 10) * Rational(13, 14));
}

TEST(Interpolation, SymmetryGrid) {
    for (int k = 1; k <= 5; ++k)
        for (int l = 1; l <= k; ++l)
            for (int j = 0; j <= k; ++j) {
                auto r = functional_symmetry_check(k, l, j);
                EXPECT_TRUE(r.holds) << r.detail;
                // the product E(f) E*(f) is invariant but E*(f*) is E*(f), not E(f)
                EXPECT_FALSE(r.e_star_literal) << r.detail;
            }
}

TEST(Correction, TrivialLevel) {
    auto c = local_correction(f11(), g26(), 1);
    EXPECT_TRUE(c.certified);
    EXPECT_TRUE(c.local.empty());
    EXPECT_EQ(c.to_string(), "1");
}

TEST(Correction, CoprimeLevels) {
    auto c = local_correction(f11(), f37(), 407);
    EXPECT_TRUE(c.certified) << c.residual;
    EXPECT_TRUE(c.is_one()) << c.to_string();
}

TEST(Correction, Level286Pair) {
    auto c = local_correction(f11(), g26(), 286, 8);
    EXPECT_TRUE(c.certified) << c.residual;
    ASSERT_EQ(c.local.size(), 3u);
    EXPECT_TRUE(c.is_one()) << c.to_string();
}

TEST(Correction, SuppliedFactorsAndFailure) {
    // with P_2 = 1 the series at 2 is not a polynomial
    std::map<i64, FieldPoly> bad{{2, rat_poly(g26().field, {1})}};
    auto c = local_correction(f11(), g26(), 286, 8, bad);
    EXPECT_FALSE(c.certified);
    EXPECT_NE(c.residual.find("p = 2"), std::string::npos);
    // a supplied factor equal to the default agrees
    bad[2] = local_factor(f11(), g26(), 2);
    EXPECT_TRUE(local_correction(f11(), g26(), 286, 8, bad).is_one());
    // good prime at level 2 * 3 * 5 * 7 for the pair of rational forms
    auto good = local_correction(f11(), f37(), 3 * 5, 6);
    EXPECT_TRUE(good.certified);
    for (auto& l : good.local) EXPECT_EQ(l.polynomial.degree(), 2) << l.p << " " << l.polynomial.to_string();
}

TEST(Correction, MultiplicativeAcrossPrimes) {
    auto joint = local_correction_joint(f11(), g26(), 286, 6);
    ASSERT_EQ(joint.size(), 1u);
    EXPECT_EQ(joint.begin()->first, (std::vector<int>{0, 0, 0}));
    auto joint2 = local_correction_joint(f11(), f37(), 15, 6);
    auto sep = local_correction(f11(), f37(), 15, 6);
    for (auto& [e, v] : joint2) {
        if (e[0] > 3 || e[1] > 3) continue;
        EXPECT_EQ(v, sep.local[0].product.coeff(e[0]) * sep.local[1].product.coeff(e[1])) << e[0] << "," << e[1];
    }
}
