/**
 * @file test_exact_arith.cpp
 * @brief Rationals, polynomials, rational functions, cyclotomic fields, towers, group rings.
 */

#include <gtest/gtest.h>

#include <random>

#include "rsw/group_ring.hpp"
#include "rsw/parse.hpp"
#include "rsw/ratfunc.hpp"
#include "rsw/tower.hpp"

using namespace rsw;

namespace {

MPoly random_poly(std::mt19937& rng, const RingPtr& R, int terms, int maxdeg, bool laurent = false) {
    std::uniform_int_distribution<int> c(-5, 5), e(0, maxdeg), le(-2, maxdeg);
    MPoly p(R);
    for (int k = 0; k < terms; ++k) {
        Mono m;
        for (size_t i = 0; i < R->nvars(); ++i) m.e[i] = static_cast<std::int16_t>((laurent && R->invertible(i)) ? le(rng) : e(rng));
        p += MPoly::monomial(R, m, make_rat(c(rng), 1 + (k % 3)));
    }
    return p;
}

CycloElt random_cyclo(std::mt19937& rng, i64 L) {
    std::uniform_int_distribution<int> c(-4, 4);
    CycloElt z(L, 0);
    for (int k = 0; k < 5; ++k) z += CycloElt::zeta(L, c(rng) + 7) * make_rat(c(rng), 1 + k % 2);
    return z;
}

}  // namespace

TEST(Rational, CanonicalForm) {
    Rational r = make_rat(6, -4);
    EXPECT_EQ(r.get_num(), -3);
    EXPECT_EQ(r.get_den(), 2);
    EXPECT_EQ(parse_rational("-21/17"), make_rat(-21, 17));
    EXPECT_THROW(parse_rational("1/0"), MathError);
    EXPECT_EQ(valuation(make_rat(18, 5), 3), 2);
    EXPECT_EQ(valuation(make_rat(5, 18), 3), -2);
}

TEST(NumberTheory, BernoulliAndZeta) {
    EXPECT_EQ(bernoulli(2), make_rat(1, 6));
    EXPECT_EQ(bernoulli(4), make_rat(-1, 30));
    EXPECT_EQ(bernoulli(12), make_rat(-691, 2730));
    EXPECT_EQ(zeta_one_minus(2), make_rat(-1, 12));
    EXPECT_EQ(zeta_one_minus(4), make_rat(1, 120));
    EXPECT_EQ(zeta_one_minus(3), 0);
}

TEST(NumberTheory, CrtAndUnits) {
    EXPECT_EQ(crt(2, 3, 3, 5), 8);
    EXPECT_EQ(invmod(5, 3), 2);
    EXPECT_EQ(units_mod(12).size(), 4u);
    EXPECT_EQ(euler_phi(30), 8);
    EXPECT_EQ(legendre(5, 13), -1);
    EXPECT_EQ(legendre(3, 13), 1);
}

TEST(UPoly, CyclotomicAndGcd) {
    EXPECT_EQ(cyclotomic_poly(12).to_string(), "x^4 - x^2 + 1");
    EXPECT_EQ(cyclotomic_poly(1).to_string(), "x - 1");
    UPoly a = parse_upoly("(x-1)*(x+2)^2", "x"), b = parse_upoly("(x+2)*(x-3)", "x");
    EXPECT_EQ(UPoly::gcd(a, b).to_string(), "x + 2");
    EXPECT_EQ(a.squarefree_part(), parse_upoly("(x-1)*(x+2)", "x"));
}

TEST(UPoly, FactorOverQ) {
    UPoly f = parse_upoly("(x^2+1)*(x-2)*(x^2-2)*(3*x+1)", "x");
    auto fac = factor_over_q(f);
    ASSERT_EQ(fac.size(), 4u);
    UPoly prod = 1;
    for (auto& [g, m] : fac) prod *= g;
    EXPECT_EQ(prod, f.monic());
    auto irr = factor_over_q(parse_upoly("17*x^4 + 6*x^3 - 21*x^2 + 6*x + 17", "x"));
    EXPECT_EQ(irr.size(), 1u);
    auto sq = factor_over_q(parse_upoly("(x^2+x+1)^2*(x-5)", "x"));
    ASSERT_EQ(sq.size(), 2u);
    EXPECT_EQ(sq[1].second, 2);
}

TEST(MPoly, RingAxiomsRandomized) {
    std::mt19937 rng(11);
    RingPtr R = make_ring({"a", "b", "s"}, {false, false, true});
    for (int it = 0; it < 30; ++it) {
        MPoly x = random_poly(rng, R, 4, 3, true), y = random_poly(rng, R, 4, 3, true), z = random_poly(rng, R, 3, 2, true);
        EXPECT_EQ((x * y) * z, x * (y * z));
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ(x + y, y + x);
        EXPECT_EQ(x * y, y * x);
        EXPECT_TRUE((x - x).is_zero());
    }
}

TEST(MPoly, LaurentAndExactDivision) {
    RingPtr R = make_ring({"a", "s"}, {false, true});
    MPoly s = MPoly::var(R, "s"), a = MPoly::var(R, "a");
    EXPECT_EQ((s.pow(-2) * s.pow(3)), s);
    EXPECT_THROW(a.pow(-1), MathError);
    MPoly f = (a + s.pow(-1)) * (a * a - 3);
    auto q = exact_div(f, a + s.pow(-1));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, a * a - 3);
    EXPECT_FALSE(exact_div(f, a + 2).has_value());
    // invertible monomials divide anything
    EXPECT_TRUE(exact_div(a, s.pow(5)).has_value());
    EXPECT_FALSE(exact_div(MPoly(R, 1), a).has_value());
}

TEST(MPoly, GcdRandomized) {
    std::mt19937 rng(5);
    RingPtr R = make_ring({"x", "y", "z"});
    for (int it = 0; it < 25; ++it) {
        MPoly f = random_poly(rng, R, 3, 2), g = random_poly(rng, R, 3, 2), h = random_poly(rng, R, 2, 2);
        if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
        MPoly d = gcd(f * g, f * h);
        // f divides the gcd, and the gcd divides both products
        EXPECT_TRUE(exact_div(d, f).has_value()) << f.to_string() << " | " << d.to_string();
        EXPECT_TRUE(exact_div(f * g, d).has_value());
        EXPECT_TRUE(exact_div(f * h, d).has_value());
    }
}

TEST(RatFunc, CanonicalFormAndArithmetic) {
    RingPtr R = make_ring({"x", "p"}, {false, true});
    RatFunc f = parse_ratfunc("(x^2-1)/(x-1)", R);
    EXPECT_TRUE(f.is_polynomial());
    EXPECT_EQ(f.num().to_string(), "x + 1");
    RatFunc g = parse_ratfunc("1/(2*p*x - 4*p)", R);
    // denominator content-normalized, positive lead, invertible monomials moved up
    EXPECT_EQ(g.den().to_string(), "x - 2");
    EXPECT_EQ(g.num().to_string(), "1/2*p^-1");
    RatFunc h = parse_ratfunc("1/(1-x) + x/(1-x)^2", R);
    EXPECT_EQ(h, parse_ratfunc("1/(1-x)^2", R));
    EXPECT_TRUE(h.same_form(parse_ratfunc("1/(x-1)^2", R)));
    EXPECT_EQ(h * h.inv(), RatFunc(R, 1));
    EXPECT_THROW(RatFunc(R).inv(), MathError);
}

TEST(Cyclo, BasicRelations) {
    CycloElt z = CycloElt::zeta(3);
    EXPECT_TRUE((z * z + z + CycloElt(3, 1)).is_zero());
    CycloElt i = CycloElt::zeta(4);
    EXPECT_EQ(i * i, CycloElt(4, -1));
    // lifting: zeta_3 = zeta_12^4
    EXPECT_EQ(z.lift(12), CycloElt::zeta(12, 4));
    EXPECT_EQ(z + i, CycloElt::zeta(12, 4) + CycloElt::zeta(12, 3));
    EXPECT_EQ(CycloElt::zeta(5).galois(2), CycloElt::zeta(5, 2));
}

TEST(Cyclo, EmbeddingAndInverseRandomized) {
    std::mt19937 rng(7);
    for (i64 L : {3, 4, 5, 7, 8, 12, 15}) {
        for (int it = 0; it < 10; ++it) {
            CycloElt x = random_cyclo(rng, L), y = random_cyclo(rng, L);
            for (i64 k : units_mod(L)) {
                EXPECT_LT(std::abs((x * y).to_complex(k) - x.to_complex(k) * y.to_complex(k)), 1e-10);
                EXPECT_LT(std::abs((x + y).to_complex(k) - x.to_complex(k) - y.to_complex(k)), 1e-10);
            }
            if (!x.is_zero()) {
                EXPECT_EQ(x.inv().inv(), x);
                EXPECT_EQ(x * x.inv(), CycloElt(L, 1));
            }
            EXPECT_EQ((x * y) * x, x * (y * x));
        }
    }
}

TEST(Tower, NumberFieldBasics) {
    auto K = TowerRing::make({"x"}, {"x^2 - x - 1"});
    TowerElt x = TowerElt::var(K, 0);
    EXPECT_EQ(x.inv(), x - Rational(1));
    auto mp = x.minpoly();
    EXPECT_EQ(mp.poly.to_string(), "x^2 - x - 1");
    EXPECT_FALSE(mp.warning);
    EXPECT_EQ(TowerElt(K, 1).minpoly().poly.to_string(), "x - 1");
    EXPECT_EQ(x.charpoly().to_string(), "x^2 - x - 1");
}

TEST(Tower, ZeroDivisorsReported) {
    auto K = TowerRing::make({"x"}, {"x^2 - 1"});
    TowerElt x = TowerElt::var(K, 0);
    EXPECT_THROW((x - Rational(1)).inv(), MathError);
    auto B = TowerRing::make({"x", "y"}, {"x^2 + 1", "y^2 + 1"});
    TowerElt u = TowerElt::var(B, 0) - TowerElt::var(B, 1);
    EXPECT_THROW(u.inv(), MathError);
    auto mp = (TowerElt::var(B, 0) * TowerElt::var(B, 1)).minpoly();
    // xy = +-1 on the components
    EXPECT_EQ(mp.poly.to_string(), "x^2 - 1");
    EXPECT_TRUE(mp.warning);
}

TEST(Tower, BiFieldInverseRandomized) {
    std::mt19937 rng(3);
    auto B = TowerRing::make({"x", "y"}, {"x^2 - 2", "y^3 - x*y - 1"});
    std::uniform_int_distribution<int> c(-3, 3);
    for (int it = 0; it < 15; ++it) {
        TowerElt e(B, 0);
        for (auto& m : B->basis()) e += TowerElt(B, MPoly::monomial(B->ring(), m, c(rng)));
        if (e.is_zero()) continue;
        TowerElt ei = e.inv();
        EXPECT_EQ(e * ei, TowerElt(B, 1));
        EXPECT_EQ(ei.inv(), e);
    }
}

TEST(Tower, RootOfUnityTest) {
    EXPECT_TRUE(divides_cyclotomic(parse_upoly("x^2+1", "x")).first);
    EXPECT_EQ(divides_cyclotomic(parse_upoly("x^2+1", "x")).second, 4);
    EXPECT_TRUE(divides_cyclotomic(parse_upoly("x-1", "x")).first);
    EXPECT_FALSE(divides_cyclotomic(parse_upoly("x^4 + 6/17*x^3 - 21/17*x^2 + 6/17*x + 1", "x")).first);
    EXPECT_FALSE(divides_cyclotomic(parse_upoly("x^2-x-1", "x")).first);
}

TEST(GroupRing, BracketsAndAugmentation) {
    using G = GroupRingElt<Rational>;
    EXPECT_EQ(G::bracket(5, 2, 1) * G::bracket(5, 3, 1), G::bracket(5, 1, 1));
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int it = 0; it < 20; ++it) {
        G x(7, 0), y(7, 0);
        for (i64 a : units_mod(7)) {
            x += G::bracket(7, a, c(rng));
            y += G::bracket(7, a, c(rng));
        }
        EXPECT_EQ(x * y, y * x);
        EXPECT_EQ((x * y).augmentation(), x.augmentation() * y.augmentation());
        EXPECT_EQ((x + y).augmentation(), x.augmentation() + y.augmentation());
    }
}

TEST(GroupRing, AugmentMod) {
    using G = GroupRingElt<Rational>;
    auto r = groupring_augment_mod(G::bracket(9, 2, 1) - G::bracket(9, 4, 1), 7);
    EXPECT_TRUE(r.zero_class);
    EXPECT_EQ(r.augmentation, 0);
    auto r2 = groupring_augment_mod(G::bracket(5, 1, 4), 5);
    EXPECT_TRUE(r2.zero_class);
    auto r3 = groupring_augment_mod(G::bracket(5, 1, 3), 5);
    EXPECT_FALSE(r3.zero_class);
    EXPECT_THROW(groupring_augment_mod(G::bracket(5, 1, make_rat(1, 2)), 5), MathError);
    // cyclotomic coefficients
    using GC = GroupRingElt<CycloElt>;
    GC e = GC::bracket(5, 2, CycloElt::zeta(4) * Rational(4)) + GC::bracket(5, 3, CycloElt(4, 8));
    EXPECT_TRUE(groupring_augment_mod(e, 5).zero_class);
}

TEST(Parse, Errors) {
    RingPtr R = make_ring({"t"});
    EXPECT_THROW(parse_mpoly("t +* 2", R), ParseError);
    EXPECT_THROW(parse_mpoly("u", R), ParseError);
    EXPECT_THROW(parse_mpoly("1/t", R), ParseError);
    EXPECT_EQ(parse_mpoly("3*t + 2", R).to_string(), "3*t + 2");
    EXPECT_EQ(parse_mpoly("-(t-1)^2", R).to_string(), "-t^2 + 2*t - 1");
}
