/** @file test_norm_relations.cpp @brief Operator identities, composite norms, p-stabilization, A_l, twist systems, trace identity. */

#include <gtest/gtest.h>

#include <random>

#include "rsw/norm_relations.hpp"
#include "rsw/otsuki.hpp"

using namespace rsw;

namespace {

/** Random rational point with nonzero coordinates. */
std::vector<Rational> random_point(std::mt19937& rng, size_t n) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<Rational> pt;
    for (size_t i = 0; i < n; ++i) {
        int a = 0;
        while (a == 0) a = num(rng);
        pt.push_back(Rational(a, den(rng)));
    }
    for (auto& x : pt) x.canonicalize();
    return pt;
}

const Eigenform& f11() {
    static Eigenform f = ingest(default_data_dir() + "/f11.txt");
    return f;
}
const Eigenform& g26() {
    static Eigenform g = ingest(default_data_dir() + "/g26.txt");
    return g;
}

}  // namespace

TEST(Rewrite, SpHoldsAndPerturbationFails) {
    EXPECT_TRUE(verify_sp_rewrite().holds);
    Mutation m{"S.p+1", -1};  // (p+1) -> p inside S_p'
    auto r = verify_sp_rewrite(&m);
    EXPECT_FALSE(r.holds);
    EXPECT_FALSE(r.witness.empty());
}

TEST(Rewrite, SpAtNumericPoint) {
    // p = 7, df = dg = 1, a = b = 2, s = 1
    std::vector<Rational> pt{2, 2, 1, 1, 1, 7};
    EXPECT_EQ(second_norm_operator().eval(pt), second_norm_rewritten().eval(pt));
    EXPECT_EQ(second_norm_operator().eval(pt), Rational(-1 + 4 + (8 - 4 - 4) + 4 - 7));
}

TEST(Rewrite, HigherBothLevels) {
    EXPECT_TRUE(verify_higher_rewrite().holds);
    Mutation m{"hi.2dTdT", -4};  // sign flip of 2 (<p^-1>T', <p^-1>T') s^-1
    EXPECT_FALSE(verify_higher_rewrite(&m).holds);
}

TEST(Rewrite, RandomPointsAgree) {
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto pt = random_point(rng, 6);
        EXPECT_EQ(second_norm_operator().eval(pt), second_norm_rewritten().eval(pt));
        for (int lv : {2, 3})
            for (int r = 0; r < lv; ++r) EXPECT_EQ(higher_norm_rule(lv).at(r).eval(pt), higher_norm_rewritten(lv).at(r).eval(pt));
    }
}

TEST(OperatorEuler, SpecializesToDisplayAndRoots) {
    auto r = verify_operator_euler_factor();
    EXPECT_TRUE(r.holds) << r.witness;
    EXPECT_TRUE(r.matches_roots);
    ASSERT_EQ(r.coefficients.size(), 5u);
    EXPECT_EQ(r.coefficients[0], "1");
}

TEST(OperatorEuler, MatchesConcreteForms) {
    for (i64 p : {3, 5, 7, 17, 29})
        EXPECT_EQ(specialize_operator_factor(f11(), g26(), p), rankin_euler_factor(f11(), g26(), p).poly) << p;
}

TEST(CompositeNorms, BothPartsAndHead) {
    auto r = derive_composite_norms();
    EXPECT_TRUE(r.match_a) << r.witness;
    EXPECT_TRUE(r.match_b) << r.witness;
    EXPECT_TRUE(r.head_a);
}

TEST(CompositeNorms, RandomPoints) {
    auto r = derive_composite_norms();
    std::mt19937 rng(11);
    for (int i = 0; i < 20; ++i) {
        auto pt = random_point(rng, 6);
        EXPECT_EQ(r.derived_a.eval(pt), r.closed_a.eval(pt));
        EXPECT_EQ(r.derived_b.eval(pt), r.closed_b.eval(pt));
    }
}

TEST(CompositeNorms, WrongDegreeConventionFails) {
    // with Norm o res = p into level m as well, (a) no longer matches
    OpSymbols o;
    std::map<int, FormalClassExpr> rules;
    rules[1].add(0, second_norm_operator());
    rules[2] = higher_norm_rule(2);
    FormalClassExpr e;
    e.add(2, o.one);
    e = norm_step(e, 2, rules);
    FormalClassExpr wrong;
    for (auto& [i, c] : e.c) {
        if (i == 1) {
            for (auto& [j, d] : rules[1].c) wrong.add(j, c * d);
        } else {
            wrong.add(i, c * o.p);
        }
    }
    EXPECT_NE(wrong.at(0), composite_norm_closed_forms().first);
}

TEST(Corestriction, SymbolicAndDirection) {
    auto r = specialize_to_corestriction();
    EXPECT_TRUE(r.holds) << r.witness;
    EXPECT_FALSE(r.inverse_direction_holds);
}

TEST(Corestriction, NumericPoint) {
    auto r = specialize_to_corestriction();
    std::vector<Rational> pt{2, 3, 1, 5, 7, 2};
    EXPECT_EQ(r.lhs.eval(pt), r.rhs.eval(pt));
}

TEST(Corestriction, SigmaInverseCoefficient) {
    // (p+1) eps_f eps_g - eps_g a_f^2 - eps_f a_g^2 at alpha=2, beta=3, gamma=1, delta=5, p=7
    Rational ef(6, 7), eg(5, 7), af = 5, ag = 6, p = 7;
    Rational want = (p + 1) * ef * eg - eg * af * af - ef * ag * ag;
    OpSymbols o;
    OperatorPoly op = second_norm_operator();
    OperatorPoly coef(operator_ring(), 0);
    for (auto& [mono, c] : op.terms())
        if (mono.e[4] == -1) coef += MPoly::monomial(operator_ring(), mono, c);
    coef = coef * o.s;
    EXPECT_EQ(specialize_eigen(coef).eval({2, 3, 1, 5, 7, 1}), want);
}

TEST(Pstab, MatchesEulerProduct) {
    auto r = pstab_projection_formula();
    EXPECT_TRUE(r.holds) << r.witness;
    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
        auto pt = random_point(rng, 6);
        try {
            EXPECT_EQ(r.evaluate(pt), r.target.eval(pt));
        } catch (const MathError&) {
        }
    }
    EXPECT_THROW(r.evaluate({2, 2, 1, 5, 7, 2}), MathError);
}

TEST(Pstab, LeadingTermAtInfinity) {
    // s -> 1/u, u -> 0 gives alpha gamma / ((gamma - delta)(alpha - beta))
    auto r = pstab_projection_formula();
    RingPtr E = eigen_ring();
    std::vector<RatFunc> img;
    for (int i = 0; i < 5; ++i) img.push_back(RatFunc(MPoly::var(E, i)));
    img.push_back(RatFunc(MPoly::var(E, 5)).inv());  // s -> 1/s, then s = 0 below
    RatFunc t = r.target.substitute(img);
    std::vector<Rational> pt{2, 3, 1, 5, 7, 0};
    EXPECT_EQ(t.eval(pt), Rational(2 * 1) / (Rational(1 - 5) * Rational(2 - 3)));
}

TEST(Pstab, DroppedDenominatorTermFails) {
    Mutation m{"J.ad", -1};
    EXPECT_FALSE(pstab_projection_formula(&m).holds);
}

TEST(AEll, SymbolicCongruence) {
    auto r = derive_A_ell();
    EXPECT_TRUE(r.defining_relation);
    EXPECT_TRUE(r.congruent) << r.witness;
    EXPECT_EQ(r.A[0], "1");
}

TEST(AEll, ConcreteAtThree) {
    auto r = A_ell_concrete(f11(), g26(), 3);
    EXPECT_TRUE(r.congruent) << r.witness;
    // l = 5: the quotient has 5 in the denominator only, which is prime to 4
    EXPECT_TRUE(A_ell_concrete(f11(), g26(), 5).congruent);
}

TEST(AEll, PerturbedCoefficientBreaksCongruence) {
    Mutation m{"A.eps", Rational(1, 2)};
    auto r = derive_A_ell(&m);
    EXPECT_FALSE(r.congruent && r.defining_relation);
}

TEST(Twist, SmallCasesAndExhaustive) {
    auto sys = build_twist_system(210);
    EXPECT_EQ(sys.at(1), 0);
    EXPECT_EQ(mod(sys.at(15), 3), mod(2 * sys.at(3), 3));
    EXPECT_FALSE(check_twist_system(sys).has_value());
    EXPECT_EQ(sys.count(4), 0u);
    auto ex = build_twist_system(210, {2, 3});
    EXPECT_EQ(ex.count(6), 0u);
    EXPECT_FALSE(check_twist_system(ex).has_value());
    // a tampered entry is caught
    sys[15] = mod(sys[15] + 5, 15);
    EXPECT_TRUE(check_twist_system(sys).has_value());
}

TEST(Otsuki, DefaultFamilies) {
    for (auto [m, l] : std::vector<std::pair<i64, i64>>{{1, 3}, {4, 3}, {3, 5}, {1, 2}, {5, 2}})
        for (auto& fam : default_otsuki_families()) {
            auto r = otsuki_trace_check(m, l, fam);
            EXPECT_TRUE(r.holds) << m << "," << l << " " << fam.name << " " << r.witness;
            EXPECT_FALSE(r.holds_uniform);
            EXPECT_TRUE(r.off_by_tau);
        }
}

TEST(Otsuki, TrivialWeightsGiveClassicalTrace) {
    UPoly one(std::vector<Rational>{1});
    auto fam = otsuki_constant_family("F=G=1", one, one);
    auto r = otsuki_trace_check(4, 3, fam);
    EXPECT_TRUE(r.holds);
    // classical: tr(zeta_12) to Q(i) = -zeta_4^{3^{-1}} = -zeta_4^3 = zeta_4 = zeta_12^3
    CycloModule big(12, {2, 3});
    auto want = big.evaluate(big.basis(3));
    ASSERT_EQ(r.lhs.size(), want.size());
    for (size_t i = 0; i < want.size(); ++i) EXPECT_EQ(r.lhs[i], want[i].to_string()) << i;
}

TEST(Otsuki, SpecFamilyAndMutation) {
    UPoly X = UPoly::x(), one(std::vector<Rational>{1});
    auto fam = otsuki_constant_family("F=1-X,G=1-X^2", one - X, one - X * X);
    EXPECT_TRUE(otsuki_trace_check(4, 3, fam).holds);
    Mutation m{"ot.l-1", 1};
    EXPECT_FALSE(otsuki_trace_check(4, 3, fam, &m).holds);
    EXPECT_THROW(otsuki_trace_check(3, 3, fam), MathError);
    UPoly bad(std::vector<Rational>{2, 1});
    EXPECT_THROW(otsuki_trace_check(1, 3, otsuki_constant_family("bad", bad, one)), MathError);
}

TEST(Catalog, AllPassAndEveryMutationFails) {
    int mutations = 0;
    for (auto& e : norm_relation_catalog()) {
        auto r = e.run(nullptr);
        EXPECT_TRUE(r.holds) << e.id << " " << r.witness;
        for (auto& s : e.slots) {
            Mutation m{s, 1};
            EXPECT_FALSE(e.run(&m).holds) << e.id << " slot " << s;
            ++mutations;
        }
    }
    EXPECT_GE(mutations, 10);
    EXPECT_THROW(catalog_entry("nope"), MathError);
}
