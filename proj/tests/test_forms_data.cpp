/** @file test_forms_data.cpp @brief Eigenform ingestion, oracles, stabilisation and the hypothesis checklist. */

#include <gtest/gtest.h>

#include <set>

#include "rsw/forms.hpp"

using namespace rsw;

namespace {

std::string path(const std::string& name) { return default_data_dir() + "/" + name; }

const Eigenform& f11() {
    static Eigenform f = ingest(path("f11.txt"));
    return f;
}
const Eigenform& f37() {
    static Eigenform f = ingest(path("f37.txt"));
    return f;
}
const Eigenform& g26() {
    static Eigenform g = ingest(path("g26.txt"));
    return g;
}

std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/** Replace the value on line "n: ..." of a data file. */
std::string mutate(std::string text, int n, const std::string& value) {
    std::string key = "\n" + std::to_string(n) + ": ";
    auto pos = text.find(key);
    auto end = text.find('\n', pos + 1);
    return text.substr(0, pos) + key + value + text.substr(end);
}

}  // namespace

TEST(Ingest, BundledLevel11) {
    const auto& f = f11();
    EXPECT_EQ(f.level, 11);
    EXPECT_EQ(f.weight, 2);
    std::vector<long> want{1, -2, -1, 2, 1};
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(f.coeff(n).rational_value(), want[n - 1]);
    EXPECT_TRUE(f.chi.is_trivial());
}

TEST(Ingest, BundledLevel26) {
    const auto& g = g26();
    TowerElt i = TowerElt::var(g.field, 0);
    EXPECT_EQ(g.coeff(2), i);
    EXPECT_EQ(g.coeff(3), TowerElt(g.field, -1));
    EXPECT_EQ(g.coeff(4), TowerElt(g.field, -1));
    EXPECT_EQ(g.coeff(5), i * Rational(-3));
    EXPECT_EQ(g.chi(2), TowerElt(g.field, -1));
    // the character is the Legendre symbol mod 13
    for (i64 a = 1; a < 13; ++a) EXPECT_EQ(g.chi(a).rational_value(), legendre(a, 13)) << a;
    EXPECT_TRUE(g.chi(26).is_zero());
}

TEST(Ingest, MultiplicativityViolation) {
    std::string text = slurp(path("f11.txt"));
    std::string bad = mutate(text, 6, "3");  // a_6 = 2 in the data
    try {
        parse_eigenform_string(bad);
        FAIL() << "no violation reported";
    } catch (const InvariantViolation& e) {
        EXPECT_EQ(e.witness, (std::pair<i64, i64>{2, 3}));
    }
}

TEST(Ingest, RecursionViolation) {
    std::string bad = mutate(slurp(path("f11.txt")), 9, "7");
    try {
        parse_eigenform_string(bad);
        FAIL() << "no violation reported";
    } catch (const InvariantViolation& e) {
        EXPECT_EQ(e.witness, (std::pair<i64, i64>{3, 1}));
    }
}

TEST(Ingest, ParseErrorsCarryLineNumbers) {
    try {
        parse_eigenform_string("level=11 weight=2 field=t\n1: 1\n2: 1/\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_EQ(e.line, 3);
    }
    EXPECT_THROW(parse_eigenform_string("level=11 weight=2 field=t\n1: 1\n3: 1\n"), DataError);
    EXPECT_THROW(parse_eigenform_string("weight=2 field=t\n1: 1\n"), DataError);
    EXPECT_THROW(parse_eigenform_string("level=26 weight=2 charmod=13 chargen 2:2 field=t\n1: 1\n"), DataError);
    EXPECT_THROW(ingest("/nonexistent/form.txt"), DataError);
}

TEST(Ingest, RoundTrip) {
    for (const Eigenform* f : {&f11(), &f37(), &g26()}) {
        std::string once = f->print();
        Eigenform back = parse_eigenform_string(once);
        EXPECT_TRUE(back == *f);
        EXPECT_EQ(back.print(), once);
    }
}

TEST(EtaOracle, MatchesDataFile) {
    auto c = eta_oracle_level11(300);
    std::vector<long> first{1, -2, -1, 2, 1};
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(c[n], first[n - 1]);
    for (int n = 1; n <= f11().bound(); ++n) EXPECT_EQ(Rational(c[n]), f11().coeff(n).rational_value()) << n;
}

TEST(EtaOracle, BadPrimeAndMultiplicativity) {
    auto c = eta_oracle_level11(200);
    // a_11 = 1 and a_{11^2} = a_11^2 in the file
    EXPECT_EQ(c[11], 1);
    EXPECT_EQ(f11().coeff(121).rational_value(), Rational(c[11] * c[11]));
    for (int m = 1; m <= 200; ++m)
        for (int n = 1; m * n <= 200; ++n)
            if (std::gcd(m, n) == 1) {
                ASSERT_EQ(c[m * n], c[m] * c[n]) << m << "," << n;
            }
}

TEST(PointCounts, Level37) {
    // y^2 + y = x^3 - x: a_p = p - #affine points
    for (i64 p : primes_upto(f37().bound())) {
        if (p == 37) continue;
        i64 cnt = 0;
        for (i64 x = 0; x < p; ++x)
            for (i64 y = 0; y < p; ++y)
                if (mod(y * y + y - x * x * x + x, p) == 0) ++cnt;
        EXPECT_EQ(f37().coeff(p).rational_value(), Rational(p - cnt)) << p;
    }
    EXPECT_EQ(f37().coeff(37).rational_value(), -1);
}

TEST(Stabilize, OrdinaryAt17) {
    auto sf = p_stabilize(f11(), 17);
    EXPECT_TRUE(sf.ordinary);
    EXPECT_EQ(sf.v_alpha, 0);
    EXPECT_EQ(sf.v_beta, 1);
    EXPECT_EQ(sf.alpha + sf.beta, sf.ap.map_to(sf.ext, {TowerElt::var(sf.ext, 0)}));
    EXPECT_EQ(sf.alpha * sf.beta, TowerElt(sf.ext, 17));
    auto sg = p_stabilize(g26(), 17);
    EXPECT_TRUE(sg.ordinary);
    EXPECT_EQ(sg.alpha * sg.beta, sg.chip.map_to(sg.ext, {TowerElt::var(sg.ext, 0)}) * Rational(17));
    EXPECT_FALSE(sg.prime_choice.empty());
    // both primes above 17 in Q(i) give ordinary reductions
    EXPECT_TRUE(p_stabilize(g26(), 17, 1).ordinary);
}

TEST(Stabilize, SupersingularValuations) {
    // a_2 = -2, a_3 = -3 for 37a; a_p = 0 gives slopes 1/2, 1/2
    Eigenform f = parse_eigenform_string("level=1 weight=2 field=t\n1: 1\n2: 0\n3: 1\n", false);
    auto st = p_stabilize(f, 2);
    EXPECT_FALSE(st.ordinary);
    EXPECT_EQ(st.v_alpha, Rational(1, 2));
    EXPECT_EQ(st.v_beta, Rational(1, 2));
    // 37a at 2: a_2 = -2 has valuation 1 >= 1/2: supersingular
    EXPECT_FALSE(p_stabilize(f37(), 2).ordinary);
    EXPECT_THROW(p_stabilize(f11(), 11), MathError);
}

TEST(Ratio, MinimalPolynomialAt17) {
    auto r = ratio_minpoly_and_root_of_unity(p_stabilize(f11(), 17), p_stabilize(g26(), 17));
    UPoly want(std::vector<Rational>{1, Rational(6, 17), Rational(-21, 17), Rational(6, 17), 1});
    EXPECT_EQ(r.poly, want) << r.poly.to_string();
    EXPECT_FALSE(r.root_of_unity);
}

TEST(Ratio, SameFormAndQuarterTurn) {
    auto s = p_stabilize(f11(), 17);
    auto r = ratio_minpoly_and_root_of_unity(s, s);
    EXPECT_EQ(r.poly, UPoly(std::vector<Rational>{-1, 1}));
    EXPECT_TRUE(r.root_of_unity);
    // alpha = 1 + 2i (a_5 = 2), gamma = 2 - i (a_5 = 4): alpha/gamma = i at some embedding
    Eigenform a = parse_eigenform_string("level=1 weight=2 field=t\n1: 1\n2: 0\n3: 0\n4: 0\n5: 2\n", false);
    Eigenform b = parse_eigenform_string("level=1 weight=2 field=t\n1: 1\n2: 0\n3: 0\n4: 0\n5: 4\n", false);
    auto sa = p_stabilize(a, 5), sb = p_stabilize(b, 5);
    bool seen = false;
    for (size_t e = 0; e < 4; ++e) {
        auto q = ratio_minpoly_and_root_of_unity(sa, sb, e);
        if (q.poly == UPoly(std::vector<Rational>{1, 0, 1})) {
            seen = true;
            EXPECT_TRUE(q.root_of_unity);
            EXPECT_EQ(q.order, 4);
        } else {
            EXPECT_FALSE(q.root_of_unity);
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Congruence, OnlyFiveIsFlagged) {
    auto scan = congruence_prime_scan(f11(), g26(), {g26().chi}, 100, 5, 50);
    std::set<i64> flagged;
    for (auto& e : scan) {
        if (e.flagged) {
            flagged.insert(e.p);
        } else {
            EXPECT_GT(e.witness, 0);
        }
    }
    EXPECT_EQ(flagged, (std::set<i64>{5}));
}

TEST(Congruence, SelfScanFlagsEverything) {
    auto scan = congruence_prime_scan(f11(), f11(), {}, 100, 2, 30);
    ASSERT_FALSE(scan.empty());
    for (auto& e : scan) EXPECT_TRUE(e.flagged) << e.p;
}

TEST(Congruence, MonotoneInBound) {
    auto small = congruence_prime_scan(f11(), g26(), {g26().chi}, 30, 5, 50);
    auto large = congruence_prime_scan(f11(), g26(), {g26().chi}, 100, 5, 50);
    ASSERT_EQ(small.size(), large.size());
    for (size_t i = 0; i < small.size(); ++i) {
        if (!small[i].flagged) {
            EXPECT_FALSE(large[i].flagged);
        }
    }
}

TEST(Hypotheses, At17AllDecidablePass) {
    auto rep = hypothesis_report(f11(), g26(), 17);
    ASSERT_EQ(rep.size(), 10u);
    for (auto& h : rep) {
        if (h.id == "(i)" || h.id == "(ii)" || h.id == "(vii)") {
            EXPECT_EQ(h.status, "EXTERNAL");
        } else {
            EXPECT_EQ(h.status, "PASS") << h.id << " " << h.detail;
        }
    }
}

TEST(Hypotheses, At5And3) {
    for (auto& h : hypothesis_report(f11(), g26(), 5)) {
        if (h.id == "(viii)") {
            EXPECT_EQ(h.status, "FAIL");
        }
    }
    for (auto& h : hypothesis_report(f11(), g26(), 3)) {
        if (h.id == "(iv)") {
            EXPECT_EQ(h.status, "FAIL");
        }
    }
}
