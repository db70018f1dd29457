/** @file test_hecke_coset.cpp @brief Coset representatives, Hecke products and Iwahori cells. */

#include <gtest/gtest.h>

#include <random>

#include "rsw/hecke_coset.hpp"

using namespace rsw;

namespace {

/** Oracle: distinct right cosets Gamma alpha gamma with gamma running over ALL of SL2(Z/M) filtered by Gamma. */
size_t brute_force_degree(const CongSubgroup& G, const Mat2& alpha) {
    i64 M = G.level() * alpha.det();
    std::set<CosetKey> keys;
    for (i64 a = 0; a < M; ++a)
        for (i64 b = 0; b < M; ++b)
            for (i64 c = 0; c < M; ++c)
                for (i64 d = 0; d < M; ++d) {
                    Mat2 m{a, b, c, d};
                    if (mod(m.det(), M) != 1 % M) continue;
                    Mat2 g = lift_sl2(m, M);
                    if (!G.contains(g)) continue;
                    keys.insert(coset_key(G, alpha * g));
                }
    return keys.size();
}

QMat2 q(long a, long b, long c, long d) { return {a, b, c, d}; }
Rational pw(i64 p, long e) { return rat_pow(Rational(p), e); }

}  // namespace

TEST(Subgroup, ClosureAndIndex) {
    auto G = CongSubgroup::gamma1(5);
    EXPECT_TRUE(G.verify_closure());
    EXPECT_EQ(G.index(), 24u);  // |SL2(F_5)| / 5
    auto G0 = CongSubgroup::gamma0(6);
    EXPECT_TRUE(G0.verify_closure());
    EXPECT_EQ(G0.index(), 12u);  // 6 prod (1 + 1/p)
    auto I = CongSubgroup::gamma1(4).intersect(CongSubgroup::gamma_upper0(3));
    EXPECT_EQ(I.level(), 12);
    EXPECT_TRUE(I.verify_closure());
    EXPECT_TRUE(I.contains({1, 3, 4, 13}));
    EXPECT_FALSE(I.contains({1, 1, 4, 5}));
    EXPECT_THROW(CongSubgroup::gamma1(31), MathError);
}

TEST(Subgroup, LiftAndHermite) {
    std::mt19937_64 rng(7);
    for (i64 M : {5, 12, 20, 45}) {
        for (int it = 0; it < 200; ++it) {
            i64 a = rng() % M, c = rng() % M;
            if (std::gcd(std::gcd(a, c), M) != 1) continue;
            // complete (a, c) to a matrix of determinant 1 mod M by brute force
            for (i64 b = 0; b < M; ++b)
                for (i64 d = 0; d < M; ++d)
                    if (mod(a * d - b * c, M) == 1 % M) {
                        Mat2 g = lift_sl2({a, b, c, d}, M);
                        EXPECT_EQ(g.det(), 1);
                        EXPECT_EQ(g.mod(M), (Mat2{a, b, c, d}));
                        b = d = M;
                    }
        }
    }
    Mat2 delta{7, 3, 10, 8};
    auto [gamma, h] = hermite(delta);
    EXPECT_EQ(gamma.det(), 1);
    EXPECT_EQ(gamma * h, delta);
    EXPECT_EQ(h.c, 0);
    EXPECT_GT(h.a, 0);
    EXPECT_TRUE(h.b >= 0 && h.b < h.d);
}

TEST(CosetReps, ClassicalDegrees) {
    EXPECT_EQ(coset_reps(CongSubgroup::full(), diag(1, 3)).size(), 4u);
    EXPECT_EQ(coset_reps(CongSubgroup::full(), diag(1, 5)).size(), 6u);
    auto G = CongSubgroup::gamma1(5);
    auto id = coset_reps(G, Mat2{});
    ASSERT_EQ(id.size(), 1u);
    EXPECT_TRUE(G.contains(id[0]));
    EXPECT_EQ(coset_reps(G, diag(1, 2)).size(), 3u);
    EXPECT_EQ(brute_force_degree(G, diag(1, 2)), 3u);
    EXPECT_EQ(brute_force_degree(G, diag(4, 1)), coset_reps(G, diag(4, 1)).size());
}

TEST(CosetReps, CountMatchesStabilizerIndex) {
    auto G = CongSubgroup::gamma1(5);
    for (Mat2 a : {diag(2, 1), diag(4, 1), diag(3, 1), diag(9, 1), Mat2{2, 1, 0, 2}}) {
        EXPECT_EQ(coset_reps(G, a).size(), coset_count_by_stabilizer(G, a)) << a.to_string();
    }
    auto G7 = CongSubgroup::gamma0(7);
    EXPECT_EQ(coset_reps(G7, diag(1, 2)).size(), coset_count_by_stabilizer(G7, diag(1, 2)));
}

TEST(CosetReps, RepresentativesAreInequivalentAndCoverDoubleCoset) {
    auto G = CongSubgroup::gamma1(5);
    Mat2 alpha = diag(3, 1);
    auto reps = coset_reps(G, alpha);
    // pairwise inequivalent: delta_i delta_j^{-1} not in Gamma
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = 0; j < reps.size(); ++j) {
            if (i == j) continue;
            Mat2 x = reps[i] * Mat2{reps[j].d, -reps[j].b, -reps[j].c, reps[j].a};
            bool integral = x.a % 3 == 0 && x.b % 3 == 0 && x.c % 3 == 0 && x.d % 3 == 0;
            EXPECT_FALSE(integral && G.contains({x.a / 3, x.b / 3, x.c / 3, x.d / 3}));
        }
    // random gamma1 alpha gamma2 lands in one of the listed cosets
    std::mt19937_64 rng(11);
    std::set<CosetKey> keys;
    for (auto& r : reps) keys.insert(coset_key(G, r));
    for (int it = 0; it < 100; ++it) {
        auto& els = G.elements();
        Mat2 g1 = lift_sl2(els[rng() % els.size()], 5) * lift_sl2(Mat2{1, 5 * static_cast<i64>(rng() % 3), 0, 1}, 25);
        Mat2 g2 = lift_sl2(els[rng() % els.size()], 5);
        EXPECT_TRUE(keys.count(coset_key(G, g1 * alpha * g2)));
    }
}

TEST(HeckeProduct, IdentityIsNeutral) {
    auto G = CongSubgroup::gamma1(5);
    auto prod = double_coset_multiply(G, Mat2{}, diag(2, 1));
    ASSERT_EQ(prod.size(), 1u);
    EXPECT_EQ(prod[0].multiplicity, 1);
    EXPECT_TRUE(same_double_coset(G, prod[0].coset.rep, diag(2, 1)));
}

TEST(HeckeProduct, TransposeSquare) {
    for (auto [N, p] : std::vector<std::pair<i64, i64>>{{5, 2}, {5, 3}, {7, 2}}) {
        auto r = hecke_identity_check(N, p);
        EXPECT_TRUE(r.holds) << r.detail;
        EXPECT_EQ(r.mult_S, 1);
        EXPECT_EQ(r.mult_R, p + 1);
        EXPECT_EQ(r.constituents, 2u);
    }
}

TEST(HeckeProduct, WrongDiamondIsDetected) {
    // diag(p, p) alone (trivial diamond) is not the constituent for N = 5, p = 2
    auto G = CongSubgroup::gamma1(5);
    auto prod = double_coset_multiply(G, diag(2, 1), diag(2, 1));
    bool found = false;
    for (auto& t : prod) found = found || same_double_coset(G, t.coset.rep, diag(2, 2));
    EXPECT_FALSE(found);
}

TEST(HeckeProduct, Associative) {
    auto G = CongSubgroup::gamma1(5);
    auto T = hecke_basis(G, diag(2, 1));
    auto lhs = hecke_multiply(G, hecke_multiply(G, T, T), T);
    auto rhs = hecke_multiply(G, T, hecke_multiply(G, T, T));
    EXPECT_TRUE(lhs == rhs);
    auto U = hecke_basis(G, diag(1, 2));
    EXPECT_TRUE(hecke_multiply(G, hecke_multiply(G, T, U), T) == hecke_multiply(G, T, hecke_multiply(G, U, T)));
}

TEST(Iwahori, IndexTable) {
    for (i64 p : {2, 3, 5})
        for (long j = 0; j <= 3; ++j)
            for (long s : {1L, -1L}) {
                long jj = s * j;
                QMat2 dg{pw(p, jj), 0, 0, pw(p, -jj)};
                QMat2 ad{0, -pw(p, -jj), pw(p, jj), 0};
                EXPECT_EQ(iwahori_index(dg, p), Integer(ipow(p, static_cast<int>(std::abs(2 * jj)))));
                EXPECT_EQ(iwahori_index(ad, p), Integer(ipow(p, static_cast<int>(std::abs(2 * jj + 1)))));
            }
    EXPECT_EQ(iwahori_index(q(1, 0, 0, 1), 3), 1);
    EXPECT_EQ(iwahori_index(QMat2{9, 0, 0, Rational(1, 9)}, 3), 81);
    EXPECT_EQ(iwahori_index(QMat2{0, Rational(-1, 2), 2, 0}, 2), 8);
    EXPECT_THROW(iwahori_index(q(2, 0, 0, 1), 3), MathError);
}

TEST(Iwahori, RepresentativesAreFixed) {
    for (i64 p : {2, 3, 5})
        for (long j = -3; j <= 3; ++j) {
            IwahoriCell d{IwahoriCell::diagonal, j}, a{IwahoriCell::antidiagonal, j};
            EXPECT_EQ(iwahori_invariant(iwahori_representative(d, p), p), d);
            EXPECT_EQ(iwahori_invariant(iwahori_representative(a, p), p), a);
        }
    EXPECT_EQ(iwahori_invariant(QMat2{Rational(1, 9), 0, 0, 9}, 3), (IwahoriCell{IwahoriCell::diagonal, -2}));
}

TEST(Iwahori, FourDistinctCells) {
    for (i64 p : {2, 3, 5})
        for (long j = 1; j <= 3; ++j) {
            std::set<IwahoriCell> cells;
            for (auto& m : iwahori_cartan_cells(j, p)) cells.insert(iwahori_invariant(m, p));
            EXPECT_EQ(cells.size(), 4u);
        }
}

TEST(Iwahori, RandomizedInvariance) {
    std::mt19937_64 rng(2024);
    for (i64 p : {2, 3, 5}) {
        i64 P3 = p * p * p;
        auto randU = [&]() {
            // integral, b divisible by p, determinant 1: [[1 + p x b', p b'], [c, d]] built from elementary factors
            Mat2 u{1, 0, static_cast<i64>(rng() % P3), 1};
            Mat2 v{1, p * static_cast<i64>(rng() % P3), 0, 1};
            Mat2 w{1, 0, static_cast<i64>(rng() % P3), 1};
            Mat2 m = u * v * w;
            return QMat2{m.a, m.b, m.c, m.d};
        };
        for (long j = -2; j <= 2; ++j)
            for (auto kind : {IwahoriCell::diagonal, IwahoriCell::antidiagonal}) {
                IwahoriCell cell{kind, j};
                QMat2 rep = iwahori_representative(cell, p);
                for (int it = 0; it < 30; ++it) {
                    QMat2 g = randU() * rep * randU();
                    ASSERT_EQ(iwahori_invariant(g, p), cell) << p << " " << cell.to_string();
                    // unit diagonal (-1) is also in U
                    QMat2 neg{-1, 0, 0, -1};
                    EXPECT_EQ(iwahori_invariant(neg * g, p), cell);
                }
            }
        // the worked antidiagonal example: u1 [[0, -1/p], [p, 0]] u2
        QMat2 anti{0, Rational(-1, p), p, 0};
        for (int it = 0; it < 30; ++it) {
            auto c = iwahori_invariant(randU() * anti * randU(), p);
            EXPECT_EQ(c.kind, IwahoriCell::antidiagonal);
            EXPECT_EQ(c.j, 1);  // j = valuation of the lower-left entry of [[0, -p^{-j}], [p^j, 0]]
        }
    }
}

TEST(Iwahori, TranslationMatricesFromTheCurveCorollary) {
    // [[1, j/(m p^k)], [0, 1]] lies in the antidiagonal cell with lower-left p^k
    for (i64 p : {3, 5})
        for (long k = 1; k <= 2; ++k) {
            QMat2 x{1, Rational(2) / Rational(7 * ipow(p, static_cast<int>(k))), 0, 1};
            EXPECT_EQ(iwahori_invariant(x, p), (IwahoriCell{IwahoriCell::antidiagonal, k}));
            EXPECT_EQ(iwahori_index(x, p), Integer(ipow(p, static_cast<int>(2 * k + 1))));
        }
}
