/** @file acceptance.cpp @brief One PASS/FAIL line per acceptance criterion, with wall-clock limits. */

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>

#include "rsw/eisenstein.hpp"
#include "rsw/euler.hpp"
#include "rsw/forms.hpp"
#include "rsw/hecke_coset.hpp"
#include "rsw/norm_relations.hpp"
#include "rsw/otsuki.hpp"

using namespace rsw;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

const Eigenform& form(const std::string& name) {
    static std::map<std::string, Eigenform> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, ingest(default_data_dir() + "/" + name + ".txt")).first;
    return it->second;
}

EisensteinSpec spec(EisFamily f, int k, int j, const Rational& a) {
    EisensteinSpec s;
    s.family = f;
    s.k = k;
    s.j = j;
    s.alpha = a;
    return s;
}

Rational pw(i64 p, long e) { return e >= 0 ? Rational(Integer(ipow(p, static_cast<int>(e)))) : 1 / Rational(Integer(ipow(p, static_cast<int>(-e)))); }

int failures = 0;

/** limit <= 0: no time bound. */
void criterion(int n, const std::string& name, double limit, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && limit > 0 && s > limit) o.fail("took " + std::to_string(s) + " s, limit " + std::to_string(limit) + " s");
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " [" << std::setw(2) << n << "] " << name << "  (" << std::fixed << std::setprecision(2) << s
              << " s)";
    if (!o.ok) std::cout << "  -- " << o.detail;
    std::cout << std::endl;
}

}  // namespace

int main() {
    criterion(1, "norm-relation rewrites, p symbolic", 5, [](Outcome& o) {
        auto a = verify_sp_rewrite(), b = verify_higher_rewrite();
        if (!a.holds) o.fail("sp: " + a.witness);
        if (!b.holds) o.fail("higher: " + b.witness);
    });

    criterion(2, "operator Euler factor specializes to P_p(f,g,X)", 5, [](Outcome& o) {
        auto r = verify_operator_euler_factor();
        if (!r.holds) o.fail(r.witness);
        if (!r.matches_roots) o.fail("root form mismatch");
    });

    criterion(3, "composite norms (a), (b) and the corestriction display", 30, [](Outcome& o) {
        auto r = derive_composite_norms();
        if (!r.match_a) o.fail("(a): " + r.witness);
        if (!r.match_b) o.fail("(b): " + r.witness);
        auto c = specialize_to_corestriction();
        if (!c.holds) o.fail("corestriction: " + c.witness);
    });

    criterion(4, "p-stabilization projection formula", 60, [](Outcome& o) {
        auto r = pstab_projection_formula();
        if (!r.holds) o.fail(r.witness);
    });

    criterion(5, "A_l congruent to P_l(l^-1 X) mod l-1, symbolic and l = 3", 0, [](Outcome& o) {
        auto s = derive_A_ell();
        if (!s.defining_relation || !s.congruent) o.fail("symbolic: " + s.witness);
        auto c = A_ell_concrete(form("f11"), form("g26"), 3);
        if (!c.congruent) o.fail("l = 3: " + c.witness);
    });

    criterion(6, "dlog g_{0,a/N} = -F^(2)_{a/N} to q^200, N in {3,4,5,12}", 30, [](Outcome& o) {
        for (i64 N : {3, 4, 5, 12})
            for (i64 a = 1; a < N; ++a) {
                auto g = siegel_unit_qexp(make_rat(a, N), 0, 200);
                auto f = eisenstein_qexp(spec(EisFamily::F, 2, 0, make_rat(a, N)), 200, N);
                if (g.dlog() != -f) o.fail(std::to_string(a) + "/" + std::to_string(N));
            }
    });

    criterion(7, "distribution relations at precision 60", 0, [](Outcome& o) {
        for (auto [m, N, c] : std::vector<std::tuple<i64, i64, i64>>{{2, 5, 7}, {3, 4, 7}, {2, 3, 5}})
            for (auto M : {std::array<i64, 4>{m, 0, 0, 1}, std::array<i64, 4>{1, 0, 0, m}, std::array<i64, 4>{m, 0, 0, m}}) {
                auto r = distribution_check(0, make_rat(1, N), M, c, 60);
                if (!r.holds) o.fail(r.shape + " m=" + std::to_string(m) + ": " + r.witness);
            }
    });

    criterion(8, "two-parameter family equals p-depletion", 0, [](Outcome& o) {
        for (int k : {1, 3, 4})
            for (i64 p : {2, 3}) {
                auto lhs = two_param_eisenstein(make_rat(1, 5), k - 1, 0, p, 50);
                auto rhs = p_depletion(eisenstein_qexp(spec(EisFamily::E, k, 0, make_rat(1, 5)), 50), p);
                if (!(lhs == rhs)) o.fail("k=" + std::to_string(k) + " p=" + std::to_string(p));
            }
    });

    criterion(9, "T_p'^2 = S_p' + (p+1)<p^-1>R_p by coset counting", 120, [](Outcome& o) {
        for (auto [N, p] : std::vector<std::pair<i64, i64>>{{5, 2}, {5, 3}, {7, 2}}) {
            auto r = hecke_identity_check(N, p);
            if (!r.holds) o.fail(r.detail);
        }
    });

    criterion(10, "Iwahori index table and four distinct cells (j >= 1)", 0, [](Outcome& o) {
        for (i64 p : {2, 3, 5})
            for (long j = 0; j <= 3; ++j) {
                for (long jj : {j, -j}) {
                    QMat2 dg{pw(p, jj), 0, 0, pw(p, -jj)};
                    QMat2 ad{0, -pw(p, -jj), pw(p, jj), 0};
                    if (iwahori_index(dg, p) != Integer(ipow(p, static_cast<int>(std::abs(2 * jj)))))
                        o.fail("diag p=" + std::to_string(p) + " j=" + std::to_string(jj));
                    if (iwahori_index(ad, p) != Integer(ipow(p, static_cast<int>(std::abs(2 * jj + 1)))))
                        o.fail("antidiag p=" + std::to_string(p) + " j=" + std::to_string(jj));
                }
                std::set<IwahoriCell> cells;
                for (auto& m : iwahori_cartan_cells(j, p)) cells.insert(iwahori_invariant(m, p));
                // j = 0: K itself is U u UwU, two cells
                size_t want = j == 0 ? 2 : 4;
                if (cells.size() != want) o.fail("cells p=" + std::to_string(p) + " j=" + std::to_string(j) + ": " + std::to_string(cells.size()));
            }
    });

    criterion(11, "functional-equation symmetry, 1 <= l <= k <= 5", 0, [](Outcome& o) {
        for (int k = 1; k <= 5; ++k)
            for (int l = 1; l <= k; ++l)
                for (int j = 0; j <= k; ++j) {
                    auto r = functional_symmetry_check(k, l, j);
                    if (!r.holds) o.fail("k=" + std::to_string(k) + " l=" + std::to_string(l) + " j=" + std::to_string(j) + ": " + r.detail);
                }
    });

    criterion(12, "worked example: oracle, ordinarity, minimal polynomial, scan", 60, [](Outcome& o) {
        const Eigenform &f = form("f11"), &g = form("g26");
        auto c = eta_oracle_level11(f.bound());
        for (int n = 1; n <= f.bound(); ++n)
            if (Rational(c[static_cast<size_t>(n)]) != f.coeff(n).rational_value()) o.fail("oracle a_" + std::to_string(n));
        auto sf = p_stabilize(f, 17), sg = p_stabilize(g, 17);
        if (!sf.ordinary || !sg.ordinary) o.fail("not ordinary at 17");
        auto r = ratio_minpoly_and_root_of_unity(sf, sg);
        UPoly want(std::vector<Rational>{1, Rational(6, 17), Rational(-21, 17), Rational(6, 17), 1});
        if (!(r.poly == want)) o.fail("minimal polynomial " + r.poly.to_string());
        // window starts at 5 so that the expected flag can appear
        std::set<i64> flagged;
        for (auto& e : congruence_prime_scan(f, g, {g.chi}, 100, 5, 50))
            if (e.flagged) flagged.insert(e.p);
        if (flagged != std::set<i64>{5}) o.fail("scan flagged " + std::to_string(flagged.size()) + " primes");
    });

    criterion(13, "Otsuki trace identity, (1,3), (4,3), (3,5), two families", 60, [](Outcome& o) {
        for (auto [m, l] : std::vector<std::pair<i64, i64>>{{1, 3}, {4, 3}, {3, 5}})
            for (auto& fam : default_otsuki_families()) {
                auto r = otsuki_trace_check(m, l, fam);
                if (!r.holds) o.fail(std::to_string(m) + "," + std::to_string(l) + " " + fam.name + ": " + r.witness);
            }
    });

    criterion(14, "correction polynomial: C = 1 coprime, polynomial at N = 286", 0, [](Outcome& o) {
        auto a = local_correction(form("f11"), form("f37"), 407);
        if (!a.certified || !a.is_one()) o.fail("coprime pair: " + a.to_string());
        auto b = local_correction(form("f11"), form("g26"), 286, 8);
        if (!b.certified) o.fail("286: " + b.residual);
    });

    criterion(15, "mutation suite: every catalog identity detects perturbations", 0, [](Outcome& o) {
        int total = 0;
        for (auto& e : norm_relation_catalog()) {
            if (!e.run(nullptr).holds) o.fail(e.id + " does not hold unperturbed");
            for (auto& s : e.slots) {
                Mutation m{s, 1};
                ++total;
                if (e.run(&m).holds) o.fail(e.id + " slot " + s + " undetected");
            }
        }
        UPoly X = UPoly::x(), one(std::vector<Rational>{1});
        Mutation m{"ot.l-1", 1};
        ++total;
        if (otsuki_trace_check(4, 3, otsuki_constant_family("F=1-X,G=1-X^2", one - X, one - X * X), &m).holds) o.fail("otsuki slot undetected");
        if (total < 10) o.fail("only " + std::to_string(total) + " mutations");
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
