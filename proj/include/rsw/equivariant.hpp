#pragma once
/**
 * @file equivariant.hpp
 * @brief The group-ring valued form g_m with a_n(g_m) = a_n(g) tau(n, m), the universal Gauss
 *        sums tau(n, m) = sum_a [a]^{-1} zeta_m^{na}, and the Hecke/diamond eigen-identities.
 */

#include <string>

#include "rsw/forms.hpp"
#include "rsw/qseries.hpp"

namespace rsw {

using GRCyclo = GroupRingElt<CycloElt>;

/** tau(n, m) in Q(zeta_L)[(Z/m)^x]; L defaults to m and must be a multiple of it. */
inline GRCyclo universal_gauss_sum(i64 n, i64 m, i64 L = 0) {
    if (m < 1) throw MathError("universal_gauss_sum needs m >= 1");
    if (L == 0) L = m;
    if (L % m != 0) throw MathError("coefficient conductor must be a multiple of m");
    GRCyclo out = GRCyclo::scalar(m, CycloElt(L, 0));
    for (i64 a : units_mod(m))
        out = out + GRCyclo::bracket(m, invmod(a, m), CycloElt::zeta(L, mod(n * a, m) * (L / m)));
    return out;
}

/** An embedding of the coefficient field Q[t]/(h) into Q(zeta_L): t -> image. */
struct CycloEmbedding {
    i64 L = 1;
    CycloElt image;
    CycloElt operator()(const TowerElt& x) const {
        std::vector<Rational> v = x.tower()->to_vector(x.poly());
        CycloElt s(L, 0), pw(L, 1);
        for (auto& c : v) {
            s = s + pw * c;
            pw = pw * image;
        }
        return s;
    }
};

/**
 * Embeds Q[t]/(h) into Q(zeta_L) by sending t to a root of unity (smallest L, then smallest
 * exponent). Only fields generated by a root of unity, or Q itself, are handled.
 */
inline CycloEmbedding cyclotomic_embedding(const TowerPtr& K, i64 max_L = 240) {
    UPoly h = K->defining_upoly();
    if (h.degree() == 1) return {1, CycloElt(1, -h.coeff(0))};
    for (i64 L = 2; L <= max_L; ++L) {
        if (euler_phi(L) % h.degree() != 0) continue;
        for (i64 k = 0; k < L; ++k) {
            CycloElt z = CycloElt::zeta(L, k);
            CycloElt val(L, 0), pw(L, 1);
            for (int i = 0; i <= h.degree(); ++i) {
                val = val + pw * h.coeff(i);
                pw = pw * z;
            }
            if (val.is_zero()) return {L, z};
        }
    }
    throw MathError("coefficient field Q[t]/(" + h.to_string("t") + ") has no root-of-unity generator up to conductor " + std::to_string(max_L));
}

/** g_m to precision B (coefficients 0..B-1), over Q(zeta_L)[(Z/m)^x] with L = lcm(m, field conductor). */
inline QSeries<GRCyclo> equivariant_gm(const Eigenform& g, i64 m, int B) {
    if (B < 1) throw MathError("precision must be positive");
    if (B - 1 > g.bound()) throw MathError("g coefficients available only to " + std::to_string(g.bound()));
    CycloEmbedding emb = cyclotomic_embedding(g.field);
    i64 L = std::lcm(m, emb.L);
    if (emb.L != L) emb = {L, emb.image.lift(L)};
    std::vector<GRCyclo> c;
    c.push_back(GRCyclo::scalar(m, CycloElt(L, 0)));
    for (int n = 1; n < B; ++n) c.push_back(universal_gauss_sum(n, m, L) * emb(g.coeff(n)));
    return QSeries<GRCyclo>(0, std::move(c));
}

/** Result of testing T_l g_m = [l] a_l(g) g_m with the nebentypus of g_m read two ways. */
struct DiamondReadingResult {
    bool reading_l = false;   ///< <l> g_m = [l]^2 eps_g(l) g_m
    bool reading_m = false;   ///< <l> g_m = [l]^2 eps_g(m) g_m, as printed
    int mismatch_l = -1, mismatch_m = -1;
    std::string summary;
};

/**
 * Apply T_l at level m^2 N to g_m with the two candidate nebentypus values and compare with
 * [l] a_l(g) g_m coefficientwise to the available precision.
 */
inline DiamondReadingResult diamond_reading_check(const Eigenform& g, i64 m, i64 ell, int B) {
    if (!is_prime(ell)) throw MathError("l must be prime");
    if ((m * g.level) % ell == 0) throw MathError("l must not divide m N");
    auto gm = equivariant_gm(g, m, B);
    CycloEmbedding emb = cyclotomic_embedding(g.field);
    i64 L = std::lcm(m, emb.L);
    if (emb.L != L) emb = {L, emb.image.lift(L)};
    GRCyclo br = GRCyclo::bracket(m, ell, CycloElt(L, 1));
    GRCyclo neb_l = br * br * emb(g.chi(ell));
    GRCyclo neb_m = br * br * emb(g.chi(m));
    auto rhs = gm * (br * emb(g.coeff(ell)));
    i64 level = m * m * g.level;
    auto test = [&](const GRCyclo& neb, int& mismatch) {
        auto lhs = hecke_T(gm, ell, g.weight, neb, level);
        mismatch = QSeries<GRCyclo>::first_difference(lhs, rhs.truncate(lhs.precision()));
        return mismatch < 0;
    };
    DiamondReadingResult r;
    r.reading_l = test(neb_l, r.mismatch_l);
    r.reading_m = test(neb_m, r.mismatch_m);
    r.summary = std::string("T_") + std::to_string(ell) + " on g_" + std::to_string(m) + ": nebentypus [l]^2 eps(l) " +
                (r.reading_l ? "consistent" : "inconsistent at q^" + std::to_string(r.mismatch_l)) + "; [l]^2 eps(m) " +
                (r.reading_m ? "consistent" : "inconsistent at q^" + std::to_string(r.mismatch_m));
    return r;
}

}  // namespace rsw
