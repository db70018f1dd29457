#pragma once
/**
 * @file eisenstein.hpp
 * @brief Eisenstein series E^(k)_a, F^(k)_a, Etilde^(2)_a and their nearly-holomorphic
 *        specialisations, the two-parameter p-depleted family, Siegel units and
 *        distribution relations, all as exact q-expansions over Q(zeta_N).
 */

#include <array>
#include <string>
#include <vector>

#include "rsw/qseries.hpp"

namespace rsw {

enum class EisFamily { E, F, Etilde };

inline EisFamily parse_family(const std::string& s) {
    if (s == "E") return EisFamily::E;
    if (s == "F") return EisFamily::F;
    if (s == "Etilde" || s == "Et") return EisFamily::Etilde;
    throw MathError("unknown Eisenstein family '" + s + "' (expected E, F or Etilde)");
}

inline std::string family_name(EisFamily f) {
    switch (f) {
        case EisFamily::E: return "E";
        case EisFamily::F: return "F";
        default: return "Etilde";
    }
}

/** Cusp parameter a/N reduced into [0,1). */
struct CuspParam {
    i64 a = 0;
    i64 N = 1;

    static CuspParam from_rational(const Rational& x) {
        Integer fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        Rational y = x - Rational(fl);
        CuspParam c;
        c.a = y.get_num().get_si();
        c.N = y.get_den().get_si();
        return c;
    }
    bool is_zero() const { return a % N == 0; }
    Rational value() const { return make_rat(a, N); }
};

struct EisensteinSpec {
    int k = 2;
    int j = 0;
    Rational alpha = 0;
    EisFamily family = EisFamily::E;

    void validate() const {
        if (k < 1) throw MathError("Eisenstein weight must be >= 1");
        bool zero = CuspParam::from_rational(alpha).is_zero();
        switch (family) {
            case EisFamily::E:
                if (j < 0 || j > k - 1) throw MathError("E family needs 0 <= j <= k-1 (got k=" + std::to_string(k) + ", j=" + std::to_string(j) + ")");
                break;
            case EisFamily::F:
                if (j != 0) throw MathError("F family takes no twist index (j must be 0)");
                if (k == 2 && zero) throw MathError("F^(2)_a needs a != 0 (F^(2)_0 is not holomorphic)");
                break;
            case EisFamily::Etilde:
                if (k != 2) throw MathError("Etilde is only defined in weight 2");
                if (j != 0) throw MathError("Etilde takes no twist index (j must be 0)");
                break;
        }
    }
};

// ------------------------------------------------------------------ constant terms

/**
 * Li_{1-k}(zeta_N^a) = (x d/dx)^{k-1} (x / (1-x)) at x = zeta_N^a, a != 0 mod N.
 * The iterate is kept as P(x) / (1-x)^m.
 */
inline CycloElt polylog_neg(int k, i64 a, i64 N) {
    if (k < 1) throw MathError("polylog_neg needs k >= 1");
    if (mod(a, N) == 0) throw MathError("polylog_neg at x = 1 is a pole");
    UPoly P = UPoly::monomial(1, 1), x = UPoly::monomial(1, 1), omx = UPoly(1) - x;
    int m = 1;
    for (int i = 1; i < k; ++i) {
        P = x * P.derivative() * omx + x * P * Rational(m);
        ++m;
    }
    CycloElt z = CycloElt::zeta(N, a);
    CycloElt Pz(N, 0), zp(N, 1);
    for (int i = 0; i <= P.degree(); ++i) {
        if (P.coeff(i) != 0) Pz += zp * P.coeff(i);
        zp *= z;
    }
    return Pz * (CycloElt(N, 1) - z).pow(-m);
}

/** zeta*(a/N, 1-k) for k >= 2 (equals zeta(1-k) at a = 0). */
inline CycloElt zeta_star_one_minus(int k, i64 a, i64 N) {
    if (mod(a, N) == 0) {
        if (k < 2) throw MathError("zeta*(0, 0) is handled by the weight-one case");
        return CycloElt(N, zeta_one_minus(k));
    }
    return polylog_neg(k, a, N);
}

/** (zeta*(a,0) - zeta*(-a,0)) / 2, the weight-one constant term. */
inline CycloElt weight_one_constant(i64 a, i64 N) {
    if (mod(a, N) == 0) return CycloElt(N, 0);
    return (polylog_neg(1, a, N) - polylog_neg(1, -a, N)) * make_rat(1, 2);
}

/** Constant term a_0 of the chosen family. */
inline CycloElt eisenstein_constant(const EisensteinSpec& s, i64 conductor) {
    CuspParam c = CuspParam::from_rational(s.alpha);
    CycloElt r(c.N, 0);
    switch (s.family) {
        case EisFamily::E:
            if (s.k == 1) r = weight_one_constant(c.a, c.N);
            else if (s.j == 0) r = zeta_star_one_minus(s.k, c.a, c.N);
            else if (s.j == s.k - 1) r = CycloElt(c.N, zeta_one_minus(s.k));
            break;
        case EisFamily::F:
            r = s.k == 1 ? weight_one_constant(c.a, c.N) : CycloElt(c.N, zeta_one_minus(s.k));
            break;
        case EisFamily::Etilde:
            r = zeta_star_one_minus(2, c.a, c.N) + CycloElt(c.N, make_rat(1, 12));
            break;
    }
    return r.lift(conductor);
}

// ------------------------------------------------------------------ q-expansions

namespace detail {
/** Sum over d | n of w(d) * (zeta^{ad} + eps zeta^{-ad}); w given as callable. */
template <class W>
std::vector<CycloElt> divisor_sum_coeffs(int B, i64 a, i64 N, i64 L, int eps, W w, i64 skip_p = 0,
                                         const Rational& shift_per_d = 0) {
    std::vector<CycloElt> powers;
    powers.reserve(static_cast<size_t>(N));
    for (i64 r = 0; r < N; ++r) {
        CycloElt x = CycloElt::zeta(N, mod(a * r, N)) + CycloElt::zeta(N, mod(-a * r, N)) * Rational(eps);
        if (shift_per_d != 0) x += CycloElt(N, shift_per_d);
        powers.push_back(x.lift(L));
    }
    std::vector<CycloElt> v(static_cast<size_t>(B), CycloElt(L, 0));
    for (i64 n = 1; n < B; ++n) {
        if (skip_p && n % skip_p == 0) continue;
        CycloElt s(L, 0);
        for (i64 d : divisors(n)) s += powers[static_cast<size_t>(mod(d, N))] * w(d, n / d);
        v[static_cast<size_t>(n)] = s;
    }
    return v;
}
inline Rational ipow_rat(i64 b, int e) { return Rational(Integer(ipow(b, e))); }
}  // namespace detail

/**
 * q-expansion c_0 + ... + c_{B-1} q^{B-1} of the family in `spec` (holomorphic part for
 * nearly-holomorphic members). Coefficients live in Q(zeta_L), L a multiple of the order of alpha.
 */
inline QSeries<CycloElt> eisenstein_qexp(const EisensteinSpec& spec, int B, i64 conductor = 0) {
    spec.validate();
    if (B < 1) throw MathError("precision must be >= 1");
    CuspParam c = CuspParam::from_rational(spec.alpha);
    i64 L = conductor ? conductor : c.N;
    if (L % c.N != 0) throw MathError("conductor must be a multiple of the order of alpha");
    int k = spec.k, j = spec.j;
    int sgn = (k % 2 == 0) ? 1 : -1;
    std::vector<CycloElt> v;
    switch (spec.family) {
        case EisFamily::E:
            v = detail::divisor_sum_coeffs(B, c.a, c.N, L, sgn, [&](i64 d, i64 e) -> Rational {
                return detail::ipow_rat(d, k - 1 - j) * detail::ipow_rat(e, j);
            });
            break;
        case EisFamily::F:
            v = detail::divisor_sum_coeffs(B, c.a, c.N, L, sgn, [&](i64, i64 e) -> Rational { return detail::ipow_rat(e, k - 1); });
            break;
        case EisFamily::Etilde:
            v = detail::divisor_sum_coeffs(B, c.a, c.N, L, 1, [&](i64 d, i64) -> Rational { return Rational(d); }, 0, Rational(-2));
            break;
    }
    v[0] = eisenstein_constant(spec, L);
    return QSeries<CycloElt>(0, std::move(v));
}

/**
 * Two-parameter family at integer characters x^k1, x^k2: coefficient of q^n is
 * sum_{d|n} d^k1 (n/d)^k2 (zeta^{ad} + eps zeta^{-ad}), eps = -(-1)^{k1+k2}, and 0 when p | n.
 */
inline QSeries<CycloElt> two_param_eisenstein(const Rational& alpha, int k1, int k2, i64 p, int B, i64 conductor = 0) {
    if (!is_prime(p)) throw MathError("two_param_eisenstein needs p prime");
    if (k1 < 0 || k2 < 0) throw MathError("integer weights must be >= 0");
    CuspParam c = CuspParam::from_rational(alpha);
    if (c.N % p == 0) throw MathError("p must not divide the order of alpha");
    i64 L = conductor ? conductor : c.N;
    int eps = ((k1 + k2) % 2 == 0) ? -1 : 1;
    auto v = detail::divisor_sum_coeffs(B, c.a, c.N, L, eps, [&](i64 d, i64 e) -> Rational {
        return detail::ipow_rat(d, k1) * detail::ipow_rat(e, k2);
    }, p);
    return QSeries<CycloElt>(0, std::move(v));
}

// ------------------------------------------------------------------ Siegel units

inline Rational bernoulli_poly2(const Rational& x) { return x * x - x + make_rat(1, 6); }

namespace detail {
/** s *= (1 - c t^e), in place, e >= 0 within precision. */
inline void mul_binomial(std::vector<CycloElt>& s, int e, const CycloElt& c) {
    int B = static_cast<int>(s.size());
    if (e >= B) return;
    for (int n = B - 1; n >= e; --n)
        if (!s[n - e].is_zero()) s[n] -= c * s[n - e];
}
}  // namespace detail

/**
 * g_{x,y} = t^{D w} prod_{n>=0} (1 - t^{D(n+x)} zeta_y) prod_{n>=1} (1 - t^{D(n-x)} zeta_y^{-1}),
 * as a series in t = q^{1/D}, with x in [0,1) of order dividing D and w = B_2(x)/2.
 * Coefficients in Q(zeta_L), L a multiple of the order of y.
 */
inline QSeries<CycloElt> siegel_general(const Rational& x, const Rational& y, i64 D, int B, i64 L) {
    CuspParam cx = CuspParam::from_rational(x), cy = CuspParam::from_rational(y);
    if (cx.is_zero() && cy.is_zero()) throw MathError("Siegel unit undefined at zero parameter");
    if (D % cx.N != 0) throw MathError("exponent lattice 1/D does not contain x");
    if (L % cy.N != 0) throw MathError("conductor does not contain zeta_y");
    i64 r = cx.a * (D / cx.N);  // D*x
    CycloElt z = CycloElt::zeta(cy.N, cy.a).lift(L), zi = CycloElt::zeta(cy.N, mod(-cy.a, cy.N)).lift(L);
    std::vector<CycloElt> s(static_cast<size_t>(B), CycloElt(L, 0));
    s[0] = CycloElt(L, 1);
    for (i64 n = 0; n * D + r < B; ++n) {
        if (n == 0 && r == 0) {
            // constant factor (1 - zeta_y)
            CycloElt f = CycloElt(L, 1) - z;
            for (auto& c : s) c *= f;
            continue;
        }
        detail::mul_binomial(s, static_cast<int>(n * D + r), z);
    }
    for (i64 n = 1; n * D - r < B; ++n) detail::mul_binomial(s, static_cast<int>(n * D - r), zi);
    Rational w = bernoulli_poly2(cx.value()) / 2;
    return QSeries<CycloElt>(w * Rational(D), std::move(s), true);
}

/** _c g_{x,y} = g_{x,y}^{c^2} / g_{cx,cy}, same lattice and conductor. */
inline QSeries<CycloElt> siegel_c_general(const Rational& x, const Rational& y, i64 c, i64 D, int B, i64 L) {
    auto g = siegel_general(x, y, D, B, L);
    auto gc = siegel_general(x * Rational(c), y * Rational(c), D, B, L);
    return g.pow(c * c) * gc.inv();
}

/** Leading exponent of g_{0,a} fixed by dlog g_{0,a} = -F^(2)_a: it is -a_0(F^(2)) = -zeta(-1). */
inline Rational siegel_leading_exponent() {
    Rational e = -zeta_one_minus(2);
    if (e != bernoulli_poly2(0) / 2) throw MathError("internal: Siegel normalisation mismatch");
    return e;
}

/**
 * Product expansion of g_{0,a/N} (c = 0: no c-twist) or of _c g_{0,a/N} = g^{c^2} / g_{0,ca/N},
 * as a series in q over Q(zeta_N).
 */
inline QSeries<CycloElt> siegel_unit_qexp(const Rational& alpha, i64 c, int B) {
    CuspParam ca = CuspParam::from_rational(alpha);
    if (ca.is_zero()) throw MathError("Siegel unit undefined at zero parameter");
    if (c != 0 && std::gcd(c, 6 * ca.N) != 1) throw MathError("c must be coprime to 6N");
    auto g = siegel_general(0, alpha, 1, B, ca.N);
    g = QSeries<CycloElt>(siegel_leading_exponent(), g.coeffs(), true);
    if (c == 0) return g;
    auto g2 = QSeries<CycloElt>(siegel_leading_exponent(), siegel_general(0, alpha * Rational(c), 1, B, ca.N).coeffs(), true);
    return g.pow(c * c) * g2.inv();
}

// ------------------------------------------------------------------ distribution relations

struct DistributionResult {
    bool holds = false;
    std::string shape;           ///< identity / dist-a / dist-b / dist-ab / diagonal
    int factors = 0;             ///< number of units on the right
    int first_mismatch = -1;     ///< index in t = q^{1/m2}, or -1
    Rational lhs_exp, rhs_exp;
    std::string witness;
};

/**
 * Check _c g_{x,y}(M z) = prod _c g_{x',y'}(z) over (x',y') M' = (x,y), M' = adj(M).
 * Supported: x = 0 and M = diag(m1, m2) (identity, diag(m,1), diag(1,m), diag(m,m)).
 * Both sides are compared as series in t = q^{1/m2}.
 */
inline DistributionResult distribution_check(const Rational& x, const Rational& y, const std::array<i64, 4>& M,
                                             i64 c, int B) {
    if (M[1] != 0 || M[2] != 0 || M[0] < 1 || M[3] < 1)
        throw MathError("unsupported matrix shape: supported are diag(m1,m2) with m1,m2 >= 1 "
                        "(identity, diag(m,1), diag(1,m), diag(m,m))");
    CuspParam cx = CuspParam::from_rational(x), cy = CuspParam::from_rational(y);
    if (!cx.is_zero()) throw MathError("distribution_check is implemented for x = 0 only");
    if (cy.is_zero()) throw MathError("Siegel unit undefined at zero parameter");
    i64 m1 = M[0], m2 = M[3];
    if (std::gcd(c, 6 * m1 * m2 * cy.N) != 1) throw MathError("c must be coprime to 6, m and the orders of x, y");
    i64 L = m1 * cy.N;  // orders of y' divide m1 N
    DistributionResult res;
    res.shape = (m1 == 1 && m2 == 1) ? "identity" : (m2 == 1) ? "diag(m,1)" : (m1 == 1) ? "diag(1,m)" : (m1 == m2) ? "diag(m,m)" : "diag(m1,m2)";

    // left: _c g_{0,y}(q^{m1/m2}) in t = q^{1/m2}
    int Bq = (B + static_cast<int>(m1) - 1) / static_cast<int>(m1);
    auto lhs = siegel_c_general(0, y, c, 1, Bq, L).substitute_power(static_cast<int>(m1)).truncate(B);

    // right: x' in (1/m2)Z/Z, m1 y' = y
    QSeries<CycloElt> rhs = QSeries<CycloElt>::constant(CycloElt(L, 1), B).with_unit_flag(true);
    for (i64 i = 0; i < m2; ++i) {
        for (i64 k = 0; k < m1; ++k) {
            Rational xp = make_rat(i, m2);
            Rational yp = (y + Rational(k)) / Rational(m1);
            rhs = rhs * siegel_c_general(xp, yp, c, m2, B, L);
            ++res.factors;
        }
    }
    res.lhs_exp = lhs.lead_exp();
    res.rhs_exp = rhs.lead_exp();
    if (lhs.lead_exp() != rhs.lead_exp()) {
        res.witness = "leading exponents differ: " + lhs.lead_exp().get_str() + " vs " + rhs.lead_exp().get_str();
        return res;
    }
    res.first_mismatch = QSeries<CycloElt>::first_difference(lhs, rhs);
    res.holds = res.first_mismatch < 0;
    if (!res.holds)
        res.witness = "coefficient " + std::to_string(res.first_mismatch) + ": " + lhs.coeff(res.first_mismatch).to_string() +
                      " vs " + rhs.coeff(res.first_mismatch).to_string();
    return res;
}

}  // namespace rsw
