#pragma once
/**
 * @file euler.hpp
 * @brief Rankin-Selberg Euler factors of a pair of eigenforms, Weil bounds, the p-adic
 *        interpolation factors and their symmetry under f -> f*, and the correction polynomial
 *        C = prod_{p | N} P_p(p^{-s}) * sum_{n in S(N)} a_n(f) a_n(g) n^{-s}.
 */

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "rsw/forms.hpp"
#include "rsw/ratfunc.hpp"

namespace rsw {

/** Polynomial with coefficients in a number field (low degree first). */
struct FieldPoly {
    TowerPtr field;
    std::vector<TowerElt> c;

    int degree() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (!c[i].is_zero()) return i;
        return -1;
    }
    TowerElt coeff(int i) const { return i < static_cast<int>(c.size()) ? c[i] : TowerElt(field, 0); }
    std::string to_string(const std::string& var = "X") const {
        std::string s;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero()) continue;
            std::string v = c[i].to_string();
            bool simple = v.find_first_of("+ ", 1) == std::string::npos;
            std::string term = simple ? v : "(" + v + ")";
            if (i > 0) term += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
            s += (s.empty() ? "" : " + ") + term;
        }
        return s.empty() ? "0" : s;
    }
    friend bool operator==(const FieldPoly& a, const FieldPoly& b) {
        size_t n = std::max(a.c.size(), b.c.size());
        for (size_t i = 0; i < n; ++i)
            if (a.coeff(static_cast<int>(i)) != b.coeff(static_cast<int>(i))) return false;
        return true;
    }
};

inline FieldPoly field_poly_mul(const FieldPoly& a, const FieldPoly& b, int trunc = -1) {
    size_t n = a.c.size() + b.c.size() - 1;
    if (trunc >= 0) n = std::min(n, static_cast<size_t>(trunc + 1));
    FieldPoly r{a.field, std::vector<TowerElt>(n, TowerElt(a.field, 0))};
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size() && i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

/** X^2 - a_p X + p^{k-1} eps(p) over the coefficient field. */
inline FieldPoly hecke_polynomial(const Eigenform& f, i64 p) {
    if (!is_prime(p)) throw MathError("hecke_polynomial needs p prime");
    if (f.level % p == 0)
        throw MathError("p = " + std::to_string(p) + " divides the level: the Hecke polynomial is replaced by the U_p eigenvalue there");
    TowerElt c0 = f.chi(p) * Rational(Integer(ipow(p, f.weight - 1)));
    return {f.field, {c0, -f.coeff(p), TowerElt(f.field, 1)}};
}

/** Degree <= 4 local factor with constant term 1. */
struct EulerFactor {
    i64 p = 0;
    int k = 2, l = 2;
    FieldPoly poly;
    std::string to_string(const std::string& var = "X") const { return poly.to_string(var); }
};

namespace detail {
struct PairData {
    TowerPtr J;
    TowerElt a, b, ef, eg;
    int k, l;
};
inline PairData pair_data(const Eigenform& f, const Eigenform& g, i64 p) {
    PairData d;
    d.J = joint_field(f, g);
    d.a = to_joint(f.coeff(p), d.J);
    d.b = to_joint(g.coeff(p), d.J);
    d.ef = to_joint(f.chi(p), d.J);
    d.eg = to_joint(g.chi(p), d.J);
    d.k = f.weight;
    d.l = g.weight;
    return d;
}
inline Rational ppow(i64 p, int e) { return rat_pow(Rational(p), e); }
}  // namespace detail

/** P_p(f, g, X) from the explicit display in a_p and the characters. */
inline EulerFactor rankin_euler_factor(const Eigenform& f, const Eigenform& g, i64 p) {
    if (!is_prime(p)) throw MathError("rankin_euler_factor needs p prime");
    if (f.level % p == 0 || g.level % p == 0)
        throw MathError("p = " + std::to_string(p) + " divides a level: bad Euler factors are out of scope (supply them to local_correction)");
    auto d = detail::pair_data(f, g, p);
    using detail::ppow;
    int k = d.k, l = d.l;
    EulerFactor E;
    E.p = p;
    E.k = k;
    E.l = l;
    TowerElt one(d.J, 1);
    E.poly = {d.J,
              {one, -(d.a * d.b),
               d.a * d.a * d.eg * ppow(p, l - 1) + d.ef * d.b * d.b * ppow(p, k - 1) - d.ef * d.eg * (Rational(2) * ppow(p, k + l - 2)),
               -(d.ef * d.eg * d.a * d.b) * ppow(p, k + l - 2), d.ef * d.ef * d.eg * d.eg * ppow(p, 2 * k + 2 * l - 4)}};
    return E;
}

/**
 * Second path: (1 - alpha gamma X)(1 - alpha delta X)(1 - beta gamma X)(1 - beta delta X) expanded
 * in J[X, Y]/(Hecke polynomials), alpha = X, beta = a_p(f) - X, gamma = Y, delta = a_p(g) - Y.
 * Each coefficient is checked to lie in J and returned.
 */
inline EulerFactor rankin_euler_factor_factored(const Eigenform& f, const Eigenform& g, i64 p) {
    auto d = detail::pair_data(f, g, p);
    if (f.level % p == 0 || g.level % p == 0) throw MathError("bad prime");
    std::string h = d.J->defining_upoly().to_string("t");
    TowerElt cf = d.ef * detail::ppow(p, d.k - 1), cg = d.eg * detail::ppow(p, d.l - 1);
    auto T = TowerRing::make({"t", "X", "Y"}, {h, "X^2 - (" + d.a.to_string() + ")*X + (" + cf.to_string() + ")",
                                                "Y^2 - (" + d.b.to_string() + ")*Y + (" + cg.to_string() + ")"});
    TowerElt t = TowerElt::var(T, 0), al = TowerElt::var(T, 1), ga = TowerElt::var(T, 2);
    auto up = [&](const TowerElt& x) { return x.map_to(T, {t}); };
    TowerElt be = up(d.a) - al, de = up(d.b) - ga;
    std::vector<TowerElt> roots{al * ga, al * de, be * ga, be * de};
    std::vector<TowerElt> c{TowerElt(T, 1)};
    for (auto& r : roots) {
        std::vector<TowerElt> n(c.size() + 1, TowerElt(T, 0));
        for (size_t i = 0; i < c.size(); ++i) {
            n[i] += c[i];
            n[i + 1] -= c[i] * r;
        }
        c = std::move(n);
    }
    EulerFactor E;
    E.p = p;
    E.k = d.k;
    E.l = d.l;
    E.poly.field = d.J;
    RingPtr R = d.J->ring();
    for (auto& x : c) {
        // back to J: the coefficient must not involve X or Y
        if (x.poly().involves(1) || x.poly().involves(2)) throw MathError("factored Euler factor coefficient not in the base field");
        E.poly.c.push_back(TowerElt(d.J, x.poly().substitute({MPoly::var(R, 0), MPoly(R, 0), MPoly(R, 0)})));
    }
    return E;
}

/** Symbol-level check: the display in a = alpha + beta, p^{k-1} eps = alpha beta equals the product of binomials. */
inline bool rankin_display_identity() {
    RingPtr R = make_ring({"alpha", "beta", "gamma", "delta", "X"});
    auto v = [&](int i) { return MPoly::var(R, i); };
    MPoly al = v(0), be = v(1), ga = v(2), de = v(3), X = v(4), one(R, 1);
    MPoly prod = (one - al * ga * X) * (one - al * de * X) * (one - be * ga * X) * (one - be * de * X);
    MPoly a = al + be, b = ga + de, cf = al * be, cg = ga * de;  // cf = p^{k-1} eps_f(p)
    MPoly display = one - a * b * X + (a * a * cg + cf * b * b - cf * cg * Rational(2)) * X.pow(2) - cf * cg * a * b * X.pow(3) +
                    cf * cf * cg * cg * X.pow(4);
    return prod == display;
}

struct WeilResult {
    bool holds = true;
    double max_abs = 0;   ///< largest |lambda| over all reciprocal roots and embeddings
    double bound = 0;
    std::string detail;
};

/** All reciprocal roots lambda satisfy |lambda| <= p^{(k+l-2)/2} (1 + tol), at every complex embedding. */
inline WeilResult weil_check(const EulerFactor& E, double tol = 1e-9) {
    WeilResult r;
    r.bound = std::pow(static_cast<double>(E.p), (E.k + E.l - 2) / 2.0);
    int deg = E.poly.degree();
    if (deg <= 0) {
        r.detail = "constant factor";
        return r;
    }
    auto embs = E.poly.field->embeddings();
    for (size_t e = 0; e < embs.size(); ++e) {
        std::vector<std::complex<double>> c;
        for (int i = 0; i <= deg; ++i) c.push_back(E.poly.coeff(i).eval_complex(embs[e]));
        auto roots = complex_roots(c);
        for (auto& z : roots) {
            std::complex<double> val = 0;
            for (int i = deg; i >= 0; --i) val = val * z + c[static_cast<size_t>(i)];
            double scale = 0;
            for (auto& ci : c) scale = std::max(scale, std::abs(ci) * std::pow(std::max(1.0, std::abs(z)), deg));
            if (std::abs(val) > 1e-7 * std::max(1.0, scale))
                throw MathError("weil_check: root finding failed, residual " + std::to_string(std::abs(val)));
            double lam = 1.0 / std::abs(z);
            r.max_abs = std::max(r.max_abs, lam);
            if (lam > r.bound * (1 + tol)) r.holds = false;
        }
    }
    r.detail = "max |lambda| = " + std::to_string(r.max_abs) + ", bound p^{(k+l-2)/2} = " + std::to_string(r.bound);
    return r;
}

/** Weil check for an Euler factor given with rational coefficients (e.g. adversarial inputs). */
inline EulerFactor euler_factor_from_rationals(i64 p, int k, int l, const std::vector<Rational>& coeffs) {
    TowerPtr Q = TowerRing::number_field(UPoly::x(), "t");
    EulerFactor E;
    E.p = p;
    E.k = k;
    E.l = l;
    E.poly.field = Q;
    for (auto& c : coeffs) E.poly.c.push_back(TowerElt(Q, c));
    return E;
}

// ------------------------------------------------------------------ interpolation factors

/** Ring of the symbols alpha, beta, gamma, delta (Hecke roots of f, g at p) and p. */
inline RingPtr interpolation_ring() {
    static RingPtr R = make_ring({"alpha", "beta", "gamma", "delta", "p"});
    return R;
}

struct InterpFactors {
    RatFunc E_f;       ///< 1 - beta / (p alpha)
    RatFunc E_star_f;  ///< 1 - beta / alpha
    RatFunc E_fg_j;    ///< (1 - p^{-j} beta gamma)(1 - p^{-j} beta delta)(1 - p^{j-1}/(alpha gamma))(1 - p^{j-1}/(alpha delta))
};

namespace detail {
inline RatFunc rvar(int i) { return RatFunc(MPoly::var(interpolation_ring(), i)); }
inline RatFunc rconst(const Rational& c) { return RatFunc(interpolation_ring(), c); }
inline RatFunc interp_E(const RatFunc& al, const RatFunc& be, const RatFunc& p) { return rconst(1) - be / (p * al); }
inline RatFunc interp_Estar(const RatFunc& al, const RatFunc& be) { return rconst(1) - be / al; }
inline RatFunc interp_Efg(const RatFunc& al, const RatFunc& be, const RatFunc& ga, const RatFunc& de, const RatFunc& p, long j) {
    RatFunc one = rconst(1), pmj = p.pow(-j), pj1 = p.pow(j - 1);
    return (one - pmj * be * ga) * (one - pmj * be * de) * (one - pj1 / (al * ga)) * (one - pj1 / (al * de));
}
}  // namespace detail

/** The three factors as rational functions of alpha, beta, gamma, delta, p (j an integer exponent). */
inline InterpFactors interpolation_factors(long j) {
    using namespace detail;
    RatFunc al = rvar(0), be = rvar(1), ga = rvar(2), de = rvar(3), p = rvar(4);
    return {interp_E(al, be, p), interp_Estar(al, be), interp_Efg(al, be, ga, de, p, j)};
}

/** Substitute numeric values (alpha, beta, gamma, delta, p). */
inline Rational eval_interp(const RatFunc& r, const std::vector<Rational>& pt) { return r.eval(pt); }

struct SymmetryResult {
    bool holds = false;           ///< E(f*) = E(f), E*(f*) = E*(f), E(f, g, k+l-1-j) = E(f*, g*, j), ratio A = 1
    bool e_f = false;
    bool e_star = false;          ///< E*(f*) = E*(f)
    bool e_star_literal = false;  ///< E*(f*) = E(f), the literal form of the claim
    bool e_fg = false;
    bool e_fg_swapped = false;    ///< same with the other ordering of the roots of g*
    bool ratio_A = false;
    std::string detail;
};

/**
 * Starred substitutions alpha(f*) = p^{k-1}/beta, beta(f*) = p^{k-1}/alpha and
 * {alpha(g*), beta(g*)} = {p^{l-1}/gamma, p^{l-1}/delta}, as identities in independent symbols.
 */
inline SymmetryResult functional_symmetry_check(int k, int l, long j) {
    using namespace detail;
    RatFunc al = rvar(0), be = rvar(1), ga = rvar(2), de = rvar(3), p = rvar(4);
    RatFunc pk = p.pow(k - 1), pl = p.pow(l - 1);
    RatFunc als = pk / be, bes = pk / al, gas = pl / ga, des = pl / de;
    SymmetryResult r;
    RatFunc Ef = interp_E(al, be, p), Efs = interp_E(als, bes, p);
    RatFunc Esf = interp_Estar(al, be), Esfs = interp_Estar(als, bes);
    r.e_f = Efs == Ef;
    r.e_star = Esfs == Esf;
    r.e_star_literal = Esfs == Ef;
    long jj = k + l - 1 - j;
    RatFunc lhs = interp_Efg(al, be, ga, de, p, jj);
    r.e_fg = lhs == interp_Efg(als, bes, gas, des, p, j);
    r.e_fg_swapped = lhs == interp_Efg(als, bes, des, gas, p, j);
    // A = E(f,g,k+l-1-j) / (E(f) E*(f)) * (E(f*,g*,j) / (E(f*) E*(f*)))^{-1}; Petersson norms cancel
    RatFunc A = lhs / (Ef * Esf) * ((Efs * Esfs) / interp_Efg(als, bes, gas, des, p, j));
    r.ratio_A = A == rconst(1);
    r.holds = r.e_f && r.e_star && r.e_fg && r.e_fg_swapped && r.ratio_A;
    r.detail = "(k,l,j) = (" + std::to_string(k) + "," + std::to_string(l) + "," + std::to_string(j) + "): E(f*)=E(f) " +
               (r.e_f ? "yes" : "no") + ", E*(f*)=E*(f) " + (r.e_star ? "yes" : "no") + ", E*(f*)=E(f) " + (r.e_star_literal ? "yes" : "no") +
               ", E(f,g,k+l-1-j)=E(f*,g*,j) " + (r.e_fg ? "yes" : "no") + ", A=1 " + (r.ratio_A ? "yes" : "no");
    return r;
}

// ------------------------------------------------------------------ correction polynomial

/** a_{p^r}, r = 0..R: stored values where available (checked), otherwise the Hecke recursion. */
inline std::vector<TowerElt> prime_power_coeffs(const Eigenform& f, i64 p, int R) {
    std::vector<TowerElt> a{TowerElt(f.field, 1)};
    if (R >= 1) a.push_back(f.coeff(p));
    bool bad = f.level % p == 0;
    TowerElt w = f.chi(p) * Rational(Integer(ipow(p, f.weight - 1)));
    for (int r = 2; r <= R; ++r) a.push_back(bad ? a[r - 1] * a[1] : a[1] * a[r - 1] - w * a[r - 2]);
    i64 pr = 1;
    for (int r = 0; r <= R; ++r, pr *= p) {
        if (pr > f.bound()) break;
        if (f.coeff(pr) != a[r]) throw InvariantViolation("stored a_" + std::to_string(pr) + " disagrees with the recursion", p, r);
    }
    return a;
}

/**
 * Local factor used in C at p | N: the good-pair display when p divides neither level; when p
 * divides exactly one level and that form has a_{p^r} = a_p^r, (1 - a_p gamma X)(1 - a_p delta X)
 * with gamma, delta the roots of the other form; when p divides both, 1 - a_p(f) a_p(g) X.
 */
inline FieldPoly local_factor(const Eigenform& f, const Eigenform& g, i64 p) {
    bool bf = f.level % p == 0, bg = g.level % p == 0;
    if (!bf && !bg) return rankin_euler_factor(f, g, p).poly;
    auto d = detail::pair_data(f, g, p);
    TowerElt one(d.J, 1);
    if (bf && bg) return {d.J, {one, -(d.a * d.b)}};
    // bad side with eigenvalue u, good side with trace s and norm n
    TowerElt u = bf ? d.a : d.b, s = bf ? d.b : d.a;
    TowerElt n = bf ? d.eg * detail::ppow(p, d.l - 1) : d.ef * detail::ppow(p, d.k - 1);
    return {d.J, {one, -(u * s), u * u * n}};
}

struct LocalCorrection {
    i64 p = 0;
    FieldPoly factor;      ///< P_p used
    FieldPoly product;     ///< P_p(x) * sum_r a_{p^r}(f) a_{p^r}(g) x^r, truncated at the guard
    bool certified = false;
    FieldPoly polynomial;  ///< certified polynomial (product with the vanishing tail removed)
};

struct CorrectionResult {
    bool certified = false;
    std::vector<LocalCorrection> local;
    std::string residual;  ///< head of the non-vanishing tail when not certified
    bool is_one() const {
        for (auto& l : local)
            if (l.polynomial.degree() != 0 || l.polynomial.coeff(0) != TowerElt(l.polynomial.field, 1)) return false;
        return certified;
    }
    std::string to_string() const {
        if (local.empty()) return "1";
        std::string s;
        for (auto& l : local) s += (s.empty() ? "" : " * ") + std::string("(") + l.polynomial.to_string("x_" + std::to_string(l.p)) + ")";
        return s;
    }
};

/**
 * Per-prime correction factors for p | N. Coefficients above floor(guard/2) must vanish for the
 * factor to be certified as a polynomial (of degree <= guard/2).
 */
inline CorrectionResult local_correction(const Eigenform& f, const Eigenform& g, i64 N, int guard = 8,
                                         const std::map<i64, FieldPoly>& bad_factors = {}) {
    if (N < 1) throw MathError("N must be positive");
    if (guard < 2) throw MathError("guard must be at least 2");
    CorrectionResult res;
    res.certified = true;
    TowerPtr J = detail::joint_field(f, g);
    for (auto& [p, e] : factorize(N)) {
        (void)e;
        LocalCorrection lc;
        lc.p = p;
        auto it = bad_factors.find(p);
        lc.factor = it != bad_factors.end() ? it->second : local_factor(f, g, p);
        auto af = prime_power_coeffs(f, p, guard), ag = prime_power_coeffs(g, p, guard);
        FieldPoly S{J, {}};
        for (int r = 0; r <= guard; ++r) S.c.push_back(detail::to_joint(af[r], J) * detail::to_joint(ag[r], J));
        lc.product = field_poly_mul(lc.factor, S, guard);
        int half = guard / 2;
        lc.certified = true;
        for (int r = half + 1; r <= guard; ++r)
            if (!lc.product.coeff(r).is_zero()) {
                lc.certified = false;
                if (res.residual.empty())
                    res.residual = "p = " + std::to_string(p) + ": coefficient of x^" + std::to_string(r) + " is " + lc.product.coeff(r).to_string();
            }
        lc.polynomial = {J, std::vector<TowerElt>(lc.product.c.begin(), lc.product.c.begin() + half + 1)};
        while (lc.polynomial.c.size() > 1 && lc.polynomial.c.back().is_zero()) lc.polynomial.c.pop_back();
        res.certified = res.certified && lc.certified;
        res.local.push_back(std::move(lc));
    }
    if (!res.certified && res.residual.empty()) res.residual = "polynomiality not certified";
    return res;
}

/**
 * Joint computation over multi-indices (r_p) with r_p <= guard: sum a_n(f) a_n(g) prod x_p^{r_p},
 * using stored a_n when n is in range, times prod_p P_p(x_p). Returns coefficient map
 * (exponent vector -> value), truncated at guard in each variable.
 */
inline std::map<std::vector<int>, TowerElt> local_correction_joint(const Eigenform& f, const Eigenform& g, i64 N, int guard = 8) {
    TowerPtr J = detail::joint_field(f, g);
    std::vector<i64> ps;
    for (auto& [p, e] : factorize(N)) { (void)e; ps.push_back(p); }
    size_t m = ps.size();
    std::vector<std::vector<TowerElt>> af, ag;
    std::vector<FieldPoly> P;
    for (i64 p : ps) {
        af.push_back(prime_power_coeffs(f, p, guard));
        ag.push_back(prime_power_coeffs(g, p, guard));
        P.push_back(local_factor(f, g, p));
    }
    // series coefficients
    std::map<std::vector<int>, TowerElt> S;
    std::vector<int> idx(m, 0);
    while (true) {
        Integer n = 1;
        bool small = true;
        for (size_t i = 0; i < m; ++i) {
            Integer pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps[i]), static_cast<unsigned long>(idx[i]));
            n *= pw;
        }
        if (n > f.bound() || n > g.bound()) small = false;
        TowerElt v(J, 1);
        if (small) {
            v = detail::to_joint(f.coeff(n.get_si()), J) * detail::to_joint(g.coeff(n.get_si()), J);
        } else {
            for (size_t i = 0; i < m; ++i) v = v * detail::to_joint(af[i][idx[i]], J) * detail::to_joint(ag[i][idx[i]], J);
        }
        S.emplace(idx, v);
        size_t i = 0;
        while (i < m && ++idx[i] > guard) idx[i++] = 0;
        if (i == m) break;
    }
    // multiply by each P_p(x_p) in turn
    for (size_t i = 0; i < m; ++i) {
        std::map<std::vector<int>, TowerElt> T;
        for (auto& [e, v] : S)
            for (int r = 0; r < static_cast<int>(P[i].c.size()); ++r) {
                if (P[i].c[r].is_zero()) continue;
                auto e2 = e;
                e2[i] += r;
                if (e2[i] > guard) continue;
                auto it = T.find(e2);
                TowerElt add = v * P[i].c[r];
                if (it == T.end()) T.emplace(e2, add);
                else it->second += add;
            }
        S = std::move(T);
    }
    for (auto it = S.begin(); it != S.end();) it = it->second.is_zero() ? S.erase(it) : std::next(it);
    return S;
}

}  // namespace rsw
