#pragma once
/**
 * @file norm_relations.hpp
 * @brief Symbolic verification of the operator identities behind the norm relations: the S_p'
 *        rewrites, composite norms down the p-tower, the operator-valued Euler factor and its
 *        eigenvalue specialization, the p-stabilization formula, A_l congruences, twist systems.
 *
 * Operators are Laurent polynomials in a = (T_p', . ), b = ( . , T_p'), df, dg (the diamond
 * <p^{-1}> on each side), s = sigma_p and p:
 *   (T',T') = ab, (<p^-1>,<p^-1>) = df dg, (<p^-1>, T'^2) = df b^2, (<p^-1>T', <p^-1>T') = df dg ab,
 *   (<p^-2>,<p^-2>) = (df dg)^2, S_p'(a) = a^2 - (p+1) df, R_p -> 1.
 */

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsw/euler.hpp"
#include "rsw/mpoly.hpp"
#include "rsw/ratfunc.hpp"

namespace rsw {

/** A single-coefficient perturbation of a printed display, addressed by slot name. */
struct Mutation {
    std::string slot;
    Rational delta = 1;
};

namespace detail {
/** Printed coefficient `v` of slot `name`, perturbed if the mutation targets it. */
struct Printed {
    const Mutation* m = nullptr;
    Rational operator()(const char* name, const Rational& v) const { return m && m->slot == name ? v + m->delta : v; }
};
}  // namespace detail

// ------------------------------------------------------------------ operator polynomials

/** Ring of operator symbols; df, dg, s, p may carry negative exponents. */
inline RingPtr operator_ring() {
    static RingPtr R = make_ring({"a", "b", "df", "dg", "s", "p"}, {false, false, true, true, true, true});
    return R;
}
using OperatorPoly = MPoly;

struct OpSymbols {
    OperatorPoly a, b, df, dg, s, p, one, D;
    OpSymbols() {
        RingPtr R = operator_ring();
        a = MPoly::var(R, 0);
        b = MPoly::var(R, 1);
        df = MPoly::var(R, 2);
        dg = MPoly::var(R, 3);
        s = MPoly::var(R, 4);
        p = MPoly::var(R, 5);
        one = MPoly(R, 1);
        D = df * dg;
    }
    OperatorPoly c(const Rational& x) const { return one * x; }
};

/** Sum over classes Z_r at levels m p^r; lower-level classes inside a higher identity are restricted. */
struct FormalClassExpr {
    std::map<int, OperatorPoly> c;
    OperatorPoly at(int r) const {
        auto it = c.find(r);
        return it == c.end() ? MPoly(operator_ring(), 0) : it->second;
    }
    void add(int r, const OperatorPoly& x) {
        auto it = c.find(r);
        if (it == c.end()) c.emplace(r, x);
        else it->second += x;
    }
    int top() const { return c.empty() ? 0 : c.rbegin()->first; }
    std::string to_string() const {
        std::string s;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            if (it->second.is_zero()) continue;
            s += (s.empty() ? "" : " + ") + std::string("[") + it->second.to_string() + "] Z" + std::to_string(it->first);
        }
        return s.empty() ? "0" : s;
    }
    friend bool operator==(const FormalClassExpr& x, const FormalClassExpr& y) {
        int t = std::max(x.top(), y.top());
        for (int r = 0; r <= t; ++r)
            if (x.at(r) != y.at(r)) return false;
        return true;
    }
};

/** Outcome of one catalog identity. */
struct IdentityResult {
    std::string id;
    bool holds = false;
    std::string derived;  ///< canonical form of the derived operator
    std::string witness;  ///< canonical difference when the identity fails
    std::string note;
};

namespace detail {
inline std::string diff_witness(const OperatorPoly& l, const OperatorPoly& r) { return l == r ? "" : "lhs - rhs = " + (l - r).to_string(); }

/** S_p' as a polynomial in the T_p'-side symbol x and the diamond symbol d. */
inline OperatorPoly S_of(const OpSymbols& o, const OperatorPoly& x, const OperatorPoly& d, const Printed& c) {
    return x * x - (o.p + o.c(c("S.p+1", 1))) * d;
}
}  // namespace detail

// ------------------------------------------------------------------ rewrite identities

/** Right side of the first-norm theorem at level mp -> m, with the (T'^2) pairs as printed. */
inline OperatorPoly second_norm_operator(const Mutation* m = nullptr) {
    OpSymbols o;
    detail::Printed c{m};
    OperatorPoly si = o.s.pow(-1);
    return o.c(c("thm.sigma", -1)) * o.s + o.c(c("thm.TT", 1)) * o.a * o.b +
           ((o.p + o.c(c("thm.p+1", 1))) * o.D + o.c(c("thm.dT2", -1)) * o.df * o.b * o.b + o.c(c("thm.T2d", -1)) * o.a * o.a * o.dg) * si +
           o.c(c("thm.dTdT", 1)) * o.D * o.a * o.b * si.pow(2) + o.c(c("thm.pD2", -1)) * o.p * o.D * o.D * si.pow(3);
}

/** The rewrite in terms of S_p'. */
inline OperatorPoly second_norm_rewritten(const Mutation* m = nullptr) {
    OpSymbols o;
    detail::Printed c{m};
    OperatorPoly si = o.s.pow(-1);
    OperatorPoly Sa = detail::S_of(o, o.a, o.df, c), Sb = detail::S_of(o, o.b, o.dg, c);
    return (o.c(c("rw.TT", 1)) * o.a * o.b + o.c(c("rw.sigma", -1)) * o.s + o.c(c("rw.pD", -1)) * o.p * o.D * si) *
               (o.c(c("rw.one", 1)) + o.c(c("rw.D", 1)) * o.D * si.pow(2)) +
           o.c(c("rw.S", -1)) * (o.df * Sb + Sa * o.dg) * si;
}

inline IdentityResult verify_sp_rewrite(const Mutation* m = nullptr) {
    auto l = second_norm_operator(m), r = second_norm_rewritten(m);
    return {"sp-rewrite", l == r, l.to_string(), detail::diff_witness(l, r), "T_p'^2 = S_p' + (p+1)<p^-1>R_p with R_p acting trivially"};
}

/** Norm_{mp}^{mp^2} and Norm_{mp^2}^{mp^3}, as printed with (T'^2) pairs. */
inline FormalClassExpr higher_norm_rule(int level, const Mutation* m = nullptr) {
    OpSymbols o;
    detail::Printed c{m};
    OperatorPoly si = o.s.pow(-1), ab = o.a * o.b;
    OperatorPoly mid = o.c(c("hi.pD", 1)) * o.p * o.D + o.c(c("hi.dT2", -1)) * o.df * o.b * o.b + o.c(c("hi.T2d", -1)) * o.a * o.a * o.dg;
    FormalClassExpr e;
    if (level == 2) {
        e.add(1, o.c(c("hi.TT", 1)) * ab);
        e.add(0, mid + o.c(c("hi.2dTdT", 2)) * o.D * ab * si + o.c(c("hi.pD2", -1)) * o.p * o.D * o.D * si.pow(2));
    } else if (level == 3) {
        e.add(2, ab);
        e.add(1, mid);
        e.add(0, o.D * (o.c(c("hi3.2TT", 2)) * ab + o.c(c("hi3.mix", -1)) * (o.df * o.b * o.b + o.a * o.a * o.dg) * si));
    } else {
        throw MathError("higher norm rule only for levels 2 and 3");
    }
    return e;
}

/** The same two norms restated through S_p'. */
inline FormalClassExpr higher_norm_rewritten(int level, const Mutation* m = nullptr) {
    OpSymbols o;
    detail::Printed c{m};
    OperatorPoly si = o.s.pow(-1), ab = o.a * o.b;
    OperatorPoly Sa = detail::S_of(o, o.a, o.df, c), Sb = detail::S_of(o, o.b, o.dg, c);
    OperatorPoly block = (o.p + o.c(c("rw.p+2", 2))) * o.D + o.df * Sb + Sa * o.dg;
    FormalClassExpr e;
    if (level == 2) {
        e.add(1, ab);
        e.add(0, -block + o.D * si * (o.c(c("rw.2TT", 2)) * ab + o.c(c("rw.pD", -1)) * o.p * o.D * si));
    } else if (level == 3) {
        e.add(2, ab);
        e.add(1, -block);
        e.add(0, o.D * (o.c(c("rw3.2TT", 2)) * ab -
                        ((o.p * o.c(c("rw3.2p", 2)) + 2) * o.D + o.df * Sb + Sa * o.dg) * si));
    } else {
        throw MathError("higher norm rule only for levels 2 and 3");
    }
    return e;
}

inline IdentityResult verify_higher_rewrite(const Mutation* m = nullptr) {
    IdentityResult r{"higher-rewrite", true, "", "", "both levels"};
    for (int lv : {2, 3}) {
        auto x = higher_norm_rule(lv, m), y = higher_norm_rewritten(lv, m);
        r.derived += (r.derived.empty() ? "" : "; ") + std::string("level ") + std::to_string(lv) + ": " + x.to_string();
        if (!(x == y)) {
            r.holds = false;
            for (int i = 0; i <= lv; ++i)
                if (x.at(i) != y.at(i)) {
                    r.witness += "level " + std::to_string(lv) + ", Z" + std::to_string(i) + ": " + detail::diff_witness(x.at(i), y.at(i)) + " ";
                    break;
                }
        }
    }
    return r;
}

// ------------------------------------------------------------------ operator Euler factor

/** Coefficients of the operator-valued Euler factor, X^0..X^4. */
inline std::vector<OperatorPoly> operator_euler_factor(const Mutation* m = nullptr) {
    OpSymbols o;
    detail::Printed c{m};
    OperatorPoly p2 = o.p * o.p;
    return {o.c(c("P.X0", 1)), o.c(c("P.X1", -1)) * o.a * o.b,
            o.c(c("P.X2a", 1)) * o.p * o.a * o.a * o.dg + o.c(c("P.X2b", 1)) * o.p * o.df * o.b * o.b + o.c(c("P.X2c", -2)) * p2 * o.D,
            o.c(c("P.X3", -1)) * p2 * o.D * o.a * o.b, o.c(c("P.X4", 1)) * p2 * p2 * o.D * o.D};
}

inline OperatorPoly eval_operator_poly(const std::vector<OperatorPoly>& coeffs, const OperatorPoly& X) {
    OperatorPoly r(operator_ring(), 0), pw(operator_ring(), 1);
    for (auto& c : coeffs) {
        r += c * pw;
        pw = pw * X;
    }
    return r;
}

/** Ring for eigenvalue specializations: Hecke roots, p and s = sigma_p. */
inline RingPtr eigen_ring() {
    static RingPtr R = make_ring({"alpha", "beta", "gamma", "delta", "p", "s"}, {false, false, false, false, true, true});
    return R;
}

/**
 * a -> alpha + beta, b -> gamma + delta, df -> eps_f(p) = alpha beta / p, dg -> gamma delta / p
 * (weight 2). With inverse_diamond the diamonds go to eps^{-1} instead.
 */
inline RatFunc specialize_eigen(const OperatorPoly& x, bool inverse_diamond = false) {
    RingPtr E = eigen_ring();
    auto v = [&](int i) { return RatFunc(MPoly::var(E, i)); };
    RatFunc al = v(0), be = v(1), ga = v(2), de = v(3), p = v(4), s = v(5);
    RatFunc ef = al * be / p, eg = ga * de / p;
    if (inverse_diamond) {
        ef = ef.inv();
        eg = eg.inv();
    }
    return RatFunc(x).substitute({al + be, ga + de, ef, eg, s, p});
}

struct EulerSpecializationResult {
    bool holds = false;        ///< matches the display of P_p(f, g, X) coefficientwise
    bool matches_roots = false;///< matches prod (1 - lambda X) over the four root products
    std::vector<std::string> coefficients;
    std::string witness;
};

inline EulerSpecializationResult verify_operator_euler_factor(const Mutation* m = nullptr) {
    auto P = operator_euler_factor(m);
    RingPtr E = eigen_ring();
    auto v = [&](int i) { return RatFunc(MPoly::var(E, i)); };
    RatFunc al = v(0), be = v(1), ga = v(2), de = v(3), p = v(4), one(E, 1);
    RatFunc af = al + be, ag = ga + de, ef = al * be / p, eg = ga * de / p;
    std::vector<RatFunc> display{one, -(af * ag), p * af * af * eg + p * ef * ag * ag - RatFunc(E, 2) * p * p * ef * eg,
                                 -(p * p * ef * eg * af * ag), p.pow(4) * ef * ef * eg * eg};
    // elementary symmetric functions of alpha gamma, alpha delta, beta gamma, beta delta
    std::vector<RatFunc> lam{al * ga, al * de, be * ga, be * de};
    std::vector<RatFunc> prod{one};
    for (auto& l : lam) {
        std::vector<RatFunc> n(prod.size() + 1, RatFunc(E, 0));
        for (size_t i = 0; i < prod.size(); ++i) {
            n[i] += prod[i];
            n[i + 1] -= prod[i] * l;
        }
        prod = std::move(n);
    }
    EulerSpecializationResult r;
    r.holds = r.matches_roots = true;
    for (size_t i = 0; i < 5; ++i) {
        RatFunc sp = specialize_eigen(P[i]);
        r.coefficients.push_back(sp.to_string());
        if (sp != display[i]) {
            r.holds = false;
            if (r.witness.empty()) r.witness = "X^" + std::to_string(i) + ": " + sp.to_string() + " vs " + display[i].to_string();
        }
        if (sp != prod[i]) r.matches_roots = false;
    }
    return r;
}

/** The operator factor specialized at actual a_p, eps(p) of two weight-2 forms, as a field polynomial. */
inline FieldPoly specialize_operator_factor(const Eigenform& f, const Eigenform& g, i64 p) {
    if (f.weight != 2 || g.weight != 2) throw MathError("operator specialization is for weight 2");
    TowerPtr J = detail::joint_field(f, g);
    auto up = [&](const TowerElt& x) { return detail::to_joint(x, J); };
    std::vector<TowerElt> img{up(f.coeff(p)), up(g.coeff(p)), up(f.chi(p)), up(g.chi(p)), TowerElt(J, 1), TowerElt(J, Rational(p))};
    FieldPoly out{J, {}};
    for (auto& c : operator_euler_factor()) {
        TowerElt acc(J, 0);
        for (auto& [mono, coef] : c.terms()) {
            TowerElt t(J, coef);
            for (size_t i = 0; i < img.size(); ++i)
                if (mono.e[i] != 0) t = t * img[i].pow(mono.e[i]);
            acc += t;
        }
        out.c.push_back(acc);
    }
    return out;
}

// ------------------------------------------------------------------ composite norms

/**
 * Norm from level r to r-1: Z_r follows `rules[r]`, restricted lower-level classes pick up the
 * field degree (p-1 into level 0, p above).
 */
inline FormalClassExpr norm_step(const FormalClassExpr& e, int r, const std::map<int, FormalClassExpr>& rules) {
    OpSymbols o;
    FormalClassExpr out;
    OperatorPoly deg = r == 1 ? o.p - o.one : o.p;
    for (auto& [i, c] : e.c) {
        if (i > r) throw MathError("class above the current level");
        if (i == r) {
            for (auto& [j, d] : rules.at(r).c) out.add(j, c * d);
        } else {
            out.add(i, c * deg);
        }
    }
    return out;
}

struct CompositeNormResult {
    OperatorPoly derived_a, closed_a, derived_b, closed_b;
    bool match_a = false, match_b = false;
    bool head_a = false;  ///< sigma^1 coefficient of the derived (a) operator is -(T',T')
    std::string witness;
};

/** Closed forms of Norm_m^{mp^2} and Norm_m^{mp^3} as operators on Z_0. */
inline std::pair<OperatorPoly, OperatorPoly> composite_norm_closed_forms(const Mutation* m = nullptr) {
    OpSymbols o;
    detail::Printed c{m};
    OperatorPoly si = o.s.pow(-1), pi = o.p.pow(-1), ab = o.a * o.b, pm1 = o.p + o.c(c("cn.p-1", -1));
    OperatorPoly P = eval_operator_poly(operator_euler_factor(m), pi * si);
    OperatorPoly base = pm1 * (o.one + o.c(c("cn.D", -1)) * o.D * si.pow(2));
    OperatorPoly A = o.c(c("cn.a.lead", 1)) * o.p * o.s.pow(2) * (base - (o.c(c("cn.a.TT", 1)) * ab * si + pm1) * P);
    OperatorPoly T2 = (o.a * o.a - o.p * o.df) * (o.b * o.b - o.p * o.dg);  // (T_{p^2}', T_{p^2}')
    OperatorPoly B = o.c(c("cn.b.lead", 1)) * o.p.pow(2) * o.s.pow(3) *
                     (base - (o.c(c("cn.b.T2", 1)) * pi * si.pow(2) * T2 + pm1 * pi * si * ab + pm1) * P);
    return {A, B};
}

/** Chains the single-level norm rules down to Z_0 and compares with the closed forms. */
inline CompositeNormResult derive_composite_norms(const Mutation* m = nullptr) {
    OpSymbols o;
    std::map<int, FormalClassExpr> rules;
    rules[1].add(0, second_norm_operator(m));
    rules[2] = higher_norm_rule(2, m);
    rules[3] = higher_norm_rule(3, m);
    CompositeNormResult r;
    FormalClassExpr e2;
    e2.add(2, o.one);
    e2 = norm_step(norm_step(e2, 2, rules), 1, rules);
    FormalClassExpr e3;
    e3.add(3, o.one);
    e3 = norm_step(norm_step(norm_step(e3, 3, rules), 2, rules), 1, rules);
    if (e2.top() != 0 || e3.top() != 0) throw MathError("composite norm did not reduce to Z_0");
    r.derived_a = e2.at(0);
    r.derived_b = e3.at(0);
    std::tie(r.closed_a, r.closed_b) = composite_norm_closed_forms(m);
    r.match_a = r.derived_a == r.closed_a;
    r.match_b = r.derived_b == r.closed_b;
    // head term: coefficient of s^1
    OperatorPoly head(operator_ring(), 0);
    for (auto& [mono, coef] : r.derived_a.terms())
        if (mono.e[4] == 1) head += MPoly::monomial(operator_ring(), mono, coef);
    head = head * o.s.pow(-1);
    r.head_a = head == -(o.a * o.b);
    if (!r.match_a) r.witness += "(a): " + detail::diff_witness(r.derived_a, r.closed_a) + " ";
    if (!r.match_b) r.witness += "(b): " + detail::diff_witness(r.derived_b, r.closed_b);
    return r;
}

// ------------------------------------------------------------------ corestriction

struct CorestrictionResult {
    bool holds = false;
    bool inverse_direction_holds = false;  ///< same with diamonds sent to eps^{-1}
    RatFunc lhs, rhs;
    std::string witness;
};

/** sigma((p-1)(1 - eps_f eps_g sigma^-2) - p P_p(f, g, p^-1 sigma^-1)) in the eigen ring. */
inline RatFunc corestriction_display(const Mutation* m = nullptr) {
    detail::Printed c{m};
    RingPtr E = eigen_ring();
    auto v = [&](int i) { return RatFunc(MPoly::var(E, i)); };
    RatFunc al = v(0), be = v(1), ga = v(2), de = v(3), p = v(4), s = v(5), one(E, 1);
    RatFunc X = (p * s).inv();
    RatFunc P = (one - al * ga * X) * (one - al * de * X) * (one - be * ga * X) * (one - be * de * X);
    RatFunc ee = al * be * ga * de / (p * p);
    return s * ((p + RatFunc(E, c("co.p-1", -1))) * (one + RatFunc(E, c("co.eps", -1)) * ee * s.pow(-2)) - RatFunc(E, c("co.pP", 1)) * p * P);
}

inline CorestrictionResult specialize_to_corestriction(const Mutation* m = nullptr) {
    CorestrictionResult r;
    OperatorPoly op = second_norm_operator(m);
    r.lhs = specialize_eigen(op);
    r.rhs = corestriction_display(m);
    r.holds = r.lhs == r.rhs;
    r.inverse_direction_holds = specialize_eigen(op, true) == r.rhs;
    if (!r.holds) r.witness = "difference " + (r.lhs - r.rhs).to_string();
    return r;
}

// ------------------------------------------------------------------ p-stabilization

struct PstabResult {
    RatFunc derived, target;
    bool holds = false;
    std::string witness;
    /** Evaluate the derived operator at (alpha, beta, gamma, delta, p, s); throws on vanishing discriminants. */
    Rational evaluate(const std::vector<Rational>& pt) const {
        const Rational &al = pt.at(0), &be = pt.at(1), &ga = pt.at(2), &de = pt.at(3);
        if ((al - be) * (ga - de) * (al * ga - be * de) == 0 || al * ga == 0)
            throw MathError("p-stabilization needs (alpha - beta)(gamma - delta)(alpha gamma - beta delta) != 0");
        return derived.eval(pt);
    }
};

/**
 * U = U_p acting on the p-stabilized class: the projector to the alpha gamma eigenspace is
 * J(U) = (U - alpha delta)(U - beta gamma)(U - beta delta) / ((alpha gamma - alpha delta)(alpha gamma - beta gamma)(alpha gamma - beta delta)).
 * U^r applied to the class at level m unfolds through the norms from level m p^r, which are
 * replaced by the single norm and the two composite norms.
 */
inline PstabResult pstab_projection_formula(const Mutation* m = nullptr) {
    detail::Printed c{m};
    RingPtr E = eigen_ring();
    auto v = [&](int i) { return RatFunc(MPoly::var(E, i)); };
    RatFunc al = v(0), be = v(1), ga = v(2), de = v(3), p = v(4), s = v(5), one(E, 1);
    auto k = [&](const char* n, long x) { return RatFunc(E, c(n, x)); };
    // cubic numerator coefficients: (X - ad)(X - bg)(X - bd)
    RatFunc r1 = al * de, r2 = be * ga, r3 = be * de;
    std::vector<RatFunc> num{-(r1 * r2 * r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 + r2 + r3), one};
    RatFunc den = (al * ga - k("J.ad", 1) * al * de) * (al * ga - be * ga) * (al * ga - be * de);
    if (den.is_zero()) throw MathError("division by (alpha - beta)(gamma - delta)(alpha gamma - beta delta)");
    std::vector<RatFunc> j;
    for (auto& x : num) j.push_back(x / den);
    RatFunc ee = al * be * ga * de / (p * p);
    auto comp = derive_composite_norms(m);
    RatFunc N1 = specialize_eigen(second_norm_operator(m)), N2 = specialize_eigen(comp.derived_a), N3 = specialize_eigen(comp.derived_b);
    PstabResult r;
    r.derived = (j[0] + j[1] * s + j[2] * s.pow(2) + j[3] * s.pow(3)) * (one + k("ps.eps", -1) * ee * s.pow(-2)) +
                (j[1] + j[2] * s + j[3] * s.pow(2)) * N1 + (j[2] + j[3] * s) * N2 + j[3] * N3;
    RatFunc X = (p * s).inv();
    r.target = k("ps.lead", 1) * al * ga * (one - be * de * X) * (one - al * de * X) * (one - be * ga * X) / ((ga - de) * (al - be));
    r.holds = r.derived == r.target;
    if (!r.holds) r.witness = "derived - target = " + (r.derived - r.target).to_string();
    return r;
}

// ------------------------------------------------------------------ A_l

struct AEllResult {
    bool defining_relation = false;  ///< -s A(1/s) equals the corestriction display at l
    bool congruent = false;          ///< every coefficient of A - p_l is (l-1) times an integral Laurent polynomial in l
    std::vector<std::string> A, quotient;
    std::string witness;
};

/** Ring {a, b, ef, eg, l, X, s} for A_l; l and s invertible. */
inline RingPtr a_ell_ring() {
    static RingPtr R = make_ring({"a", "b", "ef", "eg", "l", "X", "s"}, {false, false, false, false, true, false, true});
    return R;
}

/**
 * A_l(X) = l P_l(l^{-1} X) - (l-1)(1 - ef eg X^2) with P_l the weight-2 Euler factor in
 * a = a_l(f), b = a_l(g), ef, eg; certifies A_l = P_l(l^{-1}X) mod (l - 1) with l symbolic.
 */
inline AEllResult derive_A_ell(const Mutation* m = nullptr) {
    detail::Printed c{m};
    RingPtr R = a_ell_ring();
    auto v = [&](int i) { return MPoly::var(R, i); };
    MPoly a = v(0), b = v(1), ef = v(2), eg = v(3), l = v(4), s = v(6), one(R, 1);
    MPoly D = ef * eg;
    auto P = [&](const MPoly& X) {
        return one - a * b * X + (l * a * a * eg + l * ef * b * b - l * l * D * 2) * X.pow(2) - l * l * D * a * b * X.pow(3) +
               l.pow(4) * D * D * X.pow(4);
    };
    auto coeffs_in = [&](const MPoly& x, int var) {
        std::vector<MPoly> out(5, MPoly(R, 0));
        for (auto& [mono, coef] : x.terms()) {
            Mono mm = mono;
            int e = mm.e[static_cast<size_t>(var)];
            mm.e[static_cast<size_t>(var)] = 0;
            if (e < 0 || e > 4) throw MathError("unexpected degree");
            out[static_cast<size_t>(e)] += MPoly::monomial(R, mm, coef);
        }
        return out;
    };
    MPoly X = v(5), li = l.pow(-1);
    MPoly pl = P(li * X);
    MPoly A = l * c("A.l", 1) * pl - (l - one) * (one + D * c("A.eps", -1) * X.pow(2));
    AEllResult r;
    // -s A(s^{-1}) against s((l-1)(1 - ef eg s^-2) - l P(l^-1 s^-1))
    MPoly si = s.pow(-1);
    MPoly As = A.substitute({a, b, ef, eg, l, si, s});
    MPoly disp = s * ((l - one) * (one - D * si.pow(2)) - l * P(li * si));
    r.defining_relation = -(s * As) == disp;
    r.congruent = true;
    auto diff = coeffs_in(A - pl, 5);
    auto Ac = coeffs_in(A, 5);
    RatFunc lm1(l - one);
    for (size_t i = 0; i < 5; ++i) {
        r.A.push_back(Ac[i].to_string());
        RatFunc q = RatFunc(diff[i]) / lm1;
        r.quotient.push_back(q.to_string());
        bool ok = q.den().terms().size() == 1;
        for (auto& [mono, coef] : q.num().terms())
            if (coef.get_den() != 1) ok = false;
        if (q.den().terms().size() == 1 && abs(q.den().terms()[0].second) != 1) ok = false;
        if (!ok) {
            r.congruent = false;
            if (r.witness.empty()) r.witness = "X^" + std::to_string(i) + ": (A - p_l)/(l - 1) = " + q.to_string();
        }
    }
    return r;
}

struct AEllConcrete {
    bool congruent = false;
    std::vector<std::string> A, p, quotient;
    std::string witness;
};

/**
 * A_l for a concrete pair at a good prime l: the coefficients of (A_l - p_l)/(l-1) must be
 * integral at every prime dividing l - 1 (checked on power-basis coordinates).
 */
inline AEllConcrete A_ell_concrete(const Eigenform& f, const Eigenform& g, i64 l) {
    auto E = rankin_euler_factor(f, g, l);
    if (f.weight != 2 || g.weight != 2) throw MathError("A_l is implemented for weight 2");
    TowerPtr J = E.poly.field;
    TowerElt ee = detail::to_joint(f.chi(l), J) * detail::to_joint(g.chi(l), J);
    AEllConcrete r;
    r.congruent = true;
    auto bad = factorize(l - 1);
    for (int i = 0; i <= 4; ++i) {
        TowerElt pi = E.poly.coeff(i) * rat_pow(Rational(l), -i);
        TowerElt Ai = pi * Rational(l);
        if (i == 0) Ai -= TowerElt(J, Rational(l - 1));
        if (i == 2) Ai += ee * Rational(l - 1);
        TowerElt q = (Ai - pi) * (1 / Rational(l - 1));
        r.A.push_back(Ai.to_string());
        r.p.push_back(pi.to_string());
        r.quotient.push_back(q.to_string());
        for (auto& x : J->to_vector(q.poly()))
            for (auto& [pr, e] : bad) {
                (void)e;
                if (x != 0 && valuation(x, pr) < 0) {
                    r.congruent = false;
                    if (r.witness.empty()) r.witness = "X^" + std::to_string(i) + " quotient " + q.to_string() + " not integral at " + std::to_string(pr);
                }
            }
    }
    return r;
}

// ------------------------------------------------------------------ twist system

/**
 * gamma_m in (Z/m)^x for squarefree m <= m_max prime to the excluded primes, with
 * gamma_{m l} = l^{-1} gamma_m mod m. Built prime by prime: gamma_m = (m/q)^{-1} mod q for
 * each q | m, glued by the Chinese remainder theorem.
 */
inline std::map<i64, i64> build_twist_system(i64 m_max, const std::vector<i64>& excluded = {}) {
    std::map<i64, i64> out;
    for (i64 m = 1; m <= m_max; ++m) {
        auto fac = factorize(m);
        bool ok = true;
        for (auto& [q, e] : fac) {
            if (e > 1) ok = false;
            for (i64 x : excluded)
                if (q == x) ok = false;
        }
        if (!ok) continue;
        i64 g = 0, mod_acc = 1;
        for (auto& [q, e] : fac) {
            (void)e;
            i64 r = invmod(mod(m / q, q), q);
            g = crt(g, mod_acc, r, q);
            mod_acc *= q;
        }
        out[m] = m == 1 ? 0 : g;  // (Z/1)^x = {0}
    }
    return out;
}

/** Checks the compatibility on every pair; returns the first failing (m, l) or nullopt. */
inline std::optional<std::pair<i64, i64>> check_twist_system(const std::map<i64, i64>& sys) {
    for (auto& [m, g] : sys)
        for (i64 l : primes_upto(sys.rbegin()->first)) {
            if (m % l == 0) continue;
            auto it = sys.find(m * l);
            if (it == sys.end()) continue;
            if (m > 1 && mod(it->second, m) != mod(invmod(mod(l, m), m) * g, m)) return std::make_pair(m, l);
            if (std::gcd(it->second, m * l) != 1 && m * l > 1) return std::make_pair(m, l);
        }
    return std::nullopt;
}

// ------------------------------------------------------------------ catalog

struct CatalogEntry {
    std::string id;
    std::string anchor;
    std::vector<std::string> slots;  ///< printed coefficients that a mutation may perturb
    std::function<IdentityResult(const Mutation*)> run;
};

inline const std::vector<CatalogEntry>& norm_relation_catalog() {
    static const std::vector<CatalogEntry> cat = [] {
        std::vector<CatalogEntry> c;
        c.push_back({"sp-rewrite", "T_p'^2 = S_p' + (p+1)<p^-1>R_p rewrite of the first norm relation",
                     {"thm.sigma", "thm.TT", "thm.p+1", "thm.dT2", "thm.T2d", "thm.dTdT", "thm.pD2", "rw.TT", "rw.sigma", "rw.pD", "rw.one", "rw.D", "rw.S", "S.p+1"},
                     [](const Mutation* m) { return verify_sp_rewrite(m); }});
        c.push_back({"higher-rewrite", "norms from levels mp^2 and mp^3 restated through S_p'",
                     {"hi.pD", "hi.dT2", "hi.T2d", "hi.TT", "hi.2dTdT", "hi.pD2", "hi3.2TT", "hi3.mix", "rw.p+2", "rw.2TT", "rw.pD", "rw3.2TT", "rw3.2p", "S.p+1"},
                     [](const Mutation* m) { return verify_higher_rewrite(m); }});
        c.push_back({"operator-euler-factor", "operator-valued Euler factor specializes to P_p(f,g,X)",
                     {"P.X0", "P.X1", "P.X2a", "P.X2b", "P.X2c", "P.X3", "P.X4"},
                     [](const Mutation* m) {
                         auto e = verify_operator_euler_factor(m);
                         std::string d;
                         for (auto& s : e.coefficients) d += (d.empty() ? "" : " | ") + s;
                         return IdentityResult{"operator-euler-factor", e.holds && e.matches_roots, d, e.witness, ""};
                     }});
        auto comp = [](bool which_b) {
            return [which_b](const Mutation* m) {
                auto r = derive_composite_norms(m);
                bool ok = which_b ? r.match_b : r.match_a && r.head_a;
                return IdentityResult{which_b ? "composite-norms-b" : "composite-norms-a", ok,
                                      (which_b ? r.derived_b : r.derived_a).to_string(), ok ? "" : r.witness,
                                      "operator applied to the class at level m; Norm o res = (p-1) into level m, p above"};
            };
        };
        c.push_back({"composite-norms-a", "Norm_m^{mp^2} closed form",
                     {"cn.p-1", "cn.D", "cn.a.lead", "cn.a.TT", "P.X1", "P.X2a", "P.X2c", "P.X4", "hi.TT", "thm.sigma"},
                     comp(false)});
        c.push_back({"composite-norms-b", "Norm_m^{mp^3} closed form with (T_{p^2}',T_{p^2}') = (a^2 - p df)(b^2 - p dg)",
                     {"cn.p-1", "cn.D", "cn.b.lead", "cn.b.T2", "P.X1", "P.X3", "P.X4", "hi3.2TT", "hi3.mix"},
                     comp(true)});
        c.push_back({"corestriction-specialization", "local Euler factor of the corestriction",
                     {"co.p-1", "co.eps", "co.pP", "thm.sigma", "thm.p+1", "thm.pD2"},
                     [](const Mutation* m) {
                         auto r = specialize_to_corestriction(m);
                         return IdentityResult{"corestriction-specialization", r.holds && !r.inverse_direction_holds, r.lhs.to_string(), r.witness,
                                               std::string("diamond -> eps^-1 reading ") + (r.inverse_direction_holds ? "also holds" : "fails")};
                     }});
        c.push_back({"pstab-formula", "projection of the p-stabilized class, Euler-product form",
                     {"J.ad", "ps.eps", "ps.lead", "hi.2dTdT", "hi3.mix", "thm.sigma"},
                     [](const Mutation* m) {
                         auto r = pstab_projection_formula(m);
                         return IdentityResult{"pstab-formula", r.holds, r.derived.to_string(), r.witness, ""};
                     }});
        c.push_back({"A-ell-congruence", "A_l(X) congruent to P_l(l^-1 X) modulo l - 1",
                     {"A.l", "A.eps"},
                     [](const Mutation* m) {
                         auto r = derive_A_ell(m);
                         std::string d;
                         for (auto& s : r.A) d += (d.empty() ? "" : " | ") + s;
                         return IdentityResult{"A-ell-congruence", r.defining_relation && r.congruent, d,
                                               r.defining_relation ? r.witness : "defining relation -s A(1/s) fails " + r.witness, ""};
                     }});
        return c;
    }();
    return cat;
}

inline const CatalogEntry& catalog_entry(const std::string& id) {
    for (auto& e : norm_relation_catalog())
        if (e.id == id) return e;
    throw MathError("unknown identity '" + id + "'");
}

}  // namespace rsw
