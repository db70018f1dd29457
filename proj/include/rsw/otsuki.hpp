#pragma once
/**
 * @file otsuki.hpp
 * @brief Weighted cyclotomic elements x'_m = prod_{v | m} F_v(sh_v)^{-1} G_v(sh_v) (1 (x) zeta_m)
 *        over Q(tau_v) (x) Q(zeta_m), where sh_v(x (x) zeta) = tau_v x (x) zeta^v, and the trace identity
 *        tr_m^{ml}(x'_{ml}) = s_l^{-1} F_l(s_l)^{-1}((l-1) G_l(s_l) - l F_l(s_l)) x'_m for l not dividing m.
 */

#include <functional>
#include <string>
#include <vector>

#include "rsw/cyclotomic.hpp"
#include "rsw/linalg.hpp"
#include "rsw/norm_relations.hpp"
#include "rsw/number_theory.hpp"
#include "rsw/ratfunc.hpp"
#include "rsw/upoly.hpp"

namespace rsw {

/** Polynomials F_v, G_v in 1 + X Q[X], indexed by primes v. */
struct OtsukiFamily {
    std::string name;
    std::function<UPoly(i64)> F, G;
};

inline OtsukiFamily otsuki_constant_family(const std::string& name, const UPoly& F, const UPoly& G) {
    return {name, [F](i64) { return F; }, [G](i64) { return G; }};
}

/**
 * Q(tau_v : v) (x) Q[Z/M]: the formal span of the M-th roots of unity, basis [k] = zeta_M^k.
 * sh_v([k]) = tau_v [v k] is well defined here for every v, including v | M, where no linear
 * extension to the field Q(zeta_M) exists. `evaluate` maps [k] to zeta_M^k in the power basis.
 */
class CycloModule {
public:
    using Vec = std::vector<RatFunc>;
    using Mat = Matrix<RatFunc>;

    /** `primes` fixes the tau variables (one per prime, named tau<v>); pass `ring` to share one with another module. */
    CycloModule(i64 M, std::vector<i64> primes, RingPtr ring = nullptr) : M_(M), primes_(std::move(primes)), ring_(std::move(ring)) {
        if (ring_) return;
        std::vector<std::string> names;
        for (i64 v : primes_) names.push_back("tau" + std::to_string(v));
        if (names.empty()) names.push_back("tau");
        ring_ = make_ring(names);
    }

    i64 conductor() const { return M_; }
    int dim() const { return static_cast<int>(M_); }
    const RingPtr& ring() const { return ring_; }
    RatFunc zero() const { return RatFunc(ring_, 0); }

    RatFunc tau(i64 v) const {
        for (size_t i = 0; i < primes_.size(); ++i)
            if (primes_[i] == v) return RatFunc(MPoly::var(ring_, static_cast<int>(i)));
        throw MathError("no tau variable for " + std::to_string(v));
    }

    Vec basis(i64 k) const {
        Vec out(static_cast<size_t>(M_), zero());
        out[static_cast<size_t>(mod(k, M_))] = RatFunc(ring_, 1);
        return out;
    }

    /** [k] -> c [v k]. */
    Mat scaled_power_map(i64 v, const RatFunc& c) const {
        Mat S(static_cast<size_t>(M_), Vec(static_cast<size_t>(M_), zero()));
        for (i64 k = 0; k < M_; ++k) S[static_cast<size_t>(mod(v * k, M_))][static_cast<size_t>(k)] = c;
        return S;
    }
    /** sh_v. Not invertible when v | M. */
    Mat sigma_hat(i64 v) const { return scaled_power_map(v, tau(v)); }
    /** The Galois action zeta -> zeta^v alone (v prime to M). */
    Mat galois(i64 v) const { return scaled_power_map(v, RatFunc(ring_, 1)); }

    Mat mul(const Mat& A, const Mat& B) const {
        size_t n = A.size();
        Mat C(n, Vec(n, zero()));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) {
                if (A[i][k].is_zero()) continue;
                for (size_t j = 0; j < n; ++j)
                    if (!B[k][j].is_zero()) C[i][j] += A[i][k] * B[k][j];
            }
        return C;
    }

    /** poly(S) by Horner. */
    Mat apply_poly(const UPoly& f, const Mat& S) const {
        Mat R(S.size(), Vec(S.size(), zero()));
        for (int i = f.degree(); i >= 0; --i) {
            R = mul(R, S);
            for (size_t d = 0; d < S.size(); ++d) R[d][d] += RatFunc(ring_, f.coeff(i));
        }
        return R;
    }

    Vec apply(const Mat& A, const Vec& x) const { return mat_vec(A, x, zero()); }

    /** A^{-1} x; A singular over the function field throws. */
    Vec solve(const Mat& A, const Vec& x) const {
        Mat B;
        for (auto& e : x) B.push_back({e});
        auto X = solve_square(A, B);
        if (!X) throw MathError("operator is singular over the function field");
        Vec out;
        for (auto& row : *X) out.push_back(row[0]);
        return out;
    }

    /** x'_M = prod_{v | M} F_v(sh_v)^{-1} G_v(sh_v) [1]. */
    Vec weighted_element(const OtsukiFamily& fam) const {
        Vec x = basis(1);
        for (auto& [v, e] : factorize(M_)) {
            (void)e;
            UPoly F = fam.F(v), G = fam.G(v);
            if (F.coeff(0) != 1 || G.coeff(0) != 1) throw MathError("F_v and G_v must have constant term 1");
            Mat S = sigma_hat(v);
            x = solve(apply_poly(F, S), apply(apply_poly(G, S), x));
        }
        return x;
    }

    /** Image in Q(tau) (x) Q(zeta_M), power basis of length phi(M). */
    Vec evaluate(const Vec& x) const {
        auto F = CycloField::get(M_);
        Vec out(static_cast<size_t>(F->degree()), zero());
        for (i64 k = 0; k < M_; ++k) {
            if (x[static_cast<size_t>(k)].is_zero()) continue;
            auto& pw = F->power(k);
            for (size_t i = 0; i < out.size(); ++i)
                if (pw[i] != 0) out[i] += x[static_cast<size_t>(k)] * RatFunc(ring_, pw[i]);
        }
        return out;
    }

private:
    i64 M_;
    std::vector<i64> primes_;
    RingPtr ring_;
};

struct OtsukiResult {
    bool holds = false;          ///< prefactor s_l^{-1} read as the Galois Frobenius on mu_m, F_l, G_l at sh_l
    bool holds_uniform = false;  ///< every s_l read as sh_l = tau_l (x) Frob_l
    bool off_by_tau = false;     ///< lhs = tau_l * (uniform right side)
    int dim = 0;                 ///< phi(ml)
    std::vector<std::string> lhs, rhs;
    std::string witness;
};

/**
 * Exact check of the trace identity for one (m, l) and one family, compared in
 * Q(tau) (x) Q(zeta_{ml}). The trace is sum over a mod ml, a = 1 mod m, a a unit; Q(zeta_m)
 * sits inside via [j] -> [l j]. Mutation slot "ot.l-1" perturbs (l-1).
 */
inline OtsukiResult otsuki_trace_check(i64 m, i64 l, const OtsukiFamily& fam, const Mutation* mut = nullptr) {
    if (m < 1 || !is_prime(l)) throw MathError("need m >= 1 and l prime");
    if (m % l == 0) throw MathError("l must not divide m");
    if (euler_phi(m * l) > 16) throw MathError("phi(ml) must be at most 16");
    i64 M = m * l;
    std::vector<i64> primes;
    for (auto& [v, e] : factorize(M)) {
        (void)e;
        primes.push_back(v);
    }
    CycloModule big(M, primes), small(m, primes, big.ring());
    RatFunc zero = big.zero();
    auto xb = big.weighted_element(fam);
    CycloModule::Vec tr(static_cast<size_t>(M), zero);
    for (i64 k = 0; k < M; ++k) {
        if (xb[static_cast<size_t>(k)].is_zero()) continue;
        for (i64 a = 1; a <= M; ++a)
            if (std::gcd(a, M) == 1 && mod(a - 1, m) == 0) tr[static_cast<size_t>(mod(k * a, M))] += xb[static_cast<size_t>(k)];
    }
    auto xs = small.weighted_element(fam);
    auto S = small.sigma_hat(l);
    detail::Printed c{mut};
    UPoly F = fam.F(l), G = fam.G(l);
    UPoly comb = G * c("ot.l-1", l - 1) - F * Rational(l);
    auto core = small.solve(small.apply_poly(F, S), small.apply(small.apply_poly(comb, S), xs));
    auto embed = [&](const CycloModule::Vec& y) {
        CycloModule::Vec out(static_cast<size_t>(M), zero);
        for (i64 j = 0; j < m; ++j) out[static_cast<size_t>(mod(l * j, M))] += y[static_cast<size_t>(j)];
        return big.evaluate(out);
    };
    auto lhs = big.evaluate(tr);
    auto rg = embed(small.solve(small.galois(l), core));
    auto ru = embed(small.solve(S, core));
    RatFunc tl = small.tau(l);
    OtsukiResult r;
    r.dim = static_cast<int>(lhs.size());
    r.holds = r.holds_uniform = r.off_by_tau = true;
    for (size_t i = 0; i < lhs.size(); ++i) {
        r.lhs.push_back(lhs[i].to_string());
        r.rhs.push_back(rg[i].to_string());
        if (lhs[i] != rg[i]) {
            r.holds = false;
            if (r.witness.empty()) r.witness = "component " + std::to_string(i) + ": " + lhs[i].to_string() + " vs " + rg[i].to_string();
        }
        if (lhs[i] != ru[i]) r.holds_uniform = false;
        if (lhs[i] != tl * ru[i]) r.off_by_tau = false;
    }
    return r;
}

/** The two families used by default: constant (1 - 2X, 1 + X) and a prime-dependent Hecke-like pair. */
inline std::vector<OtsukiFamily> default_otsuki_families() {
    UPoly X = UPoly::x();
    UPoly one(std::vector<Rational>{1});
    return {otsuki_constant_family("F=1-2X,G=1+X", one - X * Rational(2), one + X),
            {"F=1-vX+vX^2,G=1-X^2", [X, one](i64 v) { return one - X * Rational(v) + X * X * Rational(v); },
             [X, one](i64) { return one - X * X; }}};
}

}  // namespace rsw
