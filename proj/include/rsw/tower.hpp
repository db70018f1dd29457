#pragma once
/**
 * @file tower.hpp
 * @brief Quotient rings Q[x_1..x_r]/(h_1, ..., h_r) with each h_i monic in x_i and
 *        involving only x_1..x_i. Number fields are the one-level case.
 *
 * No irreducibility is assumed: these may be products of fields. Inversion reports
 * genuine zero divisors.
 */

#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rsw/linalg.hpp"
#include "rsw/parse.hpp"
#include "rsw/upoly.hpp"

namespace rsw {

class TowerRing;
using TowerPtr = std::shared_ptr<const TowerRing>;

class TowerRing {
public:
    /** names[i] is the variable of relation rels[i]; rels given as expressions. */
    TowerRing(std::vector<std::string> names, const std::vector<std::string>& rels)
        : ring_(make_ring(names)) {
        for (auto& r : rels) rel_.push_back(parse_mpoly(r, ring_));
        init();
    }
    TowerRing(RingPtr ring, std::vector<MPoly> rels) : ring_(std::move(ring)), rel_(std::move(rels)) { init(); }

    static TowerPtr make(std::vector<std::string> names, const std::vector<std::string>& rels) {
        return std::make_shared<const TowerRing>(std::move(names), rels);
    }
    static TowerPtr number_field(const UPoly& h, const std::string& var = "t") {
        RingPtr r = make_ring({var});
        return std::make_shared<const TowerRing>(r, std::vector<MPoly>{upoly_to_mpoly(h, r, 0)});
    }

    const RingPtr& ring() const { return ring_; }
    size_t levels() const { return rel_.size(); }
    int degree(size_t i) const { return deg_[i]; }
    const MPoly& relation(size_t i) const { return rel_[i]; }
    size_t dim() const { return basis_.size(); }
    const std::vector<Mono>& basis() const { return basis_; }
    bool same_as(const TowerRing& o) const { return ring_->same_as(*o.ring_) && rel_ == o.rel_; }

    /** Defining polynomial of a one-level tower as a UPoly. */
    UPoly defining_upoly() const {
        if (levels() != 1) throw MathError("defining_upoly needs a one-level tower");
        std::vector<Rational> c(static_cast<size_t>(deg_[0] + 1));
        for (auto& [m, v] : rel_[0].terms()) c[m.e[0]] = v;
        return UPoly(c);
    }

    MPoly reduce(MPoly p) const {
        for (int i = static_cast<int>(levels()) - 1; i >= 0; --i) {
            int d = deg_[i];
            while (p.degree(i) >= d) {
                std::vector<MPoly::Term> hi;
                for (auto& t : p.terms()) {
                    if (t.first.e[i] >= d) {
                        Mono m = t.first;
                        m.e[i] = static_cast<std::int16_t>(m.e[i] - d);
                        hi.push_back({m, t.second});
                    }
                }
                MPoly high = MPoly::from_sorted(ring_, hi);
                // terms with e[i] >= d were removed in order; rebuild the low part
                std::vector<MPoly::Term> lo;
                for (auto& t : p.terms())
                    if (t.first.e[i] < d) lo.push_back(t);
                p = MPoly::from_sorted(ring_, lo) + high * tail_[i];
            }
        }
        return p;
    }

    std::vector<Rational> to_vector(const MPoly& p) const {
        std::vector<Rational> v(dim());
        for (auto& [m, c] : p.terms()) {
            size_t idx = 0;
            for (size_t i = 0; i < levels(); ++i) idx += static_cast<size_t>(m.e[i]) * stride_[i];
            v[idx] = c;
        }
        return v;
    }
    MPoly from_vector(const std::vector<Rational>& v) const {
        MPoly p(ring_);
        for (size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0) p += MPoly::monomial(ring_, basis_[k], v[k]);
        return p;
    }

    /** All complex embeddings: one assignment of root values per variable. */
    std::vector<std::vector<std::complex<double>>> embeddings() const {
        std::vector<std::vector<std::complex<double>>> out{{}};
        for (size_t i = 0; i < levels(); ++i) {
            std::vector<std::vector<std::complex<double>>> next;
            for (auto& pt : out) {
                std::vector<std::complex<double>> coeffs(static_cast<size_t>(deg_[i] + 1));
                for (auto& [m, c] : rel_[i].terms()) {
                    std::complex<double> v = c.get_d();
                    for (size_t j = 0; j < i; ++j)
                        if (m.e[j]) v *= std::pow(pt[j], static_cast<int>(m.e[j]));
                    coeffs[m.e[i]] += v;
                }
                for (auto& r : complex_roots(coeffs)) {
                    auto q = pt;
                    q.push_back(r);
                    next.push_back(std::move(q));
                }
            }
            out = std::move(next);
        }
        return out;
    }

private:
    void init() {
        if (rel_.size() != ring_->nvars()) throw MathError("tower needs one relation per variable");
        size_t s = 1;
        for (size_t i = 0; i < rel_.size(); ++i) {
            int d = rel_[i].degree(static_cast<int>(i));
            if (d < 1) throw MathError("tower relation " + std::to_string(i) + " has no positive degree in its variable");
            for (size_t j = i + 1; j < rel_.size(); ++j)
                if (rel_[i].involves(static_cast<int>(j))) throw MathError("tower relation uses a later variable");
            MPoly lc = rel_[i].coeff(static_cast<int>(i), d);
            if (!(lc.is_constant() && lc.constant_value() == 1)) throw MathError("tower relation must be monic in its variable");
            deg_.push_back(d);
            tail_.push_back(MPoly::var(ring_, static_cast<int>(i), d) - rel_[i]);
            stride_.push_back(s);
            s *= static_cast<size_t>(d);
        }
        basis_.resize(s);
        for (size_t k = 0; k < s; ++k) {
            Mono m;
            size_t r = k;
            for (size_t i = 0; i < rel_.size(); ++i) {
                m.e[i] = static_cast<std::int16_t>(r % static_cast<size_t>(deg_[i]));
                r /= static_cast<size_t>(deg_[i]);
            }
            basis_[k] = m;
        }
    }

    RingPtr ring_;
    std::vector<MPoly> rel_;
    std::vector<MPoly> tail_;
    std::vector<int> deg_;
    std::vector<size_t> stride_;
    std::vector<Mono> basis_;
};

/** Result of a minimal-polynomial computation. */
struct MinPolyResult {
    UPoly poly;                                  ///< monic minimal polynomial
    std::vector<std::pair<UPoly, int>> factors;  ///< its factorization over Q
    bool warning = false;                        ///< set when the polynomial is reducible (ambient ring not a field over Q[x])
};

class TowerElt {
public:
    TowerElt() = default;
    TowerElt(TowerPtr T, const Rational& c) : T_(std::move(T)), p_(T_->ring(), c) {}
    TowerElt(TowerPtr T, long c) : TowerElt(std::move(T), Rational(c)) {}
    TowerElt(TowerPtr T, const MPoly& p) : T_(std::move(T)), p_(T_->reduce(p)) {}
    static TowerElt var(const TowerPtr& T, size_t i) { return TowerElt(T, MPoly::var(T->ring(), static_cast<int>(i))); }
    static TowerElt parse(const TowerPtr& T, const std::string& s) { return TowerElt(T, parse_mpoly(s, T->ring())); }

    const TowerPtr& tower() const { return T_; }
    const MPoly& poly() const { return p_; }
    bool is_zero() const { return p_.is_zero(); }
    bool is_rational() const { return p_.is_constant(); }
    Rational rational_value() const {
        if (!p_.is_constant()) throw MathError("element is not rational: " + to_string());
        return p_.constant_value();
    }

    TowerElt operator-() const { return TowerElt(T_, -p_, 0); }
    friend TowerElt operator+(const TowerElt& a, const TowerElt& b) { check(a, b); return TowerElt(a.T_, a.p_ + b.p_, 0); }
    friend TowerElt operator-(const TowerElt& a, const TowerElt& b) { check(a, b); return TowerElt(a.T_, a.p_ - b.p_, 0); }
    friend TowerElt operator*(const TowerElt& a, const TowerElt& b) { check(a, b); return TowerElt(a.T_, a.p_ * b.p_); }
    friend TowerElt operator*(const TowerElt& a, const Rational& c) { return TowerElt(a.T_, a.p_ * c, 0); }
    friend TowerElt operator*(const Rational& c, const TowerElt& a) { return a * c; }
    friend TowerElt operator+(const TowerElt& a, const Rational& c) { return a + TowerElt(a.T_, c); }
    friend TowerElt operator-(const TowerElt& a, const Rational& c) { return a - TowerElt(a.T_, c); }
    TowerElt& operator+=(const TowerElt& o) { return *this = *this + o; }
    TowerElt& operator-=(const TowerElt& o) { return *this = *this - o; }
    TowerElt& operator*=(const TowerElt& o) { return *this = *this * o; }
    friend bool operator==(const TowerElt& a, const TowerElt& b) { return a.p_ == b.p_; }
    friend bool operator!=(const TowerElt& a, const TowerElt& b) { return !(a == b); }

    TowerElt pow(long n) const {
        if (n < 0) return inv().pow(-n);
        TowerElt r(T_, 1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            n >>= 1;
            if (n) b *= b;
        }
        return r;
    }

    /** Matrix of multiplication by this element in the monomial basis (columns = images). */
    Matrix<Rational> mult_matrix() const {
        size_t n = T_->dim();
        Matrix<Rational> M(n, std::vector<Rational>(n));
        for (size_t j = 0; j < n; ++j) {
            auto col = T_->to_vector((*this * TowerElt(T_, MPoly::monomial(T_->ring(), T_->basis()[j], 1))).p_);
            for (size_t i = 0; i < n; ++i) M[i][j] = col[i];
        }
        return M;
    }

    TowerElt inv() const {
        if (is_zero()) throw MathError("inverse of zero");
        if (T_->levels() == 1) {
            UPoly a(T_->to_vector(p_)), h = T_->defining_upoly();
            UPoly g, s, t;
            UPoly::ext_gcd(a, h, g, s, t);
            if (g.degree() != 0)
                throw MathError("zero divisor: " + to_string() + " shares factor " + g.to_string(T_->ring()->name(0)) +
                                " with the defining polynomial");
            return TowerElt(T_, upoly_to_mpoly(s, T_->ring(), 0));
        }
        size_t n = T_->dim();
        Matrix<Rational> B(n, std::vector<Rational>(1));
        B[0][0] = 1;
        auto X = solve_square(mult_matrix(), B);
        if (!X) {
            auto mp = minpoly();
            throw MathError("zero divisor: " + to_string() + " (minimal polynomial " + mp.poly.to_string() +
                            " vanishes at 0)");
        }
        std::vector<Rational> v(n);
        for (size_t i = 0; i < n; ++i) v[i] = (*X)[i][0];
        return TowerElt(T_, T_->from_vector(v), 0);
    }
    friend TowerElt operator/(const TowerElt& a, const TowerElt& b) { return a * b.inv(); }

    /** Minimal polynomial over Q via Krylov dependence of 1, x, x^2, ... */
    MinPolyResult minpoly() const {
        size_t n = T_->dim();
        std::vector<std::vector<Rational>> pows;
        TowerElt cur(T_, 1);
        for (size_t k = 0; k <= n; ++k) {
            auto v = T_->to_vector(cur.p_);
            if (k > 0) {
                Matrix<Rational> A(n, std::vector<Rational>(k));
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < k; ++j) A[i][j] = pows[j][i];
                auto sol = solve_any<Rational>(A, v, Rational(0));
                if (sol) {
                    std::vector<Rational> c(k + 1);
                    for (size_t j = 0; j < k; ++j) c[j] = -(*sol)[j];
                    c[k] = 1;
                    MinPolyResult r;
                    r.poly = UPoly(c);
                    r.factors = factor_over_q(r.poly);
                    r.warning = r.factors.size() > 1 || (r.factors.size() == 1 && r.factors[0].second > 1);
                    return r;
                }
            }
            pows.push_back(v);
            cur *= *this;
        }
        throw MathError("minpoly: no dependence found (internal)");
    }

    /** Characteristic polynomial of multiplication (Faddeev-LeVerrier). */
    UPoly charpoly() const {
        Matrix<Rational> A = mult_matrix();
        size_t n = A.size();
        std::vector<Rational> c(n + 1);
        c[n] = 1;
        Matrix<Rational> M(n, std::vector<Rational>(n));  // M_0 = 0
        for (size_t k = 1; k <= n; ++k) {
            // M_k = A M_{k-1} + c_{n-k+1} I
            Matrix<Rational> AM(n, std::vector<Rational>(n));
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    Rational s = 0;
                    for (size_t l = 0; l < n; ++l)
                        if (A[i][l] != 0 && M[l][j] != 0) s += A[i][l] * M[l][j];
                    AM[i][j] = s;
                }
            for (size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
            M = AM;
            Rational tr = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
            c[n - k] = -tr / Rational(static_cast<long>(k));
        }
        return UPoly(c);
    }

    /** Values at every complex embedding of the tower. */
    std::vector<std::complex<double>> embed_all() const {
        std::vector<std::complex<double>> out;
        for (auto& pt : T_->embeddings()) out.push_back(eval_complex(pt));
        return out;
    }
    std::complex<double> eval_complex(const std::vector<std::complex<double>>& pt) const {
        std::complex<double> s = 0;
        for (auto& [m, c] : p_.terms()) {
            std::complex<double> v = c.get_d();
            for (size_t i = 0; i < pt.size(); ++i)
                if (m.e[i]) v *= std::pow(pt[i], static_cast<int>(m.e[i]));
            s += v;
        }
        return s;
    }

    /** Image under a homomorphism sending tower variable i to images[i] (in another tower). */
    TowerElt map_to(const TowerPtr& target, const std::vector<TowerElt>& images) const {
        std::vector<MPoly> im;
        for (auto& e : images) im.push_back(e.p_);
        if (im.empty()) return TowerElt(target, p_.constant_value());
        return TowerElt(target, p_.substitute(im));
    }

    std::string to_string() const { return p_.to_string(); }

private:
    TowerElt(TowerPtr T, MPoly p, int /*already reduced*/) : T_(std::move(T)), p_(std::move(p)) {}
    static void check(const TowerElt& a, const TowerElt& b) {
        if (a.T_ != b.T_ && !(a.T_ && b.T_ && a.T_->same_as(*b.T_))) throw MathError("elements of different quotient rings");
    }

    TowerPtr T_;
    MPoly p_;
};

using NumberFieldElt = TowerElt;
using BiFieldElt = TowerElt;

/** Root-of-unity test: monic integral f dividing x^M - 1 for some M with phi(M) <= deg f. */
inline std::pair<bool, i64> divides_cyclotomic(const UPoly& f) {
    if (f.lead() != 1 || !f.all_integer()) return {false, 0};
    int d = f.degree();
    if (d < 1) return {false, 0};
    // phi(M) <= d forces M <= 2 d^2 + 2 (crude but safe: phi(M) >= sqrt(M/2))
    i64 bound = 2 * static_cast<i64>(d) * d + 2;
    for (i64 M = 1; M <= bound; ++M) {
        UPoly xm = UPoly::monomial(1, static_cast<int>(M)) - UPoly(1);
        if ((xm % f).is_zero()) return {true, M};
    }
    return {false, 0};
}

}  // namespace rsw
