#pragma once
/**
 * @file ratfunc.hpp
 * @brief Rational functions num/den over an MPoly ring, kept in lowest terms.
 *
 * Canonical form: gcd(num, den) = 1, den integer-primitive with positive leading
 * coefficient, and den free of monomial factors in invertible variables (those are
 * moved to the numerator as negative exponents).
 */

#include <string>
#include <utility>
#include <vector>

#include "rsw/mpoly.hpp"

namespace rsw {

class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(RingPtr r) : num_(r), den_(r, 1) {}
    RatFunc(RingPtr r, const Rational& c) : num_(r, c), den_(r, 1) {}
    RatFunc(const MPoly& n) : num_(n), den_(n.ring(), 1) {}  // NOLINT: polynomials are rational functions
    RatFunc(const MPoly& n, const MPoly& d) : num_(n), den_(d) {
        if (d.is_zero()) throw MathError("rational function with zero denominator");
        canonicalize();
    }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    const RingPtr& ring() const { return num_.ring(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        MPoly g = gcd(a.den_, b.den_);
        MPoly ad = exact_div_or_throw(a.den_, g), bd = exact_div_or_throw(b.den_, g);
        return RatFunc(a.num_ * bd + b.num_ * ad, ad * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc(a.ring());
        // cross-cancel before multiplying
        MPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        MPoly n = exact_div_or_throw(a.num_, g1) * exact_div_or_throw(b.num_, g2);
        MPoly d = exact_div_or_throw(a.den_, g2) * exact_div_or_throw(b.den_, g1);
        RatFunc r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        r.fix_units();
        return r;
    }
    RatFunc inv() const {
        if (num_.is_zero()) throw MathError("inverse of zero rational function");
        RatFunc r;
        r.num_ = den_;
        r.den_ = num_;
        r.fix_units();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc pow(long n) const {
        if (n < 0) return inv().pow(-n);
        RatFunc r(ring(), 1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            n >>= 1;
            if (n) b *= b;
        }
        return r;
    }

    /** Exact equality by cross-multiplication (independent of the gcd machinery). */
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ * b.den_ == b.num_ * a.den_; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
    /** Structural equality of canonical forms. */
    bool same_form(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

    Rational eval(const std::vector<Rational>& pt) const {
        Rational d = den_.eval(pt);
        if (d == 0) throw MathError("rational function evaluated at a pole");
        return num_.eval(pt) / d;
    }

    /** Homomorphic image under variable substitution into rational functions. */
    RatFunc substitute(const std::vector<RatFunc>& images) const {
        return subst_poly(num_, images) / subst_poly(den_, images);
    }
    static RatFunc subst_poly(const MPoly& p, const std::vector<RatFunc>& images) {
        RingPtr target = images.at(0).ring();
        RatFunc out(target);
        const RingPtr& R = p.ring();
        // group by a common denominator for speed: accumulate term by term
        for (auto& [m, c] : p.terms()) {
            RatFunc t(target, c);
            for (size_t i = 0; i < R->nvars(); ++i)
                if (m.e[i] != 0) t *= images[i].pow(m.e[i]);
            out += t;
        }
        return out;
    }

    std::string to_string() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = MPoly(den_.ring(), 1);
            return;
        }
        MPoly g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = exact_div_or_throw(num_, g);
            den_ = exact_div_or_throw(den_, g);
        }
        fix_units();
    }
    /** Move invertible monomials and the rational content of den into num. */
    void fix_units() {
        if (num_.is_zero()) {
            den_ = MPoly(den_.ring(), 1);
            return;
        }
        const RingPtr& R = den_.ring();
        Mono m = den_.min_mono(), shift;
        for (size_t i = 0; i < R->nvars(); ++i)
            if (R->invertible(i)) shift.e[i] = static_cast<std::int16_t>(-m.e[i]);
        if (!shift.is_one()) {
            den_ = den_.shift(shift);
            num_ = num_.shift(shift);
        }
        Rational c = den_.content();
        if (den_.lead().second < 0) c = -c;
        if (c != 1) {
            den_ = den_ / c;
            num_ = num_ / c;
        }
    }

    MPoly num_, den_;
};

}  // namespace rsw
