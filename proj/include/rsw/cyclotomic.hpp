#pragma once
/**
 * @file cyclotomic.hpp
 * @brief Elements of Q(zeta_L), stored as residues modulo the cyclotomic polynomial Phi_L.
 */

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "rsw/number_theory.hpp"
#include "rsw/upoly.hpp"

namespace rsw {

/** Shared immutable data for one conductor. */
class CycloField {
public:
    explicit CycloField(i64 L) : L_(L), phi_(cyclotomic_poly(L)) {
        d_ = phi_.degree();
        // x^k mod Phi_L for every k in [0, L)
        pow_.resize(static_cast<size_t>(L));
        std::vector<Rational> cur(d_);
        cur[0] = 1;
        for (i64 k = 0; k < L; ++k) {
            pow_[k] = cur;
            // multiply by x
            std::vector<Rational> nxt(d_);
            Rational top = cur[d_ - 1];
            for (int i = d_ - 1; i > 0; --i) nxt[i] = cur[i - 1];
            nxt[0] = 0;
            if (top != 0)
                for (int i = 0; i < d_; ++i) nxt[i] -= top * phi_.coeff(i);
            cur = std::move(nxt);
        }
    }
    i64 conductor() const { return L_; }
    int degree() const { return d_; }
    const UPoly& modulus() const { return phi_; }
    const std::vector<Rational>& power(i64 k) const { return pow_[static_cast<size_t>(mod(k, L_))]; }

    static std::shared_ptr<const CycloField> get(i64 L) {
        if (L < 1) throw MathError("cyclotomic conductor must be positive");
        static std::mutex mu;
        static std::map<i64, std::shared_ptr<const CycloField>> cache;
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(L);
        if (it != cache.end()) return it->second;
        auto f = std::make_shared<const CycloField>(L);
        cache[L] = f;
        return f;
    }

private:
    i64 L_;
    UPoly phi_;
    int d_ = 1;
    std::vector<std::vector<Rational>> pow_;
};

class CycloElt {
public:
    CycloElt() : CycloElt(1, Rational(0)) {}
    CycloElt(i64 L, const Rational& c) : F_(CycloField::get(L)), c_(F_->degree()) { c_[0] = c; }
    CycloElt(i64 L, long c) : CycloElt(L, Rational(c)) {}

    static CycloElt zeta(i64 L, i64 k = 1) {
        CycloElt z(L, 0);
        z.c_ = z.F_->power(k);
        return z;
    }
    static CycloElt from_coeffs(i64 L, std::vector<Rational> c) {
        CycloElt z(L, 0);
        if (static_cast<int>(c.size()) != z.F_->degree()) throw MathError("cyclotomic coefficient vector has wrong length");
        z.c_ = std::move(c);
        return z;
    }
    /** Reduce an arbitrary polynomial in zeta_L. */
    static CycloElt from_poly(i64 L, const UPoly& p) {
        CycloElt z(L, 0);
        for (int i = 0; i <= p.degree(); ++i)
            if (p.coeff(i) != 0) z.add_scaled_power(i, p.coeff(i));
        return z;
    }

    i64 conductor() const { return F_->conductor(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const {
        for (auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Rational rational_value() const {
        if (!is_rational()) throw MathError("cyclotomic element is not rational");
        return c_[0];
    }

    /** Same element viewed in Q(zeta_M), L | M. */
    CycloElt lift(i64 M) const {
        i64 L = conductor();
        if (M == L) return *this;
        if (M % L != 0) throw MathError("cannot lift conductor " + std::to_string(L) + " to " + std::to_string(M));
        CycloElt z(M, 0);
        i64 s = M / L;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) z.add_scaled_power(static_cast<i64>(i) * s, c_[i]);
        return z;
    }

    /** Automorphism zeta -> zeta^a. */
    CycloElt galois(i64 a) const {
        i64 L = conductor();
        if (std::gcd(mod(a, L), L) != 1 && L > 1) throw MathError("galois exponent not a unit");
        CycloElt z(L, 0);
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) z.add_scaled_power(static_cast<i64>(i) * a, c_[i]);
        return z;
    }

    std::complex<double> to_complex(i64 k = 1) const {
        double th = 2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(conductor());
        std::complex<double> z = std::polar(1.0, th), p = 1, s = 0;
        for (auto& x : c_) { s += x.get_d() * p; p *= z; }
        return s;
    }

    CycloElt operator-() const {
        CycloElt r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend CycloElt operator+(const CycloElt& a, const CycloElt& b) {
        if (a.F_ != b.F_) { i64 M = std::lcm(a.conductor(), b.conductor()); return a.lift(M) + b.lift(M); }
        CycloElt r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }
    friend CycloElt operator-(const CycloElt& a, const CycloElt& b) {
        if (a.F_ != b.F_) { i64 M = std::lcm(a.conductor(), b.conductor()); return a.lift(M) - b.lift(M); }
        CycloElt r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }
    friend CycloElt operator*(const CycloElt& a, const CycloElt& b) {
        if (a.F_ != b.F_) { i64 M = std::lcm(a.conductor(), b.conductor()); return a.lift(M) * b.lift(M); }
        int d = a.F_->degree();
        std::vector<Rational> prod(static_cast<size_t>(2 * d - 1));
        for (int i = 0; i < d; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < d; ++j)
                if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
        }
        CycloElt r(a.conductor(), 0);
        for (int i = 0; i < d; ++i) r.c_[i] = prod[i];
        for (int k = d; k < 2 * d - 1; ++k)
            if (prod[k] != 0) r.add_scaled_power(k, prod[k]);
        return r;
    }
    friend CycloElt operator*(const CycloElt& a, const Rational& s) {
        CycloElt r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend CycloElt operator*(const Rational& s, const CycloElt& a) { return a * s; }
    CycloElt& operator+=(const CycloElt& o) { return *this = *this + o; }
    CycloElt& operator-=(const CycloElt& o) { return *this = *this - o; }
    CycloElt& operator*=(const CycloElt& o) { return *this = *this * o; }
    friend bool operator==(const CycloElt& a, const CycloElt& b) {
        if (a.F_ != b.F_) { i64 M = std::lcm(a.conductor(), b.conductor()); return a.lift(M).c_ == b.lift(M).c_; }
        return a.c_ == b.c_;
    }
    friend bool operator!=(const CycloElt& a, const CycloElt& b) { return !(a == b); }

    CycloElt inv() const {
        if (is_zero()) throw MathError("inverse of zero in Q(zeta_" + std::to_string(conductor()) + ")");
        UPoly g, s, t;
        UPoly::ext_gcd(UPoly(c_), F_->modulus(), g, s, t);
        if (g.degree() != 0) throw MathError("non-unit in cyclotomic ring (gcd " + g.to_string() + ")");
        return from_poly(conductor(), s);
    }
    friend CycloElt operator/(const CycloElt& a, const CycloElt& b) { return a * b.inv(); }

    CycloElt pow(long n) const {
        if (n < 0) return inv().pow(-n);
        CycloElt r(conductor(), 1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            n >>= 1;
            if (n) b *= b;
        }
        return r;
    }

    /** Polynomial in z_L, highest power first. */
    std::string to_string() const {
        UPoly p(c_);
        return p.to_string("z_" + std::to_string(conductor()));
    }

private:
    void add_scaled_power(i64 k, const Rational& s) {
        const auto& v = F_->power(k);
        for (size_t i = 0; i < c_.size(); ++i)
            if (v[i] != 0) c_[i] += s * v[i];
    }

    std::shared_ptr<const CycloField> F_;
    std::vector<Rational> c_;
};

}  // namespace rsw
