#pragma once
/**
 * @file qseries.hpp
 * @brief Truncated q-expansions q^e * (c_0 + c_1 q + ... + c_{B-1} q^{B-1} + O(q^B)).
 *
 * Coefficients live in any commutative ring with zero_like/one_like (CycloElt, group rings).
 * The variable may stand for a fractional power of q; the series only cares about the lattice.
 */

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rsw/coeff_traits.hpp"
#include "rsw/group_ring.hpp"

namespace rsw {

template <class R>
class QSeries {
public:
    QSeries() = default;
    QSeries(Rational lead, std::vector<R> coeffs, bool unit = false)
        : e_(std::move(lead)), c_(std::move(coeffs)), unit_(unit) {
        if (c_.empty()) throw MathError("q-series needs precision >= 1");
        if (unit_ && is_zero(c_[0])) throw MathError("unit-flagged q-series with vanishing leading coefficient");
    }
    /** Constant series c + O(q^B). */
    static QSeries constant(const R& c, int B) {
        std::vector<R> v(static_cast<size_t>(B), zero_like(c));
        v[0] = c;
        return QSeries(0, std::move(v));
    }

    const Rational& lead_exp() const { return e_; }
    int precision() const { return static_cast<int>(c_.size()); }
    const std::vector<R>& coeffs() const { return c_; }
    const R& coeff(int n) const { return c_.at(static_cast<size_t>(n)); }
    bool unit() const { return unit_; }
    QSeries with_unit_flag(bool u) const { return QSeries(e_, c_, u); }

    QSeries truncate(int B) const {
        if (B > precision()) throw MathError("cannot raise precision by truncation");
        return QSeries(e_, std::vector<R>(c_.begin(), c_.begin() + B), unit_);
    }

    QSeries operator-() const {
        QSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend QSeries operator+(const QSeries& a, const QSeries& b) { return combine(a, b, false); }
    friend QSeries operator-(const QSeries& a, const QSeries& b) { return combine(a, b, true); }
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        int B = std::min(a.precision(), b.precision());
        std::vector<R> v(static_cast<size_t>(B), zero_like(a.c_[0]));
        for (int i = 0; i < B; ++i) {
            if (is_zero(a.c_[i])) continue;
            for (int j = 0; i + j < B; ++j)
                if (!is_zero(b.c_[j])) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
        }
        return QSeries(a.e_ + b.e_, std::move(v), a.unit_ && b.unit_);
    }
    friend QSeries operator*(const QSeries& a, const R& s) {
        QSeries r = a;
        for (auto& x : r.c_) x = x * s;
        r.unit_ = false;
        return r;
    }
    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    /** Multiplicative inverse; the leading coefficient must be invertible. */
    QSeries inv() const {
        int B = precision();
        R c0i = inverse(c_[0]);
        std::vector<R> v(static_cast<size_t>(B), zero_like(c_[0]));
        v[0] = c0i;
        for (int n = 1; n < B; ++n) {
            R s = zero_like(c_[0]);
            for (int k = 1; k <= n; ++k)
                if (!is_zero(c_[k])) s = s + c_[k] * v[n - k];
            v[n] = -(s * c0i);
        }
        return QSeries(-e_, std::move(v), true);
    }

    QSeries pow(long n) const {
        if (n < 0) return inv().pow(-n);
        QSeries r = constant(one_like(c_[0]), precision()), b = *this;
        r.unit_ = true;
        while (n > 0) {
            if (n & 1) r = r * b;
            n >>= 1;
            if (n) b = b * b;
        }
        return r;
    }

    /** Logarithmic derivative q d/dq log(s) = e + q T'(q)/T(q), for s = q^e T(q). */
    QSeries dlog() const {
        int B = precision();
        std::vector<R> d(static_cast<size_t>(B), zero_like(c_[0]));
        for (int n = 1; n < B; ++n) d[n] = scale(c_[n], Rational(n));
        QSeries num(0, std::move(d));
        QSeries den(0, c_);
        QSeries r = num * den.inv();
        r.c_[0] = r.c_[0] + scale(one_like(c_[0]), e_);
        r.unit_ = false;
        return r;
    }

    /** q -> q^m. */
    QSeries substitute_power(int m) const {
        if (m < 1) throw MathError("substitute_power needs m >= 1");
        int B = precision() * m;  // O(q^P) becomes O(q^{Pm})
        std::vector<R> v(static_cast<size_t>(B), zero_like(c_[0]));
        for (int n = 0; n < precision(); ++n) v[static_cast<size_t>(n) * m] = c_[n];
        return QSeries(e_ * m, std::move(v), unit_);
    }

    /** Coefficientwise map. */
    template <class F>
    QSeries map(F f) const {
        std::vector<R> v;
        v.reserve(c_.size());
        for (auto& x : c_) v.push_back(f(x));
        return QSeries(e_, std::move(v));
    }

    /** Equality to the common precision, after aligning leading exponents. */
    friend bool operator==(const QSeries& a, const QSeries& b) { return first_difference(a, b) < 0; }
    friend bool operator!=(const QSeries& a, const QSeries& b) { return !(a == b); }

    /** Index (relative to min leading exponent) of the first differing coefficient, or -1. */
    static int first_difference(const QSeries& a, const QSeries& b) {
        QSeries d = a - b;
        for (int n = 0; n < d.precision(); ++n)
            if (!is_zero(d.c_[n])) return n;
        return -1;
    }

    std::string to_string(const std::string& var = "q") const {
        std::ostringstream os;
        os << var << "^(" << e_.get_str() << ") * (";
        bool first = true;
        for (int n = 0; n < precision(); ++n) {
            if (is_zero(c_[n])) continue;
            if (!first) os << " + ";
            first = false;
            std::string s = str(c_[n]);
            bool simple = s.find_first_of("+ ") == std::string::npos;
            if (n == 0) os << (simple ? s : "(" + s + ")");
            else {
                os << (simple ? s : "(" + s + ")") << "*" << var;
                if (n > 1) os << "^" << n;
            }
        }
        if (first) os << "0";
        os << " + O(" << var << "^" << precision() << "))";
        return os.str();
    }

private:
    static std::string str(const Rational& x) { return x.get_str(); }
    template <class T>
    static std::string str(const T& x) { return x.to_string(); }

    static QSeries combine(const QSeries& a, const QSeries& b, bool sub) {
        Rational diff = b.e_ - a.e_;
        if (!is_integer(diff)) throw MathError("adding q-series with incompatible exponent lattices");
        long k = diff.get_num().get_si();
        // align to the smaller leading exponent
        const QSeries& lo = k >= 0 ? a : b;
        const QSeries& hi = k >= 0 ? b : a;
        long sh = k >= 0 ? k : -k;
        int B = static_cast<int>(std::min<long>(lo.precision(), hi.precision() + sh));
        std::vector<R> v(static_cast<size_t>(B), zero_like(a.c_[0]));
        for (int n = 0; n < B; ++n) {
            R x = n < lo.precision() ? lo.c_[n] : zero_like(a.c_[0]);
            R y = (n - sh >= 0 && n - sh < hi.precision()) ? hi.c_[n - sh] : zero_like(a.c_[0]);
            bool lo_is_a = (k >= 0);
            const R& av = lo_is_a ? x : y;
            const R& bv = lo_is_a ? y : x;
            v[n] = sub ? av - bv : av + bv;
        }
        return QSeries(lo.e_, std::move(v));
    }

    Rational e_ = 0;
    std::vector<R> c_;
    bool unit_ = false;
};

// ---------------------------------------------------------------- Hecke-type operators

/** a_n(T_l s) = a_{nl} + l^{k-1} chi(l) a_{n/l}; chi_l passed as a ring element. */
template <class R>
QSeries<R> hecke_T(const QSeries<R>& s, i64 ell, int weight, const R& chi_ell, i64 char_modulus = 1) {
    if (!is_prime(ell)) throw MathError("T_l needs l prime");
    if (char_modulus % ell == 0) throw MathError("l divides the character modulus: use U_l instead of T_l");
    if (s.lead_exp() != 0) throw MathError("Hecke operators need an integral q-expansion");
    int B = (s.precision() - 1) / static_cast<int>(ell) + 1;
    R w = scale(chi_ell, Rational(Integer(ipow(ell, weight - 1))));
    std::vector<R> v;
    for (int n = 0; n < B; ++n) {
        R x = s.coeff(static_cast<int>(n * ell));
        if (n % ell == 0) x = x + w * s.coeff(static_cast<int>(n / ell));
        v.push_back(x);
    }
    return QSeries<R>(0, std::move(v));
}

template <class R>
QSeries<R> hecke_U(const QSeries<R>& s, i64 ell) {
    if (s.lead_exp() != 0) throw MathError("Hecke operators need an integral q-expansion");
    int B = (s.precision() - 1) / static_cast<int>(ell) + 1;
    std::vector<R> v;
    for (int n = 0; n < B; ++n) v.push_back(s.coeff(static_cast<int>(n * ell)));
    return QSeries<R>(0, std::move(v));
}

template <class R>
QSeries<R> hecke_V(const QSeries<R>& s, i64 ell) {
    return s.substitute_power(static_cast<int>(ell));
}

/** Diamond operator on a series with known nebentypus: multiplication by chi(d). */
template <class R>
QSeries<R> diamond(const QSeries<R>& s, const R& chi_d) {
    return s * chi_d;
}

/** p-depletion: keep the coefficients with p not dividing n (the operator 1 - V_p U_p). */
template <class R>
QSeries<R> p_depletion(const QSeries<R>& s, i64 p) {
    if (s.lead_exp() != 0) throw MathError("depletion needs an integral q-expansion");
    std::vector<R> v = s.coeffs();
    for (size_t n = 0; n < v.size(); ++n)
        if (static_cast<i64>(n) % p == 0) v[n] = zero_like(v[n]);
    return QSeries<R>(0, std::move(v));
}

/** Maass-Shimura raising on holomorphic parts: a_n -> n a_n. */
template <class R>
QSeries<R> maass_raise(const QSeries<R>& s) {
    if (s.lead_exp() != 0) throw MathError("maass_raise needs an integral q-expansion");
    std::vector<R> v = s.coeffs();
    for (size_t n = 0; n < v.size(); ++n) v[n] = scale(v[n], Rational(static_cast<long>(n)));
    return QSeries<R>(0, std::move(v));
}

}  // namespace rsw
