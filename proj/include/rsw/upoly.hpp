#pragma once
/**
 * @file upoly.hpp
 * @brief Dense univariate polynomials over Q, with numeric roots and small-degree factoring.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rsw/number_theory.hpp"
#include "rsw/rational.hpp"

namespace rsw {

/** c[i] is the coefficient of x^i; no trailing zeros (zero poly is empty). */
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    UPoly(const Rational& c) {  // NOLINT: constants convert implicitly
        if (c != 0) c_.push_back(c);
    }
    UPoly(long c) : UPoly(Rational(c)) {}  // NOLINT

    static UPoly x() { return UPoly(std::vector<Rational>{0, 1}); }
    static UPoly monomial(const Rational& c, int deg) {
        std::vector<Rational> v(static_cast<size_t>(deg + 1));
        v[deg] = c;
        return UPoly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rational(0); }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return UPoly(std::move(v));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return UPoly(std::move(v));
    }
    UPoly& operator+=(const UPoly& o) { return *this = *this + o; }
    UPoly& operator-=(const UPoly& o) { return *this = *this - o; }
    UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    /** Quotient and remainder; divisor must be nonzero. */
    static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
        if (b.is_zero()) throw MathError("polynomial division by zero");
        std::vector<Rational> r = a.c_;
        int db = b.degree();
        if (a.degree() < db) return {UPoly(), a};
        std::vector<Rational> q(static_cast<size_t>(a.degree() - db + 1));
        Rational lb = b.lead();
        for (int i = a.degree(); i >= db; --i) {
            if (r[i] == 0) continue;
            Rational t = r[i] / lb;
            q[i - db] = t;
            for (int j = 0; j <= db; ++j) r[i - db + j] -= t * b.c_[j];
        }
        return {UPoly(std::move(q)), UPoly(std::move(r))};
    }
    friend UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }
    friend UPoly operator/(const UPoly& a, const UPoly& b) { return divmod(a, b).first; }

    UPoly monic() const {
        if (is_zero()) return *this;
        UPoly r = *this;
        Rational l = lead();
        for (auto& x : r.c_) x /= l;
        return r;
    }

    static UPoly gcd(UPoly a, UPoly b) {
        while (!b.is_zero()) {
            UPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    /** Returns (g, s, t) with s a + t b = g, g monic. */
    static void ext_gcd(const UPoly& a, const UPoly& b, UPoly& g, UPoly& s, UPoly& t) {
        UPoly r0 = a, r1 = b, s0 = 1, s1 = UPoly(), t0 = UPoly(), t1 = 1;
        while (!r1.is_zero()) {
            auto [q, r] = divmod(r0, r1);
            r0 = std::move(r1); r1 = std::move(r);
            UPoly ns = s0 - q * s1; s0 = std::move(s1); s1 = std::move(ns);
            UPoly nt = t0 - q * t1; t0 = std::move(t1); t1 = std::move(nt);
        }
        if (r0.is_zero()) { g = r0; s = s0; t = t0; return; }
        Rational l = r0.lead();
        g = r0.monic();
        s = s0 * UPoly(1 / l);
        t = t0 * UPoly(1 / l);
    }

    UPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rational(static_cast<long>(i));
        return UPoly(std::move(v));
    }

    Rational eval(const Rational& x) const {
        Rational r = 0;
        for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
        return r;
    }
    template <class T>
    T eval_generic(const T& x, const T& one) const {
        T r = one * 0;
        for (int i = degree(); i >= 0; --i) r = r * x + one * c_[i];
        return r;
    }
    std::complex<double> eval_c(std::complex<double> x) const {
        std::complex<double> r = 0;
        for (int i = degree(); i >= 0; --i) r = r * x + c_[i].get_d();
        return r;
    }

    /** Square-free part (Yun): product of distinct irreducible factors, monic. */
    UPoly squarefree_part() const {
        if (degree() <= 0) return monic();
        UPoly g = gcd(*this, derivative());
        return (*this / g).monic();
    }

    bool all_integer() const {
        for (auto& x : c_)
            if (!is_integer(x)) return false;
        return true;
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Rational& c = c_[i];
            if (c == 0) continue;
            Rational a = abs(c);
            if (first) { if (c < 0) os << "-"; }
            else os << (c < 0 ? " - " : " + ");
            first = false;
            if (i == 0) { os << a.get_str(); continue; }
            if (a != 1) os << a.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/** Cyclotomic polynomial Phi_n (integer coefficients). */
inline UPoly cyclotomic_poly(i64 n) {
    // Phi_n = prod_{d|n} (x^d - 1)^{mu(n/d)}; compute by dividing x^n - 1 by Phi_d, d | n, d < n.
    UPoly xn = UPoly::monomial(1, static_cast<int>(n)) - UPoly(1);
    for (i64 d : divisors(n)) {
        if (d == n) continue;
        xn = xn / cyclotomic_poly(d);
    }
    return xn;
}

/** All complex roots by Aberth-Ehrlich iteration, polished with Newton. Throws on non-convergence. */
inline std::vector<std::complex<double>> complex_roots(const std::vector<std::complex<double>>& coeffs_in,
                                                       double* residual_out = nullptr) {
    std::vector<std::complex<double>> c = coeffs_in;
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    using C = std::complex<long double>;
    std::vector<C> a(c.begin(), c.end());
    C lead = a.back();
    for (auto& x : a) x /= lead;
    auto eval = [&](C z, C& d) {
        C p = 1, dp = 0;
        for (int i = n - 1; i >= 0; --i) {
            dp = dp * z + p;
            p = p * z + a[i];
        }
        d = dp;
        return p;
    };
    long double radius = 0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::pow(std::abs(a[i]), 1.0L / (n - i)));
    radius = 2 * radius + 1;
    std::vector<C> z(n);
    for (int i = 0; i < n; ++i) z[i] = std::polar(radius * 0.5L + 0.1L * i / n, 2.0L * 3.14159265358979323846L * (i + 0.25L) / n);
    for (int it = 0; it < 2000; ++it) {
        long double maxstep = 0;
        for (int i = 0; i < n; ++i) {
            C d;
            C p = eval(z[i], d);
            if (std::abs(p) == 0) continue;
            C ratio = p / d;
            C s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0L / (z[i] - z[j]);
            C w = ratio / (1.0L - ratio * s);
            z[i] -= w;
            maxstep = std::max(maxstep, std::abs(w) / (1 + std::abs(z[i])));
        }
        if (maxstep < 1e-17L) break;
    }
    double worst = 0;
    std::vector<std::complex<double>> out;
    for (auto& r : z) {
        C d;
        C p = eval(r, d);
        long double scale = 0;
        long double rr = 1;
        for (int i = 0; i <= n; ++i) { scale += std::abs(i < n ? a[i] : C(1)) * rr; rr *= std::abs(r); }
        worst = std::max(worst, static_cast<double>(std::abs(p) / std::max(scale, 1.0L)));
        out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    }
    if (residual_out) *residual_out = worst;
    if (worst > 1e-8) throw MathError("root finding did not converge (relative residual " + std::to_string(worst) + ")");
    return out;
}

inline std::vector<std::complex<double>> complex_roots(const UPoly& f) {
    std::vector<std::complex<double>> c;
    for (auto& x : f.coeffs()) c.emplace_back(x.get_d(), 0.0);
    return complex_roots(c);
}

/**
 * Factor a squarefree-or-not rational polynomial into monic irreducibles over Q (with multiplicity).
 * Small-degree method: numeric roots, subset products rounded to rational candidates, confirmed by
 * exact division. Adequate for the degrees used here (<= 16); throws beyond that.
 */
inline std::vector<std::pair<UPoly, int>> factor_over_q(const UPoly& f_in) {
    if (f_in.degree() < 1) return {};
    if (f_in.degree() > 16) throw MathError("factor_over_q: degree above supported bound 16");
    std::vector<std::pair<UPoly, int>> out;
    UPoly f = f_in.monic();
    // square-free decomposition by repeated gcd with derivative
    std::vector<std::pair<UPoly, int>> sqf;
    {
        UPoly a = f;
        int mult = 1;
        UPoly b = UPoly::gcd(a, a.derivative());
        UPoly c = (a / b).monic();
        while (c.degree() > 0) {
            UPoly y = UPoly::gcd(b, c);
            UPoly z = (c / y).monic();
            if (z.degree() > 0) sqf.emplace_back(z, mult);
            b = (b / y).monic();
            c = y;
            ++mult;
        }
    }
    for (auto& [g0, m] : sqf) {
        // clear denominators: h = D * g with integer coefficients, leading coefficient D
        Integer D = 1;
        for (auto& x : g0.coeffs()) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
        UPoly g = g0;
        while (g.degree() > 0) {
            if (g.degree() == 1) { out.emplace_back(g.monic(), m); break; }
            auto roots = complex_roots(g);
            int n = static_cast<int>(roots.size());
            bool found = false;
            // try subsets by increasing size up to n/2
            for (int size = 1; size <= n / 2 && !found; ++size) {
                std::vector<int> idx(size);
                for (int i = 0; i < size; ++i) idx[i] = i;
                while (true) {
                    // build candidate monic polynomial from selected roots
                    std::vector<std::complex<long double>> poly{1};
                    for (int id : idx) {
                        std::vector<std::complex<long double>> np(poly.size() + 1);
                        for (size_t i = 0; i < poly.size(); ++i) {
                            np[i + 1] += poly[i];
                            np[i] -= poly[i] * std::complex<long double>(roots[id].real(), roots[id].imag());
                        }
                        poly = std::move(np);
                    }
                    // a monic rational factor of g has coefficients in (1/D) Z (Gauss lemma on D*g)
                    Integer den = D;
                    bool ok = true;
                    std::vector<Rational> cc(poly.size());
                    for (size_t i = 0; i < poly.size() && ok; ++i) {
                        long double v = poly[i].real() * den.get_d();
                        if (std::fabs(poly[i].imag()) * den.get_d() > 1e-3 || std::fabs(v) > 1e17) { ok = false; break; }
                        cc[i] = Rational(Integer(static_cast<double>(std::llround(static_cast<double>(v)))), den);
                        cc[i].canonicalize();
                    }
                    if (ok) {
                        UPoly cand(cc);
                        auto [q, r] = UPoly::divmod(g, cand);
                        if (r.is_zero() && cand.degree() == size) {
                            out.emplace_back(cand.monic(), m);
                            g = q.monic();
                            found = true;
                            break;
                        }
                    }
                    int k = size - 1;
                    while (k >= 0 && idx[k] == n - size + k) --k;
                    if (k < 0) break;
                    ++idx[k];
                    for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
                }
            }
            if (!found) { out.emplace_back(g.monic(), m); break; }
        }
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.to_string() < b.first.to_string();
    });
    return out;
}

}  // namespace rsw
