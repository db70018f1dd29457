#pragma once
/**
 * @file mpoly.hpp
 * @brief Sparse multivariate (Laurent) polynomials over Q with exact division and gcd.
 *
 * Variables flagged invertible may carry negative exponents; the rest are ordinary.
 * Terms are kept sorted in decreasing lex order (variable 0 most significant).
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rsw/rational.hpp"

namespace rsw {

constexpr int kMaxVars = 10;

struct Mono {
    std::array<std::int16_t, kMaxVars> e{};
    friend bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }
    friend bool operator!=(const Mono& a, const Mono& b) { return a.e != b.e; }
    friend bool operator<(const Mono& a, const Mono& b) { return a.e < b.e; }
    friend bool operator>(const Mono& a, const Mono& b) { return b.e < a.e; }
    Mono operator+(const Mono& o) const {
        Mono r;
        for (int i = 0; i < kMaxVars; ++i) {
            int s = e[i] + o.e[i];
            if (s > 32000 || s < -32000) throw MathError("monomial exponent overflow");
            r.e[i] = static_cast<std::int16_t>(s);
        }
        return r;
    }
    Mono operator-(const Mono& o) const {
        Mono r;
        for (int i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::int16_t>(e[i] - o.e[i]);
        return r;
    }
    bool is_one() const {
        for (auto x : e)
            if (x != 0) return false;
        return true;
    }
};

/** Variable context. Immutable; share via RingPtr. */
class PolyRing {
public:
    PolyRing(std::vector<std::string> names, std::vector<bool> invertible)
        : names_(std::move(names)), inv_(std::move(invertible)) {
        if (names_.size() > static_cast<size_t>(kMaxVars)) throw MathError("too many polynomial variables");
        if (inv_.size() != names_.size()) inv_.resize(names_.size(), false);
    }
    size_t nvars() const { return names_.size(); }
    const std::string& name(size_t i) const { return names_.at(i); }
    bool invertible(size_t i) const { return inv_.at(i); }
    int index(const std::string& n) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return static_cast<int>(i);
        return -1;
    }
    const std::vector<std::string>& names() const { return names_; }
    bool same_as(const PolyRing& o) const { return names_ == o.names_ && inv_ == o.inv_; }

private:
    std::vector<std::string> names_;
    std::vector<bool> inv_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

inline RingPtr make_ring(std::vector<std::string> names, std::vector<bool> invertible = {}) {
    return std::make_shared<const PolyRing>(std::move(names), std::move(invertible));
}

class MPoly {
public:
    using Term = std::pair<Mono, Rational>;

    MPoly() = default;
    explicit MPoly(RingPtr r) : ring_(std::move(r)) {}
    MPoly(RingPtr r, const Rational& c) : ring_(std::move(r)) {
        if (c != 0) terms_.push_back({Mono{}, c});
    }
    static MPoly var(const RingPtr& r, int i, int power = 1) {
        if (i < 0 || i >= static_cast<int>(r->nvars())) throw MathError("variable index out of range");
        Mono m;
        m.e[i] = static_cast<std::int16_t>(power);
        if (power < 0 && !r->invertible(i)) throw MathError("negative power of non-invertible variable " + r->name(i));
        return monomial(r, m, 1);
    }
    static MPoly var(const RingPtr& r, const std::string& n, int power = 1) {
        int i = r->index(n);
        if (i < 0) throw MathError("unknown variable " + n);
        return var(r, i, power);
    }
    static MPoly monomial(const RingPtr& r, const Mono& m, const Rational& c) {
        MPoly p(r);
        if (c != 0) p.terms_.push_back({m, c});
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
    Rational constant_value() const {
        for (auto& t : terms_)
            if (t.first.is_one()) return t.second;
        return 0;
    }
    size_t size() const { return terms_.size(); }
    const Term& lead() const { return terms_.front(); }

    MPoly operator-() const {
        MPoly r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }
    friend MPoly operator+(const MPoly& a, const MPoly& b) { return merge(a, b, false); }
    friend MPoly operator-(const MPoly& a, const MPoly& b) { return merge(a, b, true); }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        RingPtr r = pick_ring(a, b);
        MPoly out(r);
        if (a.is_zero() || b.is_zero()) return out;
        if (a.terms_.size() == 1 || b.terms_.size() == 1) {
            const MPoly& s = a.terms_.size() == 1 ? a : b;
            const MPoly& o = a.terms_.size() == 1 ? b : a;
            const Term& t = s.terms_[0];
            out.terms_.reserve(o.terms_.size());
            for (auto& u : o.terms_) out.terms_.push_back({u.first + t.first, u.second * t.second});
            // adding a fixed monomial preserves lex order
            return out;
        }
        std::vector<Term> prods;
        prods.reserve(a.terms_.size() * b.terms_.size());
        for (auto& x : a.terms_)
            for (auto& y : b.terms_) prods.push_back({x.first + y.first, x.second * y.second});
        std::sort(prods.begin(), prods.end(), [](const Term& u, const Term& v) { return u.first > v.first; });
        for (auto& t : prods) {
            if (!out.terms_.empty() && out.terms_.back().first == t.first) out.terms_.back().second += t.second;
            else {
                if (!out.terms_.empty() && out.terms_.back().second == 0) out.terms_.pop_back();
                out.terms_.push_back(std::move(t));
            }
        }
        if (!out.terms_.empty() && out.terms_.back().second == 0) out.terms_.pop_back();
        return out;
    }
    friend MPoly operator*(const MPoly& a, const Rational& c) {
        if (c == 0) return MPoly(a.ring_);
        MPoly r = a;
        for (auto& t : r.terms_) t.second *= c;
        return r;
    }
    friend MPoly operator*(const Rational& c, const MPoly& a) { return a * c; }
    friend MPoly operator/(const MPoly& a, const Rational& c) {
        if (c == 0) throw MathError("division of polynomial by zero");
        return a * (1 / c);
    }
    MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
    MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly operator+(const Rational& c) const { return *this + MPoly(ring_, c); }
    MPoly operator-(const Rational& c) const { return *this - MPoly(ring_, c); }

    /** Non-negative powers, or any power of an invertible monomial. */
    MPoly pow(long n) const {
        if (n < 0) {
            if (terms_.size() != 1) throw MathError("negative power of a non-monomial");
            Mono m;
            for (size_t i = 0; i < ring_->nvars(); ++i) {
                if (terms_[0].first.e[i] != 0 && !ring_->invertible(i))
                    throw MathError("negative power of non-invertible variable " + ring_->name(i));
                m.e[i] = static_cast<std::int16_t>(-terms_[0].first.e[i]);
            }
            return monomial(ring_, m, 1 / terms_[0].second).pow(-n);
        }
        MPoly r(ring_, 1), b = *this;
        while (n > 0) {
            if (n & 1) r *= b;
            n >>= 1;
            if (n) b *= b;
        }
        return r;
    }

    int degree(int v) const {
        int d = -32768;
        for (auto& t : terms_) d = std::max<int>(d, t.first.e[v]);
        return terms_.empty() ? -1 : d;
    }
    int min_exponent(int v) const {
        int d = 32767;
        for (auto& t : terms_) d = std::min<int>(d, t.first.e[v]);
        return terms_.empty() ? 0 : d;
    }
    int total_degree() const {
        int d = -1;
        for (auto& t : terms_) {
            int s = 0;
            for (auto x : t.first.e) s += x;
            d = std::max(d, s);
        }
        return d;
    }
    bool involves(int v) const {
        for (auto& t : terms_)
            if (t.first.e[v] != 0) return true;
        return false;
    }
    /** Minimal exponent over all terms, per variable. */
    Mono min_mono() const {
        Mono m;
        if (terms_.empty()) return m;
        m = terms_[0].first;
        for (auto& t : terms_)
            for (int i = 0; i < kMaxVars; ++i) m.e[i] = std::min(m.e[i], t.first.e[i]);
        return m;
    }
    MPoly shift(const Mono& m) const {
        MPoly r = *this;
        for (auto& t : r.terms_) t.first = t.first + m;
        return r;
    }

    /** Coefficient of v^k, as a polynomial with v removed. */
    MPoly coeff(int v, int k) const {
        MPoly r(ring_);
        for (auto& t : terms_)
            if (t.first.e[v] == k) {
                Mono m = t.first;
                m.e[v] = 0;
                r.terms_.push_back({m, t.second});
            }
        // removing a fixed exponent keeps relative lex order
        return r;
    }
    /** Coefficient of an exact monomial. */
    Rational coeff(const Mono& m) const {
        for (auto& t : terms_)
            if (t.first == m) return t.second;
        return 0;
    }

    /** Rational content: positive rational c with (this / c) integral and primitive. */
    Rational content() const {
        if (terms_.empty()) return 0;
        Integer num = 0, den = 1;
        for (auto& t : terms_) {
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.second.get_num_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.second.get_den_mpz_t());
        }
        return make_rat(num, den);
    }
    /** Integer-primitive with positive leading coefficient. */
    MPoly normalized() const {
        if (terms_.empty()) return *this;
        Rational c = content();
        if (terms_[0].second < 0) c = -c;
        return *this / c;
    }

    Rational eval(const std::vector<Rational>& pt) const {
        Rational s = 0;
        for (auto& t : terms_) {
            Rational v = t.second;
            for (size_t i = 0; i < ring_->nvars(); ++i)
                if (t.first.e[i] != 0) v *= rat_pow(pt.at(i), t.first.e[i]);
            s += v;
        }
        return s;
    }

    /**
     * Ring homomorphism: variable i -> images[i] (same target ring for all images).
     * Negative exponents require an invertible image (monomial over invertible variables).
     */
    MPoly substitute(const std::vector<MPoly>& images) const {
        if (images.size() < ring_->nvars()) throw MathError("substitute: missing images");
        RingPtr target = images.empty() ? ring_ : images[0].ring_;
        MPoly out(target);
        std::vector<std::vector<std::pair<int, MPoly>>> cache(ring_->nvars());
        auto power = [&](size_t i, int e) -> MPoly {
            for (auto& [k, v] : cache[i])
                if (k == e) return v;
            MPoly v = images[i].pow(e);
            cache[i].push_back({e, v});
            return v;
        };
        for (auto& t : terms_) {
            MPoly v(target, t.second);
            for (size_t i = 0; i < ring_->nvars(); ++i)
                if (t.first.e[i] != 0) v *= power(i, t.first.e[i]);
            out += v;
        }
        return out;
    }

    /** Same polynomial viewed in another ring with identical variable list or a superset (mapped by name). */
    MPoly to_ring(const RingPtr& target) const {
        std::vector<MPoly> imgs;
        for (size_t i = 0; i < ring_->nvars(); ++i) {
            int j = target->index(ring_->name(i));
            if (j < 0) {
                if (involves(static_cast<int>(i))) throw MathError("to_ring: variable " + ring_->name(i) + " missing in target");
                imgs.push_back(MPoly(target, 0));
            } else {
                imgs.push_back(var(target, j));
            }
        }
        if (imgs.empty()) return MPoly(target, constant_value());
        return substitute(imgs);
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [m, c] : terms_) {
            Rational a = abs(c);
            if (first) { if (c < 0) os << "-"; }
            else os << (c < 0 ? " - " : " + ");
            first = false;
            std::string mon = mono_string(m);
            if (mon.empty()) { os << a.get_str(); continue; }
            if (a != 1) os << a.get_str() << "*";
            os << mon;
        }
        return os.str();
    }
    std::string mono_string(const Mono& m) const {
        std::string s;
        for (size_t i = 0; i < (ring_ ? ring_->nvars() : 0); ++i) {
            if (m.e[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += ring_->name(i);
            if (m.e[i] != 1) s += "^" + std::to_string(m.e[i]);
        }
        return s;
    }

    /** Internal: build from already sorted, combined terms. */
    static MPoly from_sorted(RingPtr r, std::vector<Term> t) {
        MPoly p(std::move(r));
        p.terms_ = std::move(t);
        return p;
    }

private:
    static RingPtr pick_ring(const MPoly& a, const MPoly& b) {
        if (!a.ring_) return b.ring_;
        if (!b.ring_ || a.ring_ == b.ring_) return a.ring_;
        if (!a.ring_->same_as(*b.ring_)) throw MathError("polynomials from different rings");
        return a.ring_;
    }
    static MPoly merge(const MPoly& a, const MPoly& b, bool negate_b) {
        MPoly out(pick_ring(a, b));
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first > b.terms_[j].first)) {
                out.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].first > a.terms_[i].first) {
                out.terms_.push_back(b.terms_[j]);
                if (negate_b) out.terms_.back().second = -out.terms_.back().second;
                ++j;
            } else {
                Rational s = negate_b ? Rational(a.terms_[i].second - b.terms_[j].second) : Rational(a.terms_[i].second + b.terms_[j].second);
                if (s != 0) out.terms_.push_back({a.terms_[i].first, s});
                ++i; ++j;
            }
        }
        return out;
    }

    RingPtr ring_;
    std::vector<Term> terms_;
};

namespace detail {

inline bool mono_divides(const Mono& d, const Mono& m) {
    for (int i = 0; i < kMaxVars; ++i)
        if (d.e[i] > m.e[i]) return false;
    return true;
}

/** Division of polynomials with non-negative exponents. */
inline std::optional<MPoly> divide_nonneg(const MPoly& a, const MPoly& b) {
    const RingPtr& R = a.ring() ? a.ring() : b.ring();
    MPoly q(R), r = a;
    const auto& lb = b.lead();
    while (!r.is_zero()) {
        const auto& lr = r.lead();
        if (!mono_divides(lb.first, lr.first)) return std::nullopt;
        MPoly t = MPoly::monomial(R, lr.first - lb.first, lr.second / lb.second);
        q += t;
        r -= t * b;
    }
    return q;
}

}  // namespace detail

/** Exact quotient a / b, or nullopt if b does not divide a (Laurent in invertible variables). */
inline std::optional<MPoly> exact_div(const MPoly& a, const MPoly& b) {
    if (b.is_zero()) throw MathError("exact division by zero polynomial");
    if (a.is_zero()) return MPoly(b.ring());
    const RingPtr& R = b.ring();
    Mono sa = a.min_mono(), sb = b.min_mono();
    for (size_t i = 0; i < R->nvars(); ++i)
        if (!R->invertible(i) && sa.e[i] < sb.e[i]) return std::nullopt;
    Mono zero;
    MPoly A = a.shift(zero - sa), B = b.shift(zero - sb);
    auto q = detail::divide_nonneg(A, B);
    if (!q) return std::nullopt;
    return q->shift(sa - sb);
}

inline MPoly exact_div_or_throw(const MPoly& a, const MPoly& b) {
    auto q = exact_div(a, b);
    if (!q) throw MathError("inexact polynomial division");
    return *q;
}

namespace detail {

MPoly gcd_nonneg(const MPoly& a, const MPoly& b);

inline MPoly lcoeff_in(const MPoly& a, int v) { return a.coeff(v, a.degree(v)); }

/** Content of a with respect to variable v: gcd of its v-coefficients. */
inline MPoly content_in(const MPoly& a, int v) {
    std::vector<MPoly> cs;
    for (int k = a.min_exponent(v); k <= a.degree(v); ++k) {
        MPoly c = a.coeff(v, k);
        if (!c.is_zero()) cs.push_back(std::move(c));
    }
    std::sort(cs.begin(), cs.end(), [](const MPoly& x, const MPoly& y) { return x.size() < y.size(); });
    MPoly g = cs[0].normalized();
    for (size_t i = 1; i < cs.size(); ++i) {
        if (g.is_constant()) break;
        g = gcd_nonneg(g, cs[i]);
    }
    return g;
}

inline MPoly prem(MPoly a, const MPoly& b, int v) {
    int db = b.degree(v);
    MPoly lc = lcoeff_in(b, v);
    const RingPtr& R = b.ring();
    while (!a.is_zero() && a.degree(v) >= db) {
        int da = a.degree(v);
        MPoly la = lcoeff_in(a, v);
        a = lc * a - la * MPoly::var(R, v, da - db) * b;
    }
    return a;
}

inline MPoly pp_in(const MPoly& a, int v) {
    MPoly c = content_in(a, v);
    return exact_div_or_throw(a, c).normalized();
}

/** gcd for polynomials with non-negative exponents and no zero operand. */
inline MPoly gcd_nonneg(const MPoly& a, const MPoly& b) {
    const RingPtr& R = a.ring() ? a.ring() : b.ring();
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    // monomial part: for ordinary variables take the min; invertible ones are units
    Mono ma = a.min_mono(), mb = b.min_mono(), mg;
    for (size_t i = 0; i < R->nvars(); ++i) mg.e[i] = R->invertible(i) ? 0 : std::min(ma.e[i], mb.e[i]);
    Mono zero;
    MPoly A = a.shift(zero - ma), B = b.shift(zero - mb);
    MPoly one(R, 1);
    auto finish = [&](const MPoly& g) { return g.shift(mg).normalized(); };
    if (A.is_constant() || B.is_constant()) return finish(one);
    MPoly An = A.normalized(), Bn = B.normalized();
    if (An == Bn) return finish(An);
    // cheap divisibility checks
    if (Bn.size() <= An.size()) {
        if (exact_div(An, Bn)) return finish(Bn);
    } else if (exact_div(Bn, An)) {
        return finish(An);
    }
    // pick main variable: present in both, minimal max degree
    int v = -1, best = 1 << 30;
    for (size_t i = 0; i < R->nvars(); ++i) {
        int ii = static_cast<int>(i);
        bool inA = An.involves(ii), inB = Bn.involves(ii);
        if (inA && inB) {
            int d = std::max(An.degree(ii), Bn.degree(ii));
            if (d < best) { best = d; v = ii; }
        }
    }
    if (v < 0) {
        // no common variable: reduce the one with extra variables to its content
        for (size_t i = 0; i < R->nvars(); ++i) {
            int ii = static_cast<int>(i);
            if (An.involves(ii) && !Bn.involves(ii)) return finish(gcd_nonneg(content_in(An, ii), Bn));
            if (Bn.involves(ii) && !An.involves(ii)) return finish(gcd_nonneg(An, content_in(Bn, ii)));
        }
        return finish(one);
    }
    // variables present in only one operand: strip via content first
    for (size_t i = 0; i < R->nvars(); ++i) {
        int ii = static_cast<int>(i);
        if (An.involves(ii) && !Bn.involves(ii)) return finish(gcd_nonneg(content_in(An, ii), Bn));
        if (Bn.involves(ii) && !An.involves(ii)) return finish(gcd_nonneg(An, content_in(Bn, ii)));
    }
    MPoly cA = content_in(An, v), cB = content_in(Bn, v);
    MPoly c = gcd_nonneg(cA, cB);
    MPoly pA = exact_div_or_throw(An, cA).normalized(), pB = exact_div_or_throw(Bn, cB).normalized();
    if (pA.degree(v) < pB.degree(v)) std::swap(pA, pB);
    MPoly g(R);
    while (true) {
        MPoly r = prem(pA, pB, v);
        if (r.is_zero()) { g = pB; break; }
        if (r.degree(v) == 0) { g = one; break; }
        pA = std::move(pB);
        pB = pp_in(r, v);
    }
    if (!g.is_constant()) g = pp_in(g, v);
    return finish(c * g);
}

}  // namespace detail

/**
 * Polynomial gcd, normalized (integer-primitive, positive leading coefficient). Monomials in
 * invertible variables are units and never appear in the result.
 */
inline MPoly gcd(const MPoly& a, const MPoly& b) {
    const RingPtr& R = a.ring() ? a.ring() : b.ring();
    if (a.is_zero() && b.is_zero()) return MPoly(R);
    Mono zero;
    MPoly A = a.is_zero() ? a : a.shift(zero - a.min_mono());
    MPoly B = b.is_zero() ? b : b.shift(zero - b.min_mono());
    MPoly g = detail::gcd_nonneg(A, B);
    // restore the common monomial factor in ordinary variables
    Mono mg;
    if (!a.is_zero() && !b.is_zero()) {
        Mono ma = a.min_mono(), mb = b.min_mono();
        for (size_t i = 0; i < R->nvars(); ++i) mg.e[i] = R->invertible(i) ? 0 : std::min(ma.e[i], mb.e[i]);
    } else {
        Mono m = a.is_zero() ? b.min_mono() : a.min_mono();
        for (size_t i = 0; i < R->nvars(); ++i) mg.e[i] = R->invertible(i) ? 0 : m.e[i];
    }
    return g.shift(mg);
}

}  // namespace rsw
