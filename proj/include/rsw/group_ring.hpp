#pragma once
/**
 * @file group_ring.hpp
 * @brief Group rings R[(Z/mZ)^x] with [a][b] = [ab].
 */

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "rsw/coeff_traits.hpp"
#include "rsw/number_theory.hpp"

namespace rsw {

/** Units of Z/m with index lookup and multiplication table. Shared, immutable. */
class UnitGroup {
public:
    explicit UnitGroup(i64 m) : m_(m), units_(units_mod(m)), index_(static_cast<size_t>(m), -1) {
        for (size_t i = 0; i < units_.size(); ++i) index_[units_[i]] = static_cast<int>(i);
        size_t n = units_.size();
        mul_.assign(n * n, 0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) mul_[i * n + j] = index_[mod(units_[i] * units_[j], m_)];
    }
    i64 modulus() const { return m_; }
    size_t order() const { return units_.size(); }
    i64 unit(size_t i) const { return units_[i]; }
    int index_of(i64 a) const {
        if (m_ == 1) return 0;
        i64 r = mod(a, m_);
        int k = index_[r];
        if (k < 0) throw MathError(std::to_string(a) + " is not a unit mod " + std::to_string(m_));
        return k;
    }
    int mul(size_t i, size_t j) const { return mul_[i * units_.size() + j]; }

    static std::shared_ptr<const UnitGroup> get(i64 m) {
        if (m < 1) throw MathError("group ring modulus must be positive");
        static std::mutex mu;
        static std::map<i64, std::shared_ptr<const UnitGroup>> cache;
        std::lock_guard<std::mutex> lk(mu);
        auto& slot = cache[m];
        if (!slot) slot = std::make_shared<const UnitGroup>(m);
        return slot;
    }

private:
    i64 m_;
    std::vector<i64> units_;
    std::vector<int> index_;
    std::vector<int> mul_;
};

template <class R>
class GroupRingElt {
public:
    GroupRingElt() = default;
    /** Zero element with base-ring sample used for constants. */
    GroupRingElt(i64 m, const R& sample) : G_(UnitGroup::get(m)), c_(G_->order(), zero_like(sample)) {}

    /** c·[a] */
    static GroupRingElt bracket(i64 m, i64 a, const R& c) {
        GroupRingElt e(m, c);
        e.c_[e.G_->index_of(a)] = c;
        return e;
    }
    static GroupRingElt scalar(i64 m, const R& c) { return bracket(m, 1, c); }

    i64 modulus() const { return G_->modulus(); }
    const UnitGroup& group() const { return *G_; }
    const std::vector<R>& coeffs() const { return c_; }
    const R& coeff(i64 a) const { return c_[G_->index_of(a)]; }
    bool is_zero() const {
        for (auto& x : c_)
            if (!rsw::is_zero(x)) return false;
        return true;
    }

    GroupRingElt operator-() const {
        GroupRingElt r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend GroupRingElt operator+(const GroupRingElt& a, const GroupRingElt& b) {
        check(a, b);
        GroupRingElt r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
        return r;
    }
    friend GroupRingElt operator-(const GroupRingElt& a, const GroupRingElt& b) {
        check(a, b);
        GroupRingElt r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] - b.c_[i];
        return r;
    }
    friend GroupRingElt operator*(const GroupRingElt& a, const GroupRingElt& b) {
        check(a, b);
        size_t n = a.c_.size();
        GroupRingElt r(a.modulus(), a.c_[0]);
        for (size_t i = 0; i < n; ++i) {
            if (rsw::is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < n; ++j) {
                if (rsw::is_zero(b.c_[j])) continue;
                auto k = static_cast<size_t>(a.G_->mul(i, j));
                r.c_[k] = r.c_[k] + a.c_[i] * b.c_[j];
            }
        }
        return r;
    }
    friend GroupRingElt operator*(const GroupRingElt& a, const R& s) {
        GroupRingElt r = a;
        for (auto& x : r.c_) x = x * s;
        return r;
    }
    friend GroupRingElt operator*(const R& s, const GroupRingElt& a) { return a * s; }
    GroupRingElt& operator+=(const GroupRingElt& o) { return *this = *this + o; }
    GroupRingElt& operator-=(const GroupRingElt& o) { return *this = *this - o; }
    GroupRingElt& operator*=(const GroupRingElt& o) { return *this = *this * o; }
    friend bool operator==(const GroupRingElt& a, const GroupRingElt& b) {
        if (a.modulus() != b.modulus()) return false;
        for (size_t i = 0; i < a.c_.size(); ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }
    friend bool operator!=(const GroupRingElt& a, const GroupRingElt& b) { return !(a == b); }

    /** Augmentation [a] -> 1. */
    R augmentation() const {
        R s = zero_like(c_[0]);
        for (auto& x : c_) s = s + x;
        return s;
    }

    /** Inverse when the element is a unit times a bracket (the only case needed generically). */
    GroupRingElt inv() const {
        int nz = -1;
        for (size_t i = 0; i < c_.size(); ++i)
            if (!rsw::is_zero(c_[i])) {
                if (nz >= 0) throw MathError("group ring inverse only implemented for monomial elements");
                nz = static_cast<int>(i);
            }
        if (nz < 0) throw MathError("inverse of zero group ring element");
        return bracket(modulus(), invmod(G_->unit(nz), modulus()), inverse(c_[nz]));
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (rsw::is_zero(c_[i])) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << rsw_str(c_[i]) << ")[" << G_->unit(i) << "]";
        }
        return first ? "0" : os.str();
    }

private:
    static std::string rsw_str(const Rational& x) { return x.get_str(); }
    template <class T>
    static std::string rsw_str(const T& x) { return x.to_string(); }
    static void check(const GroupRingElt& a, const GroupRingElt& b) {
        if (a.modulus() != b.modulus()) throw MathError("group ring elements with different moduli");
    }

    std::shared_ptr<const UnitGroup> G_;
    std::vector<R> c_;
};

template <class R>
GroupRingElt<R> zero_like(const GroupRingElt<R>& x) {
    return GroupRingElt<R>(x.modulus(), x.coeffs()[0]);
}
template <class R>
GroupRingElt<R> one_like(const GroupRingElt<R>& x) {
    return GroupRingElt<R>::scalar(x.modulus(), one_like(x.coeffs()[0]));
}
template <class R>
bool is_zero(const GroupRingElt<R>& x) {
    return x.is_zero();
}
template <class R>
GroupRingElt<R> inverse(const GroupRingElt<R>& x) {
    return x.inv();
}

template <class R>
GroupRingElt<R> scale(const GroupRingElt<R>& x, const Rational& s) {
    GroupRingElt<R> r = zero_like(x);
    for (size_t i = 0; i < x.coeffs().size(); ++i)
        r += GroupRingElt<R>::bracket(x.modulus(), x.group().unit(i), scale(x.coeffs()[i], s));
    return r;
}

/** Augmentation image and its coordinates reduced mod (ell - 1). */
template <class R>
struct AugmentModResult {
    R augmentation;
    std::vector<Integer> residue;  ///< integral-basis coordinates mod (ell - 1)
    bool zero_class = false;
};

namespace detail {
inline std::vector<Rational> integral_coords(const Rational& x) { return {x}; }
inline std::vector<Rational> integral_coords(const CycloElt& x) { return x.coeffs(); }
inline std::vector<Rational> integral_coords(const TowerElt& x) { return x.tower()->to_vector(x.poly()); }
}  // namespace detail

/**
 * Image of e under [a] -> 1 and its class modulo (ell - 1). Coordinates are taken in the
 * power basis, which is an integral basis for Z, Z[zeta_L] and Z[i].
 */
template <class R>
AugmentModResult<R> groupring_augment_mod(const GroupRingElt<R>& e, i64 ell) {
    for (auto& c : e.coeffs())
        for (auto& q : detail::integral_coords(c))
            if (!is_integer(q)) throw MathError("groupring_augment_mod: non-integral coefficient " + q.get_str());
    AugmentModResult<R> out{e.augmentation(), {}, true};
    Integer n = ell - 1;
    for (auto& q : detail::integral_coords(out.augmentation)) {
        Integer r = q.get_num();
        if (n != 0) {
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
        }
        if (r != 0) out.zero_class = false;
        out.residue.push_back(r);
    }
    return out;
}

}  // namespace rsw
