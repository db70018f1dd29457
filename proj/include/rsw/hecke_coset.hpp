#pragma once
/**
 * @file hecke_coset.hpp
 * @brief Congruence subgroups materialised in SL2(Z/L), right-coset decompositions of double
 *        cosets, products in the abstract Hecke algebra, and the Iwahori cells of SL2(Q_p).
 */

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rsw/number_theory.hpp"
#include "rsw/rational.hpp"

namespace rsw {

/** 2x2 integer matrix [[a, b], [c, d]]. */
struct Mat2 {
    i64 a = 1, b = 0, c = 0, d = 1;
    i64 det() const { return a * d - b * c; }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
    Mat2 mod(i64 L) const { return {rsw::mod(a, L), rsw::mod(b, L), rsw::mod(c, L), rsw::mod(d, L)}; }
    std::string to_string() const {
        return "[[" + std::to_string(a) + ", " + std::to_string(b) + "], [" + std::to_string(c) + ", " + std::to_string(d) + "]]";
    }
};

inline Mat2 diag(i64 x, i64 y) { return {x, 0, 0, y}; }

/** Lift an element of SL2(Z/M) to SL2(Z). */
inline Mat2 lift_sl2(const Mat2& m, i64 M) {
    if (M == 1) return {};
    Mat2 r = m.mod(M);
    if (rsw::mod(r.det(), M) != 1) throw MathError("lift_sl2: determinant is not 1 mod " + std::to_string(M));
    i64 c = r.c == 0 ? M : r.c;
    i64 d = r.d;
    while (std::gcd(c, d) != 1) d += M;  // terminates: gcd(c, d, M) = 1
    i64 x, y;
    // x d - y c = 1
    i64 g = ext_gcd(d, c, x, y);  // x d + y c = g = 1
    (void)g;
    y = -y;
    i64 u, v;
    ext_gcd(c, d, u, v);  // u c + v d = 1
    i64 t = rsw::mod(mulmod(rsw::mod(r.a - x, M), rsw::mod(u, M), M) + mulmod(rsw::mod(r.b - y, M), rsw::mod(v, M), M), M);
    Mat2 out{x + t * c, y + t * d, c, d};
    if (out.det() != 1 || !(out.mod(M) == r)) throw MathError("lift_sl2 failed");
    return out;
}

// ------------------------------------------------------------------ subgroups

/** A subgroup of SL2(Z) containing Gamma(L), stored as its image in SL2(Z/L). */
class CongSubgroup {
public:
    using Pred = std::function<bool(i64, i64, i64, i64)>;
    static constexpr i64 max_level = 30;

    CongSubgroup(i64 L, Pred pred, std::string name) : L_(L), pred_(std::move(pred)), name_(std::move(name)) { build(); }

    static CongSubgroup full() { return CongSubgroup(1, [](i64, i64, i64, i64) { return true; }, "SL2(Z)"); }
    static CongSubgroup gamma1(i64 N) {
        return CongSubgroup(N, [N](i64 a, i64, i64 c, i64 d) { return c == 0 && a == 1 % N && d == 1 % N; }, "Gamma1(" + std::to_string(N) + ")");
    }
    static CongSubgroup gamma0(i64 N) {
        return CongSubgroup(N, [](i64, i64, i64 c, i64) { return c == 0; }, "Gamma0(" + std::to_string(N) + ")");
    }
    static CongSubgroup gamma_upper0(i64 M) {
        return CongSubgroup(M, [](i64, i64 b, i64, i64) { return b == 0; }, "Gamma^0(" + std::to_string(M) + ")");
    }
    CongSubgroup intersect(const CongSubgroup& o) const {
        i64 L = std::lcm(L_, o.L_), L1 = L_, L2 = o.L_;
        Pred p1 = pred_, p2 = o.pred_;
        return CongSubgroup(L, [=](i64 a, i64 b, i64 c, i64 d) {
            return p1(a % L1, b % L1, c % L1, d % L1) && p2(a % L2, b % L2, c % L2, d % L2);
        }, name_ + " & " + o.name_);
    }

    i64 level() const { return L_; }
    const std::string& name() const { return name_; }
    const std::vector<Mat2>& elements() const { return elems_; }
    size_t index() const { return sl2_size_ / elems_.size(); }

    /** Membership of an integral matrix: determinant 1 and the congruence conditions mod L. */
    bool contains(const Mat2& g) const {
        if (g.det() != 1) return false;
        Mat2 r = g.mod(L_);
        return pred_(r.a, r.b, r.c, r.d);
    }
    /** Id of the right coset Gamma g for g in SL2(Z). */
    int coset_id(const Mat2& g) const {
        Mat2 r = g.mod(L_);
        int id = table_[static_cast<size_t>(code(r))];
        if (id < 0) throw MathError("coset_id: matrix not in SL2");
        return id;
    }
    /** Closure certificate: identity, products and inverses of the stored image. */
    bool verify_closure() const {
        std::set<i64> codes;
        for (auto& g : elems_) codes.insert(code(g));
        if (!codes.count(code(Mat2{}.mod(L_)))) return false;
        for (auto& g : elems_) {
            if (!codes.count(code(Mat2{g.d, -g.b, -g.c, g.a}.mod(L_)))) return false;
            for (auto& h : elems_)
                if (!codes.count(code((g * h).mod(L_)))) return false;
        }
        return true;
    }

private:
    i64 code(const Mat2& r) const { return ((r.a * L_ + r.b) * L_ + r.c) * L_ + r.d; }
    void build() {
        if (L_ < 1) throw MathError("level must be positive");
        if (L_ > max_level) throw MathError("enumeration bound exceeded: level " + std::to_string(L_) + " > " + std::to_string(max_level));
        table_.assign(static_cast<size_t>(L_ * L_ * L_ * L_), -1);
        std::vector<Mat2> sl2;
        for (i64 a = 0; a < L_; ++a)
            for (i64 b = 0; b < L_; ++b)
                for (i64 c = 0; c < L_; ++c)
                    for (i64 d = 0; d < L_; ++d) {
                        Mat2 m{a, b, c, d};
                        if (rsw::mod(m.det(), L_) != 1 % L_) continue;
                        sl2.push_back(m);
                        if (pred_(a, b, c, d)) elems_.push_back(m);
                    }
        sl2_size_ = sl2.size();
        if (elems_.empty()) throw MathError("empty subgroup");
        int next = 0;
        for (auto& x : sl2) {
            if (table_[static_cast<size_t>(code(x))] >= 0) continue;
            for (auto& g : elems_) table_[static_cast<size_t>(code((g * x).mod(L_)))] = next;
            ++next;
        }
    }

    i64 L_;
    Pred pred_;
    std::string name_;
    std::vector<Mat2> elems_;
    size_t sl2_size_ = 0;
    std::vector<int> table_;
};

// ------------------------------------------------------------------ right cosets

/** Hermite normal form: delta = gamma * h with gamma in SL2(Z), h = [[a, b], [0, d]], a, d > 0, 0 <= b < d. */
inline std::pair<Mat2, Mat2> hermite(const Mat2& delta) {
    i64 n = delta.det();
    if (n <= 0) throw MathError("hermite: determinant must be positive");
    // left operations on the rows to clear the lower-left entry
    Mat2 h = delta, ops{};
    while (h.c != 0) {
        i64 q = h.a / h.c;
        // row1 -= q row2, then swap rows with a sign to keep det 1
        Mat2 e{1, -q, 0, 1};
        h = e * h;
        ops = e * ops;
        Mat2 s{0, -1, 1, 0};
        h = s * h;
        ops = s * ops;
    }
    if (h.a < 0) {
        Mat2 s{-1, 0, 0, -1};
        h = s * h;
        ops = s * ops;
    }
    i64 q = h.b >= 0 ? h.b / h.d : -((-h.b + h.d - 1) / h.d);
    Mat2 e{1, -q, 0, 1};
    h = e * h;
    ops = e * ops;
    // gamma = ops^{-1}
    Mat2 gamma{ops.d, -ops.b, -ops.c, ops.a};
    return {gamma, h};
}

/** Invariant of the right coset Gamma * delta: Hermite form plus the Gamma-coset of the SL2(Z) part. */
struct CosetKey {
    i64 a = 0, b = 0, d = 0;
    int cid = 0;
    auto operator<=>(const CosetKey&) const = default;
    std::string to_string() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d) + ";" + std::to_string(cid) + ")";
    }
};

inline CosetKey coset_key(const CongSubgroup& G, const Mat2& delta) {
    auto [gamma, h] = hermite(delta);
    return {h.a, h.b, h.d, G.coset_id(gamma)};
}

/** Integral lifts of the kernel of SL2(Z/M) -> SL2(Z/L), M = L n. */
inline std::vector<Mat2> congruence_kernel_lifts(i64 L, i64 n) {
    i64 M = L * n;
    std::vector<Mat2> out;
    for (i64 x = 0; x < n; ++x)
        for (i64 y = 0; y < n; ++y)
            for (i64 z = 0; z < n; ++z)
                for (i64 w = 0; w < n; ++w) {
                    Mat2 m{1 + L * x, L * y, L * z, 1 + L * w};
                    if (rsw::mod(m.det(), M) != 1 % M) continue;
                    out.push_back(lift_sl2(m, M));
                }
    return out;
}

/** Maximum number of products enumerated by coset_reps. */
inline constexpr size_t coset_enumeration_bound = 20'000'000;

/**
 * Representatives delta_i with Gamma alpha Gamma = disjoint union of Gamma delta_i. Enumerates
 * alpha * gamma for gamma over Gamma mod L det(alpha), which suffices since Gamma(L det alpha)
 * is contained in alpha^{-1} Gamma alpha.
 */
inline std::vector<Mat2> coset_reps(const CongSubgroup& G, const Mat2& alpha, std::vector<CosetKey>* keys = nullptr) {
    i64 n = alpha.det();
    if (n <= 0) throw MathError("coset_reps: determinant must be positive");
    size_t need = G.elements().size() * static_cast<size_t>(n * n * n * n);
    if (need > coset_enumeration_bound)
        throw MathError("enumeration bound exceeded: " + std::to_string(need) + " candidate products (bound " + std::to_string(coset_enumeration_bound) + ")");
    auto kernel = congruence_kernel_lifts(G.level(), n);
    std::map<CosetKey, Mat2> seen;
    for (auto& g : G.elements()) {
        Mat2 gl = lift_sl2(g, G.level());
        for (auto& k : kernel) {
            Mat2 delta = alpha * (gl * k);
            seen.emplace(coset_key(G, delta), delta);
        }
    }
    std::vector<Mat2> out;
    if (keys) keys->clear();
    for (auto& [k, m] : seen) {
        out.push_back(m);
        if (keys) keys->push_back(k);
    }
    return out;
}

/** [Gamma : Gamma cap alpha^{-1} Gamma alpha] by orbit-stabiliser on Gamma mod L det(alpha). */
inline size_t coset_count_by_stabilizer(const CongSubgroup& G, const Mat2& alpha) {
    i64 n = alpha.det();
    auto kernel = congruence_kernel_lifts(G.level(), n);
    size_t total = 0, stab = 0;
    Mat2 adj{alpha.d, -alpha.b, -alpha.c, alpha.a};  // n alpha^{-1}
    for (auto& g : G.elements()) {
        Mat2 gl = lift_sl2(g, G.level());
        for (auto& k : kernel) {
            Mat2 gam = gl * k;
            ++total;
            Mat2 conj = alpha * gam * adj;  // n alpha gamma alpha^{-1}
            if (conj.a % n || conj.b % n || conj.c % n || conj.d % n) continue;
            if (G.contains({conj.a / n, conj.b / n, conj.c / n, conj.d / n})) ++stab;
        }
    }
    return total / stab;
}

/** A double coset Gamma xi Gamma with its right-coset keys and a canonical label (the least key). */
struct DoubleCoset {
    Mat2 rep;
    std::vector<CosetKey> keys;
    CosetKey canon() const { return keys.front(); }
    size_t degree() const { return keys.size(); }
};

inline DoubleCoset double_coset(const CongSubgroup& G, const Mat2& xi) {
    DoubleCoset D;
    D.rep = xi;
    coset_reps(G, xi, &D.keys);
    return D;
}

inline bool same_double_coset(const CongSubgroup& G, const Mat2& x, const Mat2& y) {
    if (x.det() != y.det()) return false;
    auto D = double_coset(G, x);
    auto k = coset_key(G, y);
    return std::binary_search(D.keys.begin(), D.keys.end(), k);
}

struct DoubleCosetTerm {
    DoubleCoset coset;
    i64 multiplicity = 0;
};

/**
 * (Gamma alpha Gamma)(Gamma beta Gamma) = sum m_xi Gamma xi Gamma, with m_xi the number of pairs
 * (i, j) with Gamma alpha_i beta_j = Gamma xi; checked to be constant along each double coset.
 */
inline std::vector<DoubleCosetTerm> double_coset_multiply(const CongSubgroup& G, const Mat2& alpha, const Mat2& beta) {
    auto A = coset_reps(G, alpha), B = coset_reps(G, beta);
    std::map<CosetKey, std::pair<i64, Mat2>> counts;
    for (auto& x : A)
        for (auto& y : B) {
            Mat2 xy = x * y;
            auto [it, fresh] = counts.emplace(coset_key(G, xy), std::make_pair(i64(0), xy));
            (void)fresh;
            ++it->second.first;
        }
    std::vector<DoubleCosetTerm> out;
    std::set<CosetKey> done;
    i64 total = 0;
    for (auto& [k, cm] : counts) {
        if (done.count(k)) continue;
        DoubleCosetTerm t{double_coset(G, cm.second), cm.first};
        for (auto& kk : t.coset.keys) {
            auto it = counts.find(kk);
            if (it == counts.end() || it->second.first != t.multiplicity)
                throw MathError("double_coset_multiply: multiplicity not constant on " + cm.second.to_string());
            done.insert(kk);
        }
        total += t.multiplicity * static_cast<i64>(t.coset.degree());
        out.push_back(std::move(t));
    }
    if (total != static_cast<i64>(A.size() * B.size())) throw MathError("double_coset_multiply: degree bookkeeping failed");
    return out;
}

/** Formal Z-combination of double cosets keyed by canonical label. */
struct HeckeElt {
    std::map<CosetKey, std::pair<Mat2, i64>> terms;
    void add(const DoubleCoset& D, i64 c) {
        auto [it, fresh] = terms.emplace(D.canon(), std::make_pair(D.rep, i64(0)));
        (void)fresh;
        it->second.second += c;
        if (it->second.second == 0) terms.erase(it);
    }
    friend bool operator==(const HeckeElt& x, const HeckeElt& y) {
        if (x.terms.size() != y.terms.size()) return false;
        for (auto& [k, v] : x.terms) {
            auto it = y.terms.find(k);
            if (it == y.terms.end() || it->second.second != v.second) return false;
        }
        return true;
    }
};

inline HeckeElt hecke_basis(const CongSubgroup& G, const Mat2& alpha) {
    HeckeElt e;
    e.add(double_coset(G, alpha), 1);
    return e;
}

inline HeckeElt hecke_multiply(const CongSubgroup& G, const HeckeElt& x, const HeckeElt& y) {
    HeckeElt out;
    for (auto& [k1, v1] : x.terms)
        for (auto& [k2, v2] : y.terms)
            for (auto& t : double_coset_multiply(G, v1.first, v2.first)) out.add(t.coset, v1.second * v2.second * t.multiplicity);
    return out;
}

/** Outcome of T_p'^2 = S_p' + (p+1) <p^{-1}> R_p on Gamma1(N). */
struct HeckeIdentityResult {
    bool holds = false;
    i64 N = 0, p = 0;
    i64 mult_S = 0, mult_R = 0;
    size_t constituents = 0;
    std::string detail;
};

/** sigma in SL2(Z) with sigma = diag(p, p^{-1}) mod N, so sigma diag(p, p) represents <p^{-1}> R_p. */
inline Mat2 diamond_inverse_rep(i64 N, i64 p) {
    return lift_sl2(Mat2{rsw::mod(p, N), 0, 0, invmod(p, N)}, N);
}

inline HeckeIdentityResult hecke_identity_check(i64 N, i64 p) {
    if (!is_prime(p) || N % p == 0) throw MathError("need p prime not dividing N");
    auto G = CongSubgroup::gamma1(N);
    HeckeIdentityResult r;
    r.N = N;
    r.p = p;
    Mat2 T = diag(p, 1), S = diag(p * p, 1), R = diamond_inverse_rep(N, p) * diag(p, p);
    auto prod = double_coset_multiply(G, T, T);
    r.constituents = prod.size();
    auto DS = double_coset(G, S), DR = double_coset(G, R);
    bool other = false;
    for (auto& t : prod) {
        if (t.coset.canon() == DS.canon()) r.mult_S = t.multiplicity;
        else if (t.coset.canon() == DR.canon()) r.mult_R = t.multiplicity;
        else other = true;
    }
    r.holds = !other && r.mult_S == 1 && r.mult_R == p + 1;
    r.detail = "Gamma1(" + std::to_string(N) + "), p = " + std::to_string(p) + ": T'^2 = " + std::to_string(r.mult_S) + " S' + " +
               std::to_string(r.mult_R) + " <p^-1>R" + (other ? " + other cosets" : "") + " (degrees " + std::to_string(DS.degree()) + ", " +
               std::to_string(DR.degree()) + ")";
    return r;
}

// ------------------------------------------------------------------ Iwahori cells

/** Rational 2x2 matrix. */
struct QMat2 {
    Rational a = 1, b = 0, c = 0, d = 1;
    Rational det() const { return a * d - b * c; }
    friend QMat2 operator*(const QMat2& x, const QMat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const QMat2& x, const QMat2& y) { return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d; }
    QMat2 inverse() const {
        Rational D = det();
        if (D == 0) throw MathError("singular matrix");
        return {d / D, -b / D, -c / D, a / D};
    }
};

/** Cell of the Iwahori decomposition: diag(p^j, p^{-j}) or [[0, -p^{-j}], [p^j, 0]]. */
struct IwahoriCell {
    enum Kind { diagonal, antidiagonal } kind = diagonal;
    long j = 0;
    friend bool operator==(const IwahoriCell&, const IwahoriCell&) = default;
    auto operator<=>(const IwahoriCell&) const = default;
    std::string to_string() const { return std::string(kind == diagonal ? "diag" : "antidiag") + "(" + std::to_string(j) + ")"; }
};

inline QMat2 iwahori_representative(const IwahoriCell& c, i64 p) {
    Rational pj = c.j >= 0 ? Rational(Integer(ipow(p, static_cast<int>(c.j)))) : Rational(1) / Rational(Integer(ipow(p, static_cast<int>(-c.j))));
    if (c.kind == IwahoriCell::diagonal) return {pj, 0, 0, 1 / pj};
    return {0, -1 / pj, pj, 0};
}

namespace detail {
inline long vp(const Rational& x, i64 p) { return valuation(x, p); }
constexpr long vinf = 1L << 40;
inline long vz(const Rational& x, i64 p) { return x == 0 ? vinf : vp(x, p); }
}  // namespace detail

/**
 * U-double-coset of g in SL2(Q), U the Iwahori subgroup with upper-right entry in pZ_p. Two-sided
 * reduction by row2 += t row1, row1 += p t row2, col1 += t col2, col2 += p t col1 (t p-integral).
 */
inline IwahoriCell iwahori_invariant(const QMat2& g, i64 p) {
    using detail::vz;
    if (g.det() != 1) throw MathError("iwahori_invariant: matrix not in SL2(Q)");
    Rational a = g.a, b = g.b, c = g.c, d = g.d;
    auto rowop2 = [&](const Rational& t) { c += t * a; d += t * b; };           // row2 += t row1
    auto rowop1 = [&](const Rational& t) { a += p * t * c; b += p * t * d; };   // row1 += p t row2
    auto colop1 = [&](const Rational& t) { a += t * b; c += t * d; };           // col1 += t col2
    auto colop2 = [&](const Rational& t) { b += p * t * a; d += p * t * c; };   // col2 += p t col1
    auto done_diag = [&]() {
        if (b != 0 || c != 0) throw MathError("iwahori reduction failed");
        return IwahoriCell{IwahoriCell::diagonal, detail::vp(a, p)};
    };
    auto done_anti = [&]() {
        if (a != 0 || d != 0) throw MathError("iwahori reduction failed");
        return IwahoriCell{IwahoriCell::antidiagonal, detail::vp(c, p)};
    };
    if (vz(a, p) <= vz(c, p)) {
        if (c != 0) rowop2(-c / a);
        if (b == 0) return done_diag();
        if (vz(b, p) >= vz(a, p) + 1) { colop2(-b / (Rational(p) * a)); return done_diag(); }
        if (vz(b, p) >= vz(d, p) + 1) { rowop1(-b / (Rational(p) * d)); return done_diag(); }
        colop1(-a / b);
        if (d != 0) rowop2(-d / b);
        return done_anti();
    }
    rowop1(-a / (Rational(p) * c));
    if (d == 0) return done_anti();
    if (vz(d, p) >= vz(c, p) + 1) { colop2(-d / (Rational(p) * c)); return done_anti(); }
    if (vz(d, p) >= vz(b, p)) { rowop2(-d / b); return done_anti(); }
    colop1(-c / d);
    rowop1(-b / (Rational(p) * d));
    return done_diag();
}

/**
 * [U : U cap alpha^{-1} U alpha] = p^{r+s-1} where U cap alpha^{-1} U alpha = {p^r | b, p^s | c},
 * read off from the conjugation of the cell representative.
 */
inline Integer iwahori_index(const QMat2& alpha, i64 p) {
    IwahoriCell cell = iwahori_invariant(alpha, p);
    QMat2 w = iwahori_representative(cell, p), wi = w.inverse();
    // conjugate each elementary matrix E_ij: w E_ij w^{-1} has a single nonzero entry
    std::array<long, 4> lower{0, 0, 0, 0};  // required valuation of x_11, x_12, x_21, x_22
    for (int pos = 0; pos < 4; ++pos) {
        QMat2 E{pos == 0 ? 1 : 0, pos == 1 ? 1 : 0, pos == 2 ? 1 : 0, pos == 3 ? 1 : 0};
        QMat2 C = w * E * wi;
        std::array<Rational, 4> e{C.a, C.b, C.c, C.d};
        int nz = -1;
        for (int k = 0; k < 4; ++k)
            if (e[k] != 0) nz = k;
        long need = nz == 1 ? 1 : 0;  // U needs the upper-right entry in p Z_p
        lower[pos] = need - detail::vp(e[nz], p);
    }
    if (lower[0] > 0 || lower[3] > 0) throw MathError("iwahori_index: diagonal constraint on a unit");
    long r = std::max(1L, lower[1]), s = std::max(0L, lower[2]);
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(r + s - 1));
    return out;
}

/** Four representatives of the Iwahori cells inside K diag(p^{-j}, p^j) K, j >= 1. */
inline std::array<QMat2, 4> iwahori_cartan_cells(long j, i64 p) {
    return {iwahori_representative({IwahoriCell::diagonal, -j}, p), iwahori_representative({IwahoriCell::antidiagonal, j}, p),
            iwahori_representative({IwahoriCell::diagonal, j}, p), iwahori_representative({IwahoriCell::antidiagonal, -j}, p)};
}

}  // namespace rsw
