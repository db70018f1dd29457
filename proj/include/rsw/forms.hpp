#pragma once
/**
 * @file forms.hpp
 * @brief Eigenform coefficient tables: Dirichlet characters, file ingestion with invariant
 *        checks, the level-11 eta-product oracle, p-stabilisation, Hecke-root ratios,
 *        congruence scans and the hypothesis checklist for a pair of weight-2 newforms.
 */

#include <algorithm>
#include <complex>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rsw/coeff_traits.hpp"
#include "rsw/parse.hpp"

namespace rsw {

/** Malformed data file; carries the 1-based line number (0 if not line-specific). */
struct DataError : std::runtime_error {
    DataError(const std::string& msg, int line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}
    int line;
};

/** Coefficient table violating multiplicativity or the Hecke recursion. */
struct InvariantViolation : DataError {
    InvariantViolation(const std::string& msg, i64 w1, i64 w2) : DataError(msg), witness{w1, w2} {}
    std::pair<i64, i64> witness;
};

// ------------------------------------------------------------------ characters

/** Dirichlet character mod M with values in a number field; zero off the units. */
class DirichletChar {
public:
    DirichletChar() = default;

    static DirichletChar trivial(const TowerPtr& K) {
        return from_generators(1, {}, K);
    }

    /** Values on generators of (Z/M)^x; the table is filled by closure and checked for consistency. */
    static DirichletChar from_generators(i64 M, const std::vector<std::pair<i64, TowerElt>>& gens, const TowerPtr& K) {
        if (M < 1) throw MathError("character modulus must be positive");
        DirichletChar c;
        c.M_ = M;
        c.K_ = K;
        c.gens_ = gens;
        std::vector<std::optional<TowerElt>> tab(static_cast<size_t>(M));
        tab[static_cast<size_t>(mod(1, M))] = TowerElt(K, 1);
        std::deque<i64> todo{mod(1, M)};
        while (!todo.empty()) {
            i64 u = todo.front();
            todo.pop_front();
            for (auto& [g, v] : gens) {
                if (std::gcd(mod(g, M), M) != 1) throw MathError("character generator " + std::to_string(g) + " is not a unit mod " + std::to_string(M));
                i64 w = mod(u * g, M);
                TowerElt val = *tab[static_cast<size_t>(u)] * v;
                auto& slot = tab[static_cast<size_t>(w)];
                if (!slot) {
                    slot = val;
                    todo.push_back(w);
                } else if (*slot != val) {
                    throw MathError("inconsistent character values at " + std::to_string(w) + " mod " + std::to_string(M));
                }
            }
        }
        for (i64 u : units_mod(M))
            if (!tab[static_cast<size_t>(mod(u, M))]) throw MathError("character generators do not generate (Z/" + std::to_string(M) + ")^x");
        c.tab_.clear();
        for (i64 r = 0; r < M; ++r) c.tab_.push_back(tab[static_cast<size_t>(r)] ? *tab[static_cast<size_t>(r)] : TowerElt(K, 0));
        if (M == 1) c.tab_[0] = TowerElt(K, 1);
        return c;
    }

    i64 modulus() const { return M_; }
    const TowerPtr& field() const { return K_; }
    const std::vector<std::pair<i64, TowerElt>>& generators() const { return gens_; }
    TowerElt operator()(i64 n) const {
        if (M_ == 1) return TowerElt(K_, 1);
        return tab_[static_cast<size_t>(mod(n, M_))];
    }
    bool is_trivial() const {
        for (i64 u : units_mod(M_))
            if ((*this)(u) != TowerElt(K_, 1)) return false;
        return true;
    }
    /** Complex value at the first embedding of the value field. */
    std::complex<double> complex_value(i64 n) const {
        auto e = (*this)(n).embed_all();
        return e.at(0);
    }

private:
    i64 M_ = 1;
    TowerPtr K_;
    std::vector<std::pair<i64, TowerElt>> gens_;
    std::vector<TowerElt> tab_;
};

// ------------------------------------------------------------------ eigenforms

struct Eigenform {
    int level = 1;
    int weight = 2;
    DirichletChar chi;
    TowerPtr field;
    std::string field_text = "t";
    std::vector<std::pair<i64, std::string>> chargen_text;
    std::vector<TowerElt> a;            ///< a[0] unused (zero); a[1..bound]
    std::vector<std::string> comments;  ///< text after '#', in file order

    int bound() const { return static_cast<int>(a.size()) - 1; }
    const TowerElt& coeff(i64 n) const {
        if (n < 1 || n > bound()) throw MathError("coefficient a_" + std::to_string(n) + " not available (bound " + std::to_string(bound()) + ")");
        return a[static_cast<size_t>(n)];
    }
    bool rational_field() const { return field->dim() == 1; }

    /** Multiplicativity and Hecke recursions on the stored range. */
    void validate() const {
        if (bound() < 1) throw InvariantViolation("empty coefficient table", 0, 0);
        if (a[1] != TowerElt(field, 1)) throw InvariantViolation("a_1 != 1", 1, 1);
        TowerElt zero(field, 0);
        for (i64 n = 2; n <= bound(); ++n) {
            auto fac = factorize(n);
            i64 p = fac.begin()->first;
            i64 pe = ipow(p, fac.begin()->second);
            i64 rest = n / pe;
            if (rest > 1) {
                if (coeff(n) != coeff(pe) * coeff(rest))
                    throw InvariantViolation("multiplicativity fails: a_" + std::to_string(n) + " != a_" + std::to_string(pe) + " a_" + std::to_string(rest) + " at (" + std::to_string(pe) + "," + std::to_string(rest) + ")", pe, rest);
                continue;
            }
            // prime power p^r, r >= 2
            int r = fac.begin()->second;
            if (r < 2) continue;
            TowerElt expect = level % p == 0
                                  ? coeff(n / p) * coeff(p)
                                  : coeff(p) * coeff(n / p) - coeff(n / (p * p)) * chi(p) * Rational(Integer(ipow(p, weight - 1)));
            if (coeff(n) != expect)
                throw InvariantViolation("Hecke recursion fails at p=" + std::to_string(p) + ", r=" + std::to_string(r - 1) + " (a_" + std::to_string(n) + ")", p, r - 1);
        }
    }

    std::string print() const {
        std::ostringstream os;
        for (auto& c : comments) os << "#" << c << "\n";
        os << "level=" << level << " weight=" << weight << " charmod=" << chi.modulus();
        if (!chargen_text.empty()) {
            os << " chargen";
            for (auto& [g, v] : chargen_text) os << " " << g << ":" << v;
        }
        os << " field=" << field_text << "\n";
        for (i64 n = 1; n <= bound(); ++n) os << n << ": " << coeff(n).to_string() << "\n";
        return os.str();
    }

    friend bool operator==(const Eigenform& x, const Eigenform& y) {
        if (x.level != y.level || x.weight != y.weight || x.bound() != y.bound() || x.comments != y.comments) return false;
        if (x.field->defining_upoly() != y.field->defining_upoly() || x.chi.modulus() != y.chi.modulus()) return false;
        for (i64 n = 1; n <= x.bound(); ++n)
            if (x.a[n].poly().to_string() != y.a[n].poly().to_string()) return false;
        for (i64 u : units_mod(x.chi.modulus()))
            if (x.chi(u).poly().to_string() != y.chi(u).poly().to_string()) return false;
        return true;
    }
};

namespace detail {
inline int parse_int_field(const std::string& key, const std::string& v, int line) {
    try {
        size_t used = 0;
        long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw DataError("bad integer for " + key + ": '" + v + "'", line);
    }
}
inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}
}  // namespace detail

/** Parse the line-oriented eigenform format; validates the invariants unless told otherwise. */
inline Eigenform parse_eigenform(std::istream& in, bool validate = true) {
    Eigenform f;
    std::string line;
    int ln = 0;
    bool header = false;
    i64 charmod = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') {
            if (header) continue;  // comments after the header are ignored
            f.comments.push_back(line.substr(1));
            continue;
        }
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (!header) {
            auto fpos = t.find("field=");
            if (fpos == std::string::npos) throw DataError("header lacks field=", ln);
            f.field_text = detail::trim(t.substr(fpos + 6));
            std::istringstream hs(t.substr(0, fpos));
            std::string tok;
            bool in_gens = false;
            bool seen_level = false, seen_weight = false;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (tok == "chargen") { in_gens = true; continue; }
                if (eq != std::string::npos) {
                    in_gens = false;
                    std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
                    if (k == "level") { f.level = detail::parse_int_field(k, v, ln); seen_level = true; }
                    else if (k == "weight") { f.weight = detail::parse_int_field(k, v, ln); seen_weight = true; }
                    else if (k == "charmod") charmod = detail::parse_int_field(k, v, ln);
                    else throw DataError("unknown header key '" + k + "'", ln);
                    continue;
                }
                if (!in_gens) throw DataError("unexpected header token '" + tok + "'", ln);
                auto colon = tok.find(':');
                if (colon == std::string::npos) throw DataError("chargen entry must be a:value, got '" + tok + "'", ln);
                f.chargen_text.emplace_back(detail::parse_int_field("chargen", tok.substr(0, colon), ln), tok.substr(colon + 1));
            }
            if (!seen_level || !seen_weight) throw DataError("header needs level= and weight=", ln);
            if (f.level < 1 || f.weight < 1 || charmod < 1) throw DataError("level, weight and charmod must be positive", ln);
            if (f.level % charmod != 0) throw DataError("charmod must divide the level", ln);
            UPoly h;
            try {
                h = parse_upoly(f.field_text, "t");
            } catch (const std::exception& e) {
                throw DataError(std::string("field polynomial: ") + e.what(), ln);
            }
            if (h.degree() < 1 || h.lead() != 1) throw DataError("field polynomial must be monic of degree >= 1", ln);
            f.field = TowerRing::number_field(h, "t");
            std::vector<std::pair<i64, TowerElt>> gens;
            try {
                for (auto& [g, v] : f.chargen_text) gens.emplace_back(g, TowerElt::parse(f.field, v));
                f.chi = DirichletChar::from_generators(charmod, gens, f.field);
            } catch (const std::exception& e) {
                throw DataError(std::string("character: ") + e.what(), ln);
            }
            f.a.push_back(TowerElt(f.field, 0));
            header = true;
            continue;
        }
        auto colon = t.find(':');
        if (colon == std::string::npos) throw DataError("coefficient line must be 'n: value'", ln);
        int n = detail::parse_int_field("index", detail::trim(t.substr(0, colon)), ln);
        if (n != f.bound() + 1) throw DataError("coefficient index " + std::to_string(n) + " out of sequence (expected " + std::to_string(f.bound() + 1) + ")", ln);
        try {
            f.a.push_back(TowerElt::parse(f.field, detail::trim(t.substr(colon + 1))));
        } catch (const std::exception& e) {
            throw DataError(std::string("coefficient a_") + std::to_string(n) + ": " + e.what(), ln);
        }
    }
    if (!header) throw DataError("missing header line");
    if (validate) f.validate();
    return f;
}

inline Eigenform parse_eigenform_string(const std::string& s, bool validate = true) {
    std::istringstream in(s);
    return parse_eigenform(in, validate);
}

/** Read and validate an eigenform file. */
inline Eigenform ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_eigenform(in, true);
}

/** Default directory of the bundled coefficient files. */
inline std::string default_data_dir() {
#ifdef RSW_DATA_DIR
    return RSW_DATA_DIR;
#else
    return "data";
#endif
}

// ------------------------------------------------------------------ oracle

/** Coefficients of q prod_{n>=1} (1 - q^n)^2 (1 - q^{11n})^2, indices 0..B. */
inline std::vector<Integer> eta_oracle_level11(int B) {
    std::vector<Integer> c(static_cast<size_t>(B + 1));
    if (B >= 1) c[1] = 1;
    for (int n = 1; n <= B; ++n)
        for (int m : {n, 11 * n}) {
            if (m > B) continue;
            for (int rep = 0; rep < 2; ++rep)
                for (int i = B; i >= m; --i) c[i] -= c[i - m];
        }
    return c;
}

// ------------------------------------------------------------------ primes above p

/** A prime of Q[t]/(h) above p: either degree one (t = r mod p, Hensel-lifted) or the inert prime. */
struct PrimeAbove {
    i64 p = 0;
    bool degree_one = true;
    i64 root = 0;        ///< residue of t when degree_one
    Integer lifted;      ///< root lifted to precision p^prec
    int prec = 0;
    int field_degree = 1;
    UPoly factor;        ///< irreducible factor of h mod p (monic, coefficients in [0,p))
    std::string label() const {
        if (degree_one) return "(" + std::to_string(p) + ", t - " + std::to_string(root) + ")";
        return "(" + std::to_string(p) + ", " + factor.to_string("t") + ")";
    }
};

namespace detail {
inline i64 eval_mod(const UPoly& h, i64 x, i64 p) {
    i64 s = 0;
    for (int i = h.degree(); i >= 0; --i) {
        Rational c = h.coeff(i);
        if (mpz_divisible_ui_p(c.get_den_mpz_t(), static_cast<unsigned long>(p))) throw MathError("coefficient not p-integral");
        Integer num = c.get_num() % p, den = c.get_den() % p;
        i64 cv = mod(num.get_si(), p), dv = mod(den.get_si(), p);
        s = mod(mulmod(s, x, p) + mulmod(cv, invmod(dv, p), p), p);
    }
    return s;
}
/** Reduce a rational polynomial mod p to a UPoly with coefficients in [0,p). */
inline UPoly reduce_mod(const UPoly& h, i64 p) {
    std::vector<Rational> c;
    for (int i = 0; i <= h.degree(); ++i) {
        Rational x = h.coeff(i);
        if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p))) throw MathError("coefficient not p-integral");
        Integer n = x.get_num() % p;
        i64 v = mulmod(mod(n.get_si(), p), invmod(mod(Integer(x.get_den() % p).get_si(), p), p), p);
        c.push_back(Rational(v));
    }
    return UPoly(c);
}
/** Remainder of a by b over F_p (b monic mod p). */
inline UPoly rem_mod(UPoly a, const UPoly& b, i64 p) {
    a = reduce_mod(a, p);
    int db = b.degree();
    std::vector<Rational> c(a.degree() + 1 > 0 ? static_cast<size_t>(a.degree() + 1) : 1);
    for (int i = 0; i <= a.degree(); ++i) c[i] = a.coeff(i);
    for (int i = static_cast<int>(c.size()) - 1; i >= db; --i) {
        i64 lc = mod(Integer(c[i].get_num()).get_si(), p);
        if (lc == 0) continue;
        for (int j = 0; j <= db; ++j) {
            i64 bj = mod(Integer(b.coeff(j).get_num()).get_si(), p);
            c[i - db + j] = Rational(mod(Integer(c[i - db + j].get_num()).get_si() - mulmod(lc, bj, p), p));
        }
    }
    c.resize(static_cast<size_t>(std::max(db, 1)));
    return UPoly(c);
}
}  // namespace detail

/** Primes above p in Q[t]/(h), ordered by residue of t (degree-one primes first). deg h <= 3 for non-split cases. */
inline std::vector<PrimeAbove> primes_above(const UPoly& h, i64 p, int prec = 40) {
    if (!is_prime(p)) throw MathError("primes_above needs p prime");
    std::vector<PrimeAbove> out;
    UPoly hp = detail::reduce_mod(h, p);
    UPoly rest = hp;
    int removed = 0;
    for (i64 r = 0; r < p; ++r) {
        if (detail::eval_mod(h, r, p) != 0) continue;
        PrimeAbove P;
        P.p = p;
        P.root = r;
        P.prec = prec;
        P.field_degree = h.degree();
        P.factor = UPoly(std::vector<Rational>{Rational(mod(-r, p)), 1});
        // Hensel lift when the root is simple
        UPoly dh = h.derivative();
        if (detail::eval_mod(dh, r, p) == 0) throw MathError("p = " + std::to_string(p) + " ramifies in the coefficient field; valuations unsupported");
        Integer pk = 1, x = r;
        Integer pM;
        mpz_ui_pow_ui(pM.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(prec));
        for (int it = 0; it < 8; ++it) {  // quadratic convergence: 2^8 > prec
            Rational hv = h.eval(Rational(x)), dv = dh.eval(Rational(x));
            // x <- x - h(x)/h'(x) mod p^prec
            Integer num = hv.get_num() * dv.get_den(), den = hv.get_den() * dv.get_num();
            Integer dinv;
            den %= pM;
            if (den < 0) den += pM;
            if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pM.get_mpz_t()) == 0) throw MathError("Hensel lifting failed");
            x = (x - num * dinv) % pM;
            if (x < 0) x += pM;
        }
        (void)pk;
        P.lifted = x;
        out.push_back(P);
        ++removed;
    }
    if (removed < h.degree()) {
        if (removed == 0 && h.degree() <= 3) {
            PrimeAbove P;
            P.p = p;
            P.degree_one = false;
            P.field_degree = h.degree();
            P.factor = hp;
            out.push_back(P);
        } else if (removed == 0 || h.degree() - removed > 3) {
            throw MathError("splitting of p = " + std::to_string(p) + " not supported for this field");
        } else {
            // linear factors plus an irreducible cofactor of degree 2 (deg h <= 3): cofactor prime
            UPoly cof = hp;
            for (auto& P : out) cof = UPoly::divmod(cof, P.factor).first;
            PrimeAbove Q;
            Q.p = p;
            Q.degree_one = false;
            Q.field_degree = h.degree();
            Q.factor = detail::reduce_mod(cof, p);
            out.push_back(Q);
        }
    }
    return out;
}

/** True iff x maps to zero in the residue field of P (x p-integral). */
inline bool residue_is_zero(const TowerElt& x, const PrimeAbove& P) {
    std::vector<Rational> v = x.tower()->to_vector(x.poly());
    UPoly xp(v);
    if (xp.is_zero()) return true;
    UPoly r = detail::rem_mod(xp, P.factor, P.p);
    for (int i = 0; i <= r.degree(); ++i)
        if (mod(Integer(r.coeff(i).get_num()).get_si(), P.p) != 0) return false;
    return true;
}

/** v_P(x) normalised by v(p) = 1; +infinity reported as nullopt. Unramified primes only. */
inline std::optional<Rational> valuation_at(const TowerElt& x, const PrimeAbove& P) {
    if (x.is_zero()) return std::nullopt;
    UPoly xp(x.tower()->to_vector(x.poly()));
    if (P.degree_one) {
        Integer D = 1;
        for (int i = 0; i <= xp.degree(); ++i) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), xp.coeff(i).get_den_mpz_t());
        long vd = valuation(Rational(D), P.p);
        Integer s = 0, pw = 1, pM;
        mpz_ui_pow_ui(pM.get_mpz_t(), static_cast<unsigned long>(P.p), static_cast<unsigned long>(P.prec));
        for (int i = 0; i <= xp.degree(); ++i) {
            Rational c = xp.coeff(i) * Rational(D);
            s += c.get_num() * pw;
            pw = (pw * P.lifted) % pM;
        }
        s %= pM;
        if (s == 0) throw MathError("valuation exceeds working precision p^" + std::to_string(P.prec));
        return Rational(valuation(Rational(s), P.p) - vd);
    }
    // inert prime: v = v_p(Norm x) / deg
    Rational nrm = x.charpoly().coeff(0);
    if (P.field_degree % 2 == 1) nrm = -nrm;
    return Rational(valuation(nrm, P.p)) / Rational(P.field_degree);
}

// ------------------------------------------------------------------ stabilisation

struct Stabilization {
    i64 p = 0;
    int weight = 2;
    TowerPtr ext;             ///< K[X]/(X^2 - a_p X + p^{k-1} chi(p)), variables t, X
    TowerElt ap, chip;        ///< in the coefficient field
    TowerElt alpha, beta;     ///< alpha = X, beta = a_p - X (in ext)
    Rational v_alpha, v_beta; ///< valuations at the chosen prime, v(p) = 1
    bool ordinary = false;
    std::string prime_choice;
};

/** X^2 - a_p X + p^{k-1} chi(p) as a string in X over the coefficient field. */
inline std::string hecke_polynomial_string(const Eigenform& f, i64 p) {
    TowerElt c = f.chi(p) * Rational(Integer(ipow(p, f.weight - 1)));
    return "X^2 - (" + f.coeff(p).to_string() + ")*X + (" + c.to_string() + ")";
}

/**
 * Roots of the Hecke polynomial at p in K[X]/(Hecke polynomial). alpha = X is taken to be the
 * root of smaller valuation at the prime above p chosen by `prime_index` (default: smallest residue of t).
 */
inline Stabilization p_stabilize(const Eigenform& f, i64 p, size_t prime_index = 0) {
    if (!is_prime(p)) throw MathError("p_stabilize needs p prime");
    if (f.level % p == 0) throw MathError("p divides the level: p-stabilisation needs a good prime");
    if (p > f.bound()) throw MathError("a_p not available");
    Stabilization st;
    st.p = p;
    st.weight = f.weight;
    st.ap = f.coeff(p);
    st.chip = f.chi(p);
    TowerElt c = st.chip * Rational(Integer(ipow(p, f.weight - 1)));
    std::string rel = "X^2 - (" + st.ap.to_string() + ")*X + (" + c.to_string() + ")";
    st.ext = TowerRing::make({"t", "X"}, {f.field_text, rel});
    TowerElt X = TowerElt::var(st.ext, 1);
    TowerElt apx = st.ap.map_to(st.ext, {TowerElt::var(st.ext, 0)});
    st.alpha = X;
    st.beta = apx - X;
    // distinct roots: discriminant nonzero
    TowerElt disc = st.ap * st.ap - c * Rational(4);
    if (disc.is_zero()) throw MathError("Hecke polynomial has a repeated root at p = " + std::to_string(p));

    auto primes = primes_above(f.field->defining_upoly(), p);
    if (prime_index >= primes.size()) throw MathError("prime index out of range");
    const PrimeAbove& P = primes[prime_index];
    st.prime_choice = "prime " + P.label() + " of the coefficient field (index " + std::to_string(prime_index) + " in order of residues)";
    Rational half = Rational(f.weight - 1) / 2;
    auto va = valuation_at(st.ap, P);
    Rational vc = Rational(f.weight - 1);  // chi(p) is a unit
    if (!va || *va >= half) {
        st.v_alpha = st.v_beta = half;
    } else {
        st.v_alpha = *va;
        st.v_beta = vc - *va;
    }
    st.ordinary = (st.v_alpha == 0);
    if (st.ordinary) st.prime_choice += "; alpha is the unit root (X = a_p mod the prime above)";
    return st;
}

// ------------------------------------------------------------------ ratio of Hecke roots

struct RatioResult {
    UPoly poly;                  ///< minimal polynomial of alpha/gamma at the reference embedding
    MinPolyResult full;          ///< minimal polynomial of multiplication by alpha/gamma on the compositum ring
    bool root_of_unity = false;
    i64 order = 0;
    std::string note;
};

/**
 * Minimal polynomial of alpha_f / gamma_g and whether the ratio is a root of unity. When the
 * compositum splits, the factor vanishing at complex embedding `embedding` is used.
 */
inline RatioResult ratio_minpoly_and_root_of_unity(const Stabilization& sf, const Stabilization& sg, size_t embedding = 0) {
    if (sf.p != sg.p) throw MathError("stabilisations at different primes");
    if (sg.alpha.is_zero()) throw MathError("gamma is zero");
    // compositum: s (field of f), u (field of g), X, Y
    const MPoly& rf = sf.ext->relation(0);
    const MPoly& rg = sg.ext->relation(0);
    RingPtr R = make_ring({"s", "u", "X", "Y"});
    auto lift = [&](const MPoly& m, int first, int second) {
        std::vector<MPoly> im;
        im.push_back(MPoly::var(R, first));
        im.push_back(MPoly::var(R, second));
        return m.substitute(im);
    };
    std::vector<MPoly> rels{lift(rf, 0, 2), lift(rg, 1, 3), lift(sf.ext->relation(1), 0, 2), lift(sg.ext->relation(1), 1, 3)};
    auto T = std::make_shared<const TowerRing>(R, rels);
    TowerElt X = TowerElt::var(T, 2), Y = TowerElt::var(T, 3);
    TowerElt ratio = X * Y.inv();
    RatioResult res;
    res.full = ratio.minpoly();
    if (!res.full.warning) {
        res.poly = res.full.poly;
    } else {
        // the compositum is not a field: take the factor vanishing at the first complex embedding
        auto z = ratio.embed_all().at(embedding);
        double best = 1e300;
        for (auto& [fac, mult] : res.full.factors) {
            (void)mult;
            std::complex<double> v = 0;
            for (int i = fac.degree(); i >= 0; --i) v = v * z + fac.coeff(i).get_d();
            if (std::abs(v) < best) { best = std::abs(v); res.poly = fac; }
        }
        res.note = "compositum is not a field; factor selected at the first complex embedding";
    }
    auto [ru, M] = divides_cyclotomic(res.poly);
    res.root_of_unity = ru;
    res.order = M;
    return res;
}

// ------------------------------------------------------------------ congruence scan

struct ScanEntry {
    i64 p = 0;
    std::string prime;      ///< label of the prime above p
    bool flagged = false;   ///< no witness found up to the bound
    i64 witness = 0;        ///< v with a_v(f) != +-a_v(g) mod the prime
    std::string detail;
};

namespace detail {
/** Common coefficient field of f and g (one must contain the other trivially). */
inline TowerPtr joint_field(const Eigenform& f, const Eigenform& g) {
    if (f.rational_field()) return g.field;
    if (g.rational_field()) return f.field;
    if (f.field->defining_upoly() == g.field->defining_upoly()) return f.field;
    throw MathError("congruence scan needs nested coefficient fields (Q or identical defining polynomials)");
}
inline TowerElt to_joint(const TowerElt& x, const TowerPtr& J) {
    if (x.tower()->dim() == 1) return TowerElt(J, x.rational_value());
    return x.map_to(J, {TowerElt::var(J, 0)});
}
inline bool is_one(const TowerElt& x) { return x == TowerElt(x.tower(), 1); }
}  // namespace detail

/**
 * For each prime p in [lo, hi] and each prime above p of the joint coefficient field, look for
 * a prime v <= B, v not dividing the levels, with chi(v) = 1 for every splitting character and
 * a_v(f) != +-a_v(g) mod the prime. Primes without a witness are flagged.
 */
inline std::vector<ScanEntry> congruence_prime_scan(const Eigenform& f, const Eigenform& g,
                                                    const std::vector<DirichletChar>& split_chars, int B, i64 lo, i64 hi) {
    if (B > f.bound() || B > g.bound()) throw MathError("scan bound exceeds stored coefficients");
    TowerPtr J = detail::joint_field(f, g);
    UPoly h = J->defining_upoly();
    std::vector<i64> vs;
    for (i64 v : primes_upto(B)) {
        if (f.level % v == 0 || g.level % v == 0) continue;
        bool ok = true;
        for (auto& c : split_chars)
            if (!detail::is_one(c(v))) { ok = false; break; }
        if (ok) vs.push_back(v);
    }
    std::vector<ScanEntry> out;
    for (i64 p : primes_upto(hi)) {
        if (p < lo) continue;
        std::vector<PrimeAbove> Ps;
        try {
            Ps = primes_above(h, p);
        } catch (const MathError& e) {
            // ramified: work with the radical (distinct roots / the factor itself)
            PrimeAbove P;
            P.p = p;
            P.degree_one = false;
            UPoly hp = detail::reduce_mod(h, p);
            P.factor = hp;
            for (i64 r = 0; r < p; ++r)
                if (detail::eval_mod(h, r, p) == 0) { P.factor = UPoly(std::vector<Rational>{Rational(mod(-r, p)), 1}); P.degree_one = true; P.root = r; break; }
            Ps.push_back(P);
        }
        for (auto& P : Ps) {
            ScanEntry e;
            e.p = p;
            e.prime = P.label();
            e.flagged = true;
            for (i64 v : vs) {
                TowerElt x = detail::to_joint(f.coeff(v), J), y = detail::to_joint(g.coeff(v), J);
                if (!residue_is_zero(x - y, P) && !residue_is_zero(x + y, P)) {
                    e.flagged = false;
                    e.witness = v;
                    e.detail = "a_" + std::to_string(v) + "(f) = " + f.coeff(v).to_string() + ", a_" + std::to_string(v) + "(g) = " + g.coeff(v).to_string();
                    break;
                }
            }
            if (e.flagged) e.detail = "no witness among " + std::to_string(vs.size()) + " admissible v <= " + std::to_string(B);
            out.push_back(e);
        }
    }
    return out;
}

// ------------------------------------------------------------------ hypothesis checklist

struct HypothesisItem {
    std::string id;
    std::string statement;
    std::string status;  ///< PASS, FAIL or EXTERNAL
    std::string detail;
};

inline std::vector<HypothesisItem> hypothesis_report(const Eigenform& f, const Eigenform& g, i64 p, size_t prime_index = 0,
                                                     int scan_bound = 100) {
    std::vector<HypothesisItem> out;
    auto add = [&](std::string id, std::string st, bool ok, std::string det) {
        out.push_back({std::move(id), std::move(st), ok ? "PASS" : "FAIL", std::move(det)});
    };
    out.push_back({"(i)", "neither form has CM", "EXTERNAL", "asserted by the user"});
    out.push_back({"(ii)", "f is not a twist of g", "EXTERNAL", "asserted by the user"});
    {
        bool nontriv = false;
        i64 M = std::lcm(f.chi.modulus(), g.chi.modulus());
        for (i64 u : units_mod(M))
            if (std::abs(f.chi.complex_value(u) * g.chi.complex_value(u) - 1.0) > 1e-9) { nontriv = true; break; }
        add("(iii)", "eps_f eps_g is non-trivial", nontriv, "moduli " + std::to_string(f.chi.modulus()) + ", " + std::to_string(g.chi.modulus()));
    }
    add("(iv)", "p >= 5", p >= 5, "p = " + std::to_string(p));
    bool good = f.level % p != 0 && g.level % p != 0;
    add("(v)", "p does not divide the levels", good, "levels " + std::to_string(f.level) + ", " + std::to_string(g.level));
    TowerPtr J = detail::joint_field(f, g);
    UPoly h = J->defining_upoly();
    std::vector<PrimeAbove> Ps;
    std::string split_detail;
    bool split = false;
    try {
        Ps = primes_above(h, p);
        split = static_cast<int>(Ps.size()) == h.degree() && std::all_of(Ps.begin(), Ps.end(), [](const PrimeAbove& P) { return P.degree_one; });
        split_detail = std::to_string(Ps.size()) + " prime(s) above p in Q[t]/(" + h.to_string("t") + ")";
    } catch (const MathError& e) {
        split_detail = e.what();
    }
    add("(vi)", "the prime above p is totally split", split, split_detail);
    out.push_back({"(vii)", "p-adic Galois representations are surjective", "EXTERNAL", "asserted by the user"});
    if (Ps.empty() || prime_index >= Ps.size()) {
        add("(viii)", "a_v(f) != +-a_v(g) mod the prime for some admissible v", false, "no usable prime above p");
        add("(ix)", "f is ordinary at the prime", false, "no usable prime above p");
        add("(x)", "alpha/gamma is not a root of unity for a root gamma with v(gamma) < 1", false, "no usable prime above p");
        return out;
    }
    {
        std::vector<DirichletChar> chars;
        if (!f.chi.is_trivial()) chars.push_back(f.chi);
        if (!g.chi.is_trivial()) chars.push_back(g.chi);
        auto scan = congruence_prime_scan(f, g, chars, scan_bound, p, p);
        const ScanEntry* e = nullptr;
        for (auto& s : scan)
            if (s.prime == Ps[prime_index].label()) e = &s;
        if (!e && !scan.empty()) e = &scan[0];
        bool ok = e && !e->flagged;
        add("(viii)", "a_v(f) != +-a_v(g) mod the prime for some admissible v", ok,
            e ? (ok ? "witness v = " + std::to_string(e->witness) + " (" + e->detail + ")" : e->detail) : "scan empty");
    }
    if (!good) {
        add("(ix)", "f is ordinary at the prime", false, "p divides a level");
        add("(x)", "alpha/gamma is not a root of unity for a root gamma with v(gamma) < 1", false, "p divides a level");
        return out;
    }
    size_t fi = f.rational_field() ? 0 : prime_index, gi = g.rational_field() ? 0 : prime_index;
    Stabilization sf = p_stabilize(f, p, fi), sg = p_stabilize(g, p, gi);
    add("(ix)", "f is ordinary at the prime", sf.ordinary, "v(alpha) = " + sf.v_alpha.get_str() + ", v(beta) = " + sf.v_beta.get_str());
    {
        bool small = sg.v_alpha < 1;
        auto r = ratio_minpoly_and_root_of_unity(sf, sg);
        bool ok = small && !r.root_of_unity;
        add("(x)", "alpha/gamma is not a root of unity for a root gamma with v(gamma) < 1", ok,
            "v(gamma) = " + sg.v_alpha.get_str() + ", minpoly " + r.poly.to_string("x") + (r.root_of_unity ? " (root of unity)" : ""));
    }
    return out;
}

}  // namespace rsw
