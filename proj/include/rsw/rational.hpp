#pragma once
/**
 * @file rational.hpp
 * @brief Arbitrary-precision rationals (GMP backed) and small helpers.
 */

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rsw {

using Integer = mpz_class;
using Rational = mpq_class;

/** Thrown for arithmetic on non-units, malformed input to algebraic routines, etc. */
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rat(long n, long d = 1) {
    if (d == 0) throw MathError("rational with zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline Rational make_rat(const Integer& n, const Integer& d = 1) {
    if (d == 0) throw MathError("rational with zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

/** Parse "a" or "a/b" (optional sign). Throws on garbage. */
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (s.empty() || r.set_str(s, 10) != 0) throw MathError("bad rational literal '" + s + "'");
    if (r.get_den() == 0) throw MathError("rational with zero denominator: " + s);
    r.canonicalize();
    return r;
}

/** p-adic valuation of a nonzero rational. */
inline long valuation(const Rational& r, long p) {
    if (r == 0) throw MathError("valuation of zero");
    long v = 0;
    Integer n = r.get_num(), d = r.get_den();
    Integer P = p;
    while (mpz_divisible_p(n.get_mpz_t(), P.get_mpz_t())) { n /= P; ++v; }
    while (mpz_divisible_p(d.get_mpz_t(), P.get_mpz_t())) { d /= P; --v; }
    return v;
}

inline Rational rat_pow(const Rational& b, long e) {
    if (e < 0) {
        if (b == 0) throw MathError("zero to a negative power");
        Rational inv = 1 / b;
        return rat_pow(inv, -e);
    }
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(e));
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace rsw
