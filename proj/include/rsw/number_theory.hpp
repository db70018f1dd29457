#pragma once
/**
 * @file number_theory.hpp
 * @brief Elementary integer routines: primes, factoring, units mod m, CRT, Bernoulli numbers.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "rsw/rational.hpp"

namespace rsw {

using i64 = std::int64_t;

inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline i64 powmod(i64 b, i64 e, i64 m) {
    if (m == 1) return 0;
    i64 r = 1;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

/** Extended gcd: returns g and sets x, y with a x + b y = g. */
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0; y = y0;
    return a;
}

inline i64 invmod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 x, y;
    if (ext_gcd(mod(a, m), m, x, y) != 1) throw MathError("no inverse of " + std::to_string(a) + " mod " + std::to_string(m));
    return mod(x, m);
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13}) {
        if (n % p == 0) return n == p;
    }
    for (i64 d = 17; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<i64> primes_upto(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(n + 1), true);
    for (i64 i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (i64 j = i * i; j <= n; j += i) sieve[j] = false;
    }
    return out;
}

/** Prime factorization as ordered map p -> exponent. */
inline std::map<i64, int> factorize(i64 n) {
    if (n <= 0) throw MathError("factorize needs a positive integer");
    std::map<i64, int> f;
    for (i64 d = 2; d * d <= n; ++d) {
        while (n % d == 0) { ++f[d]; n /= d; }
    }
    if (n > 1) ++f[n];
    return f;
}

inline std::vector<i64> prime_divisors(i64 n) {
    std::vector<i64> out;
    for (auto& [p, e] : factorize(n)) out.push_back(p);
    return out;
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> d{1};
    for (auto& [p, e] : factorize(n)) {
        size_t sz = d.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto& [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline bool is_squarefree(i64 n) {
    for (auto& [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

/** Sorted list of units in Z/m (for m = 1 returns {0}, the unique residue). */
inline std::vector<i64> units_mod(i64 m) {
    if (m == 1) return {0};
    std::vector<i64> u;
    for (i64 a = 1; a < m; ++a)
        if (std::gcd(a, m) == 1) u.push_back(a);
    return u;
}

/** Chinese remainder: x = r1 mod m1, x = r2 mod m2, coprime moduli; result in [0, m1 m2). */
inline i64 crt(i64 r1, i64 m1, i64 r2, i64 m2) {
    if (std::gcd(m1, m2) != 1) throw MathError("crt needs coprime moduli");
    i64 t = mulmod(mod(r2 - r1, m2), invmod(m1, m2), m2);
    return mod(r1 + m1 * t, m1 * m2);
}

inline i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/** Legendre/Kronecker symbol (a/p) for an odd prime p. */
inline int legendre(i64 a, i64 p) {
    a = mod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/** Bernoulli number B_n with B_1 = -1/2 convention. */
inline Rational bernoulli(int n) {
    std::vector<Rational> B(static_cast<size_t>(n + 1));
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    for (int m = 0; m <= n; ++m) {
        if (m == 0) { B[0] = 1; continue; }
        Rational s = 0;
        Integer c = 1;  // C(m+1, 0)
        for (int j = 0; j < m; ++j) {
            s += Rational(c) * B[j];
            c = c * (m + 1 - j) / (j + 1);
        }
        B[m] = -s / Rational(m + 1);
    }
    return B[n];
}

/** Riemann zeta at a non-positive odd-ish argument: zeta(1-k) = -B_k/k for k >= 2. */
inline Rational zeta_one_minus(int k) {
    if (k < 2) throw MathError("zeta(1-k) via Bernoulli needs k >= 2");
    return -bernoulli(k) / Rational(k);
}

}  // namespace rsw
