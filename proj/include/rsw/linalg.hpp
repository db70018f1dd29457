#pragma once
/**
 * @file linalg.hpp
 * @brief Dense Gaussian elimination over an exact field type (Rational, RatFunc, ...).
 */

#include <optional>
#include <utility>
#include <vector>

#include "rsw/ratfunc.hpp"

namespace rsw {

template <class T>
struct FieldOps;

template <>
struct FieldOps<Rational> {
    static bool is_zero(const Rational& x) { return x == 0; }
    static Rational inv(const Rational& x) { return 1 / x; }
};

template <>
struct FieldOps<RatFunc> {
    static bool is_zero(const RatFunc& x) { return x.is_zero(); }
    static RatFunc inv(const RatFunc& x) { return x.inv(); }
};

template <class T>
using Matrix = std::vector<std::vector<T>>;

/**
 * Solve A X = B (A: n x n, B: n x k). Returns nullopt if A is singular.
 * zero is a representative zero element of T.
 */
template <class T>
std::optional<Matrix<T>> solve_square(Matrix<T> A, Matrix<T> B) {
    size_t n = A.size();
    size_t k = B.empty() ? 0 : B[0].size();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = n;
        // prefer the "smallest" pivot for Rational to limit growth; any nonzero works
        for (size_t r = c; r < n; ++r)
            if (!FieldOps<T>::is_zero(A[r][c])) { piv = r; break; }
        if (piv == n) return std::nullopt;
        std::swap(A[c], A[piv]);
        std::swap(B[c], B[piv]);
        T ip = FieldOps<T>::inv(A[c][c]);
        for (size_t j = c; j < n; ++j) A[c][j] = A[c][j] * ip;
        for (size_t j = 0; j < k; ++j) B[c][j] = B[c][j] * ip;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || FieldOps<T>::is_zero(A[r][c])) continue;
            T f = A[r][c];
            for (size_t j = c; j < n; ++j)
                if (!FieldOps<T>::is_zero(A[c][j])) A[r][j] = A[r][j] - f * A[c][j];
            for (size_t j = 0; j < k; ++j)
                if (!FieldOps<T>::is_zero(B[c][j])) B[r][j] = B[r][j] - f * B[c][j];
        }
    }
    return B;
}

/**
 * Least-structure solve for a possibly rectangular consistent system A x = b
 * (A: m x n). Returns nullopt if inconsistent; free variables are set to zero.
 */
template <class T>
std::optional<std::vector<T>> solve_any(Matrix<T> A, std::vector<T> b, const T& zero) {
    size_t m = A.size();
    size_t n = m ? A[0].size() : 0;
    std::vector<size_t> pivcol;
    size_t row = 0;
    for (size_t c = 0; c < n && row < m; ++c) {
        size_t piv = m;
        for (size_t r = row; r < m; ++r)
            if (!FieldOps<T>::is_zero(A[r][c])) { piv = r; break; }
        if (piv == m) continue;
        std::swap(A[row], A[piv]);
        std::swap(b[row], b[piv]);
        T ip = FieldOps<T>::inv(A[row][c]);
        for (size_t j = c; j < n; ++j) A[row][j] = A[row][j] * ip;
        b[row] = b[row] * ip;
        for (size_t r = 0; r < m; ++r) {
            if (r == row || FieldOps<T>::is_zero(A[r][c])) continue;
            T f = A[r][c];
            for (size_t j = c; j < n; ++j) A[r][j] = A[r][j] - f * A[row][j];
            b[r] = b[r] - f * b[row];
        }
        pivcol.push_back(c);
        ++row;
    }
    for (size_t r = row; r < m; ++r)
        if (!FieldOps<T>::is_zero(b[r])) return std::nullopt;
    std::vector<T> x(n, zero);
    for (size_t i = 0; i < pivcol.size(); ++i) x[pivcol[i]] = b[i];
    return x;
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& A, const std::vector<T>& v, const T& zero) {
    std::vector<T> out(A.size(), zero);
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (!FieldOps<T>::is_zero(A[i][j]) && !FieldOps<T>::is_zero(v[j])) out[i] = out[i] + A[i][j] * v[j];
    return out;
}

}  // namespace rsw
