#pragma once
/**
 * @file parse.hpp
 * @brief Small recursive-descent parser for polynomial / rational-function expressions.
 *
 * Grammar: sums of products of powers; numbers are integers, '/' divides, '^' takes an
 * integer exponent. Identifiers must be variables of the target ring.
 */

#include <cctype>
#include <string>

#include "rsw/ratfunc.hpp"
#include "rsw/upoly.hpp"

namespace rsw {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

class ExprParser {
public:
    ExprParser(const std::string& s, RingPtr r) : s_(s), r_(std::move(r)) {}

    RatFunc parse() {
        RatFunc v = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("parse error at column " + std::to_string(i_ + 1) + " in '" + s_ + "': " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) { ++i_; return true; }
        return false;
    }
    RatFunc expr() {
        RatFunc v = term();
        while (true) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    RatFunc term() {
        RatFunc v = unary();
        while (true) {
            if (eat('*')) v *= unary();
            else if (eat('/')) {
                RatFunc d = unary();
                if (d.is_zero()) fail("division by zero");
                v /= d;
            } else return v;
        }
    }
    RatFunc unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    RatFunc power() {
        RatFunc b = atom();
        if (eat('^')) {
            skip();
            bool neg = false;
            if (eat('-')) neg = true;
            else if (eat('(')) {
                neg = eat('-');
                long e = integer();
                if (!eat(')')) fail("expected ')'");
                return b.pow(neg ? -e : e);
            }
            long e = integer();
            return b.pow(neg ? -e : e);
        }
        return b;
    }
    long integer() {
        skip();
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (st == i_) fail("expected integer");
        return std::stol(s_.substr(st, i_ - st));
    }
    RatFunc atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            RatFunc v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return RatFunc(r_, Rational(Integer(s_.substr(st, i_ - st))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t st = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            std::string name = s_.substr(st, i_ - st);
            int idx = r_->index(name);
            if (idx < 0) fail("unknown symbol '" + name + "'");
            return RatFunc(MPoly::var(r_, idx));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    RingPtr r_;
    size_t i_ = 0;
};

}  // namespace detail

inline RatFunc parse_ratfunc(const std::string& s, const RingPtr& r) { return detail::ExprParser(s, r).parse(); }

/** Parse a (Laurent) polynomial; fails if a genuine denominator remains. */
inline MPoly parse_mpoly(const std::string& s, const RingPtr& r) {
    RatFunc f = parse_ratfunc(s, r);
    if (!f.den().is_constant()) throw ParseError("expression is not a polynomial: " + s);
    return f.num() / f.den().constant_value();
}

/** Parse a univariate polynomial in the named variable. */
inline UPoly parse_upoly(const std::string& s, const std::string& var) {
    RingPtr r = make_ring({var});
    MPoly p = parse_mpoly(s, r);
    std::vector<Rational> c(static_cast<size_t>(std::max(0, p.degree(0) + 1)));
    for (auto& [m, v] : p.terms()) c[m.e[0]] = v;
    return UPoly(c);
}

inline MPoly upoly_to_mpoly(const UPoly& u, const RingPtr& r, int var) {
    MPoly out(r);
    for (int i = u.degree(); i >= 0; --i)
        if (u.coeff(i) != 0) out += MPoly::var(r, var, i) * u.coeff(i);
    return out;
}

}  // namespace rsw
