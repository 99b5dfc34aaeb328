#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "errors.hpp"

namespace pcqe {

using Integer = boost::multiprecision::cpp_int;

// Exact rational number: reduced fraction with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign_of(const Rational& q) { return q.sign(); }

inline Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline Rational rational_pow(const Rational& base, std::uint32_t e) {
    Rational r(1);
    Rational b = base;
    while (e != 0) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

// gcd on rationals: gcd of numerators over lcm of denominators. gcd(0, q) = |q|.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    if (a == 0) return abs_of(b);
    if (b == 0) return abs_of(a);
    Integer n = gcd(numerator(a), numerator(b));
    Integer d = lcm(denominator(a), denominator(b));
    return Rational(n, d);
}

// Exact square root, or nothing when q is not a square of a rational.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    Integer n = boost::multiprecision::sqrt(numerator(q));
    Integer d = boost::multiprecision::sqrt(denominator(q));
    if (n * n != numerator(q) || d * d != denominator(q)) return std::nullopt;
    return Rational(n, d);
}

inline std::string rational_to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (!is_integer(q)) s += "/" + denominator(q).str();
    return s;
}

// Element of the Gaussian rationals: re + im * i with exact rational parts.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(int r) : re(r) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    // re^2 + im^2; rational and non-negative.
    Rational norm() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw DomainError("division by zero");
        Rational n = o.norm();
        Rational r = (re * o.re + im * o.im) / n;
        Rational i = (im * o.re - re * o.im) / n;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

inline GaussianRational gaussian_pow(const GaussianRational& base, std::uint32_t e) {
    GaussianRational r(1);
    GaussianRational b = base;
    while (e != 0) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

// Total order used for canonical sorting; not an arithmetic order.
inline int gaussian_cmp(const GaussianRational& a, const GaussianRational& b) {
    if (a.re != b.re) return a.re < b.re ? -1 : 1;
    if (a.im != b.im) return a.im < b.im ? -1 : 1;
    return 0;
}

// Exact square roots in Q[i]. Returns one root r with r*r == w, or nothing
// when w has no Gaussian-rational square root.
inline std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& w) {
    if (w.is_zero()) return GaussianRational(0);
    // r = x + y i with x^2 - y^2 = a, 2 x y = b requires |w| to be a rational
    // square and (a + |w|)/2 a rational square.
    auto mod = rational_sqrt(w.norm());
    if (!mod) return std::nullopt;
    Rational half_sum = (w.re + *mod) / 2;
    auto x = rational_sqrt(half_sum);
    if (!x) return std::nullopt;
    if (*x == 0) {
        // w = a < 0 real: roots are +- sqrt(-a) i.
        auto y = rational_sqrt(-w.re);
        if (!y) return std::nullopt;
        return GaussianRational(Rational(0), *y);
    }
    Rational y = w.im / (2 * *x);
    GaussianRational r(*x, y);
    if (r * r != w) return std::nullopt;
    return r;
}

} // namespace pcqe
