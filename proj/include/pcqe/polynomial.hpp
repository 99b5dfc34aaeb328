#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace pcqe {

// Exponent vector over a fixed, externally defined list of generators.
// Generator indices are ordered: a higher index denotes a larger generator.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t width) : e_(width, 0) {}

    static Monomial unit(std::size_t width, std::size_t g, std::uint32_t k = 1) {
        Monomial m(width);
        m.e_[g] = k;
        return m;
    }

    std::size_t width() const { return e_.size(); }
    std::uint32_t exponent(std::size_t g) const { return e_[g]; }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (auto e : e_) d += e;
        return d;
    }

    bool is_constant() const {
        return std::all_of(e_.begin(), e_.end(), [](std::uint32_t e) { return e == 0; });
    }

    Monomial times(const Monomial& o) const {
        Monomial r(*this);
        for (std::size_t g = 0; g < e_.size(); ++g) {
            std::uint64_t s = std::uint64_t(r.e_[g]) + o.e_[g];
            if (s > std::numeric_limits<std::uint32_t>::max())
                throw DomainError("monomial exponent overflow");
            r.e_[g] = static_cast<std::uint32_t>(s);
        }
        return r;
    }

    bool divides(const Monomial& o) const {
        for (std::size_t g = 0; g < e_.size(); ++g)
            if (e_[g] > o.e_[g]) return false;
        return true;
    }

    Monomial divided_by(const Monomial& o) const {
        Monomial r(*this);
        for (std::size_t g = 0; g < e_.size(); ++g) r.e_[g] -= o.e_[g];
        return r;
    }

    Monomial with_exponent(std::size_t g, std::uint32_t k) const {
        Monomial r(*this);
        r.e_[g] = k;
        return r;
    }

    Monomial remapped(std::size_t new_width, const std::vector<std::size_t>& gen_map) const {
        Monomial r(new_width);
        for (std::size_t g = 0; g < e_.size(); ++g)
            if (e_[g] != 0) r.e_[gen_map[g]] = e_[g];
        return r;
    }

    // Degree-lexicographic comparison: total degree first, then the first
    // generator with a differing exponent decides, earlier generators being
    // more significant.
    static int cmp(const Monomial& a, const Monomial& b) {
        std::uint64_t da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db ? -1 : 1;
        for (std::size_t g = 0; g < a.e_.size(); ++g) {
            if (a.e_[g] != b.e_[g]) return a.e_[g] > b.e_[g] ? 1 : -1;
        }
        return 0;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }

private:
    std::vector<std::uint32_t> e_;
};

struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::cmp(a, b) > 0; }
};

// Sparse multivariate polynomial with exact coefficients. Terms are kept in
// descending degree-lexicographic order and zero coefficients are never
// stored, so data equality coincides with polynomial equality.
template <typename C>
class Polynomial {
public:
    using TermMap = std::map<Monomial, C, MonomialGreater>;

    Polynomial() = default;
    explicit Polynomial(std::size_t width) : width_(width) {}

    static Polynomial constant(std::size_t width, C c) {
        Polynomial p(width);
        if (!(c == C(0))) p.terms_.emplace(Monomial(width), std::move(c));
        return p;
    }

    static Polynomial generator(std::size_t width, std::size_t g) {
        Polynomial p(width);
        p.terms_.emplace(Monomial::unit(width, g), C(1));
        return p;
    }

    static Polynomial single(Monomial m, C c) {
        Polynomial p(m.width());
        if (!(c == C(0))) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    std::size_t width() const { return width_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant()); }

    C constant_value() const {
        if (terms_.empty()) return C(0);
        return terms_.begin()->second;
    }

    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    const Monomial& leading_monomial() const { return terms_.begin()->first; }
    const C& leading_coefficient() const { return terms_.begin()->second; }

    std::uint64_t total_degree() const {
        return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
    }

    std::uint32_t degree_in(std::size_t g) const {
        std::uint32_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(g));
        return d;
    }

    bool contains(std::size_t g) const {
        for (const auto& [m, c] : terms_)
            if (m.exponent(g) != 0) return true;
        return false;
    }

    void add_term(const Monomial& m, const C& c) {
        if (c == C(0)) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(width_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(a.width_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma.times(mb), ca * cb);
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const C& c) const {
        Polynomial r(width_);
        if (c == C(0)) return r;
        for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
        return r;
    }

    Polynomial divided_by(const C& c) const {
        if (c == C(0)) throw DomainError("division by zero");
        Polynomial r(width_);
        for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc / c);
        return r;
    }

    Polynomial pow(std::uint32_t e) const {
        Polynomial r = constant(width_, C(1));
        Polynomial b = *this;
        while (e != 0) {
            if (e & 1u) r *= b;
            if (e >>= 1u) b *= b;
        }
        return r;
    }

    // Coefficient polynomials with respect to one generator: result[k] is the
    // coefficient of g^k and does not contain g.
    std::vector<Polynomial> coefficients_in(std::size_t g) const {
        std::vector<Polynomial> out(std::size_t(degree_in(g)) + 1, Polynomial(width_));
        for (const auto& [m, c] : terms_) out[m.exponent(g)].add_term(m.with_exponent(g, 0), c);
        return out;
    }

    static Polynomial from_coefficients_in(std::size_t width, std::size_t g,
                                           const std::vector<Polynomial>& coeffs) {
        Polynomial r(width);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            for (const auto& [m, c] : coeffs[k].terms_) {
                Monomial mk = m.with_exponent(g, static_cast<std::uint32_t>(k));
                r.add_term(mk, c);
            }
        }
        return r;
    }

    Polynomial substituted(std::size_t g, const Polynomial& value) const {
        auto coeffs = coefficients_in(g);
        Polynomial r(width_);
        // Horner evaluation in the substituted generator.
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            r = r * value + coeffs[k];
        }
        return r;
    }

    Polynomial derivative_in(std::size_t g) const {
        Polynomial r(width_);
        for (const auto& [m, c] : terms_) {
            std::uint32_t e = m.exponent(g);
            if (e == 0) continue;
            r.add_term(m.with_exponent(g, e - 1), c * C(static_cast<long>(e)));
        }
        return r;
    }

    C eval(std::span<const C> point) const {
        C acc(0);
        for (const auto& [m, c] : terms_) {
            C t = c;
            for (std::size_t g = 0; g < width_; ++g) {
                std::uint32_t e = m.exponent(g);
                if (e == 0) continue;
                C p = point[g];
                C pe(1);
                while (e != 0) {
                    if (e & 1u) pe *= p;
                    if (e >>= 1u) p *= p;
                }
                t *= pe;
            }
            acc += t;
        }
        return acc;
    }

    template <typename F>
    auto map_coefficients(F&& f) const -> Polynomial<decltype(f(std::declval<const C&>()))> {
        using D = decltype(f(std::declval<const C&>()));
        Polynomial<D> r(width_);
        for (const auto& [m, c] : terms_) r.add_term(m, f(c));
        return r;
    }

    Polynomial remapped(std::size_t new_width, const std::vector<std::size_t>& gen_map) const {
        Polynomial r(new_width);
        for (const auto& [m, c] : terms_) r.add_term(m.remapped(new_width, gen_map), c);
        return r;
    }

    // Largest k and monomial m with p = g^k * q; returns q and also the
    // monomial gcd of all terms via `content`.
    Polynomial without_monomial_content(Monomial* content = nullptr) const {
        if (terms_.empty()) {
            if (content) *content = Monomial(width_);
            return *this;
        }
        Monomial gcd = terms_.begin()->first;
        for (const auto& [m, c] : terms_) {
            Monomial g(width_);
            for (std::size_t i = 0; i < width_; ++i) {
                std::uint32_t e = std::min(gcd.exponent(i), m.exponent(i));
                if (e != 0) g = g.with_exponent(i, e);
            }
            gcd = g;
        }
        if (content) *content = gcd;
        Polynomial r(width_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m.divided_by(gcd), c);
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.width_ == b.width_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

private:
    std::size_t width_ = 0;
    TermMap terms_;
};

using QPoly = Polynomial<Rational>;
using GPoly = Polynomial<GaussianRational>;

// Total order on rational polynomials for canonical sorting of atoms.
inline int poly_cmp(const QPoly& a, const QPoly& b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        int mc = Monomial::cmp(ia->first, ib->first);
        if (mc != 0) return mc;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    if (ia != a.terms().end()) return 1;
    if (ib != b.terms().end()) return -1;
    return 0;
}

inline int poly_cmp(const GPoly& a, const GPoly& b) {
    auto ia = a.terms().begin(), ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        int mc = Monomial::cmp(ia->first, ib->first);
        if (mc != 0) return mc;
        int cc = gaussian_cmp(ia->second, ib->second);
        if (cc != 0) return cc;
    }
    if (ia != a.terms().end()) return 1;
    if (ib != b.terms().end()) return -1;
    return 0;
}

// Positive rational content: gcd of the absolute values of all coefficients.
inline Rational rational_content(const QPoly& p) {
    Rational c(0);
    for (const auto& [m, q] : p.terms()) c = rational_gcd(c, q);
    return c;
}

inline Rational rational_content(const GPoly& p) {
    Rational c(0);
    for (const auto& [m, q] : p.terms()) {
        c = rational_gcd(c, q.re);
        c = rational_gcd(c, q.im);
    }
    return c;
}

} // namespace pcqe
