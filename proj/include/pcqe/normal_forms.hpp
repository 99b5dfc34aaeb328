#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "term.hpp"

namespace pcqe {

// Ordered list of complex variables. Unless an explicit order is supplied,
// contexts are sorted by the variable order.
class VarContext {
public:
    VarContext() = default;

    explicit VarContext(std::vector<Variable> vars) : vars_(std::move(vars)) {
        std::set<Variable> seen;
        for (const auto& v : vars_) {
            if (!seen.insert(v).second)
                throw ContextError("duplicate variable in context: " + v.name);
        }
    }

    static VarContext sorted(const std::set<Variable>& vars) {
        return VarContext(std::vector<Variable>(vars.begin(), vars.end()));
    }

    static VarContext of_term(const Term& t) { return sorted(variables_of(t)); }

    std::size_t size() const { return vars_.size(); }
    const Variable& at(std::size_t i) const { return vars_[i]; }
    const std::vector<Variable>& variables() const { return vars_; }

    std::optional<std::size_t> index_of(const Variable& v) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == v) return i;
        return std::nullopt;
    }

    bool contains(const Variable& v) const { return index_of(v).has_value(); }

    VarContext merged(const VarContext& o) const {
        std::set<Variable> all(vars_.begin(), vars_.end());
        all.insert(o.vars_.begin(), o.vars_.end());
        return sorted(all);
    }

    friend bool operator==(const VarContext& a, const VarContext& b) { return a.vars_ == b.vars_; }

private:
    std::vector<Variable> vars_;
};

// Conjugate normal form: polynomial in Q[i][z_1..z_n, conj(z_1)..conj(z_n)].
// Generator k is z_k for k < n; generator n + k is conj(z_k).
struct PolyCNF {
    VarContext ctx;
    GPoly poly;

    std::size_t n() const { return ctx.size(); }

    friend bool operator==(const PolyCNF& a, const PolyCNF& b) {
        return a.ctx == b.ctx && a.poly == b.poly;
    }
};

// Cartesian normal form p1 + i*p2 with p1, p2 in Q[Re(z), Im(z)].
// Generator k is Re(z_k) for k < n; generator n + k is Im(z_k).
struct PolyCart {
    VarContext ctx;
    QPoly p1;
    QPoly p2;

    std::size_t n() const { return ctx.size(); }
    bool is_real() const { return p2.is_zero(); }

    friend bool operator==(const PolyCart& a, const PolyCart& b) {
        return a.ctx == b.ctx && a.p1 == b.p1 && a.p2 == b.p2;
    }
};

// Ring involution on conjugate normal forms: swaps the z / conj(z) generator
// halves and conjugates all coefficients.
inline GPoly conj_poly(const GPoly& p, std::size_t n) {
    std::vector<std::size_t> swap_map(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        swap_map[k] = n + k;
        swap_map[n + k] = k;
    }
    GPoly q = p.remapped(2 * n, swap_map);
    return q.map_coefficients([](const GaussianRational& c) { return c.conj(); });
}

inline GPoly to_conjugate_poly(const Term& t, const VarContext& ctx) {
    const std::size_t n = ctx.size();
    const std::size_t w = 2 * n;
    switch (t->kind) {
        case TermKind::Constant: return GPoly::constant(w, GaussianRational(t->value));
        case TermKind::ImagUnit: return GPoly::constant(w, GaussianRational::i());
        case TermKind::Var: {
            auto i = ctx.index_of(t->var);
            if (!i) throw ContextError("variable not in context: " + t->var.name);
            return GPoly::generator(w, *i);
        }
        case TermKind::Add: return to_conjugate_poly(t->args[0], ctx) + to_conjugate_poly(t->args[1], ctx);
        case TermKind::Neg: return -to_conjugate_poly(t->args[0], ctx);
        case TermKind::Mul: return to_conjugate_poly(t->args[0], ctx) * to_conjugate_poly(t->args[1], ctx);
        case TermKind::Pow: return to_conjugate_poly(t->args[0], ctx).pow(t->exponent);
        case TermKind::Conj: return conj_poly(to_conjugate_poly(t->args[0], ctx), n);
        case TermKind::Re: {
            GPoly s = to_conjugate_poly(t->args[0], ctx);
            return (s + conj_poly(s, n)).scaled(GaussianRational(Rational(1, 2)));
        }
        case TermKind::Im: {
            GPoly s = to_conjugate_poly(t->args[0], ctx);
            return (s - conj_poly(s, n)).scaled(GaussianRational(Rational(0), Rational(-1, 2)));
        }
    }
    throw Error("unreachable term kind");
}

inline PolyCNF to_conjugate_nf(const Term& t, const VarContext& ctx) {
    return PolyCNF{ctx, to_conjugate_poly(t, ctx)};
}

inline PolyCNF to_conjugate_nf(const Term& t) {
    return to_conjugate_nf(t, VarContext::of_term(t));
}

namespace detail {

// Real/imaginary part pair; the Cartesian form is computed directly bottom-up
// rather than via the conjugate form.
struct CartPair {
    QPoly p1;
    QPoly p2;

    CartPair mul(const CartPair& o) const {
        return {p1 * o.p1 - p2 * o.p2, p1 * o.p2 + p2 * o.p1};
    }
};

inline CartPair to_cart_pair(const Term& t, const VarContext& ctx) {
    const std::size_t n = ctx.size();
    const std::size_t w = 2 * n;
    switch (t->kind) {
        case TermKind::Constant: return {QPoly::constant(w, t->value), QPoly(w)};
        case TermKind::ImagUnit: return {QPoly(w), QPoly::constant(w, Rational(1))};
        case TermKind::Var: {
            auto i = ctx.index_of(t->var);
            if (!i) throw ContextError("variable not in context: " + t->var.name);
            return {QPoly::generator(w, *i), QPoly::generator(w, n + *i)};
        }
        case TermKind::Add: {
            CartPair a = to_cart_pair(t->args[0], ctx), b = to_cart_pair(t->args[1], ctx);
            return {a.p1 + b.p1, a.p2 + b.p2};
        }
        case TermKind::Neg: {
            CartPair a = to_cart_pair(t->args[0], ctx);
            return {-a.p1, -a.p2};
        }
        case TermKind::Mul:
            return to_cart_pair(t->args[0], ctx).mul(to_cart_pair(t->args[1], ctx));
        case TermKind::Pow: {
            CartPair b = to_cart_pair(t->args[0], ctx);
            CartPair r{QPoly::constant(w, Rational(1)), QPoly(w)};
            std::uint32_t e = t->exponent;
            while (e != 0) {
                if (e & 1u) r = r.mul(b);
                if (e >>= 1u) b = b.mul(b);
            }
            return r;
        }
        case TermKind::Conj: {
            CartPair a = to_cart_pair(t->args[0], ctx);
            return {a.p1, -a.p2};
        }
        case TermKind::Re: {
            CartPair a = to_cart_pair(t->args[0], ctx);
            return {a.p1, QPoly(w)};
        }
        case TermKind::Im: {
            CartPair a = to_cart_pair(t->args[0], ctx);
            return {a.p2, QPoly(w)};
        }
    }
    throw Error("unreachable term kind");
}

} // namespace detail

inline PolyCart to_cartesian_nf(const Term& t, const VarContext& ctx) {
    auto pair = detail::to_cart_pair(t, ctx);
    return PolyCart{ctx, std::move(pair.p1), std::move(pair.p2)};
}

inline PolyCart to_cartesian_nf(const Term& t) {
    return to_cartesian_nf(t, VarContext::of_term(t));
}

// Conversion between the two normal forms: z = Re(z) + i Im(z) one way,
// Re(z) = (z + conj z)/2 and Im(z) = -i (z - conj z)/2 the other.
inline PolyCart cnf_to_cart(const PolyCNF& p) {
    const std::size_t n = p.n();
    const std::size_t w = 2 * n;
    GPoly acc(w);
    const GaussianRational I = GaussianRational::i();
    for (const auto& [m, c] : p.poly.terms()) {
        GPoly t = GPoly::constant(w, c);
        for (std::size_t k = 0; k < n; ++k) {
            GPoly zk = GPoly::generator(w, k) + GPoly::generator(w, n + k).scaled(I);
            GPoly zkc = GPoly::generator(w, k) - GPoly::generator(w, n + k).scaled(I);
            if (m.exponent(k) != 0) t *= zk.pow(m.exponent(k));
            if (m.exponent(n + k) != 0) t *= zkc.pow(m.exponent(n + k));
        }
        acc += t;
    }
    QPoly p1 = acc.map_coefficients([](const GaussianRational& c) { return c.re; });
    QPoly p2 = acc.map_coefficients([](const GaussianRational& c) { return c.im; });
    return PolyCart{p.ctx, std::move(p1), std::move(p2)};
}

inline PolyCNF cart_to_cnf(const PolyCart& p) {
    const std::size_t n = p.n();
    const std::size_t w = 2 * n;
    const GaussianRational half(Rational(1, 2));
    const GaussianRational minus_half_i(Rational(0), Rational(-1, 2));
    GPoly g = p.p1.map_coefficients([](const Rational& c) { return GaussianRational(c); });
    g += p.p2.map_coefficients([](const Rational& c) { return GaussianRational(Rational(0), c); });
    GPoly acc(w);
    for (const auto& [m, c] : g.terms()) {
        GPoly t = GPoly::constant(w, c);
        for (std::size_t k = 0; k < n; ++k) {
            GPoly rek = (GPoly::generator(w, k) + GPoly::generator(w, n + k)).scaled(half);
            GPoly imk = (GPoly::generator(w, k) - GPoly::generator(w, n + k)).scaled(minus_half_i);
            if (m.exponent(k) != 0) t *= rek.pow(m.exponent(k));
            if (m.exponent(n + k) != 0) t *= imk.pow(m.exponent(n + k));
        }
        acc += t;
    }
    return PolyCNF{p.ctx, std::move(acc)};
}

inline bool is_real_term(const Term& t, const VarContext& ctx) {
    return to_cartesian_nf(t, ctx).is_real();
}

inline bool is_real_term(const Term& t) { return is_real_term(t, VarContext::of_term(t)); }

using Assignment = std::map<Variable, GaussianRational>;

inline GaussianRational eval_term(const Term& t, const Assignment& sigma) {
    switch (t->kind) {
        case TermKind::Constant: return GaussianRational(t->value);
        case TermKind::ImagUnit: return GaussianRational::i();
        case TermKind::Var: {
            auto it = sigma.find(t->var);
            if (it == sigma.end()) throw ContextError("no assignment for variable: " + t->var.name);
            return it->second;
        }
        case TermKind::Add: return eval_term(t->args[0], sigma) + eval_term(t->args[1], sigma);
        case TermKind::Neg: return -eval_term(t->args[0], sigma);
        case TermKind::Mul: return eval_term(t->args[0], sigma) * eval_term(t->args[1], sigma);
        case TermKind::Pow: return gaussian_pow(eval_term(t->args[0], sigma), t->exponent);
        case TermKind::Re: return GaussianRational(eval_term(t->args[0], sigma).re);
        case TermKind::Im: return GaussianRational(eval_term(t->args[0], sigma).im);
        case TermKind::Conj: return eval_term(t->args[0], sigma).conj();
    }
    throw Error("unreachable term kind");
}

inline bool term_equiv(const Term& a, const Term& b) {
    VarContext ctx = VarContext::of_term(a).merged(VarContext::of_term(b));
    return to_conjugate_poly(a, ctx) == to_conjugate_poly(b, ctx);
}

} // namespace pcqe
