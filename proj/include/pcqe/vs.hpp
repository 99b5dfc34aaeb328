#pragma once

#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "realpoly.hpp"
#include "simplify.hpp"

namespace pcqe {

// Compact rendering of real atoms for error messages.
inline std::string ratom_to_string(const RAtom& a, const RealVarTable& table) {
    std::string out;
    bool first = true;
    for (const auto& [m, c] : a.p.terms()) {
        std::string mono;
        if (c < 0)
            mono += first ? "-" : " - ";
        else if (!first)
            mono += " + ";
        Rational mag = abs_of(c);
        bool unit = mag == 1 && !m.is_constant();
        if (!unit) mono += rational_to_string(mag);
        bool any = !unit;
        for (std::size_t g = 0; g < a.p.width(); ++g) {
            if (m.exponent(g) == 0) continue;
            if (any) mono += "*";
            mono += table.names[g];
            if (m.exponent(g) > 1) mono += "^" + std::to_string(m.exponent(g));
            any = true;
        }
        out += mono;
        first = false;
    }
    if (first) out = "0";
    switch (a.rel) {
        case RelOp::EQ: out += " == 0"; break;
        case RelOp::NE: out += " != 0"; break;
        case RelOp::LE: out += " <= 0"; break;
        case RelOp::LT: out += " < 0"; break;
    }
    return out;
}

namespace vs_detail {

// Parametric root (a + b*sqrt(rad)) / den, well defined under its guard.
struct RootExpr {
    QPoly a;
    QPoly b;    // zero polynomial when no radical part
    QPoly rad;  // radicand; meaningful only when radical
    QPoly den;
    bool radical = false;

    friend bool operator==(const RootExpr& x, const RootExpr& y) {
        return x.radical == y.radical && x.a == y.a && x.b == y.b && x.rad == y.rad &&
               x.den == y.den;
    }
};

struct TestPoint {
    enum Kind { MinusInfinity, AtRoot, AboveRoot } kind = MinusInfinity;
    RootExpr root;
    RFormula guard = rf::top();
};

// Sign conditions for E = A + B*sqrt(rad) under the guard rad >= 0. The
// degenerate shapes keep conditions factored instead of expanding A^2-rad*B^2.
inline RFormula cond_eq(const QPoly& A, const QPoly& B, const QPoly& rad) {
    if (B.is_zero() || rad.is_zero()) return rf::atom(A, RelOp::EQ);
    if (A.is_zero()) return rf::disjunction({rf::atom(B, RelOp::EQ), rf::atom(rad, RelOp::EQ)});
    return rf::conjunction(
        {rf::atom(A * B, RelOp::LE), rf::atom(A * A - rad * B * B, RelOp::EQ)});
}

inline RFormula cond_ne(const QPoly& A, const QPoly& B, const QPoly& rad) {
    if (B.is_zero() || rad.is_zero()) return rf::atom(A, RelOp::NE);
    if (A.is_zero()) return rf::conjunction({rf::atom(B, RelOp::NE), rf::atom(rad, RelOp::NE)});
    return rf::disjunction(
        {rf::atom(-(A * B), RelOp::LT), rf::atom(A * A - rad * B * B, RelOp::NE)});
}

inline RFormula cond_le(const QPoly& A, const QPoly& B, const QPoly& rad) {
    if (B.is_zero() || rad.is_zero()) return rf::atom(A, RelOp::LE);
    if (A.is_zero()) return rf::disjunction({rf::atom(B, RelOp::LE), rf::atom(rad, RelOp::EQ)});
    QPoly d = A * A - rad * B * B;
    return rf::disjunction({rf::conjunction({rf::atom(A, RelOp::LE), rf::atom(-d, RelOp::LE)}),
                            rf::conjunction({rf::atom(B, RelOp::LE), rf::atom(d, RelOp::LE)})});
}

inline RFormula cond_lt(const QPoly& A, const QPoly& B, const QPoly& rad) {
    if (B.is_zero() || rad.is_zero()) return rf::atom(A, RelOp::LT);
    if (A.is_zero()) return rf::conjunction({rf::atom(B, RelOp::LT), rf::atom(-rad, RelOp::LT)});
    QPoly d = A * A - rad * B * B;
    return rf::disjunction({rf::conjunction({rf::atom(A, RelOp::LT), rf::atom(-d, RelOp::LT)}),
                            rf::conjunction({rf::atom(B, RelOp::LT), rf::atom(d, RelOp::LT)}),
                            rf::conjunction({rf::atom(A, RelOp::LT), rf::atom(B, RelOp::LE)})});
}

inline RFormula cond_rel(RelOp rel, const QPoly& A, const QPoly& B, const QPoly& rad) {
    switch (rel) {
        case RelOp::EQ: return cond_eq(A, B, rad);
        case RelOp::NE: return cond_ne(A, B, rad);
        case RelOp::LE: return cond_le(A, B, rad);
        case RelOp::LT: return cond_lt(A, B, rad);
    }
    throw Error("unreachable relation");
}

// q(root) * den^(m or m+1) as a pair (A, B) with value A + B*sqrt(rad);
// the divisor power is kept even so its sign is known.
inline std::pair<QPoly, QPoly> root_value(const std::vector<QPoly>& coeffs, const RootExpr& r) {
    const std::size_t w = r.a.width();
    const std::size_t m = coeffs.size() - 1;
    std::vector<QPoly> den_pow(m + 1, QPoly::constant(w, Rational(1)));
    for (std::size_t k = 1; k <= m; ++k) den_pow[k] = den_pow[k - 1] * r.den;
    QPoly A(w), B(w);
    for (std::size_t k = m + 1; k-- > 0;) {
        // (A + B s)(a + b s) = A a + B b rad + (A b + B a) s  with s = sqrt(rad)
        QPoly nA = A * r.a;
        if (r.radical) nA += B * r.b * r.rad;
        QPoly nB = B * r.a;
        if (r.radical) nB += A * r.b;
        nA += coeffs[k] * den_pow[m - k];
        A = std::move(nA);
        B = std::move(nB);
    }
    if (m % 2 == 1) {
        A = A * r.den;
        B = B * r.den;
    }
    return {std::move(A), std::move(B)};
}

inline RFormula subst_rel_at_root(const std::vector<QPoly>& coeffs, const RootExpr& r, RelOp rel) {
    auto [A, B] = root_value(coeffs, r);
    return cond_rel(rel, A, B, r.radical ? r.rad : QPoly(A.width()));
}

// Sign of q just above the root: value conditions on q and its derivatives.
inline RFormula eps_strict(const std::vector<QPoly>& coeffs, const RootExpr& r, bool allow_zero) {
    bool all_zero = true;
    for (const auto& c : coeffs)
        if (!c.is_zero()) all_zero = false;
    if (all_zero || coeffs.empty()) return allow_zero ? rf::top() : rf::bot();
    RFormula at_lt = subst_rel_at_root(coeffs, r, RelOp::LT);
    RFormula at_eq = subst_rel_at_root(coeffs, r, RelOp::EQ);
    std::vector<QPoly> deriv;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        deriv.push_back(coeffs[k].scaled(Rational(static_cast<long>(k))));
    RFormula rest = eps_strict(deriv, r, allow_zero);
    return rf::disjunction({at_lt, rf::conjunction({at_eq, rest})});
}

inline RFormula subst_rel_above_root(const std::vector<QPoly>& coeffs, const RootExpr& r,
                                     RelOp rel, std::size_t width) {
    switch (rel) {
        case RelOp::EQ: {
            // Zero on a right neighborhood means identically zero in x.
            std::vector<RFormula> parts;
            for (const auto& c : coeffs) parts.push_back(rf::atom(c, RelOp::EQ));
            return rf::conjunction(std::move(parts));
        }
        case RelOp::NE: {
            std::vector<RFormula> parts;
            for (const auto& c : coeffs) parts.push_back(rf::atom(c, RelOp::NE));
            return rf::disjunction(std::move(parts));
        }
        case RelOp::LT: return eps_strict(coeffs, r, false);
        case RelOp::LE: return eps_strict(coeffs, r, true);
    }
    (void)width;
    throw Error("unreachable relation");
}

// Sign of q at minus infinity, by leading coefficients.
inline RFormula subst_rel_minus_inf(const std::vector<QPoly>& coeffs, RelOp rel) {
    switch (rel) {
        case RelOp::EQ: {
            std::vector<RFormula> parts;
            for (const auto& c : coeffs) parts.push_back(rf::atom(c, RelOp::EQ));
            return rf::conjunction(std::move(parts));
        }
        case RelOp::NE: {
            std::vector<RFormula> parts;
            for (const auto& c : coeffs) parts.push_back(rf::atom(c, RelOp::NE));
            return rf::disjunction(std::move(parts));
        }
        case RelOp::LT:
        case RelOp::LE: {
            RFormula acc = rel == RelOp::LE ? rf::top() : rf::bot();
            // From the lowest coefficient upwards: acc is the condition when
            // all higher coefficients vanish.
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                QPoly lead = k % 2 == 0 ? coeffs[k] : -coeffs[k];
                acc = rf::disjunction({rf::atom(lead, RelOp::LT),
                                       rf::conjunction({rf::atom(coeffs[k], RelOp::EQ), acc})});
            }
            return acc;
        }
    }
    throw Error("unreachable relation");
}

// Divides out the joint monomial and rational content of a linear root's
// numerator and denominator; sound because only the fraction value matters.
inline void reduce_fraction(QPoly& num, QPoly& den) {
    if (num.is_zero()) {
        if (!den.is_constant()) den = QPoly::constant(den.width(), Rational(1));
        else den = QPoly::constant(den.width(), Rational(1));
        return;
    }
    Monomial mn, md;
    QPoly n1 = num.without_monomial_content(&mn);
    QPoly d1 = den.without_monomial_content(&md);
    Monomial common(num.width());
    bool nontrivial = false;
    for (std::size_t g = 0; g < num.width(); ++g) {
        std::uint32_t e = std::min(mn.exponent(g), md.exponent(g));
        if (e != 0) {
            common = common.with_exponent(g, e);
            nontrivial = true;
        }
    }
    if (nontrivial) {
        num = QPoly(num.width());
        for (const auto& [m, c] : n1.terms()) num.add_term(m.times(mn.divided_by(common)), c);
        den = QPoly(den.width());
        for (const auto& [m, c] : d1.terms()) den.add_term(m.times(md.divided_by(common)), c);
    }
    Rational cn = rational_content(num), cd = rational_content(den);
    Rational g = rational_gcd(cn, cd);
    if (g != 0 && g != 1) {
        num = num.divided_by(g);
        den = den.divided_by(g);
    }
}

// Pulls maximal square factors (rational and monomial) out of a radicand:
// rad = f^2 * r becomes sqrt coefficient b*f over radicand r.
inline void reduce_radical(QPoly& b, QPoly& rad) {
    if (rad.is_zero()) return;
    Monomial content;
    QPoly r = rad.without_monomial_content(&content);
    Monomial half(rad.width());
    bool nontrivial = false;
    for (std::size_t g = 0; g < rad.width(); ++g) {
        std::uint32_t e = content.exponent(g) / 2;
        if (e != 0) {
            half = half.with_exponent(g, e);
            nontrivial = true;
        }
    }
    if (nontrivial) {
        Monomial rest(rad.width());
        for (std::size_t g = 0; g < rad.width(); ++g)
            rest = rest.with_exponent(g, content.exponent(g) - 2 * half.exponent(g));
        QPoly nrad(rad.width());
        for (const auto& [m, c] : r.terms()) nrad.add_term(m.times(rest), c);
        rad = std::move(nrad);
        b = b * QPoly::single(half, Rational(1));
    }
    Rational c = rational_content(rad);
    if (c != 0) {
        auto s = rational_sqrt(c);
        if (s && *s != 1) {
            rad = rad.divided_by(*s * *s);
            b = b.scaled(*s);
        }
    }
}

struct AtomInX {
    std::vector<QPoly> coeffs; // coefficients of x^k, x-free
    std::size_t low = 0;       // largest k with x^k dividing the polynomial
    RelOp rel = RelOp::EQ;
};

inline AtomInX analyze_atom(const RAtom& a, std::size_t x) {
    AtomInX out;
    out.coeffs = a.p.coefficients_in(x);
    out.rel = a.rel;
    out.low = 0;
    while (out.low + 1 < out.coeffs.size() && out.coeffs[out.low].is_zero()) ++out.low;
    return out;
}

inline std::size_t reduced_degree(const AtomInX& a) { return a.coeffs.size() - 1 - a.low; }

} // namespace vs_detail

struct VsStats {
    std::size_t eliminated = 0;
    std::size_t test_points = 0;
};

namespace vs_detail {

inline void add_point(std::vector<TestPoint>& points, TestPoint tp) {
    for (const auto& p : points)
        if (p.kind == tp.kind && p.root == tp.root) return;
    points.push_back(std::move(tp));
}

inline std::vector<TestPoint> elimination_set(const std::vector<AtomInX>& atoms, std::size_t width,
                                              const RealVarTable& table, std::size_t x) {
    std::vector<TestPoint> points;
    points.push_back(TestPoint{TestPoint::MinusInfinity, RootExpr{}, rf::top()});
    for (const auto& a : atoms) {
        std::size_t deg = reduced_degree(a);
        bool with_eps = a.rel == RelOp::LT || a.rel == RelOp::NE;
        auto kind = with_eps ? TestPoint::AboveRoot : TestPoint::AtRoot;
        auto emit = [&](RootExpr r, RFormula guard) {
            add_point(points, TestPoint{kind, std::move(r), std::move(guard)});
        };
        if (a.low > 0) {
            // x = 0 solves the monomial factor.
            RootExpr zero{QPoly(width), QPoly(width), QPoly(width),
                          QPoly::constant(width, Rational(1)), false};
            emit(std::move(zero), rf::top());
        }
        if (deg == 1) {
            QPoly num = -a.coeffs[a.low];
            QPoly den = a.coeffs[a.low + 1];
            RFormula guard = rf::atom(den, RelOp::NE);
            reduce_fraction(num, den);
            emit(RootExpr{std::move(num), QPoly(width), QPoly(width), std::move(den), false},
                 std::move(guard));
        } else if (deg == 2) {
            const QPoly& c0 = a.coeffs[a.low];
            const QPoly& c1 = a.coeffs[a.low + 1];
            const QPoly& c2 = a.coeffs[a.low + 2];
            QPoly rad = c1 * c1 - (c2 * c0).scaled(Rational(4));
            QPoly den = c2.scaled(Rational(2));
            RFormula guard = rf::conjunction(
                {rf::atom(c2, RelOp::NE), rf::atom(-rad, RelOp::LE)});
            for (int s : {1, -1}) {
                QPoly b = QPoly::constant(width, Rational(s));
                QPoly r = rad;
                reduce_radical(b, r);
                emit(RootExpr{-c1, std::move(b), std::move(r), den, true}, guard);
            }
            if (!c2.is_constant()) {
                // Leading coefficient may vanish: fall back to the linear root.
                QPoly num = -c0;
                QPoly lden = c1;
                RFormula lguard = rf::conjunction(
                    {rf::atom(c2, RelOp::EQ), rf::atom(c1, RelOp::NE)});
                reduce_fraction(num, lden);
                emit(RootExpr{std::move(num), QPoly(width), QPoly(width), std::move(lden), false},
                     std::move(lguard));
            }
        } else if (deg > 2) {
            throw DegreeTooHighError(table.names[x], "degree " + std::to_string(deg));
        }
    }
    return points;
}

inline RFormula substitute_test_point(const RFormula& f, std::size_t x, const TestPoint& tp) {
    return rmap_atoms(f, [&](const RAtom& a) -> RFormula {
        if (!a.p.contains(x)) return rf::atom(a.p, a.rel);
        std::vector<QPoly> coeffs = a.p.coefficients_in(x);
        switch (tp.kind) {
            case TestPoint::MinusInfinity: return subst_rel_minus_inf(coeffs, a.rel);
            case TestPoint::AtRoot: return subst_rel_at_root(coeffs, tp.root, a.rel);
            case TestPoint::AboveRoot:
                return subst_rel_above_root(coeffs, tp.root, a.rel, a.p.width());
        }
        throw Error("unreachable test point kind");
    });
}

// One existential variable. The matrix must be in negation normal form.
inline RFormula eliminate_exists(std::size_t x, const RFormula& matrix, const RealVarTable& table,
                                 const SignEnv& env, VsStats* stats) {
    RFormula f = simplify(matrix, env);
    if (!rformula_contains(f, x)) return f;

    // Equation shortcut: a top-level conjunct c*x + p = 0 with constant
    // nonzero c pins x, so substitution needs no case distinction.
    std::vector<RFormula> conjuncts;
    if (f->kind == RKind::And)
        conjuncts = f->args;
    else
        conjuncts = {f};
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
        const RFormula& c = conjuncts[i];
        if (c->kind != RKind::Atom || c->atom.rel != RelOp::EQ) continue;
        if (c->atom.p.degree_in(x) != 1) continue;
        auto coeffs = c->atom.p.coefficients_in(x);
        if (!coeffs[1].is_constant()) continue;
        Rational lead = coeffs[1].constant_value();
        if (lead == 0) continue;
        QPoly value = coeffs[0].divided_by(-lead);
        std::vector<RFormula> rest;
        for (std::size_t j = 0; j < conjuncts.size(); ++j)
            if (j != i) rest.push_back(rsubstitute(conjuncts[j], x, value));
        if (stats) {
            ++stats->eliminated;
            ++stats->test_points;
        }
        return simplify(rest.empty() ? rf::top() : rf::conjunction(std::move(rest)), env);
    }

    std::vector<AtomInX> atoms;
    rvisit_atoms(f, [&](const RAtom& a) {
        if (a.p.contains(x)) atoms.push_back(analyze_atom(a, x));
    });
    std::vector<TestPoint> points = elimination_set(atoms, table.size(), table, x);
    std::vector<RFormula> branches;
    for (const auto& tp : points) {
        RFormula sub = substitute_test_point(f, x, tp);
        branches.push_back(simplify(rf::conjunction({tp.guard, sub}), env));
    }
    if (stats) {
        ++stats->eliminated;
        stats->test_points += points.size();
    }
    return simplify(rf::disjunction(std::move(branches)), env);
}

inline bool var_feasible(const RFormula& f, std::size_t x) {
    bool ok = true;
    rvisit_atoms(f, [&](const RAtom& a) {
        if (!ok || !a.p.contains(x)) return;
        AtomInX ax = analyze_atom(a, x);
        if (reduced_degree(ax) > 2) ok = false;
    });
    return ok;
}

struct VarCost {
    std::size_t atoms = 0;
    std::uint64_t degsum = 0;
};

inline VarCost var_cost(const RFormula& f, std::size_t x) {
    VarCost c;
    rvisit_atoms(f, [&](const RAtom& a) {
        if (!a.p.contains(x)) return;
        ++c.atoms;
        c.degsum += a.p.degree_in(x);
    });
    return c;
}

// Block of identically quantified variables; order within the block is free,
// so the cheapest feasible variable is taken first.
inline RFormula eliminate_block(std::vector<std::size_t> vars, bool existential, RFormula matrix,
                                const RealVarTable& table, const SignEnv& env, VsStats* stats) {
    RFormula f = existential ? rnnf(matrix) : rnnf(matrix, true);
    while (!vars.empty()) {
        f = simplify(f, env);
        std::optional<std::size_t> best;
        VarCost best_cost;
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            std::size_t x = vars[i];
            if (!rformula_contains(f, x)) {
                best = x;
                best_cost = VarCost{0, 0};
                best_pos = i;
                break;
            }
            if (!var_feasible(f, x)) continue;
            VarCost c = var_cost(f, x);
            if (!best || c.atoms < best_cost.atoms ||
                (c.atoms == best_cost.atoms && c.degsum < best_cost.degsum)) {
                best = x;
                best_cost = c;
                best_pos = i;
            }
        }
        if (!best) {
            // Report the offending variable and atom.
            std::size_t x = vars.front();
            std::string atom_text = "?";
            rvisit_atoms(f, [&](const RAtom& a) {
                if (a.p.contains(x)) {
                    AtomInX ax = analyze_atom(a, x);
                    if (reduced_degree(ax) > 2) atom_text = ratom_to_string(a, table);
                }
            });
            throw DegreeTooHighError(table.names[x], atom_text);
        }
        f = eliminate_exists(*best, f, table, env, stats);
        vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }
    return existential ? f : rnegate(f);
}

} // namespace vs_detail

struct RPrefixEntry {
    Quantifier quant;
    std::size_t gen;
};

// Virtual substitution over linear and quadratic occurrences. Quantifier
// blocks are eliminated innermost first; universal blocks via negation.
inline RFormula vs_eliminate(const std::vector<RPrefixEntry>& prefix, const RFormula& matrix,
                             const RealVarTable& table, const SignEnv& env = {},
                             VsStats* stats = nullptr) {
    RFormula f = matrix;
    std::size_t i = prefix.size();
    while (i > 0) {
        std::size_t j = i;
        Quantifier q = prefix[i - 1].quant;
        while (j > 0 && prefix[j - 1].quant == q) --j;
        std::vector<std::size_t> block;
        for (std::size_t k = j; k < i; ++k) block.push_back(prefix[k].gen);
        f = vs_detail::eliminate_block(std::move(block), q == Quantifier::Exists, f, table, env,
                                       stats);
        i = j;
    }
    return simplify(f, env);
}

} // namespace pcqe
