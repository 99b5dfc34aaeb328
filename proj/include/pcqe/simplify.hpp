#pragma once

#include <map>
#include <optional>
#include <vector>

#include "realpoly.hpp"

namespace pcqe {

// Sign information as a subset of {negative, zero, positive}.
using SignSet = unsigned;
constexpr SignSet SIGN_NEG = 1u, SIGN_ZERO = 2u, SIGN_POS = 4u;
constexpr SignSet SIGN_ALL = SIGN_NEG | SIGN_ZERO | SIGN_POS;
constexpr SignSet SIGN_NONE = 0u;

inline SignSet sign_of_rational(const Rational& q) {
    return q < 0 ? SIGN_NEG : q == 0 ? SIGN_ZERO : SIGN_POS;
}

// Allowed signs of p in the atom `p rel 0`.
inline SignSet rel_sign_set(RelOp rel) {
    switch (rel) {
        case RelOp::EQ: return SIGN_ZERO;
        case RelOp::NE: return SIGN_NEG | SIGN_POS;
        case RelOp::LE: return SIGN_NEG | SIGN_ZERO;
        case RelOp::LT: return SIGN_NEG;
    }
    return SIGN_ALL;
}

inline SignSet sign_mirror(SignSet s) {
    SignSet r = s & SIGN_ZERO;
    if (s & SIGN_NEG) r |= SIGN_POS;
    if (s & SIGN_POS) r |= SIGN_NEG;
    return r;
}

inline SignSet sign_mul(SignSet a, SignSet b) {
    SignSet r = 0;
    if ((a & SIGN_ZERO) && b) r |= SIGN_ZERO;
    if ((b & SIGN_ZERO) && a) r |= SIGN_ZERO;
    if ((a & SIGN_POS) && (b & SIGN_POS)) r |= SIGN_POS;
    if ((a & SIGN_NEG) && (b & SIGN_NEG)) r |= SIGN_POS;
    if ((a & SIGN_POS) && (b & SIGN_NEG)) r |= SIGN_NEG;
    if ((a & SIGN_NEG) && (b & SIGN_POS)) r |= SIGN_NEG;
    return r;
}

inline SignSet sign_add(SignSet a, SignSet b) {
    SignSet r = 0;
    auto one = [&](SignSet x, SignSet y) {
        if (x == SIGN_NEG) return y == SIGN_POS ? SIGN_ALL : SIGN_NEG;
        if (x == SIGN_POS) return y == SIGN_NEG ? SIGN_ALL : SIGN_POS;
        return y; // x is zero
    };
    for (SignSet x : {SIGN_NEG, SIGN_ZERO, SIGN_POS})
        if (a & x)
            for (SignSet y : {SIGN_NEG, SIGN_ZERO, SIGN_POS})
                if (b & y) r |= one(x, y);
    return r;
}

inline SignSet sign_pow(SignSet s, std::uint32_t e) {
    if (e == 0) return SIGN_POS;
    if (e % 2 == 1) return s;
    SignSet r = s & SIGN_ZERO;
    if (s & (SIGN_NEG | SIGN_POS)) r |= SIGN_POS;
    return r;
}

struct PolyLess {
    bool operator()(const QPoly& a, const QPoly& b) const { return poly_cmp(a, b) < 0; }
};

// Known sign information: per-variable signs plus signs of whole polynomials
// (keyed by their canonical positive-leading primitive form).
struct SignEnv {
    std::map<std::size_t, SignSet> var_signs;
    std::map<QPoly, SignSet, PolyLess> poly_facts;

    SignSet var_sign(std::size_t g) const {
        auto it = var_signs.find(g);
        return it == var_signs.end() ? SIGN_ALL : it->second;
    }

    void meet_var(std::size_t g, SignSet s) {
        auto it = var_signs.find(g);
        if (it == var_signs.end())
            var_signs.emplace(g, s);
        else
            it->second &= s;
    }

    void meet_poly(const QPoly& q, SignSet s) {
        auto it = poly_facts.find(q);
        if (it == poly_facts.end())
            poly_facts.emplace(q, s);
        else
            it->second &= s;
    }
};

// Interval-free sign estimate of a polynomial under the environment.
inline SignSet sign_estimate(const QPoly& p, const SignEnv& env) {
    if (p.is_zero()) return SIGN_ZERO;
    SignSet total = SIGN_NONE;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        SignSet s = sign_of_rational(c);
        for (std::size_t g = 0; g < p.width(); ++g) {
            std::uint32_t e = m.exponent(g);
            if (e == 0) continue;
            s = sign_mul(s, sign_pow(env.var_sign(g), e));
        }
        total = first ? s : sign_add(total, s);
        first = false;
        if (total == SIGN_ALL) return SIGN_ALL;
    }
    return total;
}

// Canonical form of an atom: primitive polynomial with positive leading
// coefficient plus the set of signs that make the atom true.
inline std::pair<QPoly, SignSet> canonical_ratom(const RAtom& a) {
    SignSet s = rel_sign_set(a.rel);
    if (a.p.is_zero()) return {a.p, s};
    QPoly q = a.p;
    Rational c = rational_content(q);
    if (c != 1) q = q.divided_by(c);
    if (q.leading_coefficient() < 0) {
        q = -q;
        s = sign_mirror(s);
    }
    return {std::move(q), s};
}

// Smallest atom (or constant) expressing sign(q) in S.
inline RFormula render_sign_atom(const QPoly& q, SignSet s) {
    switch (s) {
        case SIGN_NONE: return rf::bot();
        case SIGN_ALL: return rf::top();
        case SIGN_ZERO: return rf::atom(q, RelOp::EQ);
        case SIGN_NEG | SIGN_POS: return rf::atom(q, RelOp::NE);
        case SIGN_NEG: return rf::atom(q, RelOp::LT);
        case SIGN_NEG | SIGN_ZERO: return rf::atom(q, RelOp::LE);
        case SIGN_POS: return rf::atom(-q, RelOp::LT);
        case SIGN_ZERO | SIGN_POS: return rf::atom(-q, RelOp::LE);
    }
    throw Error("unreachable sign set");
}

namespace detail {

inline RFormula simplify_pass(const RFormula& f, const SignEnv& env);

inline RFormula simplify_atom(const RAtom& a, const SignEnv& env) {
    auto [q, allowed] = canonical_ratom(a);
    SignSet est = sign_estimate(q, env);
    auto it = env.poly_facts.find(q);
    if (it != env.poly_facts.end()) est &= it->second;
    if ((est & allowed) == est) return rf::top();       // every possible sign satisfies
    if ((est & allowed) == SIGN_NONE) return rf::bot(); // no possible sign satisfies
    return render_sign_atom(q, allowed);
}

struct JunctionState {
    bool is_and;
    std::map<QPoly, SignSet, PolyLess> atoms; // merged by canonical polynomial
    std::vector<RFormula> others;
    bool decided = false; // whole junction collapsed to a constant

    // For And: intersect sign sets; for Or: unite them.
    void add_atom(const QPoly& q, SignSet s) {
        auto it = atoms.find(q);
        if (it == atoms.end())
            atoms.emplace(q, s);
        else
            it->second = is_and ? (it->second & s) : (it->second | s);
    }
};

inline void flatten_into(const RFormula& f, RKind kind, std::vector<RFormula>& out) {
    if (f->kind == kind) {
        for (const auto& a : f->args) flatten_into(a, kind, out);
        return;
    }
    out.push_back(f);
}

inline RFormula simplify_junction(const RFormula& f, const SignEnv& env) {
    const bool is_and = f->kind == RKind::And;
    const RKind kind = f->kind;
    const RFormula absorbing = is_and ? rf::bot() : rf::top();
    const RFormula neutral = is_and ? rf::top() : rf::bot();

    std::vector<RFormula> flat;
    for (const auto& a : f->args) {
        RFormula s = simplify_pass(a, env);
        flatten_into(s, kind, flat);
    }

    JunctionState st{is_and, {}, {}, false};
    for (const auto& c : flat) {
        if (is_rconst(c)) {
            if (rconst_value(c) != is_and) return absorbing;
            continue;
        }
        if (c->kind == RKind::Atom) {
            auto [q, s] = canonical_ratom(c->atom);
            st.add_atom(q, s);
        } else {
            st.others.push_back(c);
        }
    }

    // Re-examine merged atoms; the merge may have made one trivial or empty.
    std::vector<std::pair<QPoly, SignSet>> atom_list;
    for (auto& [q, s] : st.atoms) {
        SignSet est = sign_estimate(q, env);
        auto it = env.poly_facts.find(q);
        if (it != env.poly_facts.end()) est &= it->second;
        SignSet eff = est & s;
        if (eff == est) {
            if (is_and) continue;       // conjunct already guaranteed
            return absorbing;           // a true disjunct decides the node
        }
        if (eff == SIGN_NONE) {
            if (is_and) return absorbing; // contradictory conjunct
            continue;                     // dead disjunct
        }
        atom_list.emplace_back(q, s);
    }

    // Cross-simplification between atoms and composite children.
    // In a conjunction: A and (A or B) = A; A and (not-A or B) = A and B.
    // In a disjunction the dual rules apply.
    std::map<QPoly, SignSet, PolyLess> facts;
    for (const auto& [q, s] : atom_list) facts.emplace(q, s);

    std::vector<RFormula> kept_others;
    const RKind inner_kind = is_and ? RKind::Or : RKind::And;
    for (const auto& child : st.others) {
        if (child->kind != inner_kind) {
            kept_others.push_back(child);
            continue;
        }
        bool drop_child = false;
        std::vector<RFormula> inner_kept;
        for (const auto& g : child->args) {
            if (g->kind == RKind::Atom) {
                auto [q, s2] = canonical_ratom(g->atom);
                auto it = facts.find(q);
                if (it != facts.end()) {
                    SignSet s1 = it->second;
                    if (is_and) {
                        if ((s1 & ~s2) == 0) { drop_child = true; break; } // implied disjunct
                        if ((s1 & s2) == 0) continue;                      // dead disjunct
                    } else {
                        if ((s2 & ~s1) == 0) { drop_child = true; break; } // implying conjunct
                        if ((s1 | s2) == SIGN_ALL) continue;               // redundant conjunct
                    }
                }
            }
            inner_kept.push_back(g);
        }
        if (drop_child) continue;
        if (inner_kept.empty()) {
            // Or-child with no live disjunct is false; And-child with no
            // needed conjunct is true.
            if (is_and) return absorbing;
            continue;
        }
        if (inner_kept.size() != child->args.size()) {
            RFormula rebuilt = inner_kept.size() == 1
                                   ? inner_kept[0]
                                   : std::make_shared<RNode>(inner_kind, RAtom{}, std::move(inner_kept));
            kept_others.push_back(simplify_pass(rebuilt, env));
        } else {
            kept_others.push_back(child);
        }
    }

    // Deduplicate composite children and drop those equal to a sibling of the
    // outer junction (idempotence), then sort canonically.
    std::vector<RFormula> children;
    for (const auto& [q, s] : atom_list) children.push_back(render_sign_atom(q, s));
    for (const auto& c : kept_others) {
        if (is_rconst(c)) {
            if (rconst_value(c) != is_and) return absorbing;
            continue;
        }
        children.push_back(c);
    }
    std::sort(children.begin(), children.end(),
              [](const RFormula& a, const RFormula& b) { return rformula_cmp(a, b) < 0; });
    children.erase(std::unique(children.begin(), children.end(),
                               [](const RFormula& a, const RFormula& b) {
                                   return rformula_cmp(a, b) == 0;
                               }),
                   children.end());

    if (children.empty()) return neutral;
    if (children.size() == 1) return children[0];
    return std::make_shared<RNode>(kind, RAtom{}, std::move(children));
}

inline RFormula simplify_pass(const RFormula& f, const SignEnv& env) {
    switch (f->kind) {
        case RKind::Top:
        case RKind::Bot:
            return f;
        case RKind::Atom:
            return simplify_atom(f->atom, env);
        case RKind::Not:
            return simplify_pass(rnegate(f->args[0]), env);
        case RKind::And:
        case RKind::Or:
            return simplify_junction(f, env);
    }
    throw Error("unreachable kind");
}

} // namespace detail

// Bottom-up simplification to a fixed point: constant folding, flattening,
// duplicate and same-polynomial atom merging, truth-constant absorption and
// atom-level cross-absorption, with optional sign knowledge.
inline RFormula simplify(const RFormula& f, const SignEnv& env = {}) {
    RFormula cur = rnnf(f);
    for (int round = 0; round < 8; ++round) {
        RFormula next = detail::simplify_pass(cur, env);
        if (rformula_equal(next, cur)) return next;
        cur = next;
    }
    return cur;
}

} // namespace pcqe
