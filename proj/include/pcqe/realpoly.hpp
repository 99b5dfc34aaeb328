#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "relop.hpp"

namespace pcqe {

// Ordered table of real-valued variables; polynomial generator g corresponds
// to names[g].
struct RealVarTable {
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        return std::nullopt;
    }
};

// Atom of the ordered-ring fragment: p rel 0 with p over a RealVarTable.
struct RAtom {
    QPoly p;
    RelOp rel;

    friend bool operator==(const RAtom& a, const RAtom& b) {
        return a.rel == b.rel && a.p == b.p;
    }
};

enum class RKind { Top, Bot, Atom, Not, And, Or };

class RNode;
using RFormula = std::shared_ptr<const RNode>;

class RNode {
public:
    RKind kind;
    RAtom atom;
    std::vector<RFormula> args;

    RNode(RKind k, RAtom a, std::vector<RFormula> ch)
        : kind(k), atom(std::move(a)), args(std::move(ch)) {}
};

namespace rf {

inline RFormula top() { return std::make_shared<RNode>(RKind::Top, RAtom{}, std::vector<RFormula>{}); }
inline RFormula bot() { return std::make_shared<RNode>(RKind::Bot, RAtom{}, std::vector<RFormula>{}); }

inline RFormula constant(bool b) { return b ? top() : bot(); }

inline RFormula atom(QPoly p, RelOp rel) {
    return std::make_shared<RNode>(RKind::Atom, RAtom{std::move(p), rel}, std::vector<RFormula>{});
}

inline RFormula negation(RFormula f) {
    return std::make_shared<RNode>(RKind::Not, RAtom{}, std::vector<RFormula>{std::move(f)});
}

inline RFormula conjunction(std::vector<RFormula> fs) {
    return std::make_shared<RNode>(RKind::And, RAtom{}, std::move(fs));
}

inline RFormula disjunction(std::vector<RFormula> fs) {
    return std::make_shared<RNode>(RKind::Or, RAtom{}, std::move(fs));
}

} // namespace rf

// not (p rel 0) as an atom of the same language.
inline RAtom negate_atom(const RAtom& a) {
    switch (a.rel) {
        case RelOp::EQ: return {a.p, RelOp::NE};
        case RelOp::NE: return {a.p, RelOp::EQ};
        case RelOp::LE: return {-a.p, RelOp::LT}; // not (p <= 0)  <=>  -p < 0
        case RelOp::LT: return {-a.p, RelOp::LE};
    }
    throw Error("unreachable relation");
}

// Negation normal form; the result contains no Not nodes.
inline RFormula rnnf(const RFormula& f, bool negate = false) {
    switch (f->kind) {
        case RKind::Top: return negate ? rf::bot() : rf::top();
        case RKind::Bot: return negate ? rf::top() : rf::bot();
        case RKind::Atom: return negate ? rf::atom(negate_atom(f->atom).p, negate_atom(f->atom).rel)
                                        : f;
        case RKind::Not: return rnnf(f->args[0], !negate);
        case RKind::And:
        case RKind::Or: {
            std::vector<RFormula> args;
            args.reserve(f->args.size());
            for (const auto& a : f->args) args.push_back(rnnf(a, negate));
            bool and_node = (f->kind == RKind::And) != negate;
            return and_node ? rf::conjunction(std::move(args)) : rf::disjunction(std::move(args));
        }
    }
    throw Error("unreachable kind");
}

inline RFormula rnegate(const RFormula& f) { return rnnf(f, true); }

inline bool rconst_value(const RFormula& f) { return f->kind == RKind::Top; }
inline bool is_rconst(const RFormula& f) { return f->kind == RKind::Top || f->kind == RKind::Bot; }

// Canonical total order used for deterministic child sorting.
inline int rformula_cmp(const RFormula& a, const RFormula& b) {
    auto rank = [](RKind k) {
        switch (k) {
            case RKind::Top: return 0;
            case RKind::Bot: return 1;
            case RKind::Atom: return 2;
            case RKind::Not: return 3;
            case RKind::And: return 4;
            case RKind::Or: return 5;
        }
        return 6;
    };
    if (a->kind != b->kind) return rank(a->kind) < rank(b->kind) ? -1 : 1;
    if (a->kind == RKind::Atom) {
        int pc = poly_cmp(a->atom.p, b->atom.p);
        if (pc != 0) return pc;
        if (a->atom.rel != b->atom.rel)
            return static_cast<int>(a->atom.rel) < static_cast<int>(b->atom.rel) ? -1 : 1;
        return 0;
    }
    if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        int c = rformula_cmp(a->args[i], b->args[i]);
        if (c != 0) return c;
    }
    return 0;
}

inline bool rformula_equal(const RFormula& a, const RFormula& b) {
    return rformula_cmp(a, b) == 0;
}

template <typename F>
inline void rvisit_atoms(const RFormula& f, F&& fn) {
    if (f->kind == RKind::Atom) {
        fn(f->atom);
        return;
    }
    for (const auto& a : f->args) rvisit_atoms(a, fn);
}

template <typename F>
inline RFormula rmap_atoms(const RFormula& f, F&& fn) {
    if (f->kind == RKind::Atom) return fn(f->atom);
    if (f->args.empty()) return f;
    std::vector<RFormula> args;
    args.reserve(f->args.size());
    for (const auto& a : f->args) args.push_back(rmap_atoms(a, fn));
    return std::make_shared<RNode>(f->kind, f->atom, std::move(args));
}

inline bool rformula_contains(const RFormula& f, std::size_t gen) {
    bool found = false;
    rvisit_atoms(f, [&](const RAtom& a) { found = found || a.p.contains(gen); });
    return found;
}

// Substitutes generator g by a polynomial in every atom.
inline RFormula rsubstitute(const RFormula& f, std::size_t g, const QPoly& value) {
    return rmap_atoms(f, [&](const RAtom& a) {
        return rf::atom(a.p.substituted(g, value), a.rel);
    });
}

inline bool reval(const RFormula& f, std::span<const Rational> point) {
    switch (f->kind) {
        case RKind::Top: return true;
        case RKind::Bot: return false;
        case RKind::Atom: {
            Rational v = f->atom.p.eval(point);
            switch (f->atom.rel) {
                case RelOp::EQ: return v == 0;
                case RelOp::NE: return v != 0;
                case RelOp::LE: return v <= 0;
                case RelOp::LT: return v < 0;
            }
            return false;
        }
        case RKind::Not: return !reval(f->args[0], point);
        case RKind::And:
            for (const auto& a : f->args)
                if (!reval(a, point)) return false;
            return true;
        case RKind::Or:
            for (const auto& a : f->args)
                if (reval(a, point)) return true;
            return false;
    }
    throw Error("unreachable kind");
}

} // namespace pcqe
