#pragma once

#include <utility>
#include <vector>

#include "formula.hpp"
#include "normal_forms.hpp"
#include "printer.hpp"
#include "realpoly.hpp"

namespace pcqe {

// Real normal form: prenex prefix over complex variables plus a matrix whose
// atoms are real polynomials over the Cartesian generators of ctx
// (generator k is Re(z_k), generator n+k is Im(z_k)), each compared with 0.
struct RealNf {
    VarContext ctx;
    std::vector<PrefixEntry> prefix;
    RFormula matrix;
};

namespace detail {

inline std::string atom_text(const Atom& a) { return print_formula(fm::atom(a)); }

inline RFormula real_nf_atom(const Atom& a, const VarContext& ctx, bool lenient) {
    if (a.rel == RelOp::LE || a.rel == RelOp::LT) {
        bool real_sides = to_cartesian_nf(a.lhs, ctx).is_real() &&
                          to_cartesian_nf(a.rhs, ctx).is_real();
        if (!real_sides) {
            if (lenient) return rf::bot();
            throw RealnessError("ordering applied to a non-real term: " + atom_text(a));
        }
        PolyCart d = to_cartesian_nf(tm::sub(a.lhs, a.rhs), ctx);
        return rf::atom(d.p1, a.rel);
    }
    PolyCart d = to_cartesian_nf(tm::sub(a.lhs, a.rhs), ctx);
    const QPoly& f = d.p1;
    const QPoly& g = d.p2;
    if (a.rel == RelOp::EQ) {
        if (f.is_zero() && g.is_zero()) return rf::top();
        if (g.is_zero()) return rf::atom(f, RelOp::EQ);
        if (f.is_zero()) return rf::atom(g, RelOp::EQ);
        return rf::conjunction({rf::atom(f, RelOp::EQ), rf::atom(g, RelOp::EQ)});
    }
    // t1 != t2
    if (f.is_zero() && g.is_zero()) return rf::bot();
    if (g.is_zero()) return rf::atom(f, RelOp::NE);
    if (f.is_zero()) return rf::atom(g, RelOp::NE);
    return rf::disjunction({rf::atom(f, RelOp::NE), rf::atom(g, RelOp::NE)});
}

inline RFormula real_nf_matrix(const Formula& f, const VarContext& ctx, bool lenient) {
    switch (f->kind) {
        case FormulaKind::Top: return rf::top();
        case FormulaKind::Bot: return rf::bot();
        case FormulaKind::AtomF: return real_nf_atom(f->atom, ctx, lenient);
        case FormulaKind::Not: return rf::negation(real_nf_matrix(f->args[0], ctx, lenient));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<RFormula> args;
            args.reserve(f->args.size());
            for (const auto& a : f->args) args.push_back(real_nf_matrix(a, ctx, lenient));
            return f->kind == FormulaKind::And ? rf::conjunction(std::move(args))
                                               : rf::disjunction(std::move(args));
        }
        case FormulaKind::Implies:
            return rf::disjunction({rf::negation(real_nf_matrix(f->args[0], ctx, lenient)),
                                    real_nf_matrix(f->args[1], ctx, lenient)});
        case FormulaKind::Iff: {
            RFormula a = real_nf_matrix(f->args[0], ctx, lenient);
            RFormula b = real_nf_matrix(f->args[1], ctx, lenient);
            return rf::conjunction({rf::disjunction({rf::negation(a), b}),
                                    rf::disjunction({rf::negation(b), a})});
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            throw Error("quantifier inside a matrix");
    }
    throw Error("unreachable formula kind");
}

} // namespace detail

inline RealNf to_real_nf_internal(const Formula& f, bool lenient = false,
                                  const std::set<Variable>& extra_vars = {}) {
    PrenexForm p = to_prenex(f);
    std::set<Variable> vars = extra_vars;
    collect_atom_variables(f, vars);
    for (const auto& e : p.prefix) vars.insert(e.var);
    VarContext ctx = VarContext::sorted(vars);
    RFormula matrix = detail::real_nf_matrix(p.matrix, ctx, lenient);
    return RealNf{std::move(ctx), std::move(p.prefix), std::move(matrix)};
}

// Rebuilds a user-level formula from a real-fragment tree.
template <typename AtomFn>
inline Formula rformula_to_formula(const RFormula& f, AtomFn&& atom_fn) {
    switch (f->kind) {
        case RKind::Top: return fm::top();
        case RKind::Bot: return fm::bot();
        case RKind::Atom: return atom_fn(f->atom);
        case RKind::Not: return fm::negation(rformula_to_formula(f->args[0], atom_fn));
        case RKind::And:
        case RKind::Or: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (const auto& a : f->args) args.push_back(rformula_to_formula(a, atom_fn));
            return f->kind == RKind::And ? fm::conjunction(std::move(args))
                                         : fm::disjunction(std::move(args));
        }
    }
    throw Error("unreachable kind");
}

// Atoms rendered over Re(z)/Im(z) subterms with right-hand side 0.
inline Formula materialize_real_nf(const RealNf& nf) {
    Formula matrix = rformula_to_formula(nf.matrix, [&](const RAtom& a) {
        return fm::atom(qpoly_to_term(a.p, nf.ctx, true), a.rel, tm::constant(Rational(0)));
    });
    return attach_prefix(nf.prefix, matrix);
}

// Real normal form as a formula: every atom `p rel 0` with p a real
// polynomial over Re(z), Im(z). Raises on ordering atoms with non-real sides
// unless lenient, which rewrites them to F.
inline Formula to_real_nf(const Formula& f, bool lenient = false) {
    return materialize_real_nf(to_real_nf_internal(f, lenient));
}

} // namespace pcqe
