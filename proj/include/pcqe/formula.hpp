#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "relop.hpp"
#include "term.hpp"

namespace pcqe {

struct Atom {
    Term lhs;
    RelOp rel;
    Term rhs;
};

enum class FormulaKind {
    Top,
    Bot,
    AtomF,
    Not,
    And, // arbitrary arity
    Or,  // arbitrary arity
    Implies,
    Iff,
    Exists,
    Forall,
};

class FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

class FormulaNode {
public:
    FormulaKind kind;
    Atom atom;                  // AtomF
    Variable var;               // Exists / Forall
    std::vector<Formula> args;

    FormulaNode(FormulaKind k, Atom a, Variable v, std::vector<Formula> ch)
        : kind(k), atom(std::move(a)), var(std::move(v)), args(std::move(ch)) {}
};

namespace fm {

inline Formula top() {
    return std::make_shared<FormulaNode>(FormulaKind::Top, Atom{}, Variable{}, std::vector<Formula>{});
}

inline Formula bot() {
    return std::make_shared<FormulaNode>(FormulaKind::Bot, Atom{}, Variable{}, std::vector<Formula>{});
}

inline Formula atom(Atom a) {
    return std::make_shared<FormulaNode>(FormulaKind::AtomF, std::move(a), Variable{},
                                         std::vector<Formula>{});
}

inline Formula atom(Term lhs, RelOp rel, Term rhs) {
    return atom(Atom{std::move(lhs), rel, std::move(rhs)});
}

inline Formula negation(Formula f) {
    return std::make_shared<FormulaNode>(FormulaKind::Not, Atom{}, Variable{},
                                         std::vector<Formula>{std::move(f)});
}

inline Formula conjunction(std::vector<Formula> fs) {
    return std::make_shared<FormulaNode>(FormulaKind::And, Atom{}, Variable{}, std::move(fs));
}

inline Formula disjunction(std::vector<Formula> fs) {
    return std::make_shared<FormulaNode>(FormulaKind::Or, Atom{}, Variable{}, std::move(fs));
}

inline Formula implies(Formula a, Formula b) {
    return std::make_shared<FormulaNode>(FormulaKind::Implies, Atom{}, Variable{},
                                         std::vector<Formula>{std::move(a), std::move(b)});
}

inline Formula iff(Formula a, Formula b) {
    return std::make_shared<FormulaNode>(FormulaKind::Iff, Atom{}, Variable{},
                                         std::vector<Formula>{std::move(a), std::move(b)});
}

inline Formula exists(Variable v, Formula body) {
    return std::make_shared<FormulaNode>(FormulaKind::Exists, Atom{}, std::move(v),
                                         std::vector<Formula>{std::move(body)});
}

inline Formula forall(Variable v, Formula body) {
    return std::make_shared<FormulaNode>(FormulaKind::Forall, Atom{}, std::move(v),
                                         std::vector<Formula>{std::move(body)});
}

} // namespace fm

inline bool is_quantifier(const Formula& f) {
    return f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall;
}

inline bool is_quantifier_free(const Formula& f) {
    if (is_quantifier(f)) return false;
    for (const auto& a : f->args)
        if (!is_quantifier_free(a)) return false;
    return true;
}

inline bool has_quantifier(const Formula& f) { return !is_quantifier_free(f); }

inline bool is_prenex(const Formula& f) {
    const FormulaNode* p = f.get();
    while (p->kind == FormulaKind::Exists || p->kind == FormulaKind::Forall)
        p = p->args[0].get();
    for (const auto& a : p->args)
        if (!is_quantifier_free(a)) return false;
    return true;
}

inline void collect_atom_variables(const Formula& f, std::set<Variable>& out) {
    if (f->kind == FormulaKind::AtomF) {
        collect_variables(f->atom.lhs, out);
        collect_variables(f->atom.rhs, out);
        return;
    }
    for (const auto& a : f->args) collect_atom_variables(a, out);
}

inline void collect_bound_variables(const Formula& f, std::set<Variable>& out) {
    if (is_quantifier(f)) out.insert(f->var);
    for (const auto& a : f->args) collect_bound_variables(a, out);
}

// Variables occurring in atoms but not bound by a quantifier, in variable order.
inline std::vector<Variable> free_vars(const Formula& f) {
    std::set<Variable> occ, bound;
    collect_atom_variables(f, occ);
    collect_bound_variables(f, bound);
    std::vector<Variable> out;
    for (const auto& v : occ)
        if (!bound.contains(v)) out.push_back(v);
    return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

// Rejects formulas where a variable is both free and bound, or bound twice.
inline void validate_binding(const Formula& f) {
    std::set<Variable> quantified;
    std::function<void(const Formula&)> collect = [&](const Formula& g) {
        if (is_quantifier(g)) {
            if (!quantified.insert(g->var).second)
                throw ContextError("variable bound twice: " + g->var.name);
        }
        for (const auto& a : g->args) collect(a);
    };
    collect(f);
    // An occurrence of a quantified name outside its scope makes the variable
    // both free and bound.
    std::function<void(const Formula&, std::set<Variable>&)> walk =
        [&](const Formula& g, std::set<Variable>& scope) {
            if (g->kind == FormulaKind::AtomF) {
                std::set<Variable> vars;
                collect_variables(g->atom.lhs, vars);
                collect_variables(g->atom.rhs, vars);
                for (const auto& v : vars)
                    if (quantified.contains(v) && !scope.contains(v))
                        throw ContextError("variable both free and bound: " + v.name);
                return;
            }
            if (is_quantifier(g)) {
                scope.insert(g->var);
                walk(g->args[0], scope);
                scope.erase(g->var);
                return;
            }
            for (const auto& a : g->args) walk(a, scope);
        };
    std::set<Variable> scope;
    walk(f, scope);
}

inline Term rename_in_term(const Term& t, const Variable& from, const Variable& to) {
    if (t->kind == TermKind::Var) return t->var == from ? tm::variable(to) : t;
    if (t->args.empty()) return t;
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(rename_in_term(a, from, to));
    return std::make_shared<TermNode>(t->kind, t->value, t->var, t->exponent, std::move(args));
}

inline Formula rename_in_formula(const Formula& f, const Variable& from, const Variable& to) {
    if (f->kind == FormulaKind::AtomF) {
        return fm::atom(rename_in_term(f->atom.lhs, from, to), f->atom.rel,
                        rename_in_term(f->atom.rhs, from, to));
    }
    std::vector<Formula> args;
    args.reserve(f->args.size());
    for (const auto& a : f->args) args.push_back(rename_in_formula(a, from, to));
    Variable v = (is_quantifier(f) && f->var == from) ? to : f->var;
    return std::make_shared<FormulaNode>(f->kind, f->atom, v, std::move(args));
}

enum class Quantifier { Exists, Forall };

inline Quantifier dual(Quantifier q) {
    return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

struct PrefixEntry {
    Quantifier quant;
    Variable var;
};

struct PrenexForm {
    std::vector<PrefixEntry> prefix; // outermost first
    Formula matrix;                  // quantifier free
};

inline Formula attach_prefix(const std::vector<PrefixEntry>& prefix, Formula matrix) {
    Formula f = std::move(matrix);
    for (std::size_t i = prefix.size(); i-- > 0;) {
        f = prefix[i].quant == Quantifier::Exists ? fm::exists(prefix[i].var, f)
                                                  : fm::forall(prefix[i].var, f);
    }
    return f;
}

namespace detail {

class FreshNames {
public:
    explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}

    Variable fresh() {
        while (true) {
            std::string name = "v#" + std::to_string(counter_++);
            if (used_.insert(name).second) return Variable(name);
        }
    }

private:
    std::set<std::string> used_;
    unsigned counter_ = 0;
};

inline void collect_all_names(const Formula& f, std::set<std::string>& out) {
    std::set<Variable> occ, bound;
    collect_atom_variables(f, occ);
    collect_bound_variables(f, bound);
    for (const auto& v : occ) out.insert(v.name);
    for (const auto& v : bound) out.insert(v.name);
}

// Pulls quantifiers to the front. `polarity_safe` callers must have removed
// Implies/Iff around quantifiers beforehand; this function does so itself by
// rewriting on demand.
inline PrenexForm pull_quantifiers(const Formula& f, FreshNames& fresh) {
    switch (f->kind) {
        case FormulaKind::Top:
        case FormulaKind::Bot:
        case FormulaKind::AtomF:
            return {{}, f};
        case FormulaKind::Not: {
            PrenexForm inner = pull_quantifiers(f->args[0], fresh);
            for (auto& e : inner.prefix) e.quant = dual(e.quant);
            inner.matrix = fm::negation(inner.matrix);
            return inner;
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
            // Hoisting across siblings: a bound variable is renamed when it is
            // already in the accumulated prefix or occurs in another child.
            std::vector<PrefixEntry> prefix;
            std::set<Variable> taken;
            std::vector<Formula> matrices;
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                PrenexForm part = pull_quantifiers(f->args[i], fresh);
                std::set<Variable> siblings;
                for (std::size_t j = 0; j < f->args.size(); ++j)
                    if (j != i) collect_atom_variables(f->args[j], siblings);
                for (auto& e : part.prefix) {
                    if (taken.contains(e.var) || siblings.contains(e.var)) {
                        Variable nv = fresh.fresh();
                        part.matrix = rename_in_formula(part.matrix, e.var, nv);
                        e.var = nv;
                    }
                    taken.insert(e.var);
                    prefix.push_back(e);
                }
                matrices.push_back(part.matrix);
            }
            Formula matrix = f->kind == FormulaKind::And ? fm::conjunction(std::move(matrices))
                                                         : fm::disjunction(std::move(matrices));
            return {std::move(prefix), std::move(matrix)};
        }
        case FormulaKind::Implies: {
            if (is_quantifier_free(f)) return {{}, f};
            return pull_quantifiers(fm::disjunction({fm::negation(f->args[0]), f->args[1]}), fresh);
        }
        case FormulaKind::Iff: {
            if (is_quantifier_free(f)) return {{}, f};
            Formula a = f->args[0], b = f->args[1];
            // Duplicating the sides re-binds their quantified variables, so
            // refresh all bound names in one copy of each side.
            Formula a2 = a, b2 = b;
            std::set<Variable> bound;
            collect_bound_variables(a, bound);
            for (const auto& v : bound) a2 = rename_in_formula(a2, v, fresh.fresh());
            bound.clear();
            collect_bound_variables(b, bound);
            for (const auto& v : bound) b2 = rename_in_formula(b2, v, fresh.fresh());
            Formula expanded = fm::conjunction({fm::disjunction({fm::negation(a), b}),
                                                fm::disjunction({fm::negation(b2), a2})});
            return pull_quantifiers(expanded, fresh);
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            PrenexForm inner = pull_quantifiers(f->args[0], fresh);
            Quantifier q = f->kind == FormulaKind::Exists ? Quantifier::Exists : Quantifier::Forall;
            inner.prefix.insert(inner.prefix.begin(), PrefixEntry{q, f->var});
            return inner;
        }
    }
    throw Error("unreachable formula kind");
}

} // namespace detail

// Standard prenex motion. Bound variables are renamed with fresh `v#k` names
// on capture.
inline PrenexForm to_prenex(const Formula& f) {
    std::set<std::string> used;
    detail::collect_all_names(f, used);
    detail::FreshNames fresh(std::move(used));
    return detail::pull_quantifiers(f, fresh);
}

inline Formula prenexify(const Formula& f) {
    PrenexForm p = to_prenex(f);
    return attach_prefix(p.prefix, p.matrix);
}

// Applies fn to every atom, rebuilding the formula.
inline Formula map_atoms(const Formula& f, const std::function<Formula(const Atom&)>& fn) {
    if (f->kind == FormulaKind::AtomF) return fn(f->atom);
    if (f->args.empty()) return f;
    std::vector<Formula> args;
    args.reserve(f->args.size());
    for (const auto& a : f->args) args.push_back(map_atoms(a, fn));
    return std::make_shared<FormulaNode>(f->kind, f->atom, f->var, std::move(args));
}

} // namespace pcqe
