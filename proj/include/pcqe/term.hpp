#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace pcqe {

// Variable of the language. Variables are totally ordered; the order is
// short-lexicographic on names so that numbered families sort naturally
// (v1 < v2 < ... < v10).
struct Variable {
    std::string name;

    Variable() = default;
    explicit Variable(std::string n) : name(std::move(n)) {}

    friend bool operator==(const Variable& a, const Variable& b) { return a.name == b.name; }
    friend bool operator!=(const Variable& a, const Variable& b) { return a.name != b.name; }
    friend bool operator<(const Variable& a, const Variable& b) {
        if (a.name.size() != b.name.size()) return a.name.size() < b.name.size();
        return a.name < b.name;
    }
};

// Suffixes reserved for the auxiliary variables of purification.
inline bool has_reserved_suffix(const std::string& name) {
    return name.size() > 4 && (name.ends_with("__re") || name.ends_with("__im"));
}

enum class TermKind {
    Constant, // non-negative rational literal
    ImagUnit,
    Var,
    Add,
    Neg,
    Mul,
    Pow, // syntactic sugar for iterated multiplication
    Re,
    Im,
    Conj,
};

class TermNode;
using Term = std::shared_ptr<const TermNode>;

class TermNode {
public:
    TermKind kind;
    Rational value;          // Constant
    Variable var;            // Var
    std::uint32_t exponent;  // Pow
    std::vector<Term> args;

    TermNode(TermKind k, Rational v, Variable var_, std::uint32_t e, std::vector<Term> a)
        : kind(k), value(std::move(v)), var(std::move(var_)), exponent(e), args(std::move(a)) {}
};

namespace tm {

inline Term constant(Rational q) {
    if (q < 0) throw DomainError("constant symbols are non-negative; use neg()");
    return std::make_shared<TermNode>(TermKind::Constant, std::move(q), Variable{}, 0,
                                      std::vector<Term>{});
}

inline Term integer(long n) {
    if (n < 0) throw DomainError("constant symbols are non-negative; use neg()");
    return constant(Rational(n));
}

inline Term imag() {
    return std::make_shared<TermNode>(TermKind::ImagUnit, Rational(), Variable{}, 0,
                                      std::vector<Term>{});
}

inline Term variable(Variable v) {
    return std::make_shared<TermNode>(TermKind::Var, Rational(), std::move(v), 0,
                                      std::vector<Term>{});
}

inline Term variable(const std::string& name) { return variable(Variable(name)); }

inline Term add(Term a, Term b) {
    return std::make_shared<TermNode>(TermKind::Add, Rational(), Variable{}, 0,
                                      std::vector<Term>{std::move(a), std::move(b)});
}

inline Term neg(Term a) {
    return std::make_shared<TermNode>(TermKind::Neg, Rational(), Variable{}, 0,
                                      std::vector<Term>{std::move(a)});
}

inline Term sub(Term a, Term b) { return add(std::move(a), neg(std::move(b))); }

inline Term mul(Term a, Term b) {
    return std::make_shared<TermNode>(TermKind::Mul, Rational(), Variable{}, 0,
                                      std::vector<Term>{std::move(a), std::move(b)});
}

inline Term pow(Term a, std::uint32_t e) {
    return std::make_shared<TermNode>(TermKind::Pow, Rational(), Variable{}, e,
                                      std::vector<Term>{std::move(a)});
}

inline Term re(Term a) {
    return std::make_shared<TermNode>(TermKind::Re, Rational(), Variable{}, 0,
                                      std::vector<Term>{std::move(a)});
}

inline Term im(Term a) {
    return std::make_shared<TermNode>(TermKind::Im, Rational(), Variable{}, 0,
                                      std::vector<Term>{std::move(a)});
}

inline Term conj(Term a) {
    return std::make_shared<TermNode>(TermKind::Conj, Rational(), Variable{}, 0,
                                      std::vector<Term>{std::move(a)});
}

// Rational literal of either sign, wrapped in neg() when negative.
inline Term rational(const Rational& q) {
    if (q < 0) return neg(constant(-q));
    return constant(q);
}

} // namespace tm

inline void collect_variables(const Term& t, std::set<Variable>& out) {
    if (t->kind == TermKind::Var) {
        out.insert(t->var);
        return;
    }
    for (const auto& a : t->args) collect_variables(a, out);
}

inline std::set<Variable> variables_of(const Term& t) {
    std::set<Variable> out;
    collect_variables(t, out);
    return out;
}

// Structural equality of term trees (not semantic equivalence).
inline bool term_identical(const Term& a, const Term& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TermKind::Constant: return a->value == b->value;
        case TermKind::ImagUnit: return true;
        case TermKind::Var: return a->var == b->var;
        case TermKind::Pow:
            if (a->exponent != b->exponent) return false;
            break;
        default: break;
    }
    if (a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_identical(a->args[i], b->args[i])) return false;
    return true;
}

} // namespace pcqe
