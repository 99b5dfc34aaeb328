#pragma once

#include <string>
#include <vector>

#include "formula.hpp"
#include "normal_forms.hpp"
#include "term.hpp"

namespace pcqe {

enum class NfStyle { Conjugate, Cartesian };

// --- raw term / formula printing --------------------------------------

namespace detail {

// Term precedence levels: additive 0, negation 1, multiplicative 2, power 3,
// primary 4.
inline void print_term_rec(const Term& t, int parent, std::string& out) {
    auto paren = [&](int mine, auto&& body) {
        bool need = mine < parent;
        if (need) out += "(";
        body();
        if (need) out += ")";
    };
    switch (t->kind) {
        case TermKind::Constant:
            out += rational_to_string(t->value);
            return;
        case TermKind::ImagUnit:
            out += "I";
            return;
        case TermKind::Var:
            out += t->var.name;
            return;
        case TermKind::Add:
            paren(0, [&] {
                print_term_rec(t->args[0], 0, out);
                const Term& rhs = t->args[1];
                if (rhs->kind == TermKind::Neg) {
                    out += " - ";
                    print_term_rec(rhs->args[0], 1, out);
                } else {
                    out += " + ";
                    print_term_rec(rhs, 1, out);
                }
            });
            return;
        case TermKind::Neg:
            paren(1, [&] {
                out += "-";
                print_term_rec(t->args[0], 1, out);
            });
            return;
        case TermKind::Mul:
            paren(2, [&] {
                print_term_rec(t->args[0], 2, out);
                out += "*";
                print_term_rec(t->args[1], 3, out);
            });
            return;
        case TermKind::Pow:
            paren(3, [&] {
                print_term_rec(t->args[0], 4, out);
                out += "^" + std::to_string(t->exponent);
            });
            return;
        case TermKind::Re:
        case TermKind::Im:
        case TermKind::Conj: {
            out += t->kind == TermKind::Re ? "Re(" : t->kind == TermKind::Im ? "Im(" : "conj(";
            print_term_rec(t->args[0], 0, out);
            out += ")";
            return;
        }
    }
}

inline const char* rel_text(RelOp r) {
    switch (r) {
        case RelOp::EQ: return "==";
        case RelOp::NE: return "!=";
        case RelOp::LE: return "<=";
        case RelOp::LT: return "<";
    }
    return "?";
}

// Formula precedence: iff 0, implies 1, or 2, and 3, unary 4.
inline void print_formula_rec(const Formula& f, int parent, std::string& out) {
    auto paren = [&](int mine, auto&& body) {
        bool need = mine < parent;
        if (need) out += "(";
        body();
        if (need) out += ")";
    };
    switch (f->kind) {
        case FormulaKind::Top:
            out += "T";
            return;
        case FormulaKind::Bot:
            out += "F";
            return;
        case FormulaKind::AtomF:
            print_term_rec(f->atom.lhs, 0, out);
            out += std::string(" ") + rel_text(f->atom.rel) + " ";
            print_term_rec(f->atom.rhs, 0, out);
            return;
        case FormulaKind::Not:
            paren(4, [&] {
                out += "not ";
                print_formula_rec(f->args[0], 4, out);
            });
            return;
        case FormulaKind::And:
            if (f->args.empty()) {
                out += "T";
                return;
            }
            paren(3, [&] {
                for (std::size_t i = 0; i < f->args.size(); ++i) {
                    if (i) out += " and ";
                    print_formula_rec(f->args[i], 4, out);
                }
            });
            return;
        case FormulaKind::Or:
            if (f->args.empty()) {
                out += "F";
                return;
            }
            paren(2, [&] {
                for (std::size_t i = 0; i < f->args.size(); ++i) {
                    if (i) out += " or ";
                    print_formula_rec(f->args[i], 3, out);
                }
            });
            return;
        case FormulaKind::Implies:
            paren(1, [&] {
                print_formula_rec(f->args[0], 2, out);
                out += " -> ";
                print_formula_rec(f->args[1], 1, out);
            });
            return;
        case FormulaKind::Iff:
            paren(0, [&] {
                print_formula_rec(f->args[0], 1, out);
                out += " <-> ";
                print_formula_rec(f->args[1], 0, out);
            });
            return;
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            // A quantifier below a connective is parenthesized so that its
            // body does not swallow the rest of the line.
            bool need = parent > 0;
            if (need) out += "(";
            const FormulaNode* p = f.get();
            while (p->kind == FormulaKind::Exists || p->kind == FormulaKind::Forall) {
                out += p->kind == FormulaKind::Exists ? "exists " : "forall ";
                out += p->var.name + " . ";
                p = p->args[0].get();
            }
            // Print the matrix; share the node via a non-owning copy.
            Formula matrix(f, p);
            print_formula_rec(matrix, 0, out);
            if (need) out += ")";
            return;
        }
    }
}

} // namespace detail

inline std::string print_term(const Term& t) {
    std::string out;
    detail::print_term_rec(t, 0, out);
    return out;
}

inline std::string print_formula(const Formula& f) {
    std::string out;
    detail::print_formula_rec(f, 0, out);
    return out;
}

// --- materialization of normal forms into terms ------------------------

namespace detail {

inline Term gen_term_cnf(const VarContext& ctx, std::size_t g) {
    std::size_t n = ctx.size();
    return g < n ? tm::variable(ctx.at(g)) : tm::conj(tm::variable(ctx.at(g - n)));
}

inline Term gen_term_cart(const VarContext& ctx, std::size_t g) {
    std::size_t n = ctx.size();
    return g < n ? tm::re(tm::variable(ctx.at(g))) : tm::im(tm::variable(ctx.at(g - n)));
}

template <typename GenTerm>
inline Term monomial_term(const Monomial& m, GenTerm&& gen) {
    Term acc;
    for (std::size_t g = 0; g < m.width(); ++g) {
        std::uint32_t e = m.exponent(g);
        if (e == 0) continue;
        Term f = gen(g);
        if (e >= 2) f = tm::pow(std::move(f), e);
        acc = acc ? tm::mul(std::move(acc), std::move(f)) : f;
    }
    return acc; // null for the unit monomial
}

// One addend: |coefficient| * monomial with the sign reported separately.
template <typename GenTerm>
inline std::pair<bool, Term> gaussian_addend(const GaussianRational& c, const Monomial& m,
                                             GenTerm&& gen) {
    Term mono = monomial_term(m, gen);
    bool negative = false;
    Term coeff;
    if (c.im == 0) {
        negative = c.re < 0;
        Rational mag = abs_of(c.re);
        if (mag != 1 || !mono) coeff = tm::constant(mag);
    } else if (c.re == 0) {
        negative = c.im < 0;
        Rational mag = abs_of(c.im);
        coeff = mag == 1 ? tm::imag() : tm::mul(tm::constant(mag), tm::imag());
    } else {
        // Mixed coefficient: keep it as one parenthesized sum.
        Term ipart = c.im == 1    ? tm::imag()
                     : c.im == -1 ? tm::neg(tm::imag())
                     : c.im < 0   ? tm::neg(tm::mul(tm::constant(-c.im), tm::imag()))
                                  : tm::mul(tm::constant(c.im), tm::imag());
        coeff = tm::add(tm::rational(c.re), std::move(ipart));
    }
    Term body;
    if (coeff && mono)
        body = tm::mul(std::move(coeff), std::move(mono));
    else if (coeff)
        body = std::move(coeff);
    else
        body = std::move(mono);
    return {negative, std::move(body)};
}

template <typename Coeff, typename GenTerm, typename Addend>
inline Term poly_term(const Polynomial<Coeff>& p, GenTerm&& gen, Addend&& addend) {
    if (p.is_zero()) return tm::constant(Rational(0));
    Term acc;
    for (const auto& [m, c] : p.terms()) {
        auto [negative, body] = addend(c, m, gen);
        if (!acc) {
            acc = negative ? tm::neg(std::move(body)) : std::move(body);
        } else {
            acc = negative ? tm::sub(std::move(acc), std::move(body))
                           : tm::add(std::move(acc), std::move(body));
        }
    }
    return acc;
}

} // namespace detail

// Term of a conjugate normal form, shaped exactly as it prints: descending
// degree-lexicographic monomials.
inline Term cnf_to_term(const PolyCNF& p) {
    return detail::poly_term(p.poly, [&](std::size_t g) { return detail::gen_term_cnf(p.ctx, g); },
                             [&](const GaussianRational& c, const Monomial& m, auto&& gen) {
                                 return detail::gaussian_addend(c, m, gen);
                             });
}

inline Term qpoly_to_term(const QPoly& p, const VarContext& ctx, bool cart_gens) {
    auto gen = [&](std::size_t g) {
        return cart_gens ? detail::gen_term_cart(ctx, g) : detail::gen_term_cnf(ctx, g);
    };
    return detail::poly_term(p, gen, [&](const Rational& c, const Monomial& m, auto&& g) {
        return detail::gaussian_addend(GaussianRational(c), m, g);
    });
}

// Generators rendered as plain variables; used for the ordered-ring fragment.
inline Term qpoly_to_term_named(const QPoly& p, const std::vector<std::string>& names) {
    auto gen = [&](std::size_t g) { return tm::variable(names[g]); };
    return detail::poly_term(p, gen, [&](const Rational& c, const Monomial& m, auto&& g) {
        return detail::gaussian_addend(GaussianRational(c), m, g);
    });
}

// Term of a Cartesian normal form: p1 + I*(p2) with zero parts omitted.
inline Term cart_to_term(const PolyCart& p) {
    if (p.p2.is_zero()) return qpoly_to_term(p.p1, p.ctx, true);
    bool neg_im = p.p2.leading_coefficient() < 0;
    QPoly im_abs = neg_im ? -p.p2 : p.p2;
    Term ipart;
    if (im_abs.is_constant() && im_abs.constant_value() == 1)
        ipart = tm::imag();
    else
        ipart = tm::mul(tm::imag(), qpoly_to_term(im_abs, p.ctx, true));
    if (p.p1.is_zero()) return neg_im ? tm::neg(std::move(ipart)) : ipart;
    Term re_part = qpoly_to_term(p.p1, p.ctx, true);
    return neg_im ? tm::sub(std::move(re_part), std::move(ipart))
                  : tm::add(std::move(re_part), std::move(ipart));
}

// --- atom normalization -------------------------------------------------

// Equations and disequalities are scaled to leading coefficient 1; ordering
// atoms only by a positive rational, keeping their sign.
inline GPoly normalize_lhs(const GPoly& p, RelOp rel) {
    if (p.is_zero()) return p;
    if (rel == RelOp::EQ || rel == RelOp::NE) return p.divided_by(p.leading_coefficient());
    Rational c = rational_content(p);
    return c == 1 ? p : p.map_coefficients([&](const GaussianRational& g) {
        return GaussianRational(g.re / c, g.im / c);
    });
}

inline QPoly normalize_lhs(const QPoly& p, RelOp rel) {
    if (p.is_zero()) return p;
    if (rel == RelOp::EQ || rel == RelOp::NE) return p.divided_by(p.leading_coefficient());
    Rational c = rational_content(p);
    return c == 1 ? p : p.divided_by(c);
}

// --- word length --------------------------------------------------------

// Number of symbol occurrences in a printed term: one per variable,
// constant, imaginary unit, Re/Im/conjugation application, and one per
// printed + or - sign. Multiplication is counted as juxtaposition and an
// exponent k abbreviates a k-fold product. Any rational constant counts as
// one symbol regardless of magnitude.
inline std::size_t term_symbols(const Term& t) {
    switch (t->kind) {
        case TermKind::Constant:
        case TermKind::ImagUnit:
        case TermKind::Var:
            return 1;
        case TermKind::Re:
        case TermKind::Im:
        case TermKind::Conj:
        case TermKind::Neg:
            return 1 + term_symbols(t->args[0]);
        case TermKind::Mul:
            return term_symbols(t->args[0]) + term_symbols(t->args[1]);
        case TermKind::Pow:
            return t->exponent * term_symbols(t->args[0]);
        case TermKind::Add: {
            const Term& rhs = t->args[1];
            // "a - b" prints one sign for the embedded negation.
            if (rhs->kind == TermKind::Neg)
                return term_symbols(t->args[0]) + 1 + term_symbols(rhs->args[0]);
            return term_symbols(t->args[0]) + 1 + term_symbols(rhs);
        }
    }
    return 0;
}

} // namespace pcqe
