#pragma once

#include <vector>

#include "formula.hpp"
#include "normal_forms.hpp"

namespace pcqe {

// Truth value of an atom under an assignment. Ordering atoms are false
// whenever one of their sides is not a real term.
inline bool eval_atom(const Atom& a, const Assignment& sigma) {
    GaussianRational l = eval_term(a.lhs, sigma);
    GaussianRational r = eval_term(a.rhs, sigma);
    switch (a.rel) {
        case RelOp::EQ: return l == r;
        case RelOp::NE: return l != r;
        case RelOp::LE:
        case RelOp::LT: {
            if (!is_real_term(a.lhs) || !is_real_term(a.rhs)) return false;
            return a.rel == RelOp::LE ? l.re <= r.re : l.re < r.re;
        }
    }
    throw Error("unreachable relation");
}

inline bool eval_qf(const Formula& f, const Assignment& sigma) {
    switch (f->kind) {
        case FormulaKind::Top: return true;
        case FormulaKind::Bot: return false;
        case FormulaKind::AtomF: return eval_atom(f->atom, sigma);
        case FormulaKind::Not: return !eval_qf(f->args[0], sigma);
        case FormulaKind::And:
            for (const auto& a : f->args)
                if (!eval_qf(a, sigma)) return false;
            return true;
        case FormulaKind::Or:
            for (const auto& a : f->args)
                if (eval_qf(a, sigma)) return true;
            return false;
        case FormulaKind::Implies: return !eval_qf(f->args[0], sigma) || eval_qf(f->args[1], sigma);
        case FormulaKind::Iff: return eval_qf(f->args[0], sigma) == eval_qf(f->args[1], sigma);
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            throw Error("eval_qf on a quantified formula");
    }
    throw Error("unreachable formula kind");
}

enum class Sample { True, False, Unknown };

// Grid instantiation of quantifiers: existential claims can only be proven,
// universal claims only refuted; everything else is Unknown. Never
// contradicts the exact decision procedure.
inline Sample sample_quantified(const Formula& f, const std::vector<GaussianRational>& grid,
                                const Assignment& sigma = {}) {
    switch (f->kind) {
        case FormulaKind::Exists: {
            bool unknown_seen = false;
            for (const auto& c : grid) {
                Assignment s = sigma;
                s[f->var] = c;
                Sample r = sample_quantified(f->args[0], grid, s);
                if (r == Sample::True) return Sample::True;
                if (r == Sample::Unknown) unknown_seen = true;
            }
            (void)unknown_seen;
            return Sample::Unknown;
        }
        case FormulaKind::Forall: {
            for (const auto& c : grid) {
                Assignment s = sigma;
                s[f->var] = c;
                Sample r = sample_quantified(f->args[0], grid, s);
                if (r == Sample::False) return Sample::False;
            }
            return Sample::Unknown;
        }
        case FormulaKind::Not: {
            Sample r = sample_quantified(f->args[0], grid, sigma);
            if (r == Sample::True) return Sample::False;
            if (r == Sample::False) return Sample::True;
            return Sample::Unknown;
        }
        case FormulaKind::And: {
            bool unknown = false;
            for (const auto& a : f->args) {
                Sample r = sample_quantified(a, grid, sigma);
                if (r == Sample::False) return Sample::False;
                if (r == Sample::Unknown) unknown = true;
            }
            return unknown ? Sample::Unknown : Sample::True;
        }
        case FormulaKind::Or: {
            bool unknown = false;
            for (const auto& a : f->args) {
                Sample r = sample_quantified(a, grid, sigma);
                if (r == Sample::True) return Sample::True;
                if (r == Sample::Unknown) unknown = true;
            }
            return unknown ? Sample::Unknown : Sample::False;
        }
        case FormulaKind::Implies: {
            Sample a = sample_quantified(f->args[0], grid, sigma);
            Sample b = sample_quantified(f->args[1], grid, sigma);
            if (a == Sample::False || b == Sample::True) return Sample::True;
            if (a == Sample::True && b == Sample::False) return Sample::False;
            return Sample::Unknown;
        }
        case FormulaKind::Iff: {
            Sample a = sample_quantified(f->args[0], grid, sigma);
            Sample b = sample_quantified(f->args[1], grid, sigma);
            if (a == Sample::Unknown || b == Sample::Unknown) return Sample::Unknown;
            return a == b ? Sample::True : Sample::False;
        }
        default:
            return eval_qf(f, sigma) ? Sample::True : Sample::False;
    }
}

} // namespace pcqe
