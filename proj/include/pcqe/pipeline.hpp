#pragma once

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "errors.hpp"
#include "formula.hpp"
#include "normal_forms.hpp"
#include "real_nf.hpp"
#include "reinterpret.hpp"
#include "simplify.hpp"
#include "vs.hpp"

namespace pcqe {

// Complex variable -> (real part variable, imaginary part variable).
struct PurificationMap {
    std::map<Variable, std::pair<Variable, Variable>> aux;

    std::optional<Variable> source_of(const Variable& v) const {
        for (const auto& [z, pair] : aux) {
            if (pair.first == v || pair.second == v) return z;
        }
        return std::nullopt;
    }
};

namespace detail {

inline PurificationMap purification_map(const VarContext& ctx) {
    PurificationMap m;
    for (const auto& v : ctx.variables()) {
        if (has_reserved_suffix(v.name))
            throw NameCollisionError("variable name collides with purification scheme: " + v.name);
        m.aux.emplace(v, std::make_pair(Variable(v.name + "__re"), Variable(v.name + "__im")));
    }
    return m;
}

// Table layout mirrors the Cartesian generators: real parts first, then
// imaginary parts, in context order.
inline RealVarTable purified_table(const VarContext& ctx, const PurificationMap& m) {
    RealVarTable t;
    for (const auto& v : ctx.variables()) t.names.push_back(m.aux.at(v).first.name);
    for (const auto& v : ctx.variables()) t.names.push_back(m.aux.at(v).second.name);
    return t;
}

inline std::vector<RPrefixEntry> purified_prefix(const std::vector<PrefixEntry>& prefix,
                                                 const VarContext& ctx) {
    std::vector<RPrefixEntry> out;
    for (const auto& e : prefix) {
        auto i = ctx.index_of(e.var);
        if (!i) throw ContextError("quantified variable not in context: " + e.var.name);
        out.push_back({e.quant, *i});
        out.push_back({e.quant, ctx.size() + *i});
    }
    return out;
}

} // namespace detail

// Purified form of a real-normal-form formula: every Re(z_i)/Im(z_i) becomes
// an auxiliary real variable and each quantifier doubles.
struct Purified {
    RealVarTable table;
    std::vector<RPrefixEntry> prefix;
    RFormula matrix;
    PurificationMap map;
    VarContext ctx;
};

inline Purified purify_internal(const RealNf& nf) {
    Purified p;
    p.ctx = nf.ctx;
    p.map = detail::purification_map(nf.ctx);
    p.table = detail::purified_table(nf.ctx, p.map);
    p.prefix = detail::purified_prefix(nf.prefix, nf.ctx);
    p.matrix = nf.matrix; // generators already use the Cartesian layout
    return p;
}

// Formula-level purification. The input must be in real normal form; the
// result is a first-order formula in the language of ordered rings.
inline std::pair<Formula, PurificationMap> purify(const Formula& f) {
    RealNf nf = to_real_nf_internal(f);
    Purified p = purify_internal(nf);
    return {real_formula_to_formula(p.prefix, p.matrix, p.table), p.map};
}

inline Term substitute_var(const Term& t, const Variable& v, const Term& replacement) {
    if (t->kind == TermKind::Var) return t->var == v ? replacement : t;
    if (t->args.empty()) return t;
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(substitute_var(a, v, replacement));
    return std::make_shared<TermNode>(t->kind, t->value, t->var, t->exponent, std::move(args));
}

// Substitution of the original complex terms for the auxiliary variables:
// z__re becomes Re(z) and z__im becomes Im(z).
inline Formula unpurify(const Formula& f, const PurificationMap& m) {
    return map_atoms(f, [&](const Atom& a) {
        Term lhs = a.lhs, rhs = a.rhs;
        std::set<Variable> vars;
        collect_variables(lhs, vars);
        collect_variables(rhs, vars);
        for (const auto& v : vars) {
            if (!has_reserved_suffix(v.name)) continue;
            auto src = m.source_of(v);
            if (!src) throw ContextError("unknown auxiliary variable: " + v.name);
            bool is_re = v.name.ends_with("__re");
            Term rep = is_re ? tm::re(tm::variable(*src)) : tm::im(tm::variable(*src));
            lhs = substitute_var(lhs, v, rep);
            rhs = substitute_var(rhs, v, rep);
        }
        return fm::atom(std::move(lhs), a.rel, std::move(rhs));
    });
}

// --- assumptions ---------------------------------------------------------

namespace detail {

struct AssumptionInfo {
    std::vector<RAtom> facts;                    // conjunctive real atoms
    std::map<std::size_t, Rational> substitutions; // generator -> constant
    SignEnv env;
};

// Linear fact in a single variable: p = a*v + b.
inline std::optional<std::pair<std::size_t, std::pair<Rational, Rational>>> single_var_linear(
    const QPoly& p) {
    std::optional<std::size_t> var;
    for (std::size_t g = 0; g < p.width(); ++g) {
        if (!p.contains(g)) continue;
        if (var) return std::nullopt;
        var = g;
    }
    if (!var || p.degree_in(*var) != 1) return std::nullopt;
    auto coeffs = p.coefficients_in(*var);
    if (!coeffs[0].is_constant() || !coeffs[1].is_constant()) return std::nullopt;
    return std::make_pair(*var, std::make_pair(coeffs[1].constant_value(),
                                               coeffs[0].constant_value()));
}

inline AssumptionInfo analyze_assumptions(std::vector<RAtom> facts) {
    AssumptionInfo info;
    // Equational facts v = c are turned into substitutions and applied to the
    // remaining facts until a fixed point.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < facts.size(); ++i) {
            if (facts[i].rel != RelOp::EQ) continue;
            auto lin = single_var_linear(facts[i].p);
            if (!lin) continue;
            auto [v, ab] = *lin;
            Rational value = -ab.second / ab.first;
            info.substitutions[v] = value;
            facts.erase(facts.begin() + static_cast<std::ptrdiff_t>(i));
            for (auto& f : facts)
                f.p = f.p.substituted(v, QPoly::constant(f.p.width(), value));
            changed = true;
            break;
        }
    }
    for (const auto& f : facts) {
        auto [q, allowed] = canonical_ratom(f);
        if (q.is_zero()) continue;
        info.env.meet_poly(q, allowed);
        // Single-variable linear facts additionally give a variable sign.
        auto lin = single_var_linear(q);
        if (lin) {
            auto [v, ab] = *lin;
            Rational threshold = -ab.second / ab.first; // q sign follows v - threshold
            SignSet s = allowed;                        // canonical => positive leading coeff
            if (threshold == 0) {
                info.env.meet_var(v, s);
            } else if (threshold < 0) {
                if (s == SIGN_NEG || s == (SIGN_NEG | SIGN_ZERO)) info.env.meet_var(v, SIGN_NEG);
            } else {
                if (s == SIGN_POS || s == (SIGN_ZERO | SIGN_POS)) info.env.meet_var(v, SIGN_POS);
            }
        }
        info.facts.push_back(f);
    }
    return info;
}

} // namespace detail

// --- the elimination pipeline -------------------------------------------

struct QeOptions {
    NfStyle nf = NfStyle::Conjugate;
    bool lenient = false;
    bool split_solvable = true;
    Backend backend;
    std::size_t matching_threshold = 12;
};

struct QeStats {
    double wall_seconds = 0;
    std::size_t backend_calls = 0;
    std::size_t eliminated_vars = 0;
    std::size_t test_points = 0;
};

struct QeJob {
    Formula input;
    std::vector<Atom> assumptions;
    QeOptions options;
    QeStats stats;
};

namespace detail {

inline std::vector<RAtom> real_nf_assumptions(const std::vector<Atom>& assumptions,
                                              const VarContext& ctx, bool lenient) {
    std::vector<RAtom> out;
    for (const auto& a : assumptions) {
        RFormula f = real_nf_atom(a, ctx, lenient);
        // Only conjunctive shapes contribute usable facts.
        if (f->kind == RKind::Atom) {
            out.push_back(f->atom);
        } else if (f->kind == RKind::And) {
            for (const auto& c : f->args)
                if (c->kind == RKind::Atom) out.push_back(c->atom);
        }
    }
    return out;
}

} // namespace detail

inline Formula qe(QeJob& job) {
    auto t0 = std::chrono::steady_clock::now();
    validate_binding(job.input);

    // Assumptions may only mention free variables of the input.
    {
        std::set<Variable> free(free_vars(job.input).begin(), free_vars(job.input).end());
        for (const auto& a : job.assumptions) {
            std::set<Variable> vars;
            collect_variables(a.lhs, vars);
            collect_variables(a.rhs, vars);
            for (const auto& v : vars)
                if (!free.contains(v))
                    throw ContextError("assumption mentions a non-free variable: " + v.name);
        }
    }

    // The context must also cover assumption-only variables.
    std::set<Variable> assumption_vars;
    for (const auto& a : job.assumptions) {
        collect_variables(a.lhs, assumption_vars);
        collect_variables(a.rhs, assumption_vars);
    }
    RealNf nf = to_real_nf_internal(job.input, job.options.lenient, assumption_vars);
    Purified pur = purify_internal(nf);

    detail::AssumptionInfo ainfo = detail::analyze_assumptions(
        detail::real_nf_assumptions(job.assumptions, nf.ctx, job.options.lenient));

    RFormula matrix = pur.matrix;
    for (const auto& [g, value] : ainfo.substitutions)
        matrix = rsubstitute(matrix, g, QPoly::constant(pur.table.size(), value));

    ++job.stats.backend_calls;
    VsStats vstats;
    RFormula result = run_backend(job.options.backend, pur.prefix, matrix, pur.table, ainfo.env,
                                  &vstats);
    job.stats.eliminated_vars = vstats.eliminated;
    job.stats.test_points = vstats.test_points;

    result = simplify(result, ainfo.env);

    // Back to the complex language: generators are Re(z)/Im(z) again.
    Formula complex_qf = rformula_to_formula(result, [&](const RAtom& a) {
        return fm::atom(qpoly_to_term(a.p, nf.ctx, true), a.rel, tm::constant(Rational(0)));
    });

    Formula merged = reinterpret_formula(complex_qf, job.options.nf, job.options.matching_threshold);
    if (job.options.split_solvable) merged = split_solvable_equations(merged, job.options.nf);

    auto t1 = std::chrono::steady_clock::now();
    job.stats.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return merged;
}

inline Formula qe(const Formula& input, const std::vector<Atom>& assumptions = {},
                  QeOptions options = {}) {
    QeJob job{input, assumptions, options, {}};
    return qe(job);
}

// Decision procedure for sentences.
inline bool decide(const Formula& sentence, QeOptions options = {}, QeStats* stats = nullptr) {
    std::vector<Variable> free = free_vars(sentence);
    if (!free.empty()) {
        std::string names;
        for (const auto& v : free) names += (names.empty() ? "" : ", ") + v.name;
        throw FreeVariableError("not a sentence; free variables: " + names);
    }
    QeJob job{sentence, {}, options, {}};
    Formula r = qe(job);
    if (stats) *stats = job.stats;
    if (r->kind == FormulaKind::Top) return true;
    if (r->kind == FormulaKind::Bot) return false;
    throw IncompleteSimplificationError("sentence did not reduce to a truth constant: " +
                                        print_formula(r));
}

// Quantifier-free equivalent of phi under the assumptions, printed in the
// selected normal form. Library-level counterpart of the solve command.
inline Formula simplify_real_formula(const Formula& f, const std::vector<Atom>& assumptions,
                                     bool lenient = false) {
    std::set<Variable> assumption_vars;
    for (const auto& a : assumptions) {
        collect_variables(a.lhs, assumption_vars);
        collect_variables(a.rhs, assumption_vars);
    }
    RealNf nf = to_real_nf_internal(f, lenient, assumption_vars);
    if (!nf.prefix.empty()) throw ShapeError("expected a quantifier-free formula");
    detail::AssumptionInfo ainfo =
        detail::analyze_assumptions(detail::real_nf_assumptions(assumptions, nf.ctx, lenient));
    RFormula matrix = nf.matrix;
    for (const auto& [g, value] : ainfo.substitutions)
        matrix = rsubstitute(matrix, g, QPoly::constant(2 * nf.ctx.size(), value));
    RFormula s = simplify(matrix, ainfo.env);
    return rformula_to_formula(s, [&](const RAtom& a) {
        return fm::atom(qpoly_to_term(a.p, nf.ctx, true), a.rel, tm::constant(Rational(0)));
    });
}

} // namespace pcqe
