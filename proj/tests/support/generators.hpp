#pragma once

// Random inputs for property tests. Everything is seeded explicitly so
// failures are reproducible; tests print the seed they use.

#include <pcqe/formula.hpp>
#include <pcqe/normal_forms.hpp>
#include <pcqe/realpoly.hpp>
#include <pcqe/sampler.hpp>
#include <pcqe/term.hpp>

#include <random>
#include <vector>

namespace pcqe::testgen {

inline std::uint64_t suite_seed() {
    if (const char* s = std::getenv("PCQE_TEST_SEED")) return std::strtoull(s, nullptr, 10);
    return 20240901ull;
}

class TermGen {
public:
    TermGen(std::mt19937_64& rng, std::vector<Variable> vars) : rng_(rng), vars_(std::move(vars)) {}

    Term term(int depth) {
        if (depth <= 0) return leaf();
        switch (dist_(rng_) % 10) {
            case 0: return leaf();
            case 1: return tm::add(term(depth - 1), term(depth - 1));
            case 2: return tm::mul(term(depth - 1), term(depth - 1));
            case 3: return tm::neg(term(depth - 1));
            case 4: return tm::conj(term(depth - 1));
            case 5: return tm::re(term(depth - 1));
            case 6: return tm::im(term(depth - 1));
            case 7: return tm::sub(term(depth - 1), term(depth - 1));
            case 8: return tm::pow(term(depth - 1), 2 + dist_(rng_) % 2);
            default: return tm::add(term(depth - 1), leaf());
        }
    }

    Term leaf() {
        switch (dist_(rng_) % 4) {
            case 0: return tm::constant(Rational(static_cast<long>(dist_(rng_) % 5)));
            case 1: return tm::imag();
            default: return tm::variable(vars_[dist_(rng_) % vars_.size()]);
        }
    }

private:
    std::mt19937_64& rng_;
    std::vector<Variable> vars_;
    std::uniform_int_distribution<unsigned> dist_{0, 1u << 30};
};

// One random meaning-preserving rewrite applied at a random position.
inline Term rewrite_once(const Term& t, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> dist(0, 1u << 30);
    // Descend to a random node first.
    if (!t->args.empty() && dist(rng) % 3 != 0) {
        std::size_t i = dist(rng) % t->args.size();
        std::vector<Term> args = t->args;
        args[i] = rewrite_once(args[i], rng);
        return std::make_shared<TermNode>(t->kind, t->value, t->var, t->exponent, std::move(args));
    }
    switch (dist(rng) % 8) {
        case 0: return tm::conj(tm::conj(t));
        case 1: return tm::add(t, tm::constant(Rational(0)));
        case 2: return tm::mul(tm::constant(Rational(1)), t);
        case 3:
            if (t->kind == TermKind::Add) return tm::add(t->args[1], t->args[0]);
            return tm::neg(tm::neg(t));
        case 4:
            if (t->kind == TermKind::Mul) return tm::mul(t->args[1], t->args[0]);
            return tm::neg(tm::neg(t));
        case 5:
            if (t->kind == TermKind::Re)
                return tm::mul(tm::constant(Rational(1, 2)),
                               tm::add(t->args[0], tm::conj(t->args[0])));
            return t;
        case 6:
            if (t->kind == TermKind::Im)
                return tm::neg(tm::mul(tm::mul(tm::constant(Rational(1, 2)), tm::imag()),
                                       tm::sub(t->args[0], tm::conj(t->args[0]))));
            return t;
        default:
            if (t->kind == TermKind::Conj) {
                const Term& s = t->args[0];
                if (s->kind == TermKind::Add)
                    return tm::add(tm::conj(s->args[0]), tm::conj(s->args[1]));
                if (s->kind == TermKind::Mul)
                    return tm::mul(tm::conj(s->args[0]), tm::conj(s->args[1]));
                if (s->kind == TermKind::ImagUnit) return tm::neg(tm::imag());
            }
            return t;
    }
}

inline Term rewrite(const Term& t, std::mt19937_64& rng, int steps) {
    Term r = t;
    for (int i = 0; i < steps; ++i) r = rewrite_once(r, rng);
    return r;
}

inline Assignment random_assignment(const std::set<Variable>& vars, PointSampler& sampler) {
    Assignment sigma;
    for (const auto& v : vars) sigma[v] = sampler.complex_point();
    return sigma;
}

// Random quantifier-free formulas over small terms.
class FormulaGen {
public:
    FormulaGen(std::mt19937_64& rng, std::vector<Variable> vars)
        : rng_(rng), terms_(rng, vars) {}

    Formula qf(int depth) {
        if (depth <= 0) return atom();
        switch (dist_(rng_) % 8) {
            case 0: return atom();
            case 1: return fm::negation(qf(depth - 1));
            case 2: return fm::conjunction({qf(depth - 1), qf(depth - 1)});
            case 3: return fm::disjunction({qf(depth - 1), qf(depth - 1)});
            case 4: return fm::implies(qf(depth - 1), qf(depth - 1));
            case 5: return fm::iff(qf(depth - 1), qf(depth - 1));
            case 6: return fm::conjunction({qf(depth - 1), qf(depth - 1), qf(depth - 1)});
            default: return atom();
        }
    }

    Formula atom() {
        Term l = terms_.term(2);
        Term r = terms_.term(1);
        switch (dist_(rng_) % 4) {
            case 0: return fm::atom(l, RelOp::EQ, r);
            case 1: return fm::atom(l, RelOp::NE, r);
            case 2: {
                // Ordering atoms must have real sides to stay exception-free.
                Term lr = tm::re(l);
                Term rr = tm::im(r);
                return fm::atom(lr, RelOp::LE, rr);
            }
            default: {
                Term lr = tm::mul(tm::im(l), tm::re(l));
                Term rr = tm::re(r);
                return fm::atom(lr, RelOp::LT, rr);
            }
        }
    }

private:
    std::mt19937_64& rng_;
    TermGen terms_;
    std::uniform_int_distribution<unsigned> dist_{0, 1u << 30};
};

// Random real-fragment polynomials of bounded per-variable degree.
inline QPoly random_rpoly(std::mt19937_64& rng, std::size_t width, unsigned max_terms = 3,
                          unsigned max_deg = 2) {
    std::uniform_int_distribution<unsigned> dist(0, 1u << 30);
    QPoly p(width);
    unsigned terms = 1 + dist(rng) % max_terms;
    for (unsigned t = 0; t < terms; ++t) {
        Monomial m(width);
        for (std::size_t g = 0; g < width; ++g) {
            unsigned e = dist(rng) % (max_deg + 1);
            if (dist(rng) % 2 == 0) e = 0;
            if (e) m = m.with_exponent(g, e);
        }
        long num = static_cast<long>(dist(rng) % 9) - 4;
        if (num == 0) num = 1;
        p.add_term(m, Rational(num));
    }
    return p;
}

inline RFormula random_rformula(std::mt19937_64& rng, std::size_t width, int depth) {
    std::uniform_int_distribution<unsigned> dist(0, 1u << 30);
    if (depth <= 0 || dist(rng) % 3 == 0) {
        RelOp rel = static_cast<RelOp>(dist(rng) % 4);
        return rf::atom(random_rpoly(rng, width), rel);
    }
    std::vector<RFormula> parts{random_rformula(rng, width, depth - 1),
                                random_rformula(rng, width, depth - 1)};
    return dist(rng) % 2 == 0 ? rf::conjunction(std::move(parts))
                              : rf::disjunction(std::move(parts));
}

} // namespace pcqe::testgen
