#pragma once

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "formula.hpp"
#include "semantics.hpp"

namespace pcqe {

// Seeded generator of small exact complex numbers.
class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

    Rational rational(long max_num = 6, long max_den = 3) {
        std::uniform_int_distribution<long> num(-max_num, max_num);
        std::uniform_int_distribution<long> den(1, max_den);
        return Rational(num(rng_), den(rng_));
    }

    Rational positive_rational(long max_num = 6, long max_den = 3) {
        std::uniform_int_distribution<long> num(1, max_num);
        std::uniform_int_distribution<long> den(1, max_den);
        return Rational(num(rng_), den(rng_));
    }

    GaussianRational complex_point() { return {rational(), rational()}; }

    GaussianRational real_point() { return {rational(), Rational(0)}; }

    std::uint64_t raw() { return rng_(); }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct EquivalenceReport {
    bool equivalent = true;
    std::size_t points_checked = 0;
    std::optional<Assignment> counterexample;
};

// Samples assignments satisfying all assumption atoms and compares the two
// quantifier-free formulas pointwise. Exact arithmetic, no tolerance.
inline EquivalenceReport equivalent_under(const Formula& a, const Formula& b,
                                          const std::vector<Atom>& assumptions,
                                          std::size_t points, std::uint64_t seed) {
    std::set<Variable> vars;
    collect_atom_variables(a, vars);
    collect_atom_variables(b, vars);
    for (const auto& as : assumptions) {
        collect_variables(as.lhs, vars);
        collect_variables(as.rhs, vars);
    }

    // Assumption shapes worth honoring while sampling: Im(v) == 0 pins the
    // imaginary part, Re(v) > 0 the sign of the real part. Everything else
    // goes through rejection.
    std::set<Variable> real_valued;
    std::set<Variable> positive_re;
    for (const auto& as : assumptions) {
        if (as.rel == RelOp::EQ && as.lhs->kind == TermKind::Im &&
            as.lhs->args[0]->kind == TermKind::Var && as.rhs->kind == TermKind::Constant &&
            as.rhs->value == 0)
            real_valued.insert(as.lhs->args[0]->var);
        bool positive_atom = as.rel == RelOp::LT && as.rhs->kind == TermKind::Re &&
                             as.lhs->kind == TermKind::Constant && as.lhs->value == 0;
        if (positive_atom && as.rhs->args[0]->kind == TermKind::Var)
            positive_re.insert(as.rhs->args[0]->var);
    }

    PointSampler sampler(seed);
    EquivalenceReport report;
    std::size_t attempts = 0;
    const std::size_t max_attempts = points * 40 + 200;
    while (report.points_checked < points && attempts < max_attempts) {
        ++attempts;
        Assignment sigma;
        for (const auto& v : vars) {
            Rational re = positive_re.contains(v) ? sampler.positive_rational() : sampler.rational();
            Rational im = real_valued.contains(v) ? Rational(0) : sampler.rational();
            sigma[v] = GaussianRational(re, im);
        }
        bool ok = true;
        for (const auto& as : assumptions) {
            if (!eval_atom(as, sigma)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        ++report.points_checked;
        if (eval_qf(a, sigma) != eval_qf(b, sigma)) {
            report.equivalent = false;
            report.counterexample = sigma;
            return report;
        }
    }
    return report;
}

inline EquivalenceReport equivalent_qf(const Formula& a, const Formula& b, std::size_t points,
                                       std::uint64_t seed) {
    return equivalent_under(a, b, {}, points, seed);
}

// Grid of small special values plus random points, shared by tests that
// instantiate quantifiers.
inline std::vector<GaussianRational> standard_grid(PointSampler& sampler, std::size_t extra = 8) {
    std::vector<GaussianRational> grid = {
        GaussianRational(0),
        GaussianRational(1),
        GaussianRational(-1),
        GaussianRational::i(),
        GaussianRational(Rational(0), Rational(-1)),
        GaussianRational(Rational(1), Rational(1)),
        GaussianRational(Rational(1, 2)),
        GaussianRational(Rational(-1, 2), Rational(1)),
    };
    for (std::size_t i = 0; i < extra; ++i) grid.push_back(sampler.complex_point());
    return grid;
}

} // namespace pcqe
