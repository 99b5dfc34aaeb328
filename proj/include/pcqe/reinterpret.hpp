#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/maximum_weighted_matching.hpp>

#include "formula.hpp"
#include "normal_forms.hpp"
#include "printer.hpp"

namespace pcqe {

// --- atom normalization and word length ---------------------------------

// Atom in the fixed printable shape `lhs rel 0` for the selected normal
// form: equations and disequalities scaled to leading coefficient 1,
// ordering atoms to a positive primitive form.
inline Atom normalize_atom(const Atom& a, NfStyle style, const VarContext& ctx) {
    Term diff = tm::sub(a.lhs, a.rhs);
    Term lhs;
    if (style == NfStyle::Conjugate) {
        PolyCNF nf = to_conjugate_nf(diff, ctx);
        nf.poly = normalize_lhs(nf.poly, a.rel);
        lhs = cnf_to_term(nf);
    } else {
        PolyCart nf = to_cartesian_nf(diff, ctx);
        if (nf.p2.is_zero()) {
            nf.p1 = normalize_lhs(nf.p1, a.rel);
        } else if (a.rel == RelOp::EQ || a.rel == RelOp::NE) {
            // Scale by the leading Cartesian coefficient, i.e. of p1 + i p2
            // at the overall leading monomial.
            const QPoly& leadp = (nf.p1.is_zero() ||
                                  (!nf.p2.is_zero() &&
                                   Monomial::cmp(nf.p2.leading_monomial(),
                                                 nf.p1.leading_monomial()) > 0))
                                     ? nf.p2
                                     : nf.p1;
            Monomial lead = leadp.leading_monomial();
            auto coeff_at = [&](const QPoly& p) {
                auto it = p.terms().find(lead);
                return it == p.terms().end() ? Rational(0) : it->second;
            };
            GaussianRational c(coeff_at(nf.p1), coeff_at(nf.p2));
            GaussianRational inv = GaussianRational(1) / c;
            QPoly p1 = nf.p1.scaled(inv.re) - nf.p2.scaled(inv.im);
            QPoly p2 = nf.p1.scaled(inv.im) + nf.p2.scaled(inv.re);
            nf.p1 = std::move(p1);
            nf.p2 = std::move(p2);
        }
        lhs = cart_to_term(nf);
    }
    return Atom{std::move(lhs), a.rel, tm::constant(Rational(0))};
}

inline Atom normalize_atom(const Atom& a, NfStyle style) {
    std::set<Variable> vars;
    collect_variables(a.lhs, vars);
    collect_variables(a.rhs, vars);
    return normalize_atom(a, style, VarContext::sorted(vars));
}

// Word length of an atom in its fixed normal form: symbol occurrences of the
// left-hand side plus one for the relation and one for the right-hand 0.
inline std::size_t word_length(const Atom& a) {
    return term_symbols(a.lhs) + 2;
}

// --- cost graph and partial edge cover ----------------------------------

struct EqNode {
    Atom atom;        // normalized equation (or disequation for the dual case)
    std::size_t cost; // word length of the normalized atom
};

struct CostEdge {
    std::size_t i, j; // vertex indices, i < j
    std::size_t cost;
    Atom merged;      // the cheaper of r_i + I r_j and r_j + I r_i
};

struct CostGraph {
    std::vector<EqNode> vertices;
    std::vector<CostEdge> edges;
    NfStyle style = NfStyle::Conjugate;
};

struct PartialEdgeCover {
    std::vector<std::size_t> selected; // indices into CostGraph::edges
    std::size_t cost = 0;
};

struct Matching {
    std::vector<std::size_t> edges; // indices into the caller's edge list
    std::int64_t weight = 0;
};

inline CostGraph build_cost_graph(const std::vector<Atom>& eqs, NfStyle style) {
    RelOp expected = eqs.empty() ? RelOp::EQ : eqs.front().rel;
    if (expected != RelOp::EQ && expected != RelOp::NE)
        throw ShapeError("cost graph vertices must be equations or disequations");
    std::set<Variable> vars;
    for (const auto& a : eqs) {
        collect_variables(a.lhs, vars);
        collect_variables(a.rhs, vars);
    }
    VarContext ctx = VarContext::sorted(vars);

    CostGraph g;
    g.style = style;
    std::vector<Term> sides;
    for (const auto& a : eqs) {
        if (a.rel != expected) throw ShapeError("mixed relations in one cost graph");
        Term diff = tm::sub(a.lhs, a.rhs);
        if (!is_real_term(diff, ctx)) throw ShapeError("cost graph atom sides must be real terms");
        sides.push_back(diff);
        Atom norm = normalize_atom(a, style, ctx);
        g.vertices.push_back(EqNode{norm, word_length(norm)});
    }
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        for (std::size_t j = i + 1; j < eqs.size(); ++j) {
            Term mij = tm::add(sides[i], tm::mul(tm::imag(), sides[j]));
            Term mji = tm::add(sides[j], tm::mul(tm::imag(), sides[i]));
            Atom aij = normalize_atom(Atom{mij, expected, tm::constant(Rational(0))}, style, ctx);
            Atom aji = normalize_atom(Atom{mji, expected, tm::constant(Rational(0))}, style, ctx);
            std::size_t cij = word_length(aij), cji = word_length(aji);
            // Ties go to the input-order orientation.
            if (cij <= cji)
                g.edges.push_back(CostEdge{i, j, cij, aij});
            else
                g.edges.push_back(CostEdge{i, j, cji, aji});
        }
    }
    return g;
}

// --- exact maximum weight matching --------------------------------------

struct WeightedEdge {
    std::size_t u, v;
    std::int64_t w;
};

namespace detail {

// Exhaustive search over vertex subsets; exact for small graphs.
inline Matching matching_subset_search(std::size_t n, const std::vector<WeightedEdge>& edges,
                                       const std::vector<std::size_t>& idx) {
    const std::uint32_t full = n >= 32 ? 0xffffffffu : ((1u << n) - 1u);
    std::vector<std::int64_t> memo(full + 1u, -1);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n); // (other, edge pos)
    for (std::size_t k = 0; k < edges.size(); ++k) {
        adj[edges[k].u].push_back({edges[k].v, k});
        adj[edges[k].v].push_back({edges[k].u, k});
    }
    auto solve = [&](auto&& self, std::uint32_t mask) -> std::int64_t {
        if (mask == 0) return 0;
        std::int64_t& m = memo[mask];
        if (m >= 0) return m;
        unsigned v = static_cast<unsigned>(__builtin_ctz(mask));
        std::int64_t best = self(self, mask & ~(1u << v));
        for (auto [u, k] : adj[v]) {
            if (!(mask & (1u << u))) continue;
            best = std::max(best, edges[k].w + self(self, mask & ~(1u << v) & ~(1u << u)));
        }
        m = best;
        return best;
    };
    Matching result;
    result.weight = solve(solve, full);
    // Reconstruct one optimal matching.
    std::uint32_t mask = full;
    while (mask != 0) {
        unsigned v = static_cast<unsigned>(__builtin_ctz(mask));
        std::uint32_t rest = mask & ~(1u << v);
        if (solve(solve, rest) == solve(solve, mask)) {
            mask = rest;
            continue;
        }
        for (auto [u, k] : adj[v]) {
            if (!(mask & (1u << u))) continue;
            if (edges[k].w + solve(solve, rest & ~(1u << u)) == solve(solve, mask)) {
                result.edges.push_back(idx[k]);
                mask = rest & ~(1u << u);
                break;
            }
        }
    }
    return result;
}

inline Matching matching_blossom(std::size_t n, const std::vector<WeightedEdge>& edges,
                                 const std::vector<std::size_t>& idx) {
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                        boost::no_property,
                                        boost::property<boost::edge_weight_t, std::int64_t>>;
    Graph g(n);
    // Doubled weights keep the dual variables integral.
    for (const auto& e : edges) boost::add_edge(e.u, e.v, 2 * e.w, g);
    std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(n);
    boost::maximum_weighted_matching(g, &mate[0]);
    Matching result;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_pair;
    for (std::size_t k = 0; k < edges.size(); ++k)
        by_pair[{std::min(edges[k].u, edges[k].v), std::max(edges[k].u, edges[k].v)}].push_back(k);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t u = mate[v];
        if (u == boost::graph_traits<Graph>::null_vertex() || u <= v) continue;
        auto it = by_pair.find({v, u});
        if (it == by_pair.end()) continue;
        // Multiple parallel edges cannot occur here, but pick the heaviest.
        std::size_t best = it->second.front();
        for (std::size_t k : it->second)
            if (edges[k].w > edges[best].w) best = k;
        result.edges.push_back(idx[best]);
        result.weight += edges[best].w;
    }
    return result;
}

} // namespace detail

// Exact maximum weight matching on a general graph. Edges with non-positive
// weight never improve a maximum and are dropped up front. Small graphs use
// an exhaustive subset search; larger ones a blossom implementation.
inline Matching max_weight_matching(std::size_t n, const std::vector<WeightedEdge>& edges,
                                    std::size_t subset_threshold = 12) {
    std::vector<WeightedEdge> pos;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (edges[k].w > 0) {
            pos.push_back(edges[k]);
            idx.push_back(k);
        }
    }
    if (pos.empty()) return Matching{};
    if (n <= subset_threshold) return detail::matching_subset_search(n, pos, idx);
    Matching m = detail::matching_blossom(n, pos, idx);
    m.weight = 0;
    for (std::size_t k : m.edges) m.weight += edges[k].w;
    return m;
}

// Minimum cost partial edge cover by reduction to maximum weight matching:
// vertex costs are first capped by the cheapest incident edge, the matching
// runs on weights c_V'(v) + c_V'(w) - c_E(e), and capped vertices left
// uncovered pick up their cheap edge afterwards.
inline PartialEdgeCover mcpec(const CostGraph& g, std::size_t subset_threshold = 12) {
    const std::size_t n = g.vertices.size();
    std::vector<std::optional<std::size_t>> cheap_edge(n); // e_v
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        for (std::size_t v : {g.edges[k].i, g.edges[k].j}) {
            std::size_t other = v == g.edges[k].i ? g.edges[k].j : g.edges[k].i;
            if (!cheap_edge[v]) {
                cheap_edge[v] = k;
                continue;
            }
            const CostEdge& cur = g.edges[*cheap_edge[v]];
            std::size_t cur_other = v == cur.i ? cur.j : cur.i;
            if (g.edges[k].cost < cur.cost ||
                (g.edges[k].cost == cur.cost && other < cur_other))
                cheap_edge[v] = k;
        }
    }
    std::vector<std::int64_t> capped(n);
    for (std::size_t v = 0; v < n; ++v) {
        capped[v] = static_cast<std::int64_t>(g.vertices[v].cost);
        if (cheap_edge[v])
            capped[v] = std::min(capped[v],
                                 static_cast<std::int64_t>(g.edges[*cheap_edge[v]].cost));
    }
    std::vector<WeightedEdge> wedges;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        std::int64_t w = capped[g.edges[k].i] + capped[g.edges[k].j] -
                         static_cast<std::int64_t>(g.edges[k].cost);
        wedges.push_back(WeightedEdge{g.edges[k].i, g.edges[k].j, w});
    }
    Matching m = max_weight_matching(n, wedges, subset_threshold);

    std::set<std::size_t> selected(m.edges.begin(), m.edges.end());
    std::vector<bool> covered(n, false);
    for (std::size_t k : m.edges) {
        covered[g.edges[k].i] = true;
        covered[g.edges[k].j] = true;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (covered[v] || !cheap_edge[v]) continue;
        if (g.edges[*cheap_edge[v]].cost < g.vertices[v].cost) selected.insert(*cheap_edge[v]);
    }

    PartialEdgeCover cover;
    cover.selected.assign(selected.begin(), selected.end());
    std::vector<bool> in_cover(n, false);
    for (std::size_t k : cover.selected) {
        in_cover[g.edges[k].i] = true;
        in_cover[g.edges[k].j] = true;
        cover.cost += g.edges[k].cost;
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!in_cover[v]) cover.cost += g.vertices[v].cost;
    return cover;
}

// --- formula reinterpretation -------------------------------------------

namespace detail {

inline int atom_order_key(const Atom& a, const Atom& b) {
    VarContext ctx;
    {
        std::set<Variable> vars;
        collect_variables(a.lhs, vars);
        collect_variables(b.lhs, vars);
        ctx = VarContext::sorted(vars);
    }
    int pc = poly_cmp(to_conjugate_poly(a.lhs, ctx), to_conjugate_poly(b.lhs, ctx));
    if (pc != 0) return pc;
    return static_cast<int>(a.rel) - static_cast<int>(b.rel);
}

inline bool formula_order(const Formula& x, const Formula& y) {
    bool xa = x->kind == FormulaKind::AtomF, ya = y->kind == FormulaKind::AtomF;
    if (xa != ya) return xa; // atoms first
    if (xa && ya) return atom_order_key(x->atom, y->atom) < 0;
    return print_formula(x) < print_formula(y);
}

inline Formula reinterpret_node(const Formula& f, NfStyle style, std::size_t threshold);

// Merges the mergeable atoms of one flattened And/Or node.
inline Formula reinterpret_junction(const Formula& f, NfStyle style, std::size_t threshold) {
    const bool conjunctive = f->kind == FormulaKind::And;
    const RelOp mergeable_rel = conjunctive ? RelOp::EQ : RelOp::NE;

    std::vector<Formula> flat;
    std::function<void(const Formula&)> flatten = [&](const Formula& g) {
        if (g->kind == f->kind) {
            for (const auto& a : g->args) flatten(a);
            return;
        }
        flat.push_back(g);
    };
    for (const auto& a : f->args) flatten(a);

    std::vector<Atom> group;
    std::vector<Formula> rest;
    for (const auto& c : flat) {
        if (c->kind == FormulaKind::AtomF && c->atom.rel == mergeable_rel) {
            Term diff = tm::sub(c->atom.lhs, c->atom.rhs);
            if (is_real_term(diff)) {
                group.push_back(c->atom);
                continue;
            }
        }
        rest.push_back(reinterpret_node(c, style, threshold));
    }

    std::vector<Formula> children = std::move(rest);
    if (group.size() >= 2) {
        CostGraph g = build_cost_graph(group, style);
        PartialEdgeCover cover = mcpec(g, threshold);
        std::vector<bool> covered(group.size(), false);
        for (std::size_t k : cover.selected) {
            covered[g.edges[k].i] = true;
            covered[g.edges[k].j] = true;
            children.push_back(fm::atom(g.edges[k].merged));
        }
        for (std::size_t v = 0; v < group.size(); ++v)
            if (!covered[v]) children.push_back(fm::atom(g.vertices[v].atom));
    } else {
        for (const auto& a : group)
            children.push_back(fm::atom(normalize_atom(a, style)));
    }

    std::sort(children.begin(), children.end(), formula_order);
    if (children.empty()) return conjunctive ? fm::top() : fm::bot();
    if (children.size() == 1) return children[0];
    return conjunctive ? fm::conjunction(std::move(children))
                       : fm::disjunction(std::move(children));
}

inline Formula reinterpret_node(const Formula& f, NfStyle style, std::size_t threshold) {
    switch (f->kind) {
        case FormulaKind::Top:
        case FormulaKind::Bot:
            return f;
        case FormulaKind::AtomF:
            return fm::atom(normalize_atom(f->atom, style));
        case FormulaKind::And:
        case FormulaKind::Or:
            return reinterpret_junction(f, style, threshold);
        case FormulaKind::Not:
        case FormulaKind::Implies:
        case FormulaKind::Iff: {
            std::vector<Formula> args;
            for (const auto& a : f->args) args.push_back(reinterpret_node(a, style, threshold));
            return std::make_shared<FormulaNode>(f->kind, f->atom, f->var, std::move(args));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            throw ShapeError("reinterpretation expects a quantifier-free formula");
    }
    throw Error("unreachable formula kind");
}

} // namespace detail

// Within each maximal conjunction the real equations are paired by a minimum
// cost partial edge cover and merged into complex equations; within each
// maximal disjunction real disequalities are merged dually. All other atoms
// are re-printed in the selected normal form.
inline Formula reinterpret_formula(const Formula& f, NfStyle style,
                                   std::size_t subset_threshold = 12) {
    if (!is_quantifier_free(f)) throw ShapeError("reinterpretation expects a quantifier-free formula");
    return detail::reinterpret_node(f, style, subset_threshold);
}

// --- splitting of solvable equations ------------------------------------

namespace detail {

// z^2 + b z + c = 0 with Gaussian-rational roots becomes a disjunction of
// linear equations; used to present solvable output atoms in factored form.
inline std::optional<std::vector<GaussianRational>> solvable_roots(const GPoly& p,
                                                                   std::size_t n,
                                                                   std::size_t* var_out) {
    std::optional<std::size_t> var;
    for (std::size_t g = 0; g < 2 * n; ++g) {
        if (!p.contains(g)) continue;
        if (g >= n) return std::nullopt; // conjugated generator
        if (var) return std::nullopt;    // more than one variable
        var = g;
    }
    if (!var) return std::nullopt;
    std::uint32_t deg = p.degree_in(*var);
    if (deg != 2) return std::nullopt;
    auto coeffs = p.coefficients_in(*var);
    GaussianRational c2 = coeffs[2].constant_value();
    GaussianRational c1 = coeffs.size() > 1 ? coeffs[1].constant_value() : GaussianRational(0);
    GaussianRational c0 = coeffs[0].constant_value();
    for (const auto& c : coeffs)
        if (!c.is_constant()) return std::nullopt;
    GaussianRational b = c1 / c2, c = c0 / c2;
    GaussianRational disc = b * b - GaussianRational(4) * c;
    auto s = gaussian_sqrt(disc);
    if (!s) return std::nullopt;
    GaussianRational half(Rational(1, 2));
    std::vector<GaussianRational> roots{(-b + *s) * half};
    GaussianRational r2 = (-b - *s) * half;
    if (r2 != roots[0]) roots.push_back(r2);
    *var_out = *var;
    return roots;
}

} // namespace detail

// Replaces equations `q(z) = 0` with q a univariate quadratic solvable over
// the Gaussian rationals by the disjunction of its linear factors.
inline Formula split_solvable_equations(const Formula& f, NfStyle style) {
    return map_atoms(f, [&](const Atom& a) -> Formula {
        if (a.rel != RelOp::EQ) return fm::atom(a);
        std::set<Variable> vars;
        collect_variables(a.lhs, vars);
        collect_variables(a.rhs, vars);
        VarContext ctx = VarContext::sorted(vars);
        PolyCNF nf = to_conjugate_nf(tm::sub(a.lhs, a.rhs), ctx);
        std::size_t var = 0;
        auto roots = detail::solvable_roots(nf.poly, ctx.size(), &var);
        if (!roots) return fm::atom(a);
        std::vector<Formula> parts;
        for (const auto& r : *roots) {
            GPoly lin = GPoly::generator(2 * ctx.size(), var) -
                        GPoly::constant(2 * ctx.size(), r);
            Atom lina{cnf_to_term(PolyCNF{ctx, lin}), RelOp::EQ, tm::constant(Rational(0))};
            parts.push_back(fm::atom(normalize_atom(lina, style)));
        }
        std::sort(parts.begin(), parts.end(), detail::formula_order);
        return parts.size() == 1 ? parts[0] : fm::disjunction(std::move(parts));
    });
}

} // namespace pcqe
