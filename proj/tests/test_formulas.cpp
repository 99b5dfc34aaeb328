#include <catch2/catch_amalgamated.hpp>

#include <pcqe/parser.hpp>
#include <pcqe/printer.hpp>
#include <pcqe/real_nf.hpp>
#include <pcqe/semantics.hpp>

#include "support/generators.hpp"

#include <algorithm>

using namespace pcqe;

namespace {

std::string strip_ws(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    return s;
}

Formula parse1(const std::string& s) { return parse_formula(s); }

} // namespace

TEST_CASE("parsing the basic shapes") {
    Formula f = parse1("exists z . z^2 + 1 == 0");
    REQUIRE(f->kind == FormulaKind::Exists);
    CHECK(f->var.name == "z");
    REQUIRE(f->args[0]->kind == FormulaKind::AtomF);
    CHECK(f->args[0]->atom.rel == RelOp::EQ);

    CHECK(parse1("T")->kind == FormulaKind::Top);
    CHECK(parse1("F")->kind == FormulaKind::Bot);

    Formula g = parse1("Im(x) == 0 and Im(y) == 0");
    REQUIRE(g->kind == FormulaKind::And);
    CHECK(g->args.size() == 2);
    CHECK(g->args[0]->atom.lhs->kind == TermKind::Im);
}

TEST_CASE("relations normalize away > and >=") {
    Formula f = parse1("Re(x) > 0");
    REQUIRE(f->kind == FormulaKind::AtomF);
    CHECK(f->atom.rel == RelOp::LT);
    CHECK(f->atom.lhs->kind == TermKind::Constant); // 0 < Re(x)
    Formula g = parse1("x >= y");
    CHECK(g->atom.rel == RelOp::LE);
    CHECK(g->atom.lhs->var.name == "y");
}

TEST_CASE("rational literals and precedence") {
    Formula f = parse1("1/2*x - y^2 == -3/4");
    REQUIRE(f->kind == FormulaKind::AtomF);
    CHECK(strip_ws(print_formula(f)) == "1/2*x-y^2==-3/4");
    // Unary minus binds below multiplication.
    Formula g = parse1("-x*y == 0");
    CHECK(g->atom.lhs->kind == TermKind::Neg);
    CHECK(g->atom.lhs->args[0]->kind == TermKind::Mul);
}

TEST_CASE("parenthesized terms versus parenthesized formulas") {
    Formula f = parse1("(x + 1)*y == 0");
    CHECK(f->kind == FormulaKind::AtomF);
    Formula g = parse1("((x == 0))");
    CHECK(g->kind == FormulaKind::AtomF);
    Formula h = parse1("(x == 0 or y == 0) and T");
    CHECK(h->kind == FormulaKind::And);
}

TEST_CASE("connective precedence and associativity") {
    Formula f = parse1("x == 0 -> y == 0 -> z == 0");
    REQUIRE(f->kind == FormulaKind::Implies);
    CHECK(f->args[1]->kind == FormulaKind::Implies); // right associative
    Formula g = parse1("x == 0 and y == 0 or z == 0");
    CHECK(g->kind == FormulaKind::Or);
    Formula h = parse1("not x == 0 and y == 0");
    REQUIRE(h->kind == FormulaKind::And);
    CHECK(h->args[0]->kind == FormulaKind::Not);
    Formula i = parse1("x == 0 <-> y == 0 -> z == 0");
    CHECK(i->kind == FormulaKind::Iff);
}

TEST_CASE("quantifier bodies are maximal") {
    Formula f = parse1("forall z . z == 0 and z == 1");
    REQUIRE(f->kind == FormulaKind::Forall);
    CHECK(f->args[0]->kind == FormulaKind::And);
    Formula g = parse1("x == 0 and (forall z . z == 0)");
    REQUIRE(g->kind == FormulaKind::And);
    CHECK(g->args[1]->kind == FormulaKind::Forall);
}

TEST_CASE("syntax errors carry positions") {
    CHECK_THROWS_AS(parse1(""), SyntaxError);
    CHECK_THROWS_AS(parse1("x = 0"), SyntaxError);
    CHECK_THROWS_AS(parse1("exists . x == 0"), SyntaxError);
    CHECK_THROWS_AS(parse1("x +"), SyntaxError);
    try {
        parse1("x == $");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("reserved variable suffixes are rejected for user input") {
    CHECK_THROWS_AS(parse1("z__re == 0"), SyntaxError);
    CHECK_THROWS_AS(parse1("exists a__im . a__im == 0"), SyntaxError);
    ParseOptions opts;
    opts.allow_reserved_names = true;
    CHECK(parse_formula("z__re == 0", opts)->kind == FormulaKind::AtomF);
}

TEST_CASE("print then parse is the identity on formula data") {
    std::mt19937_64 rng(testgen::suite_seed() + 10);
    testgen::FormulaGen gen(rng, {Variable("x"), Variable("y"), Variable("z")});
    for (int i = 0; i < 200; ++i) {
        Formula f = gen.qf(3);
        std::string text = print_formula(f);
        Formula g = parse_formula(text);
        CHECK(print_formula(g) == text);
    }
}

TEST_CASE("parse then print is the identity up to whitespace") {
    for (const char* text : {
             "exists z . z^2 + 1 == 0",
             "forall z . exists x . Im(x) == 0 and z == x + I*x",
             "x*conj(x) <= 2",
             "Re(z)^2 - Im(z)^2 + 1/3 != 0",
             "x == 0 -> (y == 0 <-> z == 0)",
             "not (x == 0 or y != 1)",
             "1 + 2*I == x - 3/2",
         }) {
        CHECK(strip_ws(print_formula(parse_formula(text))) == strip_ws(text));
    }
}

TEST_CASE("quantifier-free evaluation follows the relation semantics") {
    Assignment empty;
    CHECK_FALSE(eval_qf(parse1("I <= I"), empty));
    CHECK_FALSE(eval_qf(parse1("I < 2*I"), empty));
    CHECK(eval_qf(parse1("I == I"), empty));

    Formula ball = parse1("z*conj(z) < 2");
    Assignment at_1i{{Variable("z"), GaussianRational(Rational(1), Rational(1))}};
    Assignment at_half{{Variable("z"), GaussianRational(Rational(1, 2))}};
    CHECK_FALSE(eval_qf(ball, at_1i));
    CHECK(eval_qf(ball, at_half));
    CHECK_THROWS_AS(eval_qf(parse1("exists z . z == 0"), empty), Error);
}

TEST_CASE("grid sampling proves and refutes what it can") {
    PointSampler sampler(testgen::suite_seed() + 11);
    std::vector<GaussianRational> grid = standard_grid(sampler);
    CHECK(sample_quantified(parse1("exists z . z^2 + 1 == 0"), grid) == Sample::True);
    CHECK(sample_quantified(parse1("forall z . z == 0"), grid) == Sample::False);
    CHECK(sample_quantified(parse1("forall z . 0 <= z*conj(z)"), grid) == Sample::Unknown);
}

TEST_CASE("prenex motion") {
    Formula f = parse1("(exists z . z == x) and y == 0");
    Formula p = prenexify(f);
    REQUIRE(p->kind == FormulaKind::Exists);
    CHECK(is_prenex(p));

    Formula already = parse1("exists z . z == 0 and z == 1");
    CHECK(print_formula(prenexify(already)) == print_formula(already));

    Formula neg = parse1("not (forall z . z == x)");
    Formula pn = prenexify(neg);
    REQUIRE(pn->kind == FormulaKind::Exists);
    CHECK(pn->args[0]->kind == FormulaKind::Not);
}

TEST_CASE("prenex motion renames on capture") {
    // The same bound name in two branches must not collide after hoisting.
    Formula f = fm::conjunction({parse1("exists z . z == x"), parse1("exists z . z == y")});
    Formula p = prenexify(f);
    REQUIRE(is_prenex(p));
    std::set<Variable> bound;
    collect_bound_variables(p, bound);
    CHECK(bound.size() == 2);
    validate_binding(p);
}

TEST_CASE("binding validation rejects shadowing") {
    Formula dup = fm::exists(Variable("z"), parse1("exists z . z == 0"));
    CHECK_THROWS_AS(validate_binding(dup), ContextError);
    Formula mixed = fm::conjunction({parse1("exists z . z == 0"), parse1("z == 1")});
    CHECK_THROWS_AS(validate_binding(mixed), ContextError);
}

TEST_CASE("free variables in variable order") {
    Formula f = parse1("forall w1 . v10*conj(w1) + v2 == 0");
    auto free = free_vars(f);
    REQUIRE(free.size() == 2);
    CHECK(free[0].name == "v2");
    CHECK(free[1].name == "v10");
}

TEST_CASE("real normal form of the stated examples") {
    // z = x + I y splits into two real equations.
    Formula f = parse1("z == x + I*y");
    Formula nf = to_real_nf(f);
    REQUIRE(nf->kind == FormulaKind::And);
    CHECK(nf->args.size() == 2);
    for (const auto& a : nf->args) {
        REQUIRE(a->kind == FormulaKind::AtomF);
        CHECK(a->atom.rel == RelOp::EQ);
        CHECK(print_term(a->atom.rhs) == "0");
    }

    // Ordering atoms on non-real sides: error by default, F when lenient.
    Formula bad = parse1("I < 2*I");
    CHECK_THROWS_AS(to_real_nf(bad), RealnessError);
    CHECK(to_real_nf(bad, true)->kind == FormulaKind::Bot);

    Formula ne = to_real_nf(parse1("z != 0"));
    REQUIRE(ne->kind == FormulaKind::Or);
    CHECK(ne->args.size() == 2);
}

TEST_CASE("real normal form preserves meaning") {
    std::mt19937_64 rng(testgen::suite_seed() + 12);
    std::vector<Variable> vars{Variable("x"), Variable("y")};
    testgen::FormulaGen gen(rng, vars);
    PointSampler sampler(testgen::suite_seed() + 13);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        Formula f = gen.qf(2);
        Formula nf = to_real_nf(f, true);
        for (int j = 0; j < 10; ++j) {
            Assignment sigma = testgen::random_assignment({vars[0], vars[1]}, sampler);
            CHECK(eval_qf(f, sigma) == eval_qf(nf, sigma));
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("real normal form output shape") {
    std::mt19937_64 rng(testgen::suite_seed() + 14);
    testgen::FormulaGen gen(rng, {Variable("x"), Variable("y")});
    for (int i = 0; i < 100; ++i) {
        Formula nf = to_real_nf(gen.qf(2), true);
        std::function<void(const Formula&)> check = [&](const Formula& g) {
            if (g->kind == FormulaKind::AtomF) {
                CHECK(is_real_term(g->atom.lhs));
                CHECK(print_term(g->atom.rhs) == "0");
                return;
            }
            for (const auto& a : g->args) check(a);
        };
        check(nf);
    }
}

TEST_CASE("ordering atoms with non-real sides are identically false") {
    std::mt19937_64 rng(testgen::suite_seed() + 15);
    testgen::TermGen gen(rng, {Variable("x"), Variable("y")});
    PointSampler sampler(testgen::suite_seed() + 16);
    int found = 0;
    for (int i = 0; i < 200 && found < 40; ++i) {
        Term l = gen.term(2), r = gen.term(2);
        if (is_real_term(l) && is_real_term(r)) continue;
        ++found;
        Formula atom = fm::atom(l, RelOp::LT, r);
        for (int j = 0; j < 5; ++j) {
            Assignment sigma =
                testgen::random_assignment({Variable("x"), Variable("y")}, sampler);
            CHECK_FALSE(eval_qf(atom, sigma));
        }
    }
    CHECK(found > 0);
}

TEST_CASE("replacing atom sides by their normal forms never changes evaluation") {
    std::mt19937_64 rng(testgen::suite_seed() + 17);
    testgen::FormulaGen gen(rng, {Variable("x"), Variable("y")});
    PointSampler sampler(testgen::suite_seed() + 18);
    VarContext ctx = VarContext::sorted({Variable("x"), Variable("y")});
    for (int i = 0; i < 100; ++i) {
        Formula f = gen.qf(2);
        Formula g = map_atoms(f, [&](const Atom& a) {
            Term lhs = cnf_to_term(to_conjugate_nf(a.lhs, ctx));
            Term rhs = cart_to_term(to_cartesian_nf(a.rhs, ctx));
            return fm::atom(lhs, a.rel, rhs);
        });
        for (int j = 0; j < 8; ++j) {
            Assignment sigma =
                testgen::random_assignment({Variable("x"), Variable("y")}, sampler);
            CHECK(eval_qf(f, sigma) == eval_qf(g, sigma));
        }
    }
}
