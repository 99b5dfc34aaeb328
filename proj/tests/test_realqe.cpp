#include <catch2/catch_amalgamated.hpp>

#include <pcqe/simplify.hpp>
#include <pcqe/vs.hpp>

#include "support/generators.hpp"

using namespace pcqe;

namespace {

// Grid instantiation of a real-fragment prefix: proves existentials,
// refutes universals, exact on the matrix.
enum class RSample { True, False, Unknown };

RSample rsample(const std::vector<RPrefixEntry>& prefix, std::size_t at, const RFormula& matrix,
                std::vector<Rational>& point, const std::vector<Rational>& grid) {
    if (at == prefix.size())
        return reval(matrix, point) ? RSample::True : RSample::False;
    std::size_t g = prefix[at].gen;
    bool exists = prefix[at].quant == Quantifier::Exists;
    for (const auto& v : grid) {
        Rational saved = point[g];
        point[g] = v;
        RSample r = rsample(prefix, at + 1, matrix, point, grid);
        point[g] = saved;
        if (exists && r == RSample::True) return RSample::True;
        if (!exists && r == RSample::False) return RSample::False;
    }
    return RSample::Unknown;
}

RFormula atom_text(std::size_t width, std::initializer_list<std::pair<Monomial, long>> terms,
                   RelOp rel) {
    QPoly p(width);
    for (const auto& [m, c] : terms) p.add_term(m, Rational(c));
    return rf::atom(p, rel);
}

} // namespace

TEST_CASE("atom simplification decides by sign analysis") {
    // x^2 + 1 is positive, so equality with zero is false.
    QPoly p = QPoly::generator(1, 0).pow(2) + QPoly::constant(1, Rational(1));
    CHECK(simplify(rf::atom(p, RelOp::EQ))->kind == RKind::Bot);
    CHECK(simplify(rf::atom(p, RelOp::NE))->kind == RKind::Top);
    CHECK(simplify(rf::atom(p, RelOp::LT))->kind == RKind::Bot);
    // x^2 alone can still be zero.
    QPoly sq = QPoly::generator(1, 0).pow(2);
    CHECK(simplify(rf::atom(sq, RelOp::LE))->kind == RKind::Atom);
    CHECK(simplify(rf::atom(sq, RelOp::LT))->kind == RKind::Bot);
}

TEST_CASE("junction simplification merges atoms over the same polynomial") {
    QPoly x = QPoly::generator(2, 0);
    // x <= 0 and x >= 0 collapses to x == 0.
    RFormula both = rf::conjunction({rf::atom(x, RelOp::LE), rf::atom(-x, RelOp::LE)});
    RFormula s = simplify(both);
    REQUIRE(s->kind == RKind::Atom);
    CHECK(s->atom.rel == RelOp::EQ);
    // x < 0 or x == 0 is x <= 0.
    RFormula either = rf::disjunction({rf::atom(x, RelOp::LT), rf::atom(x, RelOp::EQ)});
    s = simplify(either);
    REQUIRE(s->kind == RKind::Atom);
    CHECK(s->atom.rel == RelOp::LE);
    // x == 0 and x != 0 is false; x == 0 or x != 0 is true.
    CHECK(simplify(rf::conjunction({rf::atom(x, RelOp::EQ), rf::atom(x, RelOp::NE)}))->kind ==
          RKind::Bot);
    CHECK(simplify(rf::disjunction({rf::atom(x, RelOp::EQ), rf::atom(x, RelOp::NE)}))->kind ==
          RKind::Top);
}

TEST_CASE("truth constants and flattening") {
    QPoly x = QPoly::generator(1, 0);
    RFormula f = rf::conjunction({rf::atom(-x, RelOp::LT), rf::top()});
    RFormula s = simplify(f);
    REQUIRE(s->kind == RKind::Atom); // x > 0 survives alone
    CHECK(simplify(rf::conjunction({rf::atom(x, RelOp::LT), rf::bot()}))->kind == RKind::Bot);
    RFormula nested = rf::conjunction({rf::conjunction({rf::atom(x, RelOp::LT)}),
                                       rf::conjunction({rf::atom(x, RelOp::LT)})});
    s = simplify(nested);
    CHECK(s->kind == RKind::Atom);
}

TEST_CASE("absorption between atoms and composite children") {
    QPoly x = QPoly::generator(2, 0), y = QPoly::generator(2, 1);
    // (x < 0) and (x < 0 or y == 0) collapses to x < 0.
    RFormula f = rf::conjunction(
        {rf::atom(x, RelOp::LT),
         rf::disjunction({rf::atom(x, RelOp::LT), rf::atom(y, RelOp::EQ)})});
    CHECK(simplify(f)->kind == RKind::Atom);
    // (x < 0) and (x >= 0 or y == 0) strengthens to x < 0 and y == 0.
    RFormula g = rf::conjunction(
        {rf::atom(x, RelOp::LT),
         rf::disjunction({rf::atom(-x, RelOp::LE), rf::atom(y, RelOp::EQ)})});
    RFormula s = simplify(g);
    REQUIRE(s->kind == RKind::And);
    CHECK(s->args.size() == 2);
}

TEST_CASE("sign environment decides products of known signs") {
    QPoly x = QPoly::generator(2, 0), y = QPoly::generator(2, 1);
    SignEnv env;
    env.meet_var(0, SIGN_POS);
    env.meet_var(1, SIGN_POS);
    // x*y > 0 under x > 0, y > 0.
    CHECK(simplify(rf::atom(-(x * y), RelOp::LT), env)->kind == RKind::Top);
    // g^2 - 1 >= 0 under g > 0 stays open.
    QPoly g2 = QPoly::generator(2, 0).pow(2) - QPoly::constant(2, Rational(1));
    CHECK(simplify(rf::atom(-g2, RelOp::LE), env)->kind == RKind::Atom);
}

TEST_CASE("simplification preserves evaluation") {
    std::mt19937_64 rng(testgen::suite_seed() + 20);
    PointSampler sampler(testgen::suite_seed() + 21);
    const std::size_t width = 3;
    for (int i = 0; i < 300; ++i) {
        RFormula f = testgen::random_rformula(rng, width, 3);
        RFormula s = simplify(f);
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> point;
            for (std::size_t g = 0; g < width; ++g) point.push_back(sampler.rational());
            CHECK(reval(f, point) == reval(s, point));
        }
    }
}

TEST_CASE("negation normal form evaluates like negation") {
    std::mt19937_64 rng(testgen::suite_seed() + 22);
    PointSampler sampler(testgen::suite_seed() + 23);
    for (int i = 0; i < 100; ++i) {
        RFormula f = testgen::random_rformula(rng, 2, 3);
        RFormula n = rnegate(f);
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> point{sampler.rational(), sampler.rational()};
            CHECK(reval(f, point) != reval(n, point));
        }
    }
}

TEST_CASE("no real square root of -1") {
    RealVarTable table{{"x"}};
    QPoly x = QPoly::generator(1, 0);
    RFormula matrix = rf::atom(x.pow(2) + QPoly::constant(1, Rational(1)), RelOp::EQ);
    RFormula out = vs_eliminate({{Quantifier::Exists, 0}}, matrix, table);
    CHECK(out->kind == RKind::Bot);
}

TEST_CASE("parametric linear equation") {
    RealVarTable table{{"a", "b", "x"}};
    QPoly a = QPoly::generator(3, 0), b = QPoly::generator(3, 1), x = QPoly::generator(3, 2);
    RFormula matrix = rf::atom(a * x + b, RelOp::EQ);
    RFormula out = vs_eliminate({{Quantifier::Exists, 2}}, matrix, table);
    // Expected: a != 0 or b == 0, checked pointwise.
    for (long av = -2; av <= 2; ++av) {
        for (long bv = -2; bv <= 2; ++bv) {
            std::vector<Rational> pt{Rational(av), Rational(bv), Rational(0)};
            bool expect = av != 0 || bv == 0;
            CHECK(reval(out, pt) == expect);
        }
    }
}

TEST_CASE("circle does not meet a distant line") {
    RealVarTable table{{"u", "v"}};
    QPoly u = QPoly::generator(2, 0), v = QPoly::generator(2, 1);
    RFormula matrix = rf::conjunction(
        {rf::atom(u.pow(2) + v.pow(2) - QPoly::constant(2, Rational(1)), RelOp::EQ),
         rf::atom(u - QPoly::constant(2, Rational(2)), RelOp::EQ)});
    RFormula out = vs_eliminate(
        {{Quantifier::Exists, 0}, {Quantifier::Exists, 1}}, matrix, table);
    CHECK(out->kind == RKind::Bot);
}

TEST_CASE("degree bound failure is reported") {
    RealVarTable table{{"a", "x"}};
    QPoly a = QPoly::generator(2, 0), x = QPoly::generator(2, 1);
    RFormula matrix = rf::atom(x.pow(3) + a, RelOp::EQ);
    CHECK_THROWS_AS(vs_eliminate({{Quantifier::Exists, 1}}, matrix, table), DegreeTooHighError);
    // A pure monomial of higher degree is still fine.
    RFormula cube = rf::atom(x.pow(3), RelOp::EQ);
    RFormula out = vs_eliminate({{Quantifier::Exists, 1}}, cube, table);
    CHECK(out->kind == RKind::Top);
}

TEST_CASE("elimination is sound against grid instantiation") {
    std::mt19937_64 rng(testgen::suite_seed() + 24);
    PointSampler sampler(testgen::suite_seed() + 25);
    RealVarTable table{{"p", "q", "x", "y"}};
    std::vector<Rational> grid;
    for (long n : {-3, -2, -1, 0, 1, 2, 3}) grid.push_back(Rational(n));
    for (long n : {-1, 1, 3}) grid.push_back(Rational(n, 2));
    std::uniform_int_distribution<unsigned> dist(0, 3);

    int conclusive = 0;
    for (int i = 0; i < 300; ++i) {
        RFormula matrix = testgen::random_rformula(rng, 4, 2);
        std::vector<RPrefixEntry> prefix;
        prefix.push_back({dist(rng) % 2 ? Quantifier::Exists : Quantifier::Forall, 2});
        if (dist(rng) % 2) prefix.push_back({dist(rng) % 2 ? Quantifier::Exists : Quantifier::Forall, 3});
        RFormula out;
        try {
            out = vs_eliminate(prefix, matrix, table);
        } catch (const DegreeTooHighError&) {
            continue;
        }
        for (const auto& e : prefix) CHECK(!rformula_contains(out, e.gen));
        bool y_free = prefix.size() == 1;
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> pt{sampler.rational(), sampler.rational(), Rational(0),
                                     y_free ? sampler.rational() : Rational(0)};
            RSample s = rsample(prefix, 0, matrix, pt, grid);
            if (s == RSample::Unknown) continue;
            ++conclusive;
            bool value = reval(out, pt);
            if (s == RSample::True) CHECK(value);
            if (s == RSample::False) CHECK_FALSE(value);
        }
    }
    CHECK(conclusive > 200);
}

TEST_CASE("universal elimination agrees with its dual") {
    std::mt19937_64 rng(testgen::suite_seed() + 26);
    PointSampler sampler(testgen::suite_seed() + 27);
    RealVarTable table{{"p", "x"}};
    for (int i = 0; i < 120; ++i) {
        RFormula matrix = testgen::random_rformula(rng, 2, 2);
        RFormula forall_out, dual_out;
        try {
            forall_out = vs_eliminate({{Quantifier::Forall, 1}}, matrix, table);
            dual_out = rnegate(
                vs_eliminate({{Quantifier::Exists, 1}}, rnegate(matrix), table));
        } catch (const DegreeTooHighError&) {
            continue;
        }
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> pt{sampler.rational(), Rational(0)};
            CHECK(reval(forall_out, pt) == reval(dual_out, pt));
        }
    }
}

TEST_CASE("eliminating nothing preserves meaning") {
    std::mt19937_64 rng(testgen::suite_seed() + 28);
    PointSampler sampler(testgen::suite_seed() + 29);
    RealVarTable table{{"p", "q"}};
    for (int i = 0; i < 100; ++i) {
        RFormula matrix = testgen::random_rformula(rng, 2, 2);
        RFormula out = vs_eliminate({}, matrix, table);
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> pt{sampler.rational(), sampler.rational()};
            CHECK(reval(out, pt) == reval(matrix, pt));
        }
    }
}

TEST_CASE("simplification under assumption facts preserves conditional meaning") {
    std::mt19937_64 rng(testgen::suite_seed() + 30);
    PointSampler sampler(testgen::suite_seed() + 31);
    const std::size_t width = 2;
    SignEnv env;
    env.meet_var(0, SIGN_POS); // assume first variable positive
    for (int i = 0; i < 200; ++i) {
        RFormula f = testgen::random_rformula(rng, width, 3);
        RFormula s = simplify(f, env);
        for (int j = 0; j < 10; ++j) {
            std::vector<Rational> pt{sampler.positive_rational(), sampler.rational()};
            CHECK(reval(f, pt) == reval(s, pt));
        }
    }
}
