#include <catch2/catch_amalgamated.hpp>

#include <pcqe/normal_forms.hpp>
#include <pcqe/printer.hpp>
#include <pcqe/rational.hpp>

#include "support/generators.hpp"

using namespace pcqe;

namespace {

Variable zv("z"), xv("x"), yv("y");

GPoly gpoly_of(const Term& t, const VarContext& ctx) { return to_conjugate_nf(t, ctx).poly; }

} // namespace

TEST_CASE("rational helpers") {
    Rational q(6, 4);
    CHECK(numerator(q) == 3);
    CHECK(denominator(q) == 2);
    CHECK(rational_to_string(q) == "3/2");
    CHECK(rational_to_string(Rational(-7)) == "-7");
    CHECK(rational_gcd(Rational(1, 2), Rational(3, 4)) == Rational(1, 4));
    CHECK(rational_sqrt(Rational(9, 4)) == Rational(3, 2));
    CHECK_FALSE(rational_sqrt(Rational(2)).has_value());
    CHECK_FALSE(rational_sqrt(Rational(-1)).has_value());
}

TEST_CASE("gaussian rational field operations") {
    GaussianRational a(Rational(3), Rational(4));
    CHECK(a.norm() == 25);
    CHECK(a * a.conj() == GaussianRational(Rational(25)));
    CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(Rational(-1)));
    GaussianRational b = GaussianRational(Rational(1), Rational(1)) / a;
    CHECK(b * a == GaussianRational(Rational(1), Rational(1)));
    CHECK_THROWS_AS(a / GaussianRational(0), DomainError);
}

TEST_CASE("gaussian square roots") {
    auto r = gaussian_sqrt(GaussianRational(Rational(-1)));
    REQUIRE(r.has_value());
    CHECK(*r * *r == GaussianRational(Rational(-1)));
    auto s = gaussian_sqrt(GaussianRational(Rational(0), Rational(2)));
    REQUIRE(s.has_value());
    CHECK(*s * *s == GaussianRational(Rational(0), Rational(2)));
    CHECK_FALSE(gaussian_sqrt(GaussianRational(Rational(2))).has_value());
}

TEST_CASE("monomial order is degree-lexicographic") {
    Monomial a = Monomial::unit(4, 0);      // z1
    Monomial b = Monomial::unit(4, 3);      // conj(z2)
    Monomial c = Monomial::unit(4, 0, 2);   // z1^2
    CHECK(Monomial::cmp(a, b) > 0);         // earlier generators are larger
    CHECK(Monomial::cmp(b, c) < 0);         // degree dominates
    CHECK(Monomial::cmp(a, a) == 0);
}

TEST_CASE("polynomial arithmetic basics") {
    QPoly x = QPoly::generator(2, 0), y = QPoly::generator(2, 1);
    QPoly p = (x + y).pow(2);
    QPoly expect = x * x + x * y.scaled(Rational(2)) + y * y;
    CHECK(p == expect);
    CHECK(p.degree_in(0) == 2);
    CHECK(p.substituted(1, QPoly::constant(2, Rational(0))) == x * x);
    CHECK((p - p).is_zero());
    std::vector<Rational> pt{Rational(2), Rational(3)};
    CHECK(p.eval(pt) == Rational(25));
    CHECK(p.derivative_in(0) == x.scaled(Rational(2)) + y.scaled(Rational(2)));
}

TEST_CASE("conjugate normal form of the worked terms") {
    VarContext ctx({zv});
    // z^2 + I is already a normal form.
    Term s1 = tm::add(tm::pow(tm::variable(zv), 2), tm::imag());
    GPoly p1 = gpoly_of(s1, ctx);
    CHECK(p1.term_count() == 2);
    CHECK(print_term(cnf_to_term(PolyCNF{ctx, p1})) == "z^2 + I");

    // Re(z) = z/2 + conj(z)/2.
    GPoly pre = gpoly_of(tm::re(tm::variable(zv)), ctx);
    GPoly expect = GPoly::generator(2, 0).scaled(GaussianRational(Rational(1, 2))) +
                   GPoly::generator(2, 1).scaled(GaussianRational(Rational(1, 2)));
    CHECK(pre == expect);

    // conj(conj(z) * I) = -I z.
    GPoly pc = gpoly_of(tm::conj(tm::mul(tm::conj(tm::variable(zv)), tm::imag())), ctx);
    CHECK(pc == GPoly::generator(2, 0).scaled(GaussianRational(Rational(0), Rational(-1))));
}

TEST_CASE("cartesian normal form of the worked terms") {
    VarContext ctx({zv});
    QPoly re = QPoly::generator(2, 0), im = QPoly::generator(2, 1);

    PolyCart t1 = to_cartesian_nf(tm::add(tm::pow(tm::variable(zv), 2), tm::imag()), ctx);
    CHECK(t1.p1 == re * re - im * im);
    CHECK(t1.p2 == (re * im).scaled(Rational(2)) + QPoly::constant(2, Rational(1)));

    PolyCart t2 = to_cartesian_nf(tm::mul(tm::variable(zv), tm::conj(tm::variable(zv))), ctx);
    CHECK(t2.p1 == re * re + im * im);
    CHECK(t2.p2.is_zero());

    PolyCart t3 = to_cartesian_nf(
        tm::add(tm::mul(tm::constant(Rational(2)), tm::imag()), tm::constant(Rational(1))), ctx);
    CHECK(t3.p1 == QPoly::constant(2, Rational(1)));
    CHECK(t3.p2 == QPoly::constant(2, Rational(2)));
}

TEST_CASE("conversions between the two normal forms") {
    VarContext ctx({zv});
    QPoly re = QPoly::generator(2, 0), im = QPoly::generator(2, 1);

    PolyCNF zzbar = to_conjugate_nf(tm::mul(tm::variable(zv), tm::conj(tm::variable(zv))), ctx);
    PolyCart cart = cnf_to_cart(zzbar);
    CHECK(cart.p1 == re * re + im * im);
    CHECK(cart.p2.is_zero());

    PolyCNF zero{ctx, GPoly(2)};
    CHECK(cnf_to_cart(zero).p1.is_zero());
    CHECK(cart_to_cnf(PolyCart{ctx, QPoly(2), QPoly(2)}).poly.is_zero());

    // Re(z) as a Cartesian form maps back to z/2 + conj(z)/2.
    PolyCNF back = cart_to_cnf(PolyCart{ctx, re, QPoly(2)});
    GPoly expect = GPoly::generator(2, 0).scaled(GaussianRational(Rational(1, 2))) +
                   GPoly::generator(2, 1).scaled(GaussianRational(Rational(1, 2)));
    CHECK(back.poly == expect);
}

TEST_CASE("round trip between normal forms on random terms") {
    std::mt19937_64 rng(testgen::suite_seed());
    testgen::TermGen gen(rng, {zv, xv});
    for (int i = 0; i < 200; ++i) {
        Term t = gen.term(3);
        VarContext ctx = VarContext::sorted({zv, xv});
        PolyCNF nf = to_conjugate_nf(t, ctx);
        CHECK(cart_to_cnf(cnf_to_cart(nf)) == nf);
        PolyCart cf = to_cartesian_nf(t, ctx);
        PolyCart via = cnf_to_cart(nf);
        CHECK(cf == via);
    }
}

TEST_CASE("real term characterization") {
    CHECK(is_real_term(tm::mul(tm::variable(zv), tm::conj(tm::variable(zv)))));
    CHECK_FALSE(is_real_term(tm::imag()));
    CHECK(is_real_term(tm::mul(tm::im(tm::variable(zv)), tm::re(tm::variable(zv)))));
}

TEST_CASE("term evaluation") {
    Assignment sigma{{zv, GaussianRational(Rational(3), Rational(4))}};
    CHECK(eval_term(tm::mul(tm::variable(zv), tm::conj(tm::variable(zv))), sigma) ==
          GaussianRational(Rational(25)));
    CHECK(eval_term(tm::mul(tm::imag(), tm::imag()), {}) == GaussianRational(Rational(-1)));
    CHECK_THROWS_AS(eval_term(tm::variable(xv), sigma), ContextError);

    // Re(z) + i Im(z) reproduces z.
    PointSampler sampler(testgen::suite_seed());
    Term recompose = tm::add(tm::re(tm::variable(zv)),
                             tm::mul(tm::imag(), tm::im(tm::variable(zv))));
    for (int i = 0; i < 20; ++i) {
        GaussianRational c = sampler.complex_point();
        Assignment s{{zv, c}};
        CHECK(eval_term(recompose, s) == c);
    }
}

TEST_CASE("term equivalence") {
    Term re_z = tm::re(tm::variable(zv));
    Term half_sum = tm::mul(tm::constant(Rational(1, 2)),
                            tm::add(tm::variable(zv), tm::conj(tm::variable(zv))));
    CHECK(term_equiv(re_z, half_sum));
    CHECK_FALSE(term_equiv(tm::variable(zv), tm::conj(tm::variable(zv))));

    Term s1 = tm::add(tm::pow(tm::variable(zv), 2), tm::imag());
    Term t1 = tm::add(tm::sub(tm::pow(tm::re(tm::variable(zv)), 2),
                              tm::pow(tm::im(tm::variable(zv)), 2)),
                      tm::mul(tm::imag(),
                              tm::add(tm::mul(tm::mul(tm::constant(Rational(2)),
                                                      tm::re(tm::variable(zv))),
                                              tm::im(tm::variable(zv))),
                                      tm::constant(Rational(1)))));
    CHECK(term_equiv(s1, t1));
}

TEST_CASE("normal forms are unique under meaning-preserving rewrites") {
    std::mt19937_64 rng(testgen::suite_seed() + 1);
    testgen::TermGen gen(rng, {zv, xv, yv});
    VarContext ctx = VarContext::sorted({zv, xv, yv});
    for (int i = 0; i < 300; ++i) {
        Term t = gen.term(3);
        Term t2 = testgen::rewrite(t, rng, 4);
        CHECK(to_conjugate_nf(t, ctx) == to_conjugate_nf(t2, ctx));
        CHECK(to_cartesian_nf(t, ctx) == to_cartesian_nf(t2, ctx));
    }
}

TEST_CASE("normal forms preserve meaning on random points") {
    std::mt19937_64 rng(testgen::suite_seed() + 2);
    testgen::TermGen gen(rng, {zv, xv});
    PointSampler sampler(testgen::suite_seed() + 3);
    VarContext ctx = VarContext::sorted({zv, xv});
    for (int i = 0; i < 150; ++i) {
        Term t = gen.term(3);
        Term nf1 = cnf_to_term(to_conjugate_nf(t, ctx));
        Term nf2 = cart_to_term(to_cartesian_nf(t, ctx));
        for (int j = 0; j < 5; ++j) {
            Assignment sigma = testgen::random_assignment({zv, xv}, sampler);
            GaussianRational v = eval_term(t, sigma);
            CHECK(eval_term(nf1, sigma) == v);
            CHECK(eval_term(nf2, sigma) == v);
        }
    }
}

TEST_CASE("real terms have identically zero imaginary part") {
    std::mt19937_64 rng(testgen::suite_seed() + 4);
    testgen::TermGen gen(rng, {zv, xv});
    PointSampler sampler(testgen::suite_seed() + 5);
    for (int i = 0; i < 200; ++i) {
        Term t = gen.term(3);
        bool real = is_real_term(t);
        CHECK(real == term_equiv(tm::im(t), tm::constant(Rational(0))));
        if (real) {
            for (int j = 0; j < 5; ++j) {
                Assignment sigma = testgen::random_assignment({zv, xv}, sampler);
                CHECK(eval_term(t, sigma).im == 0);
            }
        }
    }
}

TEST_CASE("equivalence verdicts are independent of context extension") {
    std::mt19937_64 rng(testgen::suite_seed() + 6);
    testgen::TermGen gen(rng, {zv});
    VarContext small({zv});
    VarContext big({zv, xv, yv});
    std::vector<std::size_t> embed{0, 3}; // z -> z slot, conj z -> conj slot
    for (int i = 0; i < 200; ++i) {
        Term a = gen.term(3);
        Term b = gen.term(3);
        bool small_eq = to_conjugate_nf(a, small) == to_conjugate_nf(b, small);
        bool big_eq = to_conjugate_nf(a, big) == to_conjugate_nf(b, big);
        CHECK(small_eq == big_eq);
    }
}

TEST_CASE("conjugation is a ring involution on conjugate forms") {
    std::mt19937_64 rng(testgen::suite_seed() + 7);
    testgen::TermGen gen(rng, {zv, xv});
    VarContext ctx = VarContext::sorted({zv, xv});
    for (int i = 0; i < 200; ++i) {
        GPoly p = gpoly_of(gen.term(3), ctx);
        GPoly q = gpoly_of(gen.term(2), ctx);
        CHECK(conj_poly(conj_poly(p, 2), 2) == p);
        CHECK(conj_poly(p * q, 2) == conj_poly(p, 2) * conj_poly(q, 2));
    }
}

TEST_CASE("context errors") {
    VarContext ctx({zv});
    CHECK_THROWS_AS(to_conjugate_nf(tm::variable(xv), ctx), ContextError);
    CHECK_THROWS_AS(to_cartesian_nf(tm::variable(xv), ctx), ContextError);
    CHECK_THROWS_AS(VarContext({zv, zv}), ContextError);
}

TEST_CASE("constants must be non-negative") {
    CHECK_THROWS_AS(tm::constant(Rational(-1)), DomainError);
    CHECK(print_term(tm::rational(Rational(-3, 2))) == "-3/2");
}
