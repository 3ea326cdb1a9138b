#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "treelift/modp.hpp"
#include "treelift/poly.hpp"

using namespace treelift;

namespace {

const VarId a12{1, 2}, a13{1, 3}, a21{2, 1}, a23{2, 3}, a31{3, 1}, a32{3, 2};

Poly v(VarId x) { return Poly::var(x); }

struct RandomPoly {
    std::mt19937_64 rng;
    std::vector<VarId> pool{a12, a13, a21, a23, a31, a32};

    explicit RandomPoly(std::uint64_t seed) : rng(seed) {}

    Poly operator()(int max_terms = 4) {
        std::uniform_int_distribution<int> nterms(0, max_terms);
        std::uniform_int_distribution<int> coeff(-5, 5);
        std::uniform_int_distribution<int> nvars(0, 3);
        std::uniform_int_distribution<int> exp(1, 3);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        Poly p;
        const int t = nterms(rng);
        for (int i = 0; i < t; ++i) {
            std::vector<Monomial::Entry> es;
            const int k = nvars(rng);
            for (int j = 0; j < k; ++j)
                es.emplace_back(pool[pick(rng)],
                                static_cast<std::uint32_t>(exp(rng)));
            p += Poly::term(Monomial::from_entries(std::move(es)), coeff(rng));
        }
        return p;
    }

    Poly nonzero(int max_terms = 4) {
        while (true) {
            Poly p = (*this)(max_terms);
            if (!p.is_zero()) return p;
        }
    }
};

}  // namespace

TEST_CASE("addition") {
    CHECK((v(a12) + (-v(a12))).is_zero());
    CHECK(v(a12) * v(a23) + v(a12) * v(a23) ==
          Poly::constant(2) * v(a12) * v(a23));
    // the three covering-tree monomials rooted at 1 on three states
    Poly minor1 = v(a31) * v(a21) + v(a21) * v(a32) + v(a23) * v(a31);
    CHECK(minor1.term_count() == 3);
    CHECK(minor1.degree() == 2);
    CHECK(minor1.str() == "q2_1*q3_1 + q2_1*q3_2 + q2_3*q3_1");
}

TEST_CASE("multiplication") {
    CHECK((Poly::zero() * (v(a12) + v(a23))).is_zero());
    Poly diff_sq = (v(a12) + v(a21)) * (v(a12) - v(a21));
    CHECK(diff_sq == v(a12) * v(a12) - v(a21) * v(a21));
    CHECK(diff_sq.str() == "q1_2^2 - q2_1^2");
}

TEST_CASE("exact division") {
    Poly num = v(a12) * v(a12) - v(a21) * v(a21);
    auto q = num.exact_div(v(a12) + v(a21));
    REQUIRE(q.has_value());
    CHECK(*q == v(a12) - v(a21));

    // q1_3 does not appear in the numerator
    auto none = (v(a12) * v(a23) + v(a12) * v(a31)).exact_div(v(a13));
    CHECK(!none.has_value());

    CHECK_THROWS_AS((void)v(a12).exact_div(Poly::zero()), std::domain_error);

    // non-unit leading coefficients must divide too
    auto frac = v(a12).exact_div(Poly::constant(2));
    CHECK(!frac.has_value());
    auto half = (Poly::constant(2) * v(a12)).exact_div(Poly::constant(2));
    REQUIRE(half.has_value());
    CHECK(*half == v(a12));
}

TEST_CASE("degree and leading term") {
    CHECK(Poly::one().degree() == 0);
    CHECK(Poly::zero().degree() == -1);
    CHECK_THROWS_AS((void)Poly::zero().leading_term(), std::domain_error);
    Poly p = v(a12) * v(a23) + v(a31);
    CHECK(p.degree() == 2);
    CHECK(p.leading_term().mono == Monomial::var(a12) * Monomial::var(a23));
}

TEST_CASE("graded-lex order") {
    // degree dominates
    CHECK(Monomial::cmp(Monomial::var(a12, 3), Monomial::var(a32, 2)) > 0);
    // same degree: earlier variable with higher exponent wins
    CHECK(Monomial::cmp(Monomial::var(a12, 2),
                        Monomial::var(a12) * Monomial::var(a13)) > 0);
    CHECK(Monomial::cmp(Monomial::var(a12) * Monomial::var(a32),
                        Monomial::var(a13, 2)) > 0);
    CHECK(Monomial::cmp(Monomial::unit(), Monomial::unit()) == 0);
}

TEST_CASE("evaluation") {
    const std::uint64_t p = modp::kDefaultPrime;
    CHECK(v(a12).eval_mod({{a12, 7}}, p) == 7);
    Poly q = v(a12) * v(a23) + Poly::one();
    CHECK(q.eval_mod({{a12, 2}, {a23, 3}}, p) == 7);
    CHECK_THROWS_AS((void)q.eval_mod({{a12, 2}}, p), std::invalid_argument);
    CHECK_THROWS_AS((void)q.eval_mod({{a12, 2}, {a23, 3}}, 97),
                    std::domain_error);
    // negative coefficients reduce into [0, p)
    Poly neg = -v(a12);
    CHECK(neg.eval_mod({{a12, 5}}, p) == p - 5);
}

TEST_CASE("canonical text round-trip") {
    CHECK(Poly::zero().str() == "0");
    CHECK(Poly::parse("0").is_zero());
    CHECK(Poly::parse("q1_2*q2_3 + 2*q3_1") ==
          v(a12) * v(a23) + Poly::constant(2) * v(a31));
    CHECK(Poly::parse("-q1_2 - q1_3") == -v(a12) - v(a13));
    CHECK(Poly::parse("3").degree() == 0);
    CHECK_THROWS_AS(Poly::parse("q1_1"), std::invalid_argument);
    CHECK_THROWS_AS(Poly::parse("q1_2 q2_3"), std::invalid_argument);
    CHECK_THROWS_AS(Poly::parse(""), std::invalid_argument);

    RandomPoly gen(20260809);
    for (int i = 0; i < 500; ++i) {
        Poly p = gen();
        CHECK(Poly::parse(p.str()) == p);
    }
}

TEST_CASE("ring axioms on random triples") {
    RandomPoly gen(1);
    for (int i = 0; i < 1000; ++i) {
        Poly a = gen(), b = gen(), c = gen();
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("division round-trip") {
    RandomPoly gen(2);
    for (int i = 0; i < 400; ++i) {
        Poly a = gen.nonzero(), b = gen.nonzero();
        auto q = (a * b).exact_div(b);
        REQUIRE(q.has_value());
        CHECK(*q == a);
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    const std::uint64_t p = modp::kDefaultPrime;
    RandomPoly gen(3);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        Poly a = gen(), b = gen(), c = gen();
        std::map<VarId, std::uint64_t> x;
        for (VarId var : gen.pool) x[var] = modp::uniform_nonzero(rng, p);
        auto lhs = (a * b + c).eval_mod(x, p);
        auto rhs = modp::add(modp::mul(a.eval_mod(x, p), b.eval_mod(x, p), p),
                             c.eval_mod(x, p), p);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("degrees add under multiplication") {
    RandomPoly gen(4);
    for (int i = 0; i < 400; ++i) {
        Poly a = gen.nonzero(), b = gen.nonzero();
        CHECK((a * b).degree() == a.degree() + b.degree());
    }
}

TEST_CASE("specializing variables to one") {
    Poly p = v(a12) * v(a23) + Poly::constant(2) * v(a12);
    Poly q = p.assign_one({a12});
    CHECK(q == v(a23) + Poly::constant(2));
    CHECK(p.assign_one({a12, a23}) == Poly::constant(3));
    CHECK(p.assign_one({}) == p);
}
