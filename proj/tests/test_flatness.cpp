#include "doctest.h"

#include "dirac/flatness.hpp"

using namespace dirac;

namespace {

struct KoszulSetup {
    CoefficientDomain dom = CoefficientDomain::integers();
    TablePtr table = make_table({{"e", Degree{1}}});
    GradedPolynomial e = GradedPolynomial::generator(dom, table, 0);
    GradedPolynomial zero = GradedPolynomial::zero(dom, table);
    PolySystem sys{dom, table, {{e}}, {zero}};

    GradedPolynomial scalar(long v) const {
        return GradedPolynomial::constant(dom, table, Integer(v));
    }
};

FpVec vec2(long a, long b) {
    FpVec v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("a two-torsion multiple of an odd generator is a valid witness") {
    KoszulSetup s;
    // 2e * e = 0 although e * e is not, so y = 2e solves y * e = 0.
    FlatnessWitness w{{Integer(2) * s.e}, {s.scalar(1)}, {{Integer(2) * s.e}}};
    FlatnessReport rep = check_flatness_witness(s.sys, w);
    CHECK(rep.ok);
    CHECK(rep.failed_condition == 0);
}

TEST_CASE("empty systems delegate everything to the factorization") {
    CoefficientDomain dom = CoefficientDomain::integers();
    TablePtr table = make_table({{"x", Degree{2}}});
    GradedPolynomial x = GradedPolynomial::generator(dom, table, 0);
    GradedPolynomial one = GradedPolynomial::one(dom, table);

    PolySystem sys(dom, table, {}, {}, 1);
    CHECK(sys.equations() == 0);
    CHECK(sys.unknowns() == 1);

    FlatnessWitness good{{x}, {x}, {{one}}};
    CHECK(check_flatness_witness(sys, good).ok);

    FlatnessWitness bad{{x}, {one + one}, {{x}}};
    FlatnessReport rep = check_flatness_witness(sys, bad);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failed_condition == 3);
}

TEST_CASE("the zero solution carries an empty witness") {
    CoefficientDomain f3 = CoefficientDomain::prime_field(3);
    TablePtr table = make_table({{"u", Degree{2}}});
    GradedPolynomial u = GradedPolynomial::generator(f3, table, 0);
    GradedPolynomial zero = GradedPolynomial::zero(f3, table);
    PolySystem sys(f3, table, {{u}}, {zero});
    FlatnessWitness w{{zero}, {}, {}};
    CHECK(check_flatness_witness(sys, w).ok);
}

TEST_CASE("each defining condition fails on its own corruption") {
    KoszulSetup s;

    // y = e itself does not solve: e * e = e^2 survives with coefficient 1.
    FlatnessWitness bad1{{s.e}, {s.scalar(1)}, {{Integer(2) * s.e}}};
    FlatnessReport r1 = check_flatness_witness(s.sys, bad1);
    CHECK_FALSE(r1.ok);
    CHECK(r1.failed_condition == 1);

    // z = (e) is not a homogeneous solution.
    FlatnessWitness bad2{{Integer(2) * s.e}, {s.scalar(1)}, {{s.e}}};
    FlatnessReport r2 = check_flatness_witness(s.sys, bad2);
    CHECK_FALSE(r2.ok);
    CHECK(r2.failed_condition == 2);

    // b = (2) doubles the combination: 2 * 2e = 4e != 2e.
    FlatnessWitness bad3{{Integer(2) * s.e}, {s.scalar(2)}, {{Integer(2) * s.e}}};
    FlatnessReport r3 = check_flatness_witness(s.sys, bad3);
    CHECK_FALSE(r3.ok);
    CHECK(r3.failed_condition == 3);
}

TEST_CASE("malformed witnesses throw instead of failing") {
    KoszulSetup s;
    GradedPolynomial twoe = Integer(2) * s.e;

    // Shape errors.
    CHECK_THROWS_AS(check_flatness_witness(s.sys, {{twoe, twoe}, {s.scalar(1)}, {{twoe}}}),
                    DomainError);
    CHECK_THROWS_AS(check_flatness_witness(s.sys, {{twoe}, {}, {{twoe}}}), DomainError);
    CHECK_THROWS_AS(check_flatness_witness(s.sys, {{twoe}, {s.scalar(1)}, {{twoe, twoe}}}),
                    DomainError);

    // Ring mismatch.
    GradedPolynomial alien =
        GradedPolynomial::one(CoefficientDomain::prime_field(3), s.table);
    CHECK_THROWS_AS(check_flatness_witness(s.sys, {{alien}, {}, {}}), DomainError);

    // Inhomogeneous entry.
    GradedPolynomial mixed = s.e + s.scalar(1);
    CHECK_THROWS_AS(check_flatness_witness(s.sys, {{mixed}, {}, {}}), DomainError);

    // Degree-inconsistent combination: b_j z_jk terms of unequal degree.
    CoefficientDomain dom = CoefficientDomain::integers();
    TablePtr tab = make_table({{"x", Degree{2}}});
    GradedPolynomial x = GradedPolynomial::generator(dom, tab, 0);
    GradedPolynomial one = GradedPolynomial::one(dom, tab);
    PolySystem empty_sys(dom, tab, {}, {}, 1);
    CHECK_THROWS_AS(
        check_flatness_witness(empty_sys, {{x}, {one, one}, {{x}, {one}}}),
        DomainError);
}

TEST_CASE("system constructor checks its own shape") {
    KoszulSetup s;
    CHECK_THROWS_AS(PolySystem(s.dom, s.table, {}, {}), DomainError);
    CHECK_THROWS_AS(PolySystem(s.dom, s.table, {{s.e}}, {s.zero}, 2), DomainError);
    CHECK_THROWS_AS(PolySystem(s.dom, s.table, {{s.e}}, {}), DomainError);
    CHECK_THROWS_AS(PolySystem(s.dom, s.table, {{s.e}, {s.e, s.e}}, {s.zero, s.zero}),
                    DomainError);
    CHECK_NOTHROW(PolySystem(s.dom, s.table, {{s.e}}, {s.zero}, 1));
}

TEST_CASE("base-coefficient solutions are found in split products") {
    for (std::int64_t n : {2, 3}) {
        FiniteGradedAlgebra e = FiniteGradedAlgebra::split_product(3, n);
        FpVec coeff = FpVec::Zero(n);
        coeff(n - 2) = 1;
        FpVec rhs = FpVec::Zero(n);
        rhs(n - 2) = 2;
        FiniteSystem sys(e, {{coeff}}, {rhs});
        auto sol = search_faithful_flatness_witness(sys);
        REQUIRE(sol.has_value());
        REQUIRE(sol->size() == 1);
        FpVec check = e.multiply((*sol)[0], coeff);
        for (EIndex i = 0; i < check.size(); ++i)
            CHECK(mod_reduce(check(i) - rhs(i), 3) == 0);
    }
}

TEST_CASE("inconsistent systems report not found") {
    FiniteGradedAlgebra e = FiniteGradedAlgebra::split_product(3, 2);
    FiniteSystem sys(e, {{FpVec::Zero(2)}}, {vec2(1, 1)});
    CHECK_FALSE(search_faithful_flatness_witness(sys).has_value());
}

TEST_CASE("the degree window gates the search") {
    FiniteGradedAlgebra e = FiniteGradedAlgebra::truncated_polynomial(3, "x", Degree{2}, 3);
    FpVec unit = FpVec::Zero(3);
    unit(0) = 1;
    FpVec xvec = FpVec::Zero(3);
    xvec(1) = 1;

    // y * 1 = x forces deg y = 2; the base span includes x itself.
    FiniteSystem sys(e, {{unit}}, {xvec}, {unit, xvec});
    auto found = search_faithful_flatness_witness(sys);
    REQUIRE(found.has_value());
    for (EIndex i = 0; i < 3; ++i)
        CHECK((*found)[0](i) == xvec(i));

    CHECK_FALSE(search_faithful_flatness_witness(sys, Degree{0}, Degree{0}).has_value());
}

TEST_CASE("homogeneity conflicts and bad shapes are rejected") {
    FiniteGradedAlgebra e = FiniteGradedAlgebra::truncated_polynomial(3, "x", Degree{2}, 3);
    FpVec unit = FpVec::Zero(3);
    unit(0) = 1;
    FpVec xvec = FpVec::Zero(3);
    xvec(1) = 1;
    FpVec x2vec = FpVec::Zero(3);
    x2vec(2) = 1;

    // Two equations pin the same unknown to degrees 2 and 4.
    FiniteSystem conflict(e, {{unit}, {unit}}, {xvec, x2vec});
    CHECK_THROWS_AS(search_faithful_flatness_witness(conflict), DomainError);

    // Right-hand side 1 + x is not homogeneous.
    FpVec mixed = FpVec::Zero(3);
    mixed(0) = 1;
    mixed(1) = 1;
    FiniteSystem inhom(e, {{unit}}, {mixed});
    CHECK_THROWS_AS(search_faithful_flatness_witness(inhom), DomainError);

    CHECK_THROWS_AS(FiniteSystem(e, {}, {}), DomainError);
    CHECK_THROWS_AS(FiniteSystem(e, {{unit}, {unit, unit}}, {xvec, xvec}), DomainError);
    CHECK_THROWS_AS(FiniteSystem(e, {{FpVec::Zero(2)}}, {xvec}), DomainError);
}
