#include "doctest.h"

#include <random>

#include "dirac/filtered_aut.hpp"

using namespace dirac;

namespace {

const std::int64_t P = 3;

// Free coefficient ring with enough generators to populate every jet slot up
// to order 2 at p = 3: odd degrees 1, 5, 17 and even degrees 4, 16.
TablePtr jet_ring() {
    static TablePtr t = make_table({{"s1", Degree{1}},
                                    {"t4", Degree{4}},
                                    {"s5", Degree{5}},
                                    {"t16", Degree{16}},
                                    {"s17", Degree{17}}});
    return t;
}

const std::vector<Exponents>& pool(std::int64_t degree) {
    static const std::map<std::int64_t, std::vector<Exponents>> pools = {
        {1, {{1, 0, 0, 0, 0}}},
        {4, {{0, 1, 0, 0, 0}}},
        {5, {{0, 0, 1, 0, 0}, {1, 1, 0, 0, 0}}},
        {16, {{0, 0, 0, 1, 0}, {0, 4, 0, 0, 0}}},
        {17, {{0, 0, 0, 0, 1}, {1, 0, 0, 1, 0}, {1, 4, 0, 0, 0}, {0, 3, 1, 0, 0}}},
    };
    return pools.at(degree);
}

GradedPolynomial random_homogeneous(std::mt19937& rng, std::int64_t degree) {
    CoefficientDomain dom = CoefficientDomain::prime_field(P);
    std::uniform_int_distribution<long> coeff(0, P - 1);
    GradedPolynomial r(dom, jet_ring());
    for (const Exponents& e : pool(degree))
        r += GradedPolynomial::monomial(dom, jet_ring(), e, Integer(coeff(rng)));
    return r;
}

FilteredAutomorphism random_jet(std::mt19937& rng, std::int64_t m) {
    std::vector<GradedPolynomial> a, b;
    for (std::int64_t i = 0; i <= m; ++i)
        a.push_back(random_homogeneous(rng, 2 * checked_pow(P, i) - 1));
    for (std::int64_t i = 1; i <= m; ++i)
        b.push_back(random_homogeneous(rng, 2 * checked_pow(P, i) - 2));
    return FilteredAutomorphism(P, jet_ring(), std::move(a), std::move(b));
}

}  // namespace

TEST_CASE("jet constructor rejects malformed data") {
    CoefficientDomain f3 = CoefficientDomain::prime_field(3);
    GradedPolynomial z = GradedPolynomial::zero(f3, jet_ring());

    CHECK_THROWS_AS(FilteredAutomorphism(2, jet_ring(), {z}, {}), DomainError);
    CHECK_THROWS_AS(FilteredAutomorphism(9, jet_ring(), {z}, {}), DomainError);
    CHECK_THROWS_AS(FilteredAutomorphism(3, jet_ring(), {}, {}), DomainError);
    CHECK_THROWS_AS(FilteredAutomorphism(3, jet_ring(), {z}, {z}), DomainError);

    // a_0 must sit in degree 1; the degree-4 generator does not.
    GradedPolynomial t4 = GradedPolynomial::generator(f3, jet_ring(), 1);
    CHECK_THROWS_AS(FilteredAutomorphism(3, jet_ring(), {t4}, {}), DomainError);

    // Coefficients over the wrong field are refused.
    GradedPolynomial s1z = GradedPolynomial::generator(CoefficientDomain::integers(), jet_ring(), 0);
    CHECK_THROWS_AS(FilteredAutomorphism(3, jet_ring(), {s1z}, {}), DomainError);
}

TEST_CASE("identity jet is neutral for composition") {
    std::mt19937 rng(7311);
    FilteredAutomorphism f = random_jet(rng, 2);
    FilteredAutomorphism id = FilteredAutomorphism::identity(P, jet_ring(), 2);
    CHECK(id.jet_order() == 2);
    CHECK(id.a(0).is_zero());
    CHECK(compose_filtered(f, id) == f);
    CHECK(compose_filtered(id, f) == f);
}

TEST_CASE("closed composition formula matches series substitution") {
    std::mt19937 rng(7312);
    for (int trial = 0; trial < 12; ++trial) {
        FilteredAutomorphism f = random_jet(rng, 2);
        FilteredAutomorphism g = random_jet(rng, 2);
        // Applying f then g sends x to g(f(x)); in series form that means
        // evaluating the expression for f at the images under g.
        SeriesFamily composite = substitute(filtered_to_series(f), filtered_to_series(g));
        CHECK(compose_filtered(f, g) == series_to_filtered(composite, P));
    }
}

TEST_CASE("composition is associative") {
    std::mt19937 rng(7313);
    for (int trial = 0; trial < 30; ++trial) {
        std::int64_t m = trial < 24 ? 1 : 2;
        FilteredAutomorphism f = random_jet(rng, m);
        FilteredAutomorphism g = random_jet(rng, m);
        FilteredAutomorphism h = random_jet(rng, m);
        CHECK(compose_filtered(compose_filtered(f, g), h) ==
              compose_filtered(f, compose_filtered(g, h)));
    }
}

TEST_CASE("series form round trips") {
    std::mt19937 rng(7314);
    for (int trial = 0; trial < 8; ++trial) {
        FilteredAutomorphism f = random_jet(rng, trial % 3);
        CHECK(series_to_filtered(filtered_to_series(f), P) == f);
    }
}

TEST_CASE("series recognition rejects off-shape input") {
    CoefficientDomain f3 = CoefficientDomain::prime_field(3);
    auto fresh = [&] {
        ContextPtr ctx = SeriesContext::make(f3, jet_ring(),
                                             {{"e", Degree{1}}, {"gamma", Degree{2}}}, 18);
        return SeriesFamily(ctx, {TruncatedSeries::variable(ctx, 0),
                                  TruncatedSeries::variable(ctx, 1)});
    };
    GradedPolynomial one = GradedPolynomial::one(f3, jet_ring());
    GradedPolynomial s1 = GradedPolynomial::generator(f3, jet_ring(), 0);

    // gamma^2 is not a power of 3.
    SeriesFamily bad_power = fresh();
    bad_power[0].add_term({0, 2}, one);
    CHECK_THROWS_WITH_AS(series_to_filtered(bad_power, 3),
                         doctest::Contains("not a power of 3"), DomainError);

    // f(gamma) may not pick up e-dependent terms.
    SeriesFamily e_term = fresh();
    e_term[1].add_term({1, 0}, s1);
    CHECK_THROWS_WITH_AS(series_to_filtered(e_term, 3), doctest::Contains("e-dependent"),
                         DomainError);

    // Leading coefficient must stay 1.
    SeriesFamily scaled = fresh();
    scaled[0] = scaled[0] + scaled[0];
    CHECK_THROWS_AS(series_to_filtered(scaled, 3), DomainError);

    // A jet coefficient in the wrong degree.
    SeriesFamily bad_degree = fresh();
    bad_degree[0].add_term({0, 3}, s1);  // needs degree 5, s1 has degree 1
    CHECK_THROWS_WITH_AS(series_to_filtered(bad_degree, 3), doctest::Contains("degree 5"),
                         DomainError);

    // A perfectly good 3-jet read at the wrong prime.
    GradedPolynomial s5 = GradedPolynomial::generator(f3, jet_ring(), 2);
    GradedPolynomial t4 = GradedPolynomial::generator(f3, jet_ring(), 1);
    SeriesFamily fine = filtered_to_series(FilteredAutomorphism(3, jet_ring(), {s1, s5}, {t4}));
    CHECK_THROWS_AS(series_to_filtered(fine, 5), DomainError);
    CHECK_THROWS_AS(series_to_filtered(fine, 4), DomainError);
}
