#include "doctest.h"

#include <set>
#include <vector>

#include "dirac/steenrod.hpp"

using namespace dirac;

namespace {

MilnorBasisElement tau(std::initializer_list<std::uint32_t> is) {
    MilnorBasisElement m;
    m.tau.assign(is);
    return m;
}

MilnorBasisElement xi(std::uint32_t i, std::uint32_t e) {
    MilnorBasisElement m;
    m.xi.push_back({i, e});
    return m;
}

MilnorBasisElement tau_xi(std::initializer_list<std::uint32_t> is, std::uint32_t i,
                          std::uint32_t e) {
    MilnorBasisElement m;
    m.tau.assign(is);
    m.xi.push_back({i, e});
    return m;
}

}  // namespace

TEST_CASE("basis element degrees and validation") {
    CHECK(MilnorBasisElement::one().degree(3) == 0);
    CHECK(tau({0}).degree(3) == 1);
    CHECK(tau({1}).degree(3) == 5);
    CHECK(xi(1, 1).degree(3) == 4);
    CHECK(xi(1, 2).degree(3) == 8);
    CHECK(tau_xi({0, 1}, 1, 1).degree(3) == 10);
    CHECK(tau({1}).degree(5) == 9);

    CHECK_THROWS_AS(SteenrodElement::basis(3, tau({1, 1})), DomainError);
    CHECK_THROWS_AS(SteenrodElement::basis(3, xi(0, 1)), DomainError);
    CHECK_THROWS_AS(SteenrodElement::basis(3, xi(1, 0)), DomainError);
    MilnorBasisElement unordered;
    unordered.xi = {{2, 1}, {1, 1}};
    CHECK_THROWS_AS(SteenrodElement::basis(3, unordered), DomainError);
}

TEST_CASE("monomial basis per degree at p = 3") {
    CHECK(basis_in_degree(3, 0).size() == 1);
    CHECK(basis_in_degree(3, 2).empty());
    CHECK(basis_in_degree(3, 3).empty());

    std::vector<MilnorBasisElement> d5 = basis_in_degree(3, 5);
    std::set<MilnorBasisElement> d5_set(d5.begin(), d5.end());
    CHECK(d5_set == std::set<MilnorBasisElement>{tau({1}), tau_xi({0}, 1, 1)});

    for (const MilnorBasisElement& m : basis_in_degree(3, 13))
        CHECK(m.degree(3) == 13);
}

TEST_CASE("coproducts of the generators") {
    TensorElement t0(3);
    t0.add_term(tau({0}), MilnorBasisElement::one(), 1);
    t0.add_term(MilnorBasisElement::one(), tau({0}), 1);
    CHECK(psi_tau(3, 0) == t0);

    TensorElement t1(3);
    t1.add_term(tau({1}), MilnorBasisElement::one(), 1);
    t1.add_term(xi(1, 1), tau({0}), 1);
    t1.add_term(MilnorBasisElement::one(), tau({1}), 1);
    CHECK(psi_tau(3, 1) == t1);

    TensorElement x1(3);
    x1.add_term(xi(1, 1), MilnorBasisElement::one(), 1);
    x1.add_term(MilnorBasisElement::one(), xi(1, 1), 1);
    CHECK(psi_xi(3, 1) == x1);

    TensorElement t2(3);
    t2.add_term(tau({2}), MilnorBasisElement::one(), 1);
    t2.add_term(xi(2, 1), tau({0}), 1);
    t2.add_term(xi(1, 3), tau({1}), 1);
    t2.add_term(MilnorBasisElement::one(), tau({2}), 1);
    CHECK(psi_tau(3, 2) == t2);
}

TEST_CASE("coproduct respects products, including the Koszul square") {
    // tau_0^2 = 0, so its coproduct square must cancel via the sign rule.
    TensorElement sq = psi_tau(3, 0) * psi_tau(3, 0);
    CHECK(sq.is_zero());

    SteenrodElement a = SteenrodElement::basis(3, tau({0}));
    SteenrodElement b = SteenrodElement::basis(3, tau({1}));
    SteenrodElement c = SteenrodElement::basis(3, xi(1, 1));
    CHECK(psi(a * b) == psi(a) * psi(b));
    CHECK(psi(b * a) == psi(b) * psi(a));
    CHECK(a * b == -1 * (b * a));  // both factors odd
    CHECK(psi(c * c) == psi(c) * psi(c));
    CHECK((c * c) == SteenrodElement::basis(3, xi(1, 2)));
    CHECK((a * a).is_zero());
}

TEST_CASE("hopf axioms hold in low degrees and ignore the thread count") {
    HopfReport one = verify_hopf(3, 20, 1);
    CHECK(one.ok());
    CHECK(one.elements_checked > 0);
    CHECK(one.pairs_checked > 0);

    HopfReport three = verify_hopf(3, 20, 3);
    CHECK(three.ok());
    CHECK(three.elements_checked == one.elements_checked);
    CHECK(three.pairs_checked == one.pairs_checked);

    CHECK(verify_hopf(5, 20).ok());
    CHECK_THROWS_AS(verify_hopf(2, 10), DomainError);
}

TEST_CASE("antipode values on the generators") {
    CHECK(antipode(SteenrodElement::unit(3)) == SteenrodElement::unit(3));
    CHECK(antipode(SteenrodElement::basis(3, tau({0}))) ==
          SteenrodElement::basis(3, tau({0}), -1));
    CHECK(antipode(SteenrodElement::basis(3, xi(1, 1))) ==
          SteenrodElement::basis(3, xi(1, 1), -1));
    CHECK(antipode(SteenrodElement::basis(3, tau({1}))) ==
          SteenrodElement::basis(3, tau({1}), -1) + SteenrodElement::basis(3, tau_xi({0}, 1, 1)));
}

TEST_CASE("antipode is a two-sided convolution inverse of the identity") {
    // The recursion pins down sum chi(m_1) m_2; the mirrored sum m_1 chi(m_2)
    // collapsing the same way is an independent theorem about the algebra.
    for (std::int64_t d = 0; d <= 18; ++d) {
        for (const MilnorBasisElement& m : basis_in_degree(3, d)) {
            SteenrodElement folded(3);
            TensorElement split = psi(3, m);
            for (const auto& [k, c] : split.terms())
                folded += c * (SteenrodElement::basis(3, k.first) * antipode(SteenrodElement::basis(3, k.second)));
            if (m.is_one())
                CHECK(folded == SteenrodElement::unit(3));
            else
                CHECK(folded.is_zero());
        }
    }
}

TEST_CASE("antipode is an involution on low degrees") {
    for (std::int64_t d = 0; d <= 14; ++d)
        for (const MilnorBasisElement& m : basis_in_degree(3, d)) {
            SteenrodElement x = SteenrodElement::basis(3, m);
            CHECK(antipode(antipode(x)) == x);
        }
}

namespace {

// Independent dimension count: the algebra is free graded-commutative on odd
// generators of degree 2p^i - 1 and even generators of degree 2p^i - 2, so its
// Poincare series is prod (1 + x^{2p^i-1}) / prod (1 - x^{2p^i-2}).
std::vector<std::int64_t> expected_dims(std::int64_t p, std::int64_t max_degree) {
    std::vector<std::int64_t> s(static_cast<std::size_t>(max_degree) + 1, 0);
    s[0] = 1;
    for (std::int64_t i = 1; 2 * checked_pow(p, i) - 2 <= max_degree; ++i) {
        std::int64_t d = 2 * checked_pow(p, i) - 2;
        for (std::int64_t n = d; n <= max_degree; ++n)
            s[n] += s[n - d];
    }
    for (std::int64_t i = 0; 2 * checked_pow(p, i) - 1 <= max_degree; ++i) {
        std::int64_t d = 2 * checked_pow(p, i) - 1;
        for (std::int64_t n = max_degree; n >= d; --n)
            s[n] += s[n - d];
    }
    return s;
}

}  // namespace

TEST_CASE("dimension table matches the generating function") {
    for (std::int64_t p : {3, 5}) {
        std::int64_t cap = p == 3 ? 40 : 30;
        std::vector<PoincareRow> rows = poincare_dims(p, cap);
        std::vector<std::int64_t> want = expected_dims(p, cap);
        REQUIRE(rows.size() == static_cast<std::size_t>(cap) + 1);
        for (const PoincareRow& r : rows)
            CHECK(r.dimension == want[static_cast<std::size_t>(r.degree)]);
    }
}

TEST_CASE("generic jet composition recovers the coproduct") {
    for (DualityOrientation o : {DualityOrientation::RightOfPair, DualityOrientation::LeftOfPair}) {
        DualityReport rep = duality_check(3, 1, o);
        CHECK(rep.ok());
        CHECK(rep.lines.size() == 3);  // tau_0, tau_1, xi_1
        for (const DualityLine& l : rep.lines)
            CHECK(l.computed == l.expected);
    }
    CHECK(duality_check(3, 0).ok());
    CHECK(duality_check(5, 1).ok());
}

TEST_CASE("character packaging checks its shape") {
    TablePtr ring = make_table({{"a", Degree{1}}});
    CoefficientDomain f3 = CoefficientDomain::prime_field(3);
    GradedPolynomial a0 = GradedPolynomial::generator(f3, ring, 0);
    CHECK_NOTHROW(automorphism_from_character(3, ring, {a0}, {}));
    CHECK_THROWS_AS(automorphism_from_character(3, ring, {a0, a0}, {}), DomainError);
}
