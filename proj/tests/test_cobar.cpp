#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "dirac/cobar.hpp"

using namespace dirac;

namespace {

MilnorBasisElement tau0() {
    MilnorBasisElement m;
    m.tau = {0};
    return m;
}

HopfComoduleSpec moore(std::int64_t p) {
    GradedVectorSpace space({{"x", Degree{0}}, {"y", Degree{1}}});
    std::vector<std::vector<HopfComoduleSpec::CoactionTerm>> rho(2);
    rho[0] = {{MilnorBasisElement::one(), 1, 0}};
    rho[1] = {{MilnorBasisElement::one(), 1, 1}, {tau0(), 1, 0}};
    return HopfComoduleSpec(p, std::move(space), std::move(rho));
}

}  // namespace

TEST_CASE("word enumeration by level and degree window") {
    CobarComplex c(HopfComoduleSpec::trivial(3), 3, 5);
    REQUIRE(c.levels() == 5);
    CHECK(c.level_words(0).size() == 1);   // []1
    CHECK(c.level_words(1).size() == 4);   // degrees 1, 4, 5, 5
    CHECK(c.level_words(2).size() == 3);   // splits 1+1, 1+4, 4+1
    CHECK(c.level_words(3).size() == 1);   // 1+1+1
    CHECK(c.level_words(4).size() == 1);   // 1+1+1+1
    for (const CobarWord& w : c.level_words(2))
        CHECK(c.word_degree(w) <= 5);
}

TEST_CASE("sphere chart in a small window") {
    E2Page page = adams_e2(3, 4, 9);
    CHECK(page.metadata.at("p") == "3");

    for (std::int64_t s = 0; s <= 4; ++s)
        CHECK(page.dim_at(s, s) == 1);  // tower over the unit
    CHECK(page.dim_at(1, 4) == 1);      // first stem-3 class
    CHECK(page.dim_at(2, 9) == 1);      // stem-7 class
    CHECK(page.find(2, 5) == nullptr);  // no product of the two above
    CHECK(page.find(1, 8) == nullptr);
    CHECK(page.find(2, 8) == nullptr);

    std::int64_t total = 0;
    for (const E2Entry& e : page.entries()) {
        CHECK(e.s <= 4);
        CHECK(e.t <= 9);
        total += e.dim;
    }
    CHECK(total == 7);
}

TEST_CASE("coefficients in the order-p Moore comodule shift the chart") {
    E2Page page = adams_e2_for_comodule(moore(3), 1, 5);
    CHECK(page.dim_at(0, 0) == 1);
    CHECK(page.find(0, 1) == nullptr);  // y supports a coaction, so it is not primitive
    CHECK(page.find(1, 1) == nullptr);  // the tower class dies: [tau_0]x bounds y
    CHECK(page.dim_at(1, 4) == 1);
    CHECK(page.dim_at(1, 5) == 1);
}

TEST_CASE("rebuilding the page gives identical results") {
    E2Page a = adams_e2(3, 3, 9);
    E2Page b = adams_e2(3, 3, 9);
    CHECK(a == b);
    CHECK(a.metadata == b.metadata);
}

namespace {

// Brute-force recomputation of the reduced cobar cohomology for the trivial
// comodule: own word enumeration in a shuffled order, own differential
// assembly from the coproduct, own elimination mod p.
struct BruteCobar {
    std::int64_t p, max_s, max_t;
    std::vector<std::vector<std::vector<MilnorBasisElement>>> words;

    BruteCobar(std::int64_t p_in, std::int64_t s_in, std::int64_t t_in)
        : p(p_in), max_s(s_in), max_t(t_in), words(static_cast<std::size_t>(max_s) + 2) {
        std::vector<MilnorBasisElement> positive;
        for (std::int64_t d = 1; d <= max_t; ++d)
            for (const MilnorBasisElement& m : basis_in_degree(p, d))
                positive.push_back(m);
        std::mt19937 rng(99173);
        for (std::size_t s = 0; s < words.size(); ++s) {
            std::vector<MilnorBasisElement> cur(s);
            grow(positive, cur, 0, max_t, words[s]);
            std::shuffle(words[s].begin(), words[s].end(), rng);
        }
    }

    void grow(const std::vector<MilnorBasisElement>& positive,
              std::vector<MilnorBasisElement>& cur, std::size_t at, std::int64_t room,
              std::vector<std::vector<MilnorBasisElement>>& out) {
        if (at == cur.size()) {
            out.push_back(cur);
            return;
        }
        for (const MilnorBasisElement& m : positive)
            if (m.degree(p) <= room) {
                cur[at] = m;
                grow(positive, cur, at + 1, room - m.degree(p), out);
            }
    }

    std::int64_t word_degree(const std::vector<MilnorBasisElement>& w) const {
        std::int64_t d = 0;
        for (const MilnorBasisElement& m : w)
            d += m.degree(p);
        return d;
    }

    // d(w) as a sparse vector over the level s+1 word list.
    std::map<std::vector<MilnorBasisElement>, std::int64_t>
    boundary(const std::vector<MilnorBasisElement>& w) const {
        std::map<std::vector<MilnorBasisElement>, std::int64_t> img;
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::int64_t sign = (i % 2 == 0) ? -1 : 1;
            TensorElement image = psi(p, w[i]);
            for (const auto& [pair, c] : image.terms()) {
                if (pair.first.is_one() || pair.second.is_one())
                    continue;  // reduced coproduct
                std::vector<MilnorBasisElement> target;
                target.reserve(w.size() + 1);
                target.insert(target.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
                target.push_back(pair.first);
                target.push_back(pair.second);
                target.insert(target.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                              w.end());
                img[target] = mod_reduce(img[target] + sign * c, p);
            }
        }
        return img;
    }

    std::int64_t rank_at(std::size_t s, std::int64_t t) const {
        std::vector<std::size_t> cols, rows;
        for (std::size_t k = 0; k < words[s].size(); ++k)
            if (word_degree(words[s][k]) == t)
                cols.push_back(k);
        std::map<std::vector<MilnorBasisElement>, std::size_t> row_of;
        for (std::size_t k = 0; k < words[s + 1].size(); ++k)
            if (word_degree(words[s + 1][k]) == t)
                row_of.emplace(words[s + 1][k], row_of.size());

        std::vector<std::vector<std::int64_t>> m(cols.size(),
                                                 std::vector<std::int64_t>(row_of.size(), 0));
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (const auto& [word, coeff] : boundary(words[s][cols[c]]))
                if (coeff != 0)
                    m[c][row_of.at(word)] = coeff;

        // Row reduce the transposed layout mod p.
        std::int64_t rank = 0;
        std::size_t lead = 0;
        for (std::size_t r = 0; r < m.size() && lead < row_of.size(); ++r) {
            std::size_t pivot = r;
            while (pivot < m.size() && m[pivot][lead] % p == 0) {
                ++pivot;
                if (pivot == m.size()) {
                    pivot = r;
                    ++lead;
                    if (lead == row_of.size())
                        return rank;
                }
            }
            std::swap(m[r], m[pivot]);
            std::int64_t inv = mod_inverse(m[r][lead], p);
            for (std::size_t k = 0; k < m.size(); ++k) {
                if (k == r)
                    continue;
                std::int64_t f = mod_reduce(m[k][lead] * inv, p);
                if (f == 0)
                    continue;
                for (std::size_t j = lead; j < row_of.size(); ++j)
                    m[k][j] = mod_reduce(m[k][j] - f * m[r][j], p);
            }
            ++rank;
            ++lead;
        }
        return rank;
    }

    std::int64_t dim_at(std::size_t s, std::int64_t t) const {
        std::int64_t n = 0;
        for (const auto& w : words[s])
            if (word_degree(w) == t)
                ++n;
        std::int64_t cut = rank_at(s, t);
        if (s > 0)
            cut += rank_at(s - 1, t);
        return n - cut;
    }
};

}  // namespace

TEST_CASE("page agrees with an independent shuffled-basis recomputation") {
    const std::int64_t max_s = 3, max_t = 9;
    E2Page page = adams_e2(3, max_s, max_t);
    BruteCobar brute(3, max_s, max_t);
    for (std::int64_t s = 0; s <= max_s; ++s)
        for (std::int64_t t = 0; t <= max_t; ++t)
            CHECK(page.dim_at(s, t) == brute.dim_at(static_cast<std::size_t>(s), t));
}

TEST_CASE("coaction data is validated") {
    GradedVectorSpace xy({{"x", Degree{0}}, {"y", Degree{1}}});
    using Term = HopfComoduleSpec::CoactionTerm;

    // Row count mismatch.
    CHECK_THROWS_AS(HopfComoduleSpec(3, xy, {{Term{MilnorBasisElement::one(), 1, 0}}}),
                    DomainError);

    // Target out of range.
    CHECK_THROWS_AS(
        HopfComoduleSpec(3, xy,
                         {{Term{MilnorBasisElement::one(), 1, 5}},
                          {Term{MilnorBasisElement::one(), 1, 1}}}),
        DomainError);

    // Grading broken: tau_0 (x) y would need degree 2 on the source.
    CHECK_THROWS_AS(
        HopfComoduleSpec(3, xy,
                         {{Term{MilnorBasisElement::one(), 1, 0}, Term{tau0(), 1, 1}},
                          {Term{MilnorBasisElement::one(), 1, 1}}}),
        DomainError);

    // Counit broken: y misses its identity term.
    CHECK_THROWS_WITH_AS(
        HopfComoduleSpec(3, xy,
                         {{Term{MilnorBasisElement::one(), 1, 0}},
                          {Term{tau0(), 1, 0}}}),
        doctest::Contains("counit"), DomainError);

    // Coassociativity broken: tau_1 (x) x needs a companion catching
    // xi_1 (x) tau_0 (x) x, and there is none.
    MilnorBasisElement tau1;
    tau1.tau = {1};
    GradedVectorSpace xz({{"x", Degree{0}}, {"z", Degree{5}}});
    CHECK_THROWS_WITH_AS(
        HopfComoduleSpec(3, xz,
                         {{Term{MilnorBasisElement::one(), 1, 0}},
                          {Term{MilnorBasisElement::one(), 1, 1}, Term{tau1, 1, 0}}}),
        doctest::Contains("coassociative"), DomainError);

    CHECK_NOTHROW(moore(3));
    CHECK_NOTHROW(moore(5));
    CHECK_THROWS_AS(moore(2), DomainError);
}

TEST_CASE("window and cap limits") {
    CHECK_THROWS_AS(adams_e2(3, -1, 5), DomainError);
    CHECK_THROWS_AS(adams_e2(3, 5, 20, 10), ResourceError);
    CHECK_THROWS_AS(adams_e2(2, 1, 1), DomainError);
    CHECK_THROWS_AS(adams_e2(6, 1, 1), DomainError);
}
