#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirac/fgl.hpp"
#include "dirac/linalg.hpp"
#include "dirac/module_presentation.hpp"
#include "dirac/parallel.hpp"
#include "dirac/series.hpp"

namespace dirac {

// Universal one-dimensional law on a degree-2 coordinate: F = y + z + sum over
// 1 <= i <= j of a_{ij} (y^i z^j + y^j z^i), with a_{ij} placed in degree
// 2(i + j - 1). Relations are the coefficients of f(f(y, z), w) - f(y, f(z, w)).
//
// During expansion the generators carry the negated degrees so the law itself
// is homogeneous of degree 2; the reported presentation uses positive degrees.
class LazardPresentation {
  public:
    explicit LazardPresentation(std::int64_t max_degree) : max_degree_(max_degree) {
        if (max_degree < 2 || max_degree % 2 != 0)
            throw DomainError("LazardPresentation: max_degree must be a positive even integer");
        build();
    }

    std::int64_t max_degree() const { return max_degree_; }
    const TablePtr& generators() const { return positive_table_; }
    const std::vector<GradedPolynomial>& relations() const { return relations_; }

  private:
    void build() {
        const std::int64_t n_cap = max_degree_ / 2 + 1;  // keep a_{ij} with i + j <= n_cap
        std::vector<Generator> pos, neg;
        std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
        for (std::int64_t n = 2; n <= n_cap; ++n)
            for (std::int64_t i = 1; 2 * i <= n; ++i) {
                std::int64_t j = n - i;
                std::string name = "a" + std::to_string(i) + "_" + std::to_string(j);
                pos.push_back({name, Degree{2 * (n - 1)}});
                neg.push_back({name, Degree{-2 * (n - 1)}});
                pairs.push_back({i, j});
            }
        positive_table_ = make_table(std::move(pos));
        TablePtr negative_table = make_table(std::move(neg));

        CoefficientDomain dom = CoefficientDomain::integers();
        const std::int64_t order = 2 * n_cap;
        ContextPtr ctx2 = SeriesContext::make(dom, negative_table,
                                              {{"y", Degree{2}}, {"z", Degree{2}}}, order);
        TruncatedSeries law = TruncatedSeries::variable(ctx2, 0) + TruncatedSeries::variable(ctx2, 1);
        for (std::size_t g = 0; g < pairs.size(); ++g) {
            auto [i, j] = pairs[g];
            GradedPolynomial coeff = GradedPolynomial::generator(dom, negative_table, g);
            law.add_term({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}, coeff);
            if (i != j)
                law.add_term({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(i)}, coeff);
        }
        FormalGroupLaw f(SeriesFamily(ctx2, {law}), {Degree{2}});
        DIRAC_REQUIRE(law.body().is_homogeneous_of(Degree{2}),
                      "LazardPresentation: universal law is not homogeneous");

        // Coefficients of the associativity defect, re-keyed to positive degrees.
        ContextPtr ctx3 = SeriesContext::make(dom, negative_table,
                                              {{"y", Degree{2}}, {"z", Degree{2}}, {"w", Degree{2}}},
                                              order);
        auto block = [&](std::size_t a, std::size_t b) {
            SeriesFamily args(ctx3);
            args.push_back(TruncatedSeries::variable(ctx3, a));
            args.push_back(TruncatedSeries::variable(ctx3, b));
            return substitute(f.law(), args)[0];
        };
        TruncatedSeries f_yz = block(0, 1);
        TruncatedSeries f_zw = block(1, 2);
        SeriesFamily lhs_args(ctx3), rhs_args(ctx3);
        lhs_args.push_back(f_yz);
        lhs_args.push_back(TruncatedSeries::variable(ctx3, 2));
        rhs_args.push_back(TruncatedSeries::variable(ctx3, 0));
        rhs_args.push_back(f_zw);
        TruncatedSeries defect =
            substitute(f.law(), lhs_args)[0] - substitute(f.law(), rhs_args)[0];

        for (const auto& [ve, coeff] : defect.coefficients()) {
            GradedPolynomial rel(dom, positive_table_);
            for (const auto& [e, c] : coeff.terms())
                rel.add_term(e, c);
            DIRAC_REQUIRE(rel.homogeneous_degree().has_value(),
                          "LazardPresentation: inhomogeneous relation");
            relations_.push_back(std::move(rel));
        }
    }

    std::int64_t max_degree_;
    TablePtr positive_table_;
    std::vector<GradedPolynomial> relations_;
};

struct LazardRankRow {
    std::int64_t degree = 0;
    std::int64_t rank = 0;
    std::vector<Integer> torsion;
};

// Free rank and torsion of the universal coefficient ring in each even degree
// 2..max_degree, by Smith reduction of the relation span inside the monomial
// basis of that degree.
inline std::vector<LazardRankRow> lazard_graded_ranks(std::int64_t max_degree,
                                                      unsigned threads = 1,
                                                      std::int64_t degree_bound = 16) {
    if (max_degree > degree_bound)
        throw ResourceError("lazard_graded_ranks: requested degree " + std::to_string(max_degree) +
                            " exceeds the configured bound " + std::to_string(degree_bound));
    LazardPresentation pres(max_degree);
    const GeneratorTable& table = *pres.generators();
    CoefficientDomain dom = CoefficientDomain::integers();

    std::vector<LazardRankRow> rows(static_cast<std::size_t>(max_degree / 2));
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const std::int64_t deg = 2 * (static_cast<std::int64_t>(idx) + 1);
        std::vector<Exponents> basis = monomials_of_degree(table, dom, Degree{deg});
        std::map<Exponents, EIndex> index;
        for (std::size_t k = 0; k < basis.size(); ++k)
            index.emplace(basis[k], static_cast<EIndex>(k));

        // Columns: every relation times every monomial of complementary degree.
        std::vector<GradedPolynomial> columns;
        for (const GradedPolynomial& rel : pres.relations()) {
            Degree rd = *rel.homogeneous_degree();
            if (rd.value > deg)
                continue;
            for (const Exponents& mono : monomials_of_degree(table, dom, Degree{deg - rd.value}))
                columns.push_back(rel * GradedPolynomial::monomial(dom, pres.generators(), mono));
        }

        IntMat m = IntMat::Zero(static_cast<EIndex>(basis.size()),
                                static_cast<EIndex>(columns.size()));
        for (std::size_t c = 0; c < columns.size(); ++c)
            for (const auto& [e, v] : columns[c].terms())
                m(index.at(e), static_cast<EIndex>(c)) = v;

        CokernelInfo info = cokernel(m);
        rows[idx] = LazardRankRow{deg, info.free_rank, std::move(info.torsion)};
    });
    return rows;
}

}  // namespace dirac
