#pragma once

#include <string>
#include <vector>

#include "dirac/degree.hpp"
#include "dirac/domain.hpp"
#include "dirac/generators.hpp"
#include "dirac/linalg.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

// One homogeneous relation: sum_g coefficients[g] * generator_g = 0, where every
// generator hit by a nonzero coefficient sits in degree `degree`.
struct ModuleRelation {
    Degree degree;
    std::vector<Integer> coefficients;
};

struct GradedPiece {
    std::int64_t rank = 0;
    std::vector<Integer> torsion;  // invariant factors > 1 (empty over a field)

    friend bool operator==(const GradedPiece&, const GradedPiece&) = default;
};

// Finitely presented graded module over Z or F_p with scalar relations.
class GradedModulePresentation {
  public:
    GradedModulePresentation(CoefficientDomain domain, std::vector<Degree> generator_degrees,
                             std::vector<ModuleRelation> relations = {})
        : domain_(domain), generators_(std::move(generator_degrees)), relations_(std::move(relations)) {
        for (const ModuleRelation& r : relations_) {
            if (r.coefficients.size() != generators_.size())
                throw DomainError("GradedModulePresentation: relation has wrong coefficient count");
            for (std::size_t g = 0; g < generators_.size(); ++g)
                if (domain_.reduce(r.coefficients[g]) != 0 && generators_[g] != r.degree)
                    throw DomainError("GradedModulePresentation: relation of degree " +
                                      to_string(r.degree) + " touches a generator of degree " +
                                      to_string(generators_[g]));
        }
    }

    static GradedModulePresentation free_module(CoefficientDomain domain,
                                                std::vector<Degree> generator_degrees) {
        return GradedModulePresentation(domain, std::move(generator_degrees));
    }

    const CoefficientDomain& domain() const { return domain_; }
    const std::vector<Degree>& generator_degrees() const { return generators_; }
    const std::vector<ModuleRelation>& relations() const { return relations_; }

    // Tensoring with the invertible rank-one module of the given half-spin
    // shifts every degree by that amount.
    GradedModulePresentation twist(std::int64_t halfspin_numerator) const {
        GradedModulePresentation out = *this;
        for (Degree& d : out.generators_)
            d += Degree{halfspin_numerator};
        for (ModuleRelation& r : out.relations_)
            r.degree += Degree{halfspin_numerator};
        return out;
    }

    // Isomorphism class of the degree-d part: free rank plus torsion invariant
    // factors (over Z; over a field the torsion list is empty).
    GradedPiece graded_piece(Degree d) const {
        std::vector<std::size_t> gens;
        for (std::size_t g = 0; g < generators_.size(); ++g)
            if (generators_[g] == d)
                gens.push_back(g);
        std::vector<const ModuleRelation*> rels;
        for (const ModuleRelation& r : relations_)
            if (r.degree == d)
                rels.push_back(&r);

        GradedPiece piece;
        if (gens.empty())
            return piece;
        IntMat m(static_cast<EIndex>(gens.size()), static_cast<EIndex>(rels.size()));
        for (std::size_t j = 0; j < rels.size(); ++j)
            for (std::size_t i = 0; i < gens.size(); ++i)
                m(static_cast<EIndex>(i), static_cast<EIndex>(j)) =
                    rels[j]->coefficients[gens[i]];
        if (domain_.is_field()) {
            FpMat f = fp_matrix_from(m, domain_.characteristic());
            piece.rank = static_cast<std::int64_t>(gens.size()) -
                         rank_mod(f, domain_.characteristic());
        } else {
            CokernelInfo info = cokernel(m);
            piece.rank = info.free_rank;
            piece.torsion = std::move(info.torsion);
        }
        return piece;
    }

  private:
    CoefficientDomain domain_;
    std::vector<Degree> generators_;
    std::vector<ModuleRelation> relations_;
};

// d-th symmetric power of a free graded module in the Koszul-signed sense.
// Generators are the degree-d monomials in the module's generators; over Z each
// monomial containing an odd square contributes the relation 2m = 0, and over
// an odd prime field such monomials are dropped outright.
inline GradedModulePresentation sym_power(const GradedModulePresentation& m, std::int64_t d) {
    if (!m.relations().empty())
        throw DomainError("sym_power: module must be free");
    if (d < 0)
        throw DomainError("sym_power: negative power");

    const std::vector<Degree>& gens = m.generator_degrees();
    const CoefficientDomain& dom = m.domain();
    bool drop_odd_squares = dom.is_field() && dom.characteristic() != 2;
    bool two_torsion = dom.is_integers();

    // Exponent vectors with total exponent d, lexicographically.
    std::vector<Exponents> monos;
    Exponents cur(gens.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, std::int64_t remaining) -> void {
        if (i == gens.size()) {
            if (remaining == 0)
                monos.push_back(cur);
            return;
        }
        std::int64_t cap = remaining;
        if (drop_odd_squares && gens[i].odd())
            cap = std::min<std::int64_t>(cap, 1);
        for (std::int64_t e = 0; e <= cap; ++e) {
            cur[i] = static_cast<std::uint32_t>(e);
            self(self, i + 1, remaining - e);
        }
        cur[i] = 0;
    };
    if (gens.empty()) {
        if (d == 0)
            monos.push_back(cur);
    } else {
        rec(rec, 0, d);
    }

    std::vector<Degree> out_degrees;
    out_degrees.reserve(monos.size());
    std::vector<ModuleRelation> out_relations;
    for (std::size_t k = 0; k < monos.size(); ++k) {
        Degree deg{0};
        bool odd_square = false;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            deg += static_cast<std::int64_t>(monos[k][i]) * gens[i];
            if (monos[k][i] >= 2 && gens[i].odd())
                odd_square = true;
        }
        out_degrees.push_back(deg);
        if (two_torsion && odd_square) {
            ModuleRelation r;
            r.degree = deg;
            r.coefficients.assign(monos.size(), 0);
            r.coefficients[k] = 2;
            out_relations.push_back(std::move(r));
        }
    }
    return GradedModulePresentation(dom, std::move(out_degrees), std::move(out_relations));
}

}  // namespace dirac
