#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dirac/cochain.hpp"
#include "dirac/cosimplicial.hpp"
#include "dirac/finite_algebra.hpp"

namespace dirac {

// Descent data for the unit map F_p -> E with coefficients in a graded space
// V: level n of the associated cosimplicial module is V (x) E^{(x)(n+1)}.
// Cofaces insert the unit of E, codegeneracies multiply adjacent factors.
struct RingMapSpec {
    FiniteGradedAlgebra target;
    GradedVectorSpace coefficients;

    RingMapSpec(FiniteGradedAlgebra e, GradedVectorSpace v)
        : target(std::move(e)), coefficients(std::move(v)) {
        if (coefficients.dim() == 0)
            throw DomainError("RingMapSpec: coefficient space must be nonzero");
    }

    explicit RingMapSpec(FiniteGradedAlgebra e)
        : RingMapSpec(std::move(e), GradedVectorSpace({{"1", Degree{0}}})) {}

    std::int64_t p() const { return target.p(); }
};

// The cosimplicial module of the unit map, levels 0..levels. Each level must
// stay within dim_cap basis words.
inline CosimplicialGradedModule amitsur_complex(const RingMapSpec& spec, std::size_t levels,
                                                std::size_t dim_cap = 200000) {
    const FiniteGradedAlgebra& e = spec.target;
    const GradedVectorSpace& v = spec.coefficients;
    const std::size_t ne = e.space().dim();
    const std::int64_t p = spec.p();

    // Level n basis: index = (v, b_0..b_n) mixed radix, v most significant.
    auto level_dim = [&](std::size_t n) {
        std::size_t d = v.dim();
        for (std::size_t i = 0; i <= n; ++i) {
            if (d > dim_cap / ne + 1)
                throw ResourceError("amitsur_complex: level dimension exceeds the cap of " +
                                    std::to_string(dim_cap));
            d *= ne;
        }
        return d;
    };
    auto decode = [&](std::size_t n, std::size_t index) {
        std::vector<std::size_t> w(n + 2);
        for (std::size_t i = n + 2; i-- > 1;) {
            w[i] = index % ne;
            index /= ne;
        }
        w[0] = index;
        return w;
    };
    auto encode = [&](const std::vector<std::size_t>& w) {
        std::size_t index = w[0];
        for (std::size_t i = 1; i < w.size(); ++i)
            index = index * ne + w[i];
        return index;
    };

    std::vector<GradedVectorSpace> spaces;
    for (std::size_t n = 0; n <= levels; ++n) {
        const std::size_t dim = level_dim(n);
        if (dim > dim_cap)
            throw ResourceError("amitsur_complex: level " + std::to_string(n) + " has " +
                                std::to_string(dim) + " words, cap is " + std::to_string(dim_cap));
        std::vector<BasisElement> basis;
        basis.reserve(dim);
        for (std::size_t index = 0; index < dim; ++index) {
            auto w = decode(n, index);
            std::string name = v[w[0]].name;
            std::int64_t degree = v[w[0]].degree.value;
            for (std::size_t i = 1; i < w.size(); ++i) {
                name += "|" + e.space()[w[i]].name;
                degree += e.space()[w[i]].degree.value;
            }
            basis.push_back({std::move(name), Degree{degree}});
        }
        spaces.push_back(GradedVectorSpace(std::move(basis)));
    }

    // Coface d^i on level n inserts the unit of E at factor slot i.
    std::vector<std::vector<IntMat>> cofaces;
    for (std::size_t n = 0; n + 1 <= levels; ++n) {
        std::vector<IntMat> maps;
        const std::size_t src = spaces[n].dim();
        const std::size_t dst = spaces[n + 1].dim();
        for (std::size_t i = 0; i <= n + 1; ++i) {
            IntMat d = IntMat::Zero(static_cast<EIndex>(dst), static_cast<EIndex>(src));
            for (std::size_t col = 0; col < src; ++col) {
                auto w = decode(n, col);
                for (std::size_t k = 0; k < ne; ++k) {
                    std::int64_t c = e.unit()(static_cast<EIndex>(k));
                    if (c == 0)
                        continue;
                    std::vector<std::size_t> target = w;
                    target.insert(target.begin() + static_cast<std::ptrdiff_t>(i + 1), k);
                    d(static_cast<EIndex>(encode(target)), static_cast<EIndex>(col)) += c;
                }
            }
            maps.push_back(std::move(d));
        }
        cofaces.push_back(std::move(maps));
    }

    // Codegeneracy s^i on level n+1 -> n multiplies factor slots i and i+1.
    std::vector<std::vector<IntMat>> codegens;
    for (std::size_t n = 0; n + 1 <= levels; ++n) {
        std::vector<IntMat> maps;
        const std::size_t src = spaces[n + 1].dim();
        const std::size_t dst = spaces[n].dim();
        for (std::size_t i = 0; i <= n; ++i) {
            IntMat s = IntMat::Zero(static_cast<EIndex>(dst), static_cast<EIndex>(src));
            for (std::size_t col = 0; col < src; ++col) {
                auto w = decode(n + 1, col);
                FpVec prod = e.basis_product(static_cast<EIndex>(w[i + 1]),
                                             static_cast<EIndex>(w[i + 2]));
                for (EIndex k = 0; k < prod.size(); ++k) {
                    if (prod(k) == 0)
                        continue;
                    std::vector<std::size_t> target;
                    target.reserve(w.size() - 1);
                    for (std::size_t j = 0; j < w.size(); ++j) {
                        if (j == i + 2)
                            continue;
                        target.push_back(j == i + 1 ? static_cast<std::size_t>(k) : w[j]);
                    }
                    s(static_cast<EIndex>(encode(target)), static_cast<EIndex>(col)) += prod(k);
                }
            }
            maps.push_back(std::move(s));
        }
        codegens.push_back(std::move(maps));
    }

    return CosimplicialGradedModule(CoefficientDomain::prime_field(p), std::move(spaces),
                                    std::move(cofaces), std::move(codegens));
}

// E2-term of the descent spectral sequence for F_p -> E: cohomology of the
// normalized cochain complex of the Amitsur levels.
inline E2Page amitsur_e2(const RingMapSpec& spec, std::size_t levels,
                         std::size_t dim_cap = 200000) {
    CosimplicialGradedModule cosim = amitsur_complex(spec, levels, dim_cap);
    CochainComplex normalized = normalized_cochains(cosim);
    E2Page page = normalized.cohomology();
    page.metadata["p"] = std::to_string(spec.p());
    page.metadata["levels"] = std::to_string(levels);
    page.metadata["target_dim"] = std::to_string(spec.target.space().dim());
    return page;
}

}  // namespace dirac
