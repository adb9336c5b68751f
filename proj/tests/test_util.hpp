#pragma once

#include <cstdint>
#include <random>

#include "dirac/polynomial.hpp"

namespace dirac::testutil {

inline GradedPolynomial random_poly(std::mt19937& rng, const CoefficientDomain& dom,
                                    const TablePtr& tab, int max_terms = 4, int max_exp = 3,
                                    int coeff_range = 9) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> exp(0, max_exp);
    std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
    GradedPolynomial q(dom, tab);
    const int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Exponents e(tab->size(), 0);
        for (std::uint32_t& v : e)
            v = static_cast<std::uint32_t>(exp(rng));
        q.add_term(std::move(e), Integer(static_cast<long>(coeff(rng))));
    }
    return q;
}

}  // namespace dirac::testutil
