#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirac/polynomial.hpp"
#include "dirac/series.hpp"

namespace dirac {

inline std::int64_t checked_pow(std::int64_t base, std::int64_t exp) {
    std::int64_t r = 1;
    for (std::int64_t k = 0; k < exp; ++k) {
        if (r > (std::int64_t(1) << 56) / base)
            throw ResourceError("checked_pow: exponent too large");
        r *= base;
    }
    return r;
}

// Automorphism of the formal neighborhood carrying one odd coordinate e of
// degree 1 and one even coordinate gamma of degree 2, compatible with the
// filtration and the group structure at an odd prime p:
//
//   f(e)     = e + sum_{i >= 0} a_i gamma^{p^i},   deg a_i = 2 p^i - 1
//   f(gamma) = gamma + sum_{i >= 1} b_i gamma^{p^i},   deg b_i = 2 p^i - 2
//
// with coefficients in a free Dirac algebra over F_p. Data is stored as a jet:
// coefficients up to gamma^{p^m} for the jet order m.
class FilteredAutomorphism {
  public:
    FilteredAutomorphism(std::int64_t p, TablePtr ring, std::vector<GradedPolynomial> a,
                         std::vector<GradedPolynomial> b)
        : p_(p), ring_(std::move(ring)), a_(std::move(a)), b_(std::move(b)) {
        if (p_ == 2 || !CoefficientDomain::is_prime(p_))
            throw DomainError("FilteredAutomorphism: p must be an odd prime, got " +
                              std::to_string(p_));
        if (a_.empty() || b_.size() + 1 != a_.size())
            throw DomainError("FilteredAutomorphism: need coefficients a_0..a_m and b_1..b_m");
        CoefficientDomain dom = CoefficientDomain::prime_field(p_);
        for (std::size_t i = 0; i < a_.size(); ++i)
            check_coefficient(a_[i], dom, 2 * checked_pow(p_, static_cast<std::int64_t>(i)) - 1,
                              "a_" + std::to_string(i));
        for (std::size_t i = 0; i < b_.size(); ++i)
            check_coefficient(b_[i], dom, 2 * checked_pow(p_, static_cast<std::int64_t>(i + 1)) - 2,
                              "b_" + std::to_string(i + 1));
    }

    static FilteredAutomorphism identity(std::int64_t p, TablePtr ring, std::int64_t jet_order) {
        if (jet_order < 0)
            throw DomainError("FilteredAutomorphism: negative jet order");
        CoefficientDomain dom = CoefficientDomain::prime_field(p);
        std::vector<GradedPolynomial> a(static_cast<std::size_t>(jet_order) + 1,
                                        GradedPolynomial::zero(dom, ring));
        std::vector<GradedPolynomial> b(static_cast<std::size_t>(jet_order),
                                        GradedPolynomial::zero(dom, ring));
        return FilteredAutomorphism(p, std::move(ring), std::move(a), std::move(b));
    }

    std::int64_t p() const { return p_; }
    const TablePtr& ring() const { return ring_; }
    std::int64_t jet_order() const { return static_cast<std::int64_t>(a_.size()) - 1; }

    // Coefficient of gamma^{p^i} in f(e), for 0 <= i <= jet_order.
    const GradedPolynomial& a(std::size_t i) const { return a_.at(i); }
    // Coefficient of gamma^{p^i} in f(gamma), for 1 <= i <= jet_order.
    const GradedPolynomial& b(std::size_t i) const { return b_.at(i - 1); }

    friend bool operator==(const FilteredAutomorphism& x, const FilteredAutomorphism& y) {
        return x.p_ == y.p_ && same_table(x.ring_, y.ring_) && x.a_ == y.a_ && x.b_ == y.b_;
    }

  private:
    static void check_coefficient(const GradedPolynomial& c, const CoefficientDomain& dom,
                                  std::int64_t degree, const std::string& label) {
        if (c.domain() != dom)
            throw DomainError("FilteredAutomorphism: coefficient " + label +
                              " must live over " + dom.describe());
        if (!c.is_zero() && !c.is_homogeneous_of(Degree{degree}))
            throw DomainError("FilteredAutomorphism: coefficient " + label +
                              " must be homogeneous of degree " + std::to_string(degree));
    }

    std::int64_t p_;
    TablePtr ring_;
    std::vector<GradedPolynomial> a_;
    std::vector<GradedPolynomial> b_;
};

// Composite automorphism applying f first and then g, i.e. x -> g(f(x)).
// Writing f = (a, b) and g = (c, d), a ring map fixes coefficients, so
// g(f(e)) = g(e) + sum_i a_i g(gamma)^{p^i}; raising g(gamma) to the p^i-th
// power distributes over the sum in characteristic p, which gives the closed
// convolutions below with b_0 = d_0 = 1.
inline FilteredAutomorphism compose_filtered(const FilteredAutomorphism& f,
                                             const FilteredAutomorphism& g) {
    if (f.p() != g.p())
        throw DomainError("compose_filtered: primes differ");
    if (!same_table(f.ring(), g.ring()))
        throw DomainError("compose_filtered: coefficient rings differ");
    const std::int64_t p = f.p();
    const std::int64_t m = std::min(f.jet_order(), g.jet_order());
    CoefficientDomain dom = CoefficientDomain::prime_field(p);
    GradedPolynomial one = GradedPolynomial::one(dom, f.ring());

    auto d_pow = [&](std::int64_t j, std::int64_t i) {
        // d_j^{p^i} with d_0 = 1
        if (j == 0)
            return one;
        return g.b(static_cast<std::size_t>(j)).pow(
            static_cast<std::uint64_t>(checked_pow(p, i)));
    };

    std::vector<GradedPolynomial> a, b;
    for (std::int64_t n = 0; n <= m; ++n) {
        GradedPolynomial an = g.a(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i <= n; ++i)
            an += f.a(static_cast<std::size_t>(i)) * d_pow(n - i, i);
        a.push_back(std::move(an));
    }
    for (std::int64_t n = 1; n <= m; ++n) {
        GradedPolynomial bn = g.b(static_cast<std::size_t>(n)) + f.b(static_cast<std::size_t>(n));
        for (std::int64_t i = 1; i < n; ++i)
            bn += f.b(static_cast<std::size_t>(i)) * d_pow(n - i, i);
        b.push_back(std::move(bn));
    }
    return FilteredAutomorphism(p, f.ring(), std::move(a), std::move(b));
}

// The automorphism as a series family in (e, gamma), suitable as a
// substitution oracle for the closed composition formula.
inline SeriesFamily filtered_to_series(const FilteredAutomorphism& f) {
    const std::int64_t p = f.p();
    const std::int64_t m = f.jet_order();
    std::int64_t order = 2 * checked_pow(p, m);
    ContextPtr ctx = SeriesContext::make(CoefficientDomain::prime_field(p), f.ring(),
                                         {{"e", Degree{1}}, {"gamma", Degree{2}}}, order);
    TruncatedSeries fe = TruncatedSeries::variable(ctx, 0);
    TruncatedSeries fg = TruncatedSeries::variable(ctx, 1);
    for (std::int64_t i = 0; i <= m; ++i) {
        std::uint32_t q = static_cast<std::uint32_t>(checked_pow(p, i));
        fe.add_term({0, q}, f.a(static_cast<std::size_t>(i)));
        if (i >= 1)
            fg.add_term({0, q}, f.b(static_cast<std::size_t>(i)));
    }
    return SeriesFamily(ctx, {std::move(fe), std::move(fg)});
}

// Recognizes a two-component series family in (e, gamma) of the mandated
// shape and extracts its filtered coefficients. Offending monomials are
// reported by name.
inline FilteredAutomorphism series_to_filtered(const SeriesFamily& s, std::int64_t p) {
    if (p == 2 || !CoefficientDomain::is_prime(p))
        throw DomainError("series_to_filtered: p must be an odd prime");
    const ContextPtr& ctx = s.context();
    if (s.size() != 2 || ctx->n_vars() != 2 || ctx->var_degree(0) != Degree{1} ||
        ctx->var_degree(1) != Degree{2})
        throw DomainError("series_to_filtered: expected two components in variables of degree 1, 2");
    if (ctx->domain != CoefficientDomain::prime_field(p))
        throw DomainError("series_to_filtered: coefficients must live over F_" + std::to_string(p));

    // Jet order from the truncation order: powers gamma^{p^i} visible iff 2 p^i <= order.
    std::int64_t m = 0;
    while (2 * checked_pow(p, m + 1) <= ctx->order)
        ++m;

    auto p_power_index = [&](std::uint32_t e) -> std::int64_t {
        std::int64_t i = 0, v = 1;
        while (v < e) {
            v *= p;
            ++i;
        }
        return v == e ? i : -1;
    };

    CoefficientDomain dom = CoefficientDomain::prime_field(p);
    std::vector<GradedPolynomial> a(static_cast<std::size_t>(m) + 1,
                                    GradedPolynomial::zero(dom, ctx->coeff_table));
    std::vector<GradedPolynomial> b(static_cast<std::size_t>(m),
                                    GradedPolynomial::zero(dom, ctx->coeff_table));
    GradedPolynomial one = GradedPolynomial::one(dom, ctx->coeff_table);

    for (int comp = 0; comp < 2; ++comp) {
        const char* label = comp == 0 ? "f(e)" : "f(gamma)";
        Exponents lead = comp == 0 ? Exponents{1, 0} : Exponents{0, 1};
        if (s[comp].coefficient(lead) != one)
            throw DomainError(std::string("series_to_filtered: ") + label +
                              " must fix its own coordinate to first order");
        for (const auto& [ve, coeff] : s[comp].coefficients()) {
            std::string mono = "e^" + std::to_string(ve[0]) + "*gamma^" + std::to_string(ve[1]);
            if (ve[0] == (comp == 0 ? 1u : 0u) && ve[1] == (comp == 0 ? 0u : 1u)) {
                if (coeff != one)
                    throw DomainError(std::string("series_to_filtered: ") + label +
                                      " must have leading coefficient 1 at " + mono);
                continue;
            }
            if (ve[0] != 0)
                throw DomainError(std::string("series_to_filtered: ") + label +
                                  " has a forbidden e-dependent term at " + mono);
            std::int64_t i = p_power_index(ve[1]);
            if (i < 0)
                throw DomainError(std::string("series_to_filtered: ") + label + " has term at " +
                                  mono + " whose gamma exponent " + std::to_string(ve[1]) +
                                  " is not a power of " + std::to_string(p));
            if (comp == 1 && i == 0)
                throw DomainError("series_to_filtered: f(gamma) may not move gamma itself");
            if (i > m)
                throw DomainError(std::string("series_to_filtered: ") + label + " has term at " +
                                  mono + " beyond the jet order " + std::to_string(m));
            std::int64_t want = comp == 0 ? 2 * checked_pow(p, i) - 1 : 2 * checked_pow(p, i) - 2;
            if (!coeff.is_homogeneous_of(Degree{want}))
                throw DomainError(std::string("series_to_filtered: coefficient of ") + mono +
                                  " in " + label + " must be homogeneous of degree " +
                                  std::to_string(want) + ", got " + coeff.to_string());
            if (comp == 0)
                a[static_cast<std::size_t>(i)] = coeff;
            else
                b[static_cast<std::size_t>(i) - 1] = coeff;
        }
    }
    return FilteredAutomorphism(p, ctx->coeff_table, std::move(a), std::move(b));
}

}  // namespace dirac
