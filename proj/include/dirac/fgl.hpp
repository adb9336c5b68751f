#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dirac/linalg.hpp"
#include "dirac/series.hpp"

namespace dirac {

// d-dimensional formal group law: components f_s(y, z) in variables
// y_1..y_d, z_1..z_d, where both blocks carry the coordinate degrees.
class FormalGroupLaw {
  public:
    FormalGroupLaw(SeriesFamily law, std::vector<Degree> coordinate_degrees)
        : law_(std::move(law)), degrees_(std::move(coordinate_degrees)) {
        const ContextPtr& ctx = law_.context();
        const std::size_t d = degrees_.size();
        if (law_.size() != d)
            throw DomainError("FormalGroupLaw: need one component per coordinate");
        if (ctx->n_vars() != 2 * d)
            throw DomainError("FormalGroupLaw: law must use 2d variables");
        for (std::size_t s = 0; s < d; ++s)
            if (ctx->var_degree(s) != degrees_[s] || ctx->var_degree(d + s) != degrees_[s])
                throw DomainError("FormalGroupLaw: variable degrees disagree with coordinates");
    }

    // The strictly additive law f_s = y_s + z_s.
    static FormalGroupLaw additive(CoefficientDomain domain, TablePtr coeff_table,
                                   std::vector<Degree> coordinate_degrees, std::int64_t order) {
        ContextPtr ctx = two_block_context(domain, std::move(coeff_table), coordinate_degrees, order);
        SeriesFamily law(ctx);
        const std::size_t d = coordinate_degrees.size();
        for (std::size_t s = 0; s < d; ++s)
            law.push_back(TruncatedSeries::variable(ctx, s) + TruncatedSeries::variable(ctx, d + s));
        return FormalGroupLaw(std::move(law), std::move(coordinate_degrees));
    }

    static ContextPtr two_block_context(CoefficientDomain domain, TablePtr coeff_table,
                                        const std::vector<Degree>& degrees, std::int64_t order,
                                        const std::string& left = "y", const std::string& right = "z") {
        std::vector<Generator> vars;
        for (std::size_t s = 0; s < degrees.size(); ++s)
            vars.push_back({left + std::to_string(s + 1), degrees[s]});
        for (std::size_t s = 0; s < degrees.size(); ++s)
            vars.push_back({right + std::to_string(s + 1), degrees[s]});
        return SeriesContext::make(domain, std::move(coeff_table), std::move(vars), order);
    }

    const SeriesFamily& law() const { return law_; }
    const std::vector<Degree>& coordinate_degrees() const { return degrees_; }
    std::size_t dimension() const { return degrees_.size(); }
    const ContextPtr& context() const { return law_.context(); }
    std::int64_t order() const { return law_.context()->order; }

    friend bool operator==(const FormalGroupLaw& a, const FormalGroupLaw& b) {
        return a.degrees_ == b.degrees_ && a.law_ == b.law_;
    }

  private:
    SeriesFamily law_;
    std::vector<Degree> degrees_;
};

struct AxiomFailure {
    std::string axiom;          // "unit-left", "unit-right", "commutativity", "associativity"
    std::size_t component = 0;  // index of the failing law component
    Exponents var_exponents;    // monomial in the check's variable system
    GradedPolynomial difference;

    std::string describe() const {
        std::string s = axiom + " fails in component " + std::to_string(component + 1) +
                        " at variable exponents (";
        for (std::size_t j = 0; j < var_exponents.size(); ++j)
            s += (j ? "," : "") + std::to_string(var_exponents[j]);
        return s + "): difference coefficient " + difference.to_string();
    }
};

struct FGLReport {
    bool unit_ok = false;
    bool assoc_ok = false;
    bool comm_ok = false;
    std::optional<AxiomFailure> first_failure;

    bool all_ok() const { return unit_ok && assoc_ok && comm_ok; }
};

namespace detail {

// First nonzero coefficient of lhs - rhs, component by component.
inline std::optional<AxiomFailure> first_difference(const std::string& axiom,
                                                    const SeriesFamily& lhs,
                                                    const SeriesFamily& rhs) {
    for (std::size_t s = 0; s < lhs.size(); ++s) {
        TruncatedSeries diff = lhs[s] - rhs[s];
        if (diff.is_zero())
            continue;
        auto coeffs = diff.coefficients();
        auto it = coeffs.begin();
        return AxiomFailure{axiom, s, it->first, it->second};
    }
    return std::nullopt;
}

}  // namespace detail

// Checks the unit, associativity, and commutativity axioms up to the law's
// truncation order. The inverse axiom needs no check of its own: the unit
// axiom makes the inverse-series equation solvable, and solve_recursively
// certifies its solution.
inline FGLReport check_axioms(const FormalGroupLaw& f) {
    const ContextPtr& ctx = f.context();
    const std::size_t d = f.dimension();
    FGLReport report;

    ContextPtr xctx = SeriesContext::make(
        ctx->domain, ctx->coeff_table,
        [&] {
            std::vector<Generator> vars;
            for (std::size_t s = 0; s < d; ++s)
                vars.push_back({"x" + std::to_string(s + 1), f.coordinate_degrees()[s]});
            return vars;
        }(),
        ctx->order);
    SeriesFamily x_id = SeriesFamily::identity(xctx);

    auto record = [&](const std::optional<AxiomFailure>& failure) {
        if (failure && !report.first_failure)
            report.first_failure = failure;
        return !failure.has_value();
    };

    // Unit: f(x, 0) = x and f(0, x) = x.
    {
        bool ok = true;
        for (int side = 0; side < 2; ++side) {
            SeriesFamily args(xctx);
            for (std::size_t j = 0; j < 2 * d; ++j) {
                bool live = (side == 0) ? (j < d) : (j >= d);
                args.push_back(live ? x_id[j % d] : TruncatedSeries::zero(xctx));
            }
            ok = record(detail::first_difference(side == 0 ? "unit-left" : "unit-right",
                                                 substitute(f.law(), args), x_id)) &&
                 ok;
        }
        report.unit_ok = ok;
    }

    // Commutativity: f(y, z) = f(z, y), checked inside the law's own system.
    {
        SeriesFamily swapped_args(ctx);
        for (std::size_t s = 0; s < d; ++s)
            swapped_args.push_back(TruncatedSeries::variable(ctx, d + s));
        for (std::size_t s = 0; s < d; ++s)
            swapped_args.push_back(TruncatedSeries::variable(ctx, s));
        report.comm_ok =
            record(detail::first_difference("commutativity", substitute(f.law(), swapped_args), f.law()));
    }

    // Associativity: f(f(x, y), z) = f(x, f(y, z)) in a three-block system.
    {
        std::vector<Generator> vars;
        const char* blocks[3] = {"x", "y", "z"};
        for (const char* b : blocks)
            for (std::size_t s = 0; s < d; ++s)
                vars.push_back({std::string(b) + std::to_string(s + 1), f.coordinate_degrees()[s]});
        ContextPtr wctx = SeriesContext::make(ctx->domain, ctx->coeff_table, std::move(vars), ctx->order);

        auto block_var = [&](std::size_t block, std::size_t s) {
            return TruncatedSeries::variable(wctx, block * d + s);
        };
        auto pairwise = [&](std::size_t left_block, std::size_t right_block) {
            SeriesFamily args(wctx);
            for (std::size_t s = 0; s < d; ++s)
                args.push_back(block_var(left_block, s));
            for (std::size_t s = 0; s < d; ++s)
                args.push_back(block_var(right_block, s));
            return substitute(f.law(), args);
        };

        SeriesFamily f_xy = pairwise(0, 1);
        SeriesFamily f_yz = pairwise(1, 2);

        SeriesFamily lhs_args(wctx);
        for (std::size_t s = 0; s < d; ++s)
            lhs_args.push_back(f_xy[s]);
        for (std::size_t s = 0; s < d; ++s)
            lhs_args.push_back(block_var(2, s));
        SeriesFamily rhs_args(wctx);
        for (std::size_t s = 0; s < d; ++s)
            rhs_args.push_back(block_var(0, s));
        for (std::size_t s = 0; s < d; ++s)
            rhs_args.push_back(f_yz[s]);

        report.assoc_ok = record(detail::first_difference(
            "associativity", substitute(f.law(), lhs_args), substitute(f.law(), rhs_args)));
    }

    return report;
}

// Formal inverse: the unique family i with f(x, i(x)) = 0, from the
// contraction solver; the solver re-checks the unit shape and verifies its
// own residual.
inline SeriesFamily inverse_series(const FormalGroupLaw& f) { return solve_recursively(f.law()); }

// Invertible coordinate change g(t) with zero constant term and a scalar,
// invertible linear part. Components live in variables t_1..t_d carrying the
// coordinate degrees.
class CoordinateChange {
  public:
    CoordinateChange(SeriesFamily g, std::vector<Degree> degrees)
        : g_(std::move(g)), degrees_(std::move(degrees)) {
        const ContextPtr& ctx = g_.context();
        const std::size_t d = degrees_.size();
        if (g_.size() != d || ctx->n_vars() != d)
            throw DomainError("CoordinateChange: need d components in d variables");
        for (std::size_t s = 0; s < d; ++s)
            if (ctx->var_degree(s) != degrees_[s])
                throw DomainError("CoordinateChange: variable degrees disagree with coordinates");
        for (std::size_t s = 0; s < d; ++s)
            if (!g_[s].constant_term().is_zero())
                throw DomainError("CoordinateChange: component " + std::to_string(s + 1) +
                                  " has a constant term");
        linear_ = extract_linear();
        check_linear_invertible();
    }

    static CoordinateChange identity(CoefficientDomain domain, TablePtr coeff_table,
                                     std::vector<Degree> degrees, std::int64_t order) {
        ContextPtr ctx = context_for(domain, std::move(coeff_table), degrees, order);
        return CoordinateChange(SeriesFamily::identity(ctx), std::move(degrees));
    }

    static ContextPtr context_for(CoefficientDomain domain, TablePtr coeff_table,
                                  const std::vector<Degree>& degrees, std::int64_t order) {
        std::vector<Generator> vars;
        for (std::size_t s = 0; s < degrees.size(); ++s)
            vars.push_back({"t" + std::to_string(s + 1), degrees[s]});
        return SeriesContext::make(domain, std::move(coeff_table), std::move(vars), order);
    }

    const SeriesFamily& series() const { return g_; }
    const std::vector<Degree>& coordinate_degrees() const { return degrees_; }
    std::size_t dimension() const { return degrees_.size(); }
    const IntMat& linear_part() const { return linear_; }

    // Formal inverse h with g(h(t)) = t = h(g(t)).
    CoordinateChange inverse() const {
        const ContextPtr& ctx = g_.context();
        const std::size_t d = degrees_.size();
        IntMat linv = invert_linear();

        SeriesFamily t_id = SeriesFamily::identity(ctx);
        auto apply_linv = [&](const SeriesFamily& r) {
            SeriesFamily out(ctx);
            for (std::size_t i = 0; i < d; ++i) {
                TruncatedSeries acc = TruncatedSeries::zero(ctx);
                for (std::size_t j = 0; j < d; ++j)
                    if (linv(static_cast<EIndex>(i), static_cast<EIndex>(j)) != 0)
                        acc += linv(static_cast<EIndex>(i), static_cast<EIndex>(j)) * r[j];
                out.push_back(std::move(acc));
            }
            return out;
        };

        // h <- h - L^{-1} (g(h) - t); each round gains a filtration step.
        SeriesFamily h = apply_linv(t_id);
        const std::int64_t max_rounds = ctx->order + 2;
        for (std::int64_t round = 0; round < max_rounds; ++round) {
            SeriesFamily residual = substitute(g_, h) - t_id;
            if (residual.is_zero()) {
                SeriesFamily back = substitute(h, g_);
                DIRAC_REQUIRE(back == t_id, "CoordinateChange::inverse: one-sided inverse only");
                return CoordinateChange(std::move(h), degrees_);
            }
            // L^{-1} applied to the residual, recombined through the linear part.
            SeriesFamily correction = apply_linv(residual);
            SeriesFamily next(ctx);
            for (std::size_t s = 0; s < d; ++s)
                next.push_back(h[s] - correction[s]);
            h = std::move(next);
        }
        throw InternalError("CoordinateChange::inverse: iteration failed to converge");
    }

    friend bool operator==(const CoordinateChange& a, const CoordinateChange& b) {
        return a.degrees_ == b.degrees_ && a.g_ == b.g_;
    }

  private:
    IntMat extract_linear() const {
        const ContextPtr& ctx = g_.context();
        const std::size_t d = degrees_.size();
        IntMat l = IntMat::Zero(static_cast<EIndex>(d), static_cast<EIndex>(d));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                Exponents e(d, 0);
                e[j] = 1;
                GradedPolynomial c = g_[i].coefficient(e);
                if (c.is_zero())
                    continue;
                Exponents zero(ctx->n_coeff(), 0);
                Integer scalar = c.coefficient_of(zero);
                GradedPolynomial rest = c;
                rest.add_term(zero, -scalar);
                if (!rest.is_zero())
                    throw DomainError("CoordinateChange: linear coefficient of t" +
                                      std::to_string(j + 1) + " in component " +
                                      std::to_string(i + 1) + " is not scalar");
                l(static_cast<EIndex>(i), static_cast<EIndex>(j)) = scalar;
            }
        }
        return l;
    }

    void check_linear_invertible() const {
        Integer det = determinant(linear_);
        const CoefficientDomain& dom = g_.context()->domain;
        if (!dom.is_unit(det))
            throw DomainError("CoordinateChange: linear part has non-unit determinant " +
                              det.get_str());
        // Degree mixing would make the change inhomogeneous.
        for (std::size_t i = 0; i < degrees_.size(); ++i)
            for (std::size_t j = 0; j < degrees_.size(); ++j)
                if (linear_(static_cast<EIndex>(i), static_cast<EIndex>(j)) != 0 &&
                    degrees_[i] != degrees_[j])
                    throw DomainError("CoordinateChange: linear part mixes degrees " +
                                      to_string(degrees_[i]) + " and " + to_string(degrees_[j]));
    }

    // Inverse of the linear part with entries reduced into the domain.
    IntMat invert_linear() const {
        const std::size_t d = degrees_.size();
        const CoefficientDomain& dom = g_.context()->domain;
        IntMat inv = IntMat::Zero(static_cast<EIndex>(d), static_cast<EIndex>(d));
        // Adjugate divided by the determinant; d is small.
        Integer det = determinant(linear_);
        Integer det_inv = dom.inverse(det);
        for (EIndex i = 0; i < static_cast<EIndex>(d); ++i)
            for (EIndex j = 0; j < static_cast<EIndex>(d); ++j) {
                IntMat minor(static_cast<EIndex>(d) - 1, static_cast<EIndex>(d) - 1);
                for (EIndex r = 0, rr = 0; r < static_cast<EIndex>(d); ++r) {
                    if (r == j)
                        continue;
                    for (EIndex c = 0, cc = 0; c < static_cast<EIndex>(d); ++c) {
                        if (c == i)
                            continue;
                        minor(rr, cc++) = linear_(r, c);
                    }
                    ++rr;
                }
                Integer cof = determinant(minor);
                if ((i + j) % 2 != 0)
                    cof = -cof;
                inv(i, j) = dom.reduce(cof * det_inv);
            }
        return inv;
    }

    SeriesFamily g_;
    std::vector<Degree> degrees_;
    IntMat linear_;
};

// Transport of the law along a coordinate change: g . f = g(f(g^{-1}y, g^{-1}z)).
inline FormalGroupLaw act(const CoordinateChange& g, const FormalGroupLaw& f) {
    if (g.coordinate_degrees() != f.coordinate_degrees())
        throw DomainError("act: coordinate degrees of change and law differ");
    const ContextPtr& fctx = f.context();
    const ContextPtr& gctx = g.series().context();
    if (fctx->domain != gctx->domain || !(*fctx->coeff_table == *gctx->coeff_table))
        throw DomainError("act: change and law use different coefficient rings");
    const std::size_t d = f.dimension();

    CoordinateChange ginv = g.inverse();

    // g^{-1} evaluated on each block of the law's variables.
    auto on_block = [&](std::size_t block) {
        SeriesFamily block_vars(fctx);
        for (std::size_t s = 0; s < d; ++s)
            block_vars.push_back(TruncatedSeries::variable(fctx, block * d + s));
        return substitute(ginv.series(), block_vars);
    };
    SeriesFamily inner_args(fctx);
    for (std::size_t block = 0; block < 2; ++block) {
        SeriesFamily mapped = on_block(block);
        for (const TruncatedSeries& c : mapped.components())
            inner_args.push_back(c);
    }

    SeriesFamily core = substitute(f.law(), inner_args);
    SeriesFamily transported = substitute(g.series(), core);
    FormalGroupLaw result(std::move(transported), f.coordinate_degrees());

#ifndef NDEBUG
    if (check_axioms(f).all_ok())
        DIRAC_REQUIRE(check_axioms(result).all_ok(), "act: transported law lost the axioms");
#endif
    return result;
}

// Composite change performing h first, then g: (g after h)(t) = g(h(t)).
inline CoordinateChange compose(const CoordinateChange& g, const CoordinateChange& h) {
    return CoordinateChange(substitute(g.series(), h.series()), g.coordinate_degrees());
}

}  // namespace dirac
