#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirac/finite_algebra.hpp"
#include "dirac/linalg.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

// Linear system sum_k x_k * c_{ik} = rhs_i over a Dirac polynomial ring,
// unknowns on the left of the coefficients.
struct PolySystem {
    CoefficientDomain domain;
    TablePtr table;
    std::vector<std::vector<GradedPolynomial>> coeffs;  // [equation][unknown]
    std::vector<GradedPolynomial> rhs;                  // [equation]

    // An empty system is legal (every condition then rests on the witness
    // alone) but needs the unknown count passed explicitly.
    PolySystem(CoefficientDomain dom, TablePtr tab,
               std::vector<std::vector<GradedPolynomial>> c, std::vector<GradedPolynomial> r,
               std::optional<std::size_t> unknown_count = std::nullopt)
        : domain(std::move(dom)), table(std::move(tab)), coeffs(std::move(c)),
          rhs(std::move(r)) {
        if (coeffs.size() != rhs.size())
            throw DomainError("PolySystem: need one right-hand side per equation");
        if (coeffs.empty()) {
            if (!unknown_count)
                throw DomainError("PolySystem: empty system needs an explicit unknown count");
            n_unknowns_ = *unknown_count;
        } else {
            n_unknowns_ = coeffs.front().size();
            if (unknown_count && *unknown_count != n_unknowns_)
                throw DomainError("PolySystem: stated unknown count disagrees with the rows");
        }
        for (const auto& row : coeffs) {
            if (row.size() != n_unknowns_)
                throw DomainError("PolySystem: ragged coefficient rows");
            for (const GradedPolynomial& c : row)
                check(c);
        }
        for (const GradedPolynomial& r : rhs)
            check(r);
    }

    std::size_t equations() const { return coeffs.size(); }
    std::size_t unknowns() const { return n_unknowns_; }

  private:
    std::size_t n_unknowns_ = 0;

    void check(const GradedPolynomial& q) const {
        if (!(q.domain() == domain) || !same_table(q.table_ptr(), table))
            throw DomainError("PolySystem: entry over a different ring");
    }
};

// Certificate that a solution y of the system factors through solutions with
// coefficients in the designated rows: y_k = sum_j b_j * z_{jk} where every
// row z_j solves the homogeneous system.
struct FlatnessWitness {
    std::vector<GradedPolynomial> y;
    std::vector<GradedPolynomial> b;
    std::vector<std::vector<GradedPolynomial>> z;  // z[j] is one homogeneous solution row
};

struct FlatnessReport {
    bool ok = true;
    int failed_condition = 0;  // 1: y solves, 2: z rows solve, 3: factorization
    std::string detail = "all conditions verified";
};

namespace detail {

// All nonzero members must be homogeneous; the nonzero products in each group
// must agree in degree. Cross-degree cancellation is treated as malformed
// input rather than a failed witness.
inline void require_homogeneous(const GradedPolynomial& q, const char* what) {
    if (!q.is_zero() && !q.homogeneous_degree())
        throw DomainError(std::string("check_flatness_witness: ") + what + " is not homogeneous");
}

class DegreeBucket {
  public:
    explicit DegreeBucket(std::string what) : what_(std::move(what)) {}
    void feed(const GradedPolynomial& a, const GradedPolynomial& b) {
        if (a.is_zero() || b.is_zero())
            return;
        feed_degree(*a.homogeneous_degree() + *b.homogeneous_degree());
    }
    void feed_degree(Degree d) {
        if (seen_ && *seen_ != d)
            throw DomainError("check_flatness_witness: degree-inconsistent input in " + what_);
        seen_ = d;
    }

  private:
    std::string what_;
    std::optional<Degree> seen_;
};

}  // namespace detail

// Checks the three defining identities of the witness:
//   (1) sum_k y_k * c_{ik} = rhs_i for every equation i,
//   (2) sum_k z_{jk} * c_{ik} = 0 for every row j and equation i,
//   (3) y_k = sum_j b_j * z_{jk} for every unknown k.
// Shape, ring, or degree mismatches throw; identity failures are reported as
// data so corrupted witnesses come back ok = false.
inline FlatnessReport check_flatness_witness(const PolySystem& sys, const FlatnessWitness& w) {
    const std::size_t nk = sys.unknowns();
    auto check_entry = [&](const GradedPolynomial& q, const char* what) {
        if (!(q.domain() == sys.domain) || !same_table(q.table_ptr(), sys.table))
            throw DomainError("check_flatness_witness: witness entry over a different ring");
        detail::require_homogeneous(q, what);
    };
    if (w.y.size() != nk)
        throw DomainError("check_flatness_witness: y must have one entry per unknown");
    if (w.b.size() != w.z.size())
        throw DomainError("check_flatness_witness: need one coefficient b_j per row z_j");
    for (const GradedPolynomial& q : w.y)
        check_entry(q, "y entry");
    for (const GradedPolynomial& q : w.b)
        check_entry(q, "b entry");
    for (const auto& row : w.z) {
        if (row.size() != nk)
            throw DomainError("check_flatness_witness: z rows must have one entry per unknown");
        for (const GradedPolynomial& q : row)
            check_entry(q, "z entry");
    }
    for (const auto& row : sys.coeffs)
        for (const GradedPolynomial& q : row)
            detail::require_homogeneous(q, "system coefficient");
    for (const GradedPolynomial& q : sys.rhs)
        detail::require_homogeneous(q, "right-hand side");

    for (std::size_t i = 0; i < sys.equations(); ++i) {
        detail::DegreeBucket bucket("equation " + std::to_string(i));
        for (std::size_t k = 0; k < nk; ++k)
            bucket.feed(w.y[k], sys.coeffs[i][k]);
        if (!sys.rhs[i].is_zero())
            bucket.feed_degree(*sys.rhs[i].homogeneous_degree());
        for (std::size_t j = 0; j < w.z.size(); ++j) {
            detail::DegreeBucket row_bucket("row z_" + std::to_string(j) + ", equation " +
                                            std::to_string(i));
            for (std::size_t k = 0; k < nk; ++k)
                row_bucket.feed(w.z[j][k], sys.coeffs[i][k]);
        }
    }
    for (std::size_t k = 0; k < nk; ++k) {
        detail::DegreeBucket bucket("unknown " + std::to_string(k));
        for (std::size_t j = 0; j < w.z.size(); ++j)
            bucket.feed(w.b[j], w.z[j][k]);
        if (!w.y[k].is_zero())
            bucket.feed_degree(*w.y[k].homogeneous_degree());
    }

    FlatnessReport report;
    for (std::size_t i = 0; i < sys.equations(); ++i) {
        GradedPolynomial acc = GradedPolynomial::zero(sys.domain, sys.table);
        for (std::size_t k = 0; k < nk; ++k)
            acc = acc + w.y[k] * sys.coeffs[i][k];
        if (!(acc == sys.rhs[i])) {
            report.ok = false;
            report.failed_condition = 1;
            report.detail = "y does not solve equation " + std::to_string(i);
            return report;
        }
    }
    for (std::size_t j = 0; j < w.z.size(); ++j)
        for (std::size_t i = 0; i < sys.equations(); ++i) {
            GradedPolynomial acc = GradedPolynomial::zero(sys.domain, sys.table);
            for (std::size_t k = 0; k < nk; ++k)
                acc = acc + w.z[j][k] * sys.coeffs[i][k];
            if (!acc.is_zero()) {
                report.ok = false;
                report.failed_condition = 2;
                report.detail = "row z_" + std::to_string(j) +
                                " does not solve the homogeneous equation " + std::to_string(i);
                return report;
            }
        }
    for (std::size_t k = 0; k < nk; ++k) {
        GradedPolynomial acc = GradedPolynomial::zero(sys.domain, sys.table);
        for (std::size_t j = 0; j < w.z.size(); ++j)
            acc = acc + w.b[j] * w.z[j][k];
        if (!(acc == w.y[k])) {
            report.ok = false;
            report.failed_condition = 3;
            report.detail = "y_" + std::to_string(k) + " is not the stated combination of z rows";
            return report;
        }
    }
    return report;
}

// The same kind of system inside a finite graded algebra, together with a
// spanning set of the base subring (the image of the structure map).
struct FiniteSystem {
    FiniteGradedAlgebra algebra;
    std::vector<std::vector<FpVec>> coeffs;  // [equation][unknown]
    std::vector<FpVec> rhs;
    std::vector<FpVec> base;  // spans the base subring; defaults to the unit line

    FiniteSystem(FiniteGradedAlgebra e, std::vector<std::vector<FpVec>> c, std::vector<FpVec> r,
                 std::vector<FpVec> base_span = {})
        : algebra(std::move(e)), coeffs(std::move(c)), rhs(std::move(r)),
          base(std::move(base_span)) {
        if (base.empty())
            base.push_back(algebra.unit());
        if (coeffs.size() != rhs.size())
            throw DomainError("FiniteSystem: need one right-hand side per equation");
        if (coeffs.empty())
            throw DomainError("FiniteSystem: need at least one equation");
        const std::size_t k = coeffs.front().size();
        const EIndex n = static_cast<EIndex>(algebra.dim());
        for (const auto& row : coeffs) {
            if (row.size() != k)
                throw DomainError("FiniteSystem: ragged coefficient rows");
            for (const FpVec& v : row)
                if (v.size() != n)
                    throw DomainError("FiniteSystem: coefficient has wrong dimension");
        }
        for (const FpVec& v : rhs)
            if (v.size() != n)
                throw DomainError("FiniteSystem: right-hand side has wrong dimension");
        for (const FpVec& v : base)
            if (v.size() != n)
                throw DomainError("FiniteSystem: base vector has wrong dimension");
    }

    std::size_t equations() const { return coeffs.size(); }
    std::size_t unknowns() const { return coeffs.front().size(); }
};

namespace detail {

inline bool fp_is_zero(const FpVec& v, std::int64_t p) {
    for (EIndex i = 0; i < v.size(); ++i)
        if (mod_reduce(v(i), p) != 0)
            return false;
    return true;
}

}  // namespace detail

// Searches for a solution of the system whose entries lie in the span of the
// base vectors. Unknown degrees are forced by homogeneity: every equation with
// a nonzero right-hand side pins deg(x_k) = deg(rhs_i) - deg(c_ik) for each
// nonzero coefficient. Conflicting requirements reject the system; unknowns
// that no such equation touches are set to zero. A forced degree outside the
// window reports not-found rather than throwing, since a solution may
// genuinely need coordinates the window excludes.
inline std::optional<std::vector<FpVec>> search_faithful_flatness_witness(
    const FiniteSystem& sys, Degree min_degree = Degree{-128}, Degree max_degree = Degree{128}) {
    const FiniteGradedAlgebra& e = sys.algebra;
    const std::int64_t p = e.p();
    const EIndex dim = static_cast<EIndex>(e.dim());
    const std::size_t nk = sys.unknowns();

    // Degree analysis.
    std::vector<std::optional<Degree>> want(nk);
    for (std::size_t i = 0; i < sys.equations(); ++i) {
        if (detail::fp_is_zero(sys.rhs[i], p))
            continue;
        std::optional<Degree> ei = e.element_degree(sys.rhs[i]);
        if (!ei)
            throw DomainError("search_base_solution: right-hand side " + std::to_string(i) +
                              " is not homogeneous");
        for (std::size_t k = 0; k < nk; ++k) {
            if (detail::fp_is_zero(sys.coeffs[i][k], p))
                continue;
            std::optional<Degree> cik = e.element_degree(sys.coeffs[i][k]);
            if (!cik)
                throw DomainError("search_base_solution: coefficient (" + std::to_string(i) +
                                  ", " + std::to_string(k) + ") is not homogeneous");
            Degree need = *ei - *cik;
            if (want[k] && *want[k] != need)
                throw DomainError("search_base_solution: homogeneity forces two degrees on x_" +
                                  std::to_string(k));
            want[k] = need;
        }
    }
    for (const auto& w : want)
        if (w && (*w < min_degree || max_degree < *w))
            return std::nullopt;

    // Candidate basis per unknown: span(base) intersected with the graded
    // piece of the forced degree.
    FpMat base_mat(dim, static_cast<EIndex>(sys.base.size()));
    for (std::size_t c = 0; c < sys.base.size(); ++c)
        base_mat.col(static_cast<EIndex>(c)) = sys.base[c];
    std::vector<std::vector<FpVec>> candidates(nk);
    std::size_t total_cols = 0;
    for (std::size_t k = 0; k < nk; ++k) {
        if (!want[k])
            continue;  // x_k stays zero
        std::vector<EIndex> off_rows;
        for (EIndex r = 0; r < dim; ++r)
            if (e.space()[static_cast<std::size_t>(r)].degree != *want[k])
                off_rows.push_back(r);
        FpMat off(static_cast<EIndex>(off_rows.size()), base_mat.cols());
        for (std::size_t r = 0; r < off_rows.size(); ++r)
            off.row(static_cast<EIndex>(r)) = base_mat.row(off_rows[r]);
        FpMat ker = off_rows.empty()
                        ? FpMat(FpMat::Identity(base_mat.cols(), base_mat.cols()))
                        : kernel_mod(off, p);
        for (EIndex c = 0; c < ker.cols(); ++c) {
            FpVec v = FpVec::Zero(dim);
            for (EIndex j = 0; j < base_mat.cols(); ++j)
                for (EIndex r = 0; r < dim; ++r)
                    v(r) = mod_reduce(v(r) + base_mat(r, j) * ker(j, c), p);
            if (!detail::fp_is_zero(v, p)) {
                candidates[k].push_back(std::move(v));
                ++total_cols;
            }
        }
    }

    // One scalar unknown per candidate vector; rows stack the equations
    // coordinate by coordinate.
    const EIndex rows = static_cast<EIndex>(sys.equations()) * dim;
    FpMat a = FpMat::Zero(rows, static_cast<EIndex>(total_cols));
    FpVec r = FpVec::Zero(rows);
    for (std::size_t i = 0; i < sys.equations(); ++i)
        for (EIndex t = 0; t < dim; ++t)
            r(static_cast<EIndex>(i) * dim + t) = mod_reduce(sys.rhs[i](t), p);
    EIndex col = 0;
    for (std::size_t k = 0; k < nk; ++k)
        for (const FpVec& cand : candidates[k]) {
            for (std::size_t i = 0; i < sys.equations(); ++i) {
                FpVec prod = e.multiply(cand, sys.coeffs[i][k]);
                for (EIndex t = 0; t < dim; ++t)
                    a(static_cast<EIndex>(i) * dim + t, col) = prod(t);
            }
            ++col;
        }

    if (total_cols == 0)
        return detail::fp_is_zero(r, p) ? std::optional<std::vector<FpVec>>(
                                              std::vector<FpVec>(nk, FpVec::Zero(dim)))
                                        : std::nullopt;

    std::optional<FpVec> sol = solve_mod(a, r, p);
    if (!sol)
        return std::nullopt;
    std::vector<FpVec> out(nk, FpVec::Zero(dim));
    col = 0;
    for (std::size_t k = 0; k < nk; ++k)
        for (const FpVec& cand : candidates[k]) {
            std::int64_t s = mod_reduce((*sol)(col), p);
            for (EIndex t = 0; t < dim; ++t)
                out[k](t) = mod_reduce(out[k](t) + s * cand(t), p);
            ++col;
        }
    return out;
}

}  // namespace dirac
