#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dirac/cochain.hpp"
#include "dirac/finite_algebra.hpp"
#include "dirac/linalg.hpp"

namespace dirac {

// Levels 0..N of a cosimplicial graded module with degree-preserving coface
// and codegeneracy matrices. The cosimplicial identities are verified on
// construction as far as the levels allow.
class CosimplicialGradedModule {
  public:
    CosimplicialGradedModule(CoefficientDomain domain, std::vector<GradedVectorSpace> levels,
                             std::vector<std::vector<IntMat>> cofaces,
                             std::vector<std::vector<IntMat>> codegeneracies)
        : domain_(domain), levels_(std::move(levels)), cofaces_(std::move(cofaces)),
          codegens_(std::move(codegeneracies)) {
        const std::size_t top = levels_.size();
        if (top == 0 || cofaces_.size() + 1 != top || codegens_.size() + 1 != top)
            throw DomainError("CosimplicialGradedModule: need N+1 levels with N map families");
        for (std::size_t n = 0; n + 1 < top; ++n) {
            if (cofaces_[n].size() != n + 2)
                throw DomainError("CosimplicialGradedModule: level " + std::to_string(n) +
                                  " needs cofaces d^0..d^" + std::to_string(n + 1));
            if (codegens_[n].size() != n + 1)
                throw DomainError("CosimplicialGradedModule: level " + std::to_string(n + 1) +
                                  " needs codegeneracies s^0..s^" + std::to_string(n));
            for (const IntMat& m : cofaces_[n])
                check_shape(m, n + 1, n, "coface");
            for (const IntMat& m : codegens_[n])
                check_shape(m, n, n + 1, "codegeneracy");
        }
        verify_identities();
    }

    const CoefficientDomain& domain() const { return domain_; }
    std::size_t levels() const { return levels_.size(); }
    const GradedVectorSpace& level(std::size_t n) const { return levels_[n]; }
    // d^i: level n -> level n+1, 0 <= i <= n+1.
    const IntMat& coface(std::size_t n, std::size_t i) const { return cofaces_[n][i]; }
    // s^i: level n+1 -> level n, 0 <= i <= n.
    const IntMat& codegeneracy(std::size_t n, std::size_t i) const { return codegens_[n][i]; }

    // Alternating-sum differential on the raw levels.
    CochainComplex unnormalized_complex() const {
        std::vector<IntMat> diffs;
        for (std::size_t n = 0; n + 1 < levels_.size(); ++n) {
            IntMat d = IntMat::Zero(static_cast<EIndex>(levels_[n + 1].dim()),
                                    static_cast<EIndex>(levels_[n].dim()));
            for (std::size_t i = 0; i < cofaces_[n].size(); ++i) {
                if (i % 2 == 0)
                    d += cofaces_[n][i];
                else
                    d -= cofaces_[n][i];
            }
            diffs.push_back(std::move(d));
        }
        return CochainComplex(domain_, levels_, std::move(diffs));
    }

  private:
    void check_shape(const IntMat& m, std::size_t to, std::size_t from, const char* what) const {
        if (m.rows() != static_cast<EIndex>(levels_[to].dim()) ||
            m.cols() != static_cast<EIndex>(levels_[from].dim()))
            throw DomainError(std::string("CosimplicialGradedModule: ") + what +
                              " matrix has the wrong shape");
        for (EIndex r = 0; r < m.rows(); ++r)
            for (EIndex c = 0; c < m.cols(); ++c)
                if (reduce(m(r, c)) != 0 &&
                    levels_[to][static_cast<std::size_t>(r)].degree !=
                        levels_[from][static_cast<std::size_t>(c)].degree)
                    throw DomainError(std::string("CosimplicialGradedModule: ") + what +
                                      " does not preserve internal degree");
    }

    Integer reduce(const Integer& v) const { return domain_.reduce(v); }

    bool same(const IntMat& a, const IntMat& b) const {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            return false;
        for (EIndex r = 0; r < a.rows(); ++r)
            for (EIndex c = 0; c < a.cols(); ++c)
                if (reduce(a(r, c)) != reduce(b(r, c)))
                    return false;
        return true;
    }

    void verify_identities() const {
        const std::size_t n_maps = cofaces_.size();
        // d^j d^i = d^i d^{j-1} for i < j.
        for (std::size_t n = 0; n + 1 < n_maps; ++n)
            for (std::size_t j = 0; j < cofaces_[n + 1].size(); ++j)
                for (std::size_t i = 0; i < j && i < cofaces_[n].size(); ++i)
                    if (j - 1 < cofaces_[n].size())
                        DIRAC_REQUIRE(same(cofaces_[n + 1][j] * cofaces_[n][i],
                                           cofaces_[n + 1][i] * cofaces_[n][j - 1]),
                                      "cosimplicial identity d^j d^i = d^i d^{j-1} fails");
        // s^j s^i = s^i s^{j+1} for i <= j.
        for (std::size_t n = 0; n + 1 < n_maps; ++n)
            for (std::size_t j = 0; j < codegens_[n].size(); ++j)
                for (std::size_t i = 0; i <= j; ++i)
                    if (i < codegens_[n].size() && j + 1 < codegens_[n + 1].size())
                        DIRAC_REQUIRE(same(codegens_[n][j] * codegens_[n + 1][i],
                                           codegens_[n][i] * codegens_[n + 1][j + 1]),
                                      "cosimplicial identity s^j s^i = s^i s^{j+1} fails");
        // Mixed identities.
        for (std::size_t n = 0; n < n_maps; ++n) {
            for (std::size_t j = 0; j < codegens_[n].size(); ++j) {
                for (std::size_t i = 0; i < cofaces_[n].size(); ++i) {
                    IntMat composite = codegens_[n][j] * cofaces_[n][i];  // level n -> level n
                    if (i < j) {
                        if (n > 0 && j - 1 < codegens_[n - 1].size() && i < cofaces_[n - 1].size())
                            DIRAC_REQUIRE(
                                same(composite, cofaces_[n - 1][i] * codegens_[n - 1][j - 1]),
                                "cosimplicial identity s^j d^i = d^i s^{j-1} fails");
                    } else if (i == j || i == j + 1) {
                        DIRAC_REQUIRE(same(composite,
                                           IntMat::Identity(composite.rows(), composite.cols())),
                                      "cosimplicial identity s^j d^i = id fails");
                    } else {
                        if (n > 0 && i - 1 < cofaces_[n - 1].size() && j < codegens_[n - 1].size())
                            DIRAC_REQUIRE(
                                same(composite, cofaces_[n - 1][i - 1] * codegens_[n - 1][j]),
                                "cosimplicial identity s^j d^i = d^{i-1} s^j fails");
                    }
                }
            }
        }
    }

    CoefficientDomain domain_;
    std::vector<GradedVectorSpace> levels_;
    std::vector<std::vector<IntMat>> cofaces_;
    std::vector<std::vector<IntMat>> codegens_;
};

// Normalized cochain complex: level n is the intersection of the kernels of
// all codegeneracies out of level n, computed degreewise so the new basis
// stays homogeneous; the differential is the restricted alternating sum.
inline CochainComplex normalized_cochains(const CosimplicialGradedModule& c) {
    const CoefficientDomain& dom = c.domain();
    const std::size_t top = c.levels();

    std::vector<Degree> degrees;
    for (std::size_t n = 0; n < top; ++n)
        for (const BasisElement& b : c.level(n).basis())
            if (std::find(degrees.begin(), degrees.end(), b.degree) == degrees.end())
                degrees.push_back(b.degree);
    std::sort(degrees.begin(), degrees.end());

    auto restrict = [](const IntMat& m, const std::vector<EIndex>& rows,
                       const std::vector<EIndex>& cols) {
        IntMat out(static_cast<EIndex>(rows.size()), static_cast<EIndex>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c2 = 0; c2 < cols.size(); ++c2)
                out(static_cast<EIndex>(r), static_cast<EIndex>(c2)) = m(rows[r], cols[c2]);
        return out;
    };

    // Per level and degree: a kernel basis expressed in the ambient level.
    // kernels[n][t] has one column per normalized basis vector.
    std::vector<std::map<std::int64_t, IntMat>> kernels(top);
    std::vector<GradedVectorSpace> out_levels;
    for (std::size_t n = 0; n < top; ++n) {
        std::vector<BasisElement> basis;
        for (Degree t : degrees) {
            std::vector<EIndex> here = c.level(n).indices_of_degree(t);
            if (here.empty())
                continue;
            IntMat kernel;
            if (n == 0) {
                kernel = IntMat::Identity(static_cast<EIndex>(here.size()),
                                          static_cast<EIndex>(here.size()));
            } else {
                // Stack all codegeneracies out of level n, restricted to degree t.
                std::vector<IntMat> blocks;
                EIndex rows = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    blocks.push_back(restrict(c.codegeneracy(n - 1, i),
                                              c.level(n - 1).indices_of_degree(t), here));
                    rows += blocks.back().rows();
                }
                IntMat stacked(rows, static_cast<EIndex>(here.size()));
                EIndex at = 0;
                for (const IntMat& b : blocks) {
                    stacked.middleRows(at, b.rows()) = b;
                    at += b.rows();
                }
                if (dom.is_field()) {
                    FpMat k = kernel_mod(fp_matrix_from(stacked, dom.characteristic()),
                                         dom.characteristic());
                    kernel = IntMat(k.rows(), k.cols());
                    for (EIndex r = 0; r < k.rows(); ++r)
                        for (EIndex c2 = 0; c2 < k.cols(); ++c2)
                            kernel(r, c2) = k(r, c2);
                } else {
                    kernel = integer_kernel(stacked);
                }
            }
            if (kernel.cols() == 0)
                continue;
            kernels[n].emplace(t.value, kernel);
            for (EIndex k = 0; k < kernel.cols(); ++k)
                basis.push_back({"n" + std::to_string(n) + "_t" + to_string(t) + "_" +
                                     std::to_string(k),
                                 t});
        }
        out_levels.push_back(GradedVectorSpace(std::move(basis)));
    }

    // Restricted differentials in kernel coordinates.
    std::vector<IntMat> out_diffs;
    for (std::size_t n = 0; n + 1 < top; ++n) {
        IntMat d = IntMat::Zero(static_cast<EIndex>(out_levels[n + 1].dim()),
                                static_cast<EIndex>(out_levels[n].dim()));
        IntMat full = IntMat::Zero(static_cast<EIndex>(c.level(n + 1).dim()),
                                   static_cast<EIndex>(c.level(n).dim()));
        for (std::size_t i = 0; i <= n + 1; ++i) {
            if (i % 2 == 0)
                full += c.coface(n, i);
            else
                full -= c.coface(n, i);
        }

        // Column offsets of each degree block in the normalized levels.
        auto offsets = [&](std::size_t lvl) {
            std::map<std::int64_t, EIndex> off;
            EIndex at = 0;
            for (Degree t : degrees) {
                auto it = kernels[lvl].find(t.value);
                if (it == kernels[lvl].end())
                    continue;
                off[t.value] = at;
                at += it->second.cols();
            }
            return off;
        };
        std::map<std::int64_t, EIndex> src_off = offsets(n), dst_off = offsets(n + 1);

        for (Degree t : degrees) {
            auto src = kernels[n].find(t.value);
            if (src == kernels[n].end())
                continue;
            std::vector<EIndex> here = c.level(n).indices_of_degree(t);
            std::vector<EIndex> next = c.level(n + 1).indices_of_degree(t);
            IntMat image = restrict(full, next, here) * src->second;
            auto dst = kernels[n + 1].find(t.value);
            if (dst == kernels[n + 1].end()) {
                for (EIndex r = 0; r < image.rows(); ++r)
                    for (EIndex c2 = 0; c2 < image.cols(); ++c2)
                        DIRAC_REQUIRE(dom.reduce(image(r, c2)) == 0,
                                      "normalized_cochains: differential leaves the kernels");
                continue;
            }
            // Solve dst_kernel * y = image column by column.
            for (EIndex c2 = 0; c2 < image.cols(); ++c2) {
                IntVec y;
                if (dom.is_field()) {
                    const std::int64_t p = dom.characteristic();
                    auto sol = solve_mod(fp_matrix_from(dst->second, p),
                                         [&] {
                                             FpVec b(image.rows());
                                             for (EIndex r = 0; r < image.rows(); ++r) {
                                                 Integer v = image(r, c2) % p;
                                                 if (v < 0)
                                                     v += p;
                                                 b(r) = v.get_si();
                                             }
                                             return b;
                                         }(),
                                         p);
                    DIRAC_REQUIRE(sol.has_value(),
                                  "normalized_cochains: differential leaves the kernels");
                    y = IntVec(sol->size());
                    for (EIndex r = 0; r < sol->size(); ++r)
                        y(r) = (*sol)(r);
                } else {
                    auto sol = integer_solve(dst->second, image.col(c2));
                    DIRAC_REQUIRE(sol.has_value(),
                                  "normalized_cochains: differential leaves the kernels");
                    y = *sol;
                }
                for (EIndex r = 0; r < y.size(); ++r)
                    d(dst_off.at(t.value) + r, src_off.at(t.value) + c2) = y(r);
            }
        }
        out_diffs.push_back(std::move(d));
    }
    return CochainComplex(dom, std::move(out_levels), std::move(out_diffs));
}

}  // namespace dirac
