#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dirac/domain.hpp"
#include "dirac/finite_algebra.hpp"
#include "dirac/linalg.hpp"

namespace dirac {

// One entry of a cohomology page: dimension of the free part and, over Z,
// torsion invariant factors.
struct E2Entry {
    std::int64_t s = 0;  // cohomological level
    std::int64_t t = 0;  // internal degree
    std::int64_t dim = 0;
    std::vector<Integer> torsion;

    std::int64_t stem() const { return t - s; }
    friend bool operator==(const E2Entry&, const E2Entry&) = default;
};

class E2Page {
  public:
    void add(E2Entry e) { entries_.push_back(std::move(e)); }
    const std::vector<E2Entry>& entries() const { return entries_; }

    // Sorted by (s, t); only nonzero entries are stored.
    void sort() {
        std::sort(entries_.begin(), entries_.end(), [](const E2Entry& a, const E2Entry& b) {
            return a.s != b.s ? a.s < b.s : a.t < b.t;
        });
    }

    const E2Entry* find(std::int64_t s, std::int64_t t) const {
        for (const E2Entry& e : entries_)
            if (e.s == s && e.t == t)
                return &e;
        return nullptr;
    }

    std::int64_t dim_at(std::int64_t s, std::int64_t t) const {
        const E2Entry* e = find(s, t);
        return e ? e->dim : 0;
    }

    std::map<std::string, std::string> metadata;

    friend bool operator==(const E2Page& a, const E2Page& b) {
        return a.entries_ == b.entries_;
    }

  private:
    std::vector<E2Entry> entries_;
};

// Bounded complex of graded modules, levels 0..N, with degree-preserving
// integer differential matrices (interpreted mod p when the domain is F_p).
class CochainComplex {
  public:
    CochainComplex(CoefficientDomain domain, std::vector<GradedVectorSpace> levels,
                   std::vector<IntMat> diffs)
        : domain_(domain), levels_(std::move(levels)), diffs_(std::move(diffs)) {
        if (levels_.empty() || diffs_.size() + 1 != levels_.size())
            throw DomainError("CochainComplex: need N+1 levels and N differentials");
        for (std::size_t n = 0; n < diffs_.size(); ++n) {
            if (diffs_[n].rows() != static_cast<EIndex>(levels_[n + 1].dim()) ||
                diffs_[n].cols() != static_cast<EIndex>(levels_[n].dim()))
                throw DomainError("CochainComplex: differential " + std::to_string(n) +
                                  " has the wrong shape");
            for (EIndex r = 0; r < diffs_[n].rows(); ++r)
                for (EIndex c = 0; c < diffs_[n].cols(); ++c)
                    if (!entry_zero(diffs_[n](r, c)) &&
                        levels_[n + 1][static_cast<std::size_t>(r)].degree !=
                            levels_[n][static_cast<std::size_t>(c)].degree)
                        throw DomainError("CochainComplex: differential " + std::to_string(n) +
                                          " does not preserve internal degree");
        }
        for (std::size_t n = 0; n + 1 < diffs_.size(); ++n) {
            IntMat square = diffs_[n + 1] * diffs_[n];
            for (EIndex r = 0; r < square.rows(); ++r)
                for (EIndex c = 0; c < square.cols(); ++c)
                    DIRAC_REQUIRE(entry_zero(square(r, c)),
                                  "CochainComplex: differential does not square to zero");
        }
    }

    const CoefficientDomain& domain() const { return domain_; }
    std::size_t levels() const { return levels_.size(); }
    const GradedVectorSpace& level(std::size_t n) const { return levels_[n]; }
    const IntMat& differential(std::size_t n) const { return diffs_[n]; }

    // Cohomology in every level and internal degree appearing in the window.
    // H^s is reported for s <= levels-2 only, where the outgoing differential
    // exists; the top level serves as the target of the last map.
    E2Page cohomology() const {
        E2Page page;
        std::vector<Degree> degrees;
        for (const GradedVectorSpace& l : levels_)
            for (const BasisElement& b : l.basis())
                if (std::find(degrees.begin(), degrees.end(), b.degree) == degrees.end())
                    degrees.push_back(b.degree);
        std::sort(degrees.begin(), degrees.end());

        for (std::size_t s = 0; s + 1 < levels_.size(); ++s) {
            for (Degree t : degrees) {
                std::vector<EIndex> here = levels_[s].indices_of_degree(t);
                if (here.empty())
                    continue;
                IntMat out = restrict(diffs_[s], levels_[s + 1].indices_of_degree(t), here);
                E2Entry entry;
                entry.s = static_cast<std::int64_t>(s);
                entry.t = t.value;
                if (domain_.is_field()) {
                    const std::int64_t p = domain_.characteristic();
                    EIndex rank_out = rank_mod(fp_matrix_from(out, p), p);
                    EIndex rank_in = 0;
                    if (s > 0) {
                        IntMat in = restrict(diffs_[s - 1], here,
                                             levels_[s - 1].indices_of_degree(t));
                        rank_in = rank_mod(fp_matrix_from(in, p), p);
                    }
                    entry.dim = static_cast<std::int64_t>(here.size()) - rank_out - rank_in;
                } else {
                    // ker/im over Z: express the image in coordinates of a
                    // kernel basis, then read off the cokernel.
                    IntMat kernel = integer_kernel(out);
                    if (s == 0) {
                        entry.dim = kernel.cols();
                    } else {
                        IntMat in = restrict(diffs_[s - 1], here,
                                             levels_[s - 1].indices_of_degree(t));
                        IntMat coords(kernel.cols(), in.cols());
                        for (EIndex c = 0; c < in.cols(); ++c) {
                            auto sol = integer_solve(kernel, in.col(c));
                            DIRAC_REQUIRE(sol.has_value(),
                                          "CochainComplex: image does not land in the kernel");
                            coords.col(c) = *sol;
                        }
                        CokernelInfo info = cokernel(coords);
                        entry.dim = info.free_rank;
                        entry.torsion = std::move(info.torsion);
                    }
                }
                if (entry.dim != 0 || !entry.torsion.empty())
                    page.add(std::move(entry));
            }
        }
        page.sort();
        return page;
    }

  private:
    bool entry_zero(const Integer& v) const {
        return domain_.is_field() ? (v % domain_.characteristic() == 0) : (v == 0);
    }

    static IntMat restrict(const IntMat& m, const std::vector<EIndex>& rows,
                           const std::vector<EIndex>& cols) {
        IntMat out(static_cast<EIndex>(rows.size()), static_cast<EIndex>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                out(static_cast<EIndex>(r), static_cast<EIndex>(c)) = m(rows[r], cols[c]);
        return out;
    }

    CoefficientDomain domain_;
    std::vector<GradedVectorSpace> levels_;
    std::vector<IntMat> diffs_;
};

}  // namespace dirac
