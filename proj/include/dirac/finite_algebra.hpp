#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dirac/degree.hpp"
#include "dirac/domain.hpp"
#include "dirac/linalg.hpp"

namespace dirac {

struct BasisElement {
    std::string name;
    Degree degree;

    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

// Finite-dimensional graded vector space with a named homogeneous basis.
class GradedVectorSpace {
  public:
    GradedVectorSpace() = default;
    explicit GradedVectorSpace(std::vector<BasisElement> basis) : basis_(std::move(basis)) {}

    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const BasisElement& operator[](std::size_t i) const { return basis_[i]; }

    std::vector<EIndex> indices_of_degree(Degree d) const {
        std::vector<EIndex> out;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].degree == d)
                out.push_back(static_cast<EIndex>(i));
        return out;
    }

    std::vector<Degree> degrees_present() const {
        std::vector<Degree> out;
        for (const BasisElement& b : basis_)
            if (std::find(out.begin(), out.end(), b.degree) == out.end())
                out.push_back(b.degree);
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const GradedVectorSpace&, const GradedVectorSpace&) = default;

  private:
    std::vector<BasisElement> basis_;
};

// Finite-dimensional graded-commutative F_p-algebra given by structure
// constants. Unit, associativity, degree additivity, and the Koszul sign rule
// are verified at construction.
class FiniteGradedAlgebra {
  public:
    FiniteGradedAlgebra(std::int64_t p, GradedVectorSpace space, FpVec unit,
                        std::vector<FpMat> right_mult_tables)
        : p_(p), space_(std::move(space)), unit_(std::move(unit)),
          tables_(std::move(right_mult_tables)) {
        if (!CoefficientDomain::is_prime(p_))
            throw DomainError("FiniteGradedAlgebra: p must be prime");
        const EIndex n = static_cast<EIndex>(space_.dim());
        if (unit_.size() != n || tables_.size() != space_.dim())
            throw DomainError("FiniteGradedAlgebra: inconsistent dimensions");
        for (const FpMat& t : tables_)
            if (t.rows() != n || t.cols() != n)
                throw DomainError("FiniteGradedAlgebra: multiplication table has wrong shape");
        for (EIndex i = 0; i < n; ++i)
            unit_(i) = mod_reduce(unit_(i), p_);
        for (FpMat& t : tables_)
            for (EIndex r = 0; r < n; ++r)
                for (EIndex c = 0; c < n; ++c)
                    t(r, c) = mod_reduce(t(r, c), p_);
        validate();
    }

    std::int64_t p() const { return p_; }
    const GradedVectorSpace& space() const { return space_; }
    std::size_t dim() const { return space_.dim(); }
    const FpVec& unit() const { return unit_; }

    // b_i * b_j as a coordinate vector.
    FpVec basis_product(EIndex i, EIndex j) const { return tables_[static_cast<std::size_t>(j)].col(i); }

    FpVec multiply(const FpVec& x, const FpVec& y) const {
        const EIndex n = static_cast<EIndex>(dim());
        FpVec out = FpVec::Zero(n);
        for (EIndex j = 0; j < n; ++j) {
            if (mod_reduce(y(j), p_) == 0)
                continue;
            FpVec xj = tables_[static_cast<std::size_t>(j)] * x;
            for (EIndex r = 0; r < n; ++r)
                out(r) = mod_reduce(out(r) + xj(r) % p_ * (y(j) % p_), p_);
        }
        return out;
    }

    std::optional<Degree> element_degree(const FpVec& x) const {
        std::optional<Degree> d;
        for (EIndex i = 0; i < x.size(); ++i) {
            if (mod_reduce(x(i), p_) == 0)
                continue;
            Degree di = space_[static_cast<std::size_t>(i)].degree;
            if (!d)
                d = di;
            else if (*d != di)
                return std::nullopt;
        }
        return d ? d : std::optional<Degree>(Degree{0});
    }

    // The ground field itself.
    static FiniteGradedAlgebra field(std::int64_t p) {
        GradedVectorSpace space({{"1", Degree{0}}});
        FpVec unit(1);
        unit << 1;
        std::vector<FpMat> tables{FpMat::Identity(1, 1)};
        return FiniteGradedAlgebra(p, std::move(space), std::move(unit), std::move(tables));
    }

    // F_p x ... x F_p with n idempotent coordinates.
    static FiniteGradedAlgebra split_product(std::int64_t p, std::int64_t n) {
        if (n < 1)
            throw DomainError("split_product: need n >= 1 factors");
        std::vector<BasisElement> basis;
        for (std::int64_t i = 0; i < n; ++i)
            basis.push_back({"e" + std::to_string(i + 1), Degree{0}});
        FpVec unit = FpVec::Ones(n);
        std::vector<FpMat> tables;
        for (std::int64_t j = 0; j < n; ++j) {
            FpMat t = FpMat::Zero(n, n);
            t(j, j) = 1;  // e_i e_j = delta_ij e_j
            tables.push_back(std::move(t));
        }
        return FiniteGradedAlgebra(p, GradedVectorSpace(std::move(basis)), std::move(unit),
                                   std::move(tables));
    }

    // F_p[x]/(x^power) on a generator of the given degree. An odd-degree
    // generator squares to zero in odd characteristic, so power must be 2 then.
    static FiniteGradedAlgebra truncated_polynomial(std::int64_t p, const std::string& name,
                                                    Degree degree, std::int64_t power) {
        if (power < 2)
            throw DomainError("truncated_polynomial: need power >= 2");
        if (degree.odd() && p != 2 && power != 2)
            throw DomainError("truncated_polynomial: an odd generator already squares to zero");
        std::vector<BasisElement> basis{{"1", Degree{0}}};
        for (std::int64_t e = 1; e < power; ++e)
            basis.push_back({e == 1 ? name : name + "^" + std::to_string(e),
                             Degree{e * degree.value}});
        FpVec unit = FpVec::Zero(power);
        unit(0) = 1;
        std::vector<FpMat> tables;
        for (std::int64_t j = 0; j < power; ++j) {
            FpMat t = FpMat::Zero(power, power);
            for (std::int64_t i = 0; i + j < power; ++i)
                t(i + j, i) = 1;  // x^i * x^j = x^{i+j}, no crossings for a single generator
            tables.push_back(std::move(t));
        }
        return FiniteGradedAlgebra(p, GradedVectorSpace(std::move(basis)), std::move(unit),
                                   std::move(tables));
    }

    // Tensor product with the Koszul sign: (a (x) b)(c (x) d) = +-(ac (x) bd).
    static FiniteGradedAlgebra tensor(const FiniteGradedAlgebra& x, const FiniteGradedAlgebra& y) {
        if (x.p() != y.p())
            throw DomainError("FiniteGradedAlgebra::tensor: primes differ");
        const std::int64_t p = x.p();
        const EIndex nx = static_cast<EIndex>(x.dim()), ny = static_cast<EIndex>(y.dim());
        auto fuse = [&](EIndex a, EIndex b) { return a * ny + b; };
        std::vector<BasisElement> basis;
        for (EIndex a = 0; a < nx; ++a)
            for (EIndex b = 0; b < ny; ++b)
                basis.push_back({x.space()[a].name + "(x)" + y.space()[b].name,
                                 x.space()[a].degree + y.space()[b].degree});
        FpVec unit = FpVec::Zero(nx * ny);
        for (EIndex a = 0; a < nx; ++a)
            for (EIndex b = 0; b < ny; ++b)
                unit(fuse(a, b)) = mod_reduce(x.unit()(a) * y.unit()(b), p);
        std::vector<FpMat> tables(static_cast<std::size_t>(nx * ny),
                                  FpMat::Zero(nx * ny, nx * ny));
        for (EIndex c = 0; c < nx; ++c)
            for (EIndex d = 0; d < ny; ++d) {
                FpMat& t = tables[static_cast<std::size_t>(fuse(c, d))];
                for (EIndex a = 0; a < nx; ++a)
                    for (EIndex b = 0; b < ny; ++b) {
                        int sign = (y.space()[b].degree.odd() && x.space()[c].degree.odd()) ? -1 : 1;
                        FpVec ac = x.basis_product(a, c);
                        FpVec bd = y.basis_product(b, d);
                        for (EIndex r = 0; r < nx; ++r) {
                            if (ac(r) == 0)
                                continue;
                            for (EIndex s = 0; s < ny; ++s) {
                                if (bd(s) == 0)
                                    continue;
                                EIndex row = fuse(r, s);
                                t(row, fuse(a, b)) = mod_reduce(
                                    t(row, fuse(a, b)) + sign * ac(r) * bd(s), p);
                            }
                        }
                    }
            }
        return FiniteGradedAlgebra(p, GradedVectorSpace(std::move(basis)), std::move(unit),
                                   std::move(tables));
    }

  private:
    void validate() const {
        const EIndex n = static_cast<EIndex>(dim());
        // Degree additivity.
        for (EIndex i = 0; i < n; ++i)
            for (EIndex j = 0; j < n; ++j) {
                FpVec prod = basis_product(i, j);
                Degree want = space_[static_cast<std::size_t>(i)].degree +
                              space_[static_cast<std::size_t>(j)].degree;
                for (EIndex r = 0; r < n; ++r)
                    if (prod(r) != 0 && space_[static_cast<std::size_t>(r)].degree != want)
                        throw DomainError("FiniteGradedAlgebra: product of '" +
                                          space_[static_cast<std::size_t>(i)].name + "' and '" +
                                          space_[static_cast<std::size_t>(j)].name +
                                          "' is not homogeneous of the expected degree");
            }
        // Unit: concentrated in degree zero and a two-sided identity.
        for (EIndex i = 0; i < n; ++i)
            if (unit_(i) != 0 && space_[static_cast<std::size_t>(i)].degree != Degree{0})
                throw DomainError("FiniteGradedAlgebra: unit has support outside degree zero");
        for (EIndex i = 0; i < n; ++i) {
            FpVec e = FpVec::Zero(n);
            e(i) = 1;
            if (multiply(unit_, e) != e || multiply(e, unit_) != e)
                throw DomainError("FiniteGradedAlgebra: unit law fails on basis element " +
                                  space_[static_cast<std::size_t>(i)].name);
        }
        // Associativity and graded commutativity.
        for (EIndex i = 0; i < n; ++i)
            for (EIndex j = 0; j < n; ++j) {
                FpVec ij = basis_product(i, j);
                FpVec ji = basis_product(j, i);
                int sign = (space_[static_cast<std::size_t>(i)].degree.odd() &&
                            space_[static_cast<std::size_t>(j)].degree.odd())
                               ? -1
                               : 1;
                for (EIndex r = 0; r < n; ++r)
                    if (mod_reduce(ij(r) - sign * ji(r), p_) != 0)
                        throw DomainError("FiniteGradedAlgebra: Koszul commutativity fails");
                for (EIndex k = 0; k < n; ++k) {
                    FpVec ek = FpVec::Zero(n);
                    ek(k) = 1;
                    FpVec left = multiply(ij, ek);
                    FpVec ej = FpVec::Zero(n);
                    ej(j) = 1;
                    FpVec right_inner = basis_product(j, k);
                    FpVec ei = FpVec::Zero(n);
                    ei(i) = 1;
                    FpVec right = multiply(ei, right_inner);
                    if (left != right)
                        throw DomainError("FiniteGradedAlgebra: associativity fails");
                }
            }
    }

    std::int64_t p_;
    GradedVectorSpace space_;
    FpVec unit_;
    std::vector<FpMat> tables_;  // tables_[j] * x = x * b_j
};

}  // namespace dirac
