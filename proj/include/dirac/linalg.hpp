#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

#include "dirac/domain.hpp"
#include "dirac/errors.hpp"

// Let Eigen treat GMP integers as an exact scalar type.
namespace Eigen {
template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
    using Real = mpz_class;
    using NonInteger = mpz_class;
    using Nested = mpz_class;
    using Literal = long;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 1,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 10,
        MulCost = 20
    };
};
}  // namespace Eigen

namespace dirac {

using IntMat = Eigen::Matrix<Integer, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Integer, Eigen::Dynamic, 1>;
using FpMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using FpVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using EIndex = Eigen::Index;

// ---------------------------------------------------------------------------
// Integer matrices

// Fraction-free determinant (Bareiss). Used by tests to certify that the SNF
// transforms are unimodular.
inline Integer determinant(IntMat m) {
    const EIndex n = m.rows();
    if (n != m.cols())
        throw DomainError("determinant: matrix not square");
    if (n == 0)
        return 1;
    Integer sign = 1, prev = 1;
    for (EIndex k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            EIndex pivot = -1;
            for (EIndex i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0)
                return 0;
            m.row(k).swap(m.row(pivot));
            sign = -sign;
        }
        for (EIndex i = k + 1; i < n; ++i)
            for (EIndex j = k + 1; j < n; ++j) {
                Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

struct SmithDecomposition {
    IntMat d;  // diagonal with d_1 | d_2 | ..., entries >= 0
    IntMat u;  // unimodular, rows x rows
    IntMat v;  // unimodular, cols x cols; u * a * v == d

    std::vector<Integer> invariant_factors() const {
        std::vector<Integer> f;
        for (EIndex i = 0; i < std::min(d.rows(), d.cols()); ++i)
            if (d(i, i) != 0)
                f.push_back(d(i, i));
        return f;
    }

    EIndex rank() const {
        EIndex r = 0;
        for (EIndex i = 0; i < std::min(d.rows(), d.cols()); ++i)
            if (d(i, i) != 0)
                ++r;
        return r;
    }
};

// Smith normal form by pivoting on a least-magnitude entry and alternately
// clearing its row and column. Transform matrices are carried along, so
// u * a * v == d holds exactly.
inline SmithDecomposition smith_normal_form(const IntMat& a) {
    SmithDecomposition s;
    const EIndex rows = a.rows(), cols = a.cols();
    IntMat m = a;
    s.u = IntMat::Identity(rows, rows);
    s.v = IntMat::Identity(cols, cols);

    auto abs_less = [](const Integer& x, const Integer& y) {
        return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t()) < 0;
    };

    EIndex t = 0;
    const EIndex steps = std::min(rows, cols);
    while (t < steps) {
        // Least-magnitude nonzero entry of the trailing block.
        EIndex pi = -1, pj = -1;
        for (EIndex i = t; i < rows; ++i)
            for (EIndex j = t; j < cols; ++j)
                if (m(i, j) != 0 && (pi < 0 || abs_less(m(i, j), m(pi, pj)))) {
                    pi = i;
                    pj = j;
                }
        if (pi < 0)
            break;
        if (pi != t) {
            m.row(t).swap(m.row(pi));
            s.u.row(t).swap(s.u.row(pi));
        }
        if (pj != t) {
            m.col(t).swap(m.col(pj));
            s.v.col(t).swap(s.v.col(pj));
        }

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (EIndex i = t + 1; i < rows; ++i) {
                if (m(i, t) == 0)
                    continue;
                Integer q = m(i, t) / m(t, t);
                if (q != 0) {
                    m.row(i) -= q * m.row(t);
                    s.u.row(i) -= q * s.u.row(t);
                }
                if (m(i, t) != 0) {  // remainder smaller than pivot: swap and restart
                    m.row(t).swap(m.row(i));
                    s.u.row(t).swap(s.u.row(i));
                    dirty = true;
                }
            }
            for (EIndex j = t + 1; j < cols; ++j) {
                if (m(t, j) == 0)
                    continue;
                Integer q = m(t, j) / m(t, t);
                if (q != 0) {
                    m.col(j) -= q * m.col(t);
                    s.v.col(j) -= q * s.v.col(t);
                }
                if (m(t, j) != 0) {
                    m.col(t).swap(m.col(j));
                    s.v.col(t).swap(s.v.col(j));
                    dirty = true;
                }
            }
        }

        // Absorb any entry the pivot fails to divide, then redo this step.
        bool redo = false;
        for (EIndex i = t + 1; i < rows && !redo; ++i)
            for (EIndex j = t + 1; j < cols && !redo; ++j)
                if (m(i, j) % m(t, t) != 0) {
                    m.row(t) += m.row(i);
                    s.u.row(t) += s.u.row(i);
                    redo = true;
                }
        if (redo)
            continue;

        if (m(t, t) < 0) {
            m.row(t) = -m.row(t);
            s.u.row(t) = -s.u.row(t);
        }
        ++t;
    }

    s.d = std::move(m);
    return s;
}

// Rank and invariant factors of coker(a) = Z^rows / column-span(a).
struct CokernelInfo {
    std::int64_t free_rank = 0;
    std::vector<Integer> torsion;  // invariant factors > 1, in divisibility order
};

inline CokernelInfo cokernel(const IntMat& a) {
    CokernelInfo info;
    SmithDecomposition s = smith_normal_form(a);
    EIndex r = s.rank();
    info.free_rank = a.rows() - r;
    for (const Integer& f : s.invariant_factors())
        if (f > 1)
            info.torsion.push_back(f);
    return info;
}

// Columns form a basis of ker(a) as a direct summand of Z^cols.
inline IntMat integer_kernel(const IntMat& a) {
    SmithDecomposition s = smith_normal_form(a);
    EIndex r = s.rank();
    return s.v.rightCols(a.cols() - r);
}

// One integral solution of a x = b, if any.
inline std::optional<IntVec> integer_solve(const IntMat& a, const IntVec& b) {
    SmithDecomposition s = smith_normal_form(a);
    IntVec c = s.u * b;
    IntVec y = IntVec::Zero(a.cols());
    EIndex steps = std::min(a.rows(), a.cols());
    for (EIndex i = 0; i < a.rows(); ++i) {
        if (i < steps && s.d(i, i) != 0) {
            if (c(i) % s.d(i, i) != 0)
                return std::nullopt;
            y(i) = c(i) / s.d(i, i);
        } else if (c(i) != 0) {
            return std::nullopt;
        }
    }
    return IntVec(s.v * y);
}

// ---------------------------------------------------------------------------
// Matrices over F_p (entries kept in [0, p); p small enough that products fit
// in 64 bits)

inline std::int64_t mod_reduce(std::int64_t v, std::int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

inline std::int64_t mod_inverse(std::int64_t v, std::int64_t p) {
    std::int64_t t = 0, new_t = 1, r = p, new_r = mod_reduce(v, p);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1)
        throw DomainError("mod_inverse: " + std::to_string(v) + " not invertible mod " +
                          std::to_string(p));
    return mod_reduce(t, p);
}

// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<EIndex> row_reduce_mod(FpMat& m, std::int64_t p) {
    for (EIndex i = 0; i < m.rows(); ++i)
        for (EIndex j = 0; j < m.cols(); ++j)
            m(i, j) = mod_reduce(m(i, j), p);
    std::vector<EIndex> pivots;
    EIndex row = 0;
    for (EIndex col = 0; col < m.cols() && row < m.rows(); ++col) {
        EIndex pr = -1;
        for (EIndex i = row; i < m.rows(); ++i)
            if (m(i, col) != 0) {
                pr = i;
                break;
            }
        if (pr < 0)
            continue;
        m.row(row).swap(m.row(pr));
        std::int64_t inv = mod_inverse(m(row, col), p);
        for (EIndex j = col; j < m.cols(); ++j)
            m(row, j) = mod_reduce(m(row, j) * inv % p, p);
        for (EIndex i = 0; i < m.rows(); ++i) {
            if (i == row)
                continue;
            std::int64_t f = mod_reduce(m(i, col), p);
            if (f == 0)
                continue;
            for (EIndex j = col; j < m.cols(); ++j)
                m(i, j) = mod_reduce(m(i, j) - f * m(row, j) % p, p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline EIndex rank_mod(FpMat m, std::int64_t p) { return static_cast<EIndex>(row_reduce_mod(m, p).size()); }

// Columns span ker(m) over F_p.
inline FpMat kernel_mod(FpMat m, std::int64_t p) {
    const EIndex cols = m.cols();
    std::vector<EIndex> pivots = row_reduce_mod(m, p);
    std::vector<bool> is_pivot(cols, false);
    for (EIndex c : pivots)
        is_pivot[c] = true;
    FpMat k(cols, cols - static_cast<EIndex>(pivots.size()));
    EIndex out = 0;
    for (EIndex free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col])
            continue;
        FpVec v = FpVec::Zero(cols);
        v(free_col) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v(pivots[r]) = mod_reduce(-m(static_cast<EIndex>(r), free_col), p);
        k.col(out++) = v;
    }
    return k;
}

// One solution of m x = b over F_p, if consistent.
inline std::optional<FpVec> solve_mod(const FpMat& m, const FpVec& b, std::int64_t p) {
    FpMat aug(m.rows(), m.cols() + 1);
    aug.leftCols(m.cols()) = m;
    aug.col(m.cols()) = b;
    std::vector<EIndex> pivots = row_reduce_mod(aug, p);
    if (!pivots.empty() && pivots.back() == m.cols())
        return std::nullopt;  // pivot in the constant column
    FpVec x = FpVec::Zero(m.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r)
        x(pivots[r]) = mod_reduce(aug(static_cast<EIndex>(r), m.cols()), p);
    return x;
}

inline FpMat fp_matrix_from(const IntMat& a, std::int64_t p) {
    FpMat m(a.rows(), a.cols());
    for (EIndex i = 0; i < a.rows(); ++i)
        for (EIndex j = 0; j < a.cols(); ++j) {
            Integer r = a(i, j) % p;
            if (r < 0)
                r += p;
            m(i, j) = r.get_si();
        }
    return m;
}

}  // namespace dirac
