#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirac/degree.hpp"
#include "dirac/filtered_aut.hpp"
#include "dirac/linalg.hpp"
#include "dirac/parallel.hpp"
#include "dirac/polynomial.hpp"

namespace dirac {

inline void require_odd_prime(std::int64_t p, const char* where) {
    if (p == 2)
        throw DomainError(std::string(where) + ": p = 2 uses a different coproduct; only odd primes are supported");
    if (!CoefficientDomain::is_prime(p))
        throw DomainError(std::string(where) + ": " + std::to_string(p) + " is not prime");
}

// Monomial basis element tau_{i_1}...tau_{i_k} * prod xi_i^{e_i} with the tau
// indices strictly increasing. tau_i is exterior of degree 2p^i - 1, xi_i is
// polynomial of degree 2p^i - 2.
struct MilnorBasisElement {
    std::vector<std::uint32_t> tau;                           // strictly increasing
    std::vector<std::pair<std::uint32_t, std::uint32_t>> xi;  // (index >= 1, exponent >= 1), increasing

    static MilnorBasisElement one() { return {}; }
    bool is_one() const { return tau.empty() && xi.empty(); }

    bool odd_degree() const { return tau.size() % 2 != 0; }

    std::int64_t degree(std::int64_t p) const {
        std::int64_t d = 0;
        for (std::uint32_t i : tau)
            d += 2 * checked_pow(p, i) - 1;
        for (auto [i, e] : xi)
            d += e * (2 * checked_pow(p, i) - 2);
        return d;
    }

    void validate() const {
        for (std::size_t k = 1; k < tau.size(); ++k)
            if (tau[k] <= tau[k - 1])
                throw DomainError("MilnorBasisElement: tau indices must strictly increase");
        for (std::size_t k = 0; k < xi.size(); ++k) {
            if (xi[k].first == 0 || xi[k].second == 0)
                throw DomainError("MilnorBasisElement: xi needs index >= 1 and exponent >= 1");
            if (k > 0 && xi[k].first <= xi[k - 1].first)
                throw DomainError("MilnorBasisElement: xi indices must strictly increase");
        }
    }

    friend bool operator==(const MilnorBasisElement&, const MilnorBasisElement&) = default;
    friend bool operator<(const MilnorBasisElement& a, const MilnorBasisElement& b) {
        if (a.tau != b.tau)
            return a.tau < b.tau;
        return a.xi < b.xi;
    }

    std::string to_string() const {
        if (is_one())
            return "1";
        std::string s;
        for (std::uint32_t i : tau)
            s += (s.empty() ? "" : "*") + ("tau" + std::to_string(i));
        for (auto [i, e] : xi) {
            s += (s.empty() ? "" : "*") + ("xi" + std::to_string(i));
            if (e > 1)
                s += "^" + std::to_string(e);
        }
        return s;
    }
};

// Product of two basis monomials: zero if a tau index repeats, otherwise the
// merged monomial with the sign of interleaving the two tau words.
inline std::optional<std::pair<int, MilnorBasisElement>> multiply_basis(
    const MilnorBasisElement& x, const MilnorBasisElement& y) {
    MilnorBasisElement r;
    std::size_t i = 0, j = 0;
    std::uint64_t inversions = 0;
    while (i < x.tau.size() || j < y.tau.size()) {
        if (j == y.tau.size() || (i < x.tau.size() && x.tau[i] < y.tau[j])) {
            r.tau.push_back(x.tau[i++]);
        } else if (i == x.tau.size() || y.tau[j] < x.tau[i]) {
            inversions += x.tau.size() - i;  // crosses the rest of x's tau word
            r.tau.push_back(y.tau[j++]);
        } else {
            return std::nullopt;  // tau_k^2 = 0
        }
    }
    std::size_t a = 0, b = 0;
    while (a < x.xi.size() || b < y.xi.size()) {
        if (b == y.xi.size() || (a < x.xi.size() && x.xi[a].first < y.xi[b].first))
            r.xi.push_back(x.xi[a++]);
        else if (a == x.xi.size() || y.xi[b].first < x.xi[a].first)
            r.xi.push_back(y.xi[b++]);
        else {
            r.xi.push_back({x.xi[a].first, x.xi[a].second + y.xi[b].second});
            ++a;
            ++b;
        }
    }
    return std::make_pair((inversions & 1) ? -1 : 1, std::move(r));
}

// F_p-linear combination of Milnor basis monomials.
class SteenrodElement {
  public:
    explicit SteenrodElement(std::int64_t p) : p_(p) { require_odd_prime(p, "SteenrodElement"); }

    static SteenrodElement zero(std::int64_t p) { return SteenrodElement(p); }
    static SteenrodElement unit(std::int64_t p) {
        return basis(p, MilnorBasisElement::one());
    }
    static SteenrodElement basis(std::int64_t p, MilnorBasisElement m, std::int64_t c = 1) {
        SteenrodElement r(p);
        m.validate();
        r.add_term(std::move(m), c);
        return r;
    }

    std::int64_t p() const { return p_; }
    const std::map<MilnorBasisElement, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(MilnorBasisElement m, std::int64_t c) {
        c = mod_reduce(c, p_);
        if (c == 0)
            return;
        auto [it, fresh] = terms_.try_emplace(std::move(m), 0);
        it->second = mod_reduce(it->second + c, p_);
        if (it->second == 0)
            terms_.erase(it);
    }

    std::int64_t counit() const {
        auto it = terms_.find(MilnorBasisElement::one());
        return it == terms_.end() ? 0 : it->second;
    }

    SteenrodElement& operator+=(const SteenrodElement& o) {
        check(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    SteenrodElement& operator-=(const SteenrodElement& o) {
        check(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    friend SteenrodElement operator+(SteenrodElement a, const SteenrodElement& b) {
        a += b;
        return a;
    }
    friend SteenrodElement operator-(SteenrodElement a, const SteenrodElement& b) {
        a -= b;
        return a;
    }
    friend SteenrodElement operator*(std::int64_t s, SteenrodElement a) {
        std::map<MilnorBasisElement, std::int64_t> old = std::move(a.terms_);
        a.terms_.clear();
        for (const auto& [m, c] : old)
            a.add_term(m, c * s);
        return a;
    }
    friend SteenrodElement operator*(const SteenrodElement& a, const SteenrodElement& b) {
        a.check(b);
        SteenrodElement r(a.p_);
        for (const auto& [m1, c1] : a.terms_)
            for (const auto& [m2, c2] : b.terms_)
                if (auto prod = multiply_basis(m1, m2))
                    r.add_term(prod->second, prod->first * c1 * c2);
        return r;
    }

    friend bool operator==(const SteenrodElement& a, const SteenrodElement& b) {
        return a.p_ == b.p_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty())
            return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty())
                s += " + ";
            if (c != 1 || m.is_one())
                s += std::to_string(c) + (m.is_one() ? "" : "*");
            if (!m.is_one())
                s += m.to_string();
        }
        return s;
    }

  private:
    void check(const SteenrodElement& o) const {
        if (p_ != o.p_)
            throw DomainError("SteenrodElement: primes differ");
    }

    std::int64_t p_;
    std::map<MilnorBasisElement, std::int64_t> terms_;
};

inline SteenrodElement hopf_multiply(const SteenrodElement& a, const SteenrodElement& b) {
    return a * b;
}

// Tensor square with the Koszul sign rule (u1 (x) v1)(u2 (x) v2) =
// (-1)^{|v1||u2|} u1 u2 (x) v1 v2.
class TensorElement {
  public:
    using Key = std::pair<MilnorBasisElement, MilnorBasisElement>;

    explicit TensorElement(std::int64_t p) : p_(p) { require_odd_prime(p, "TensorElement"); }

    static TensorElement unit(std::int64_t p) {
        TensorElement r(p);
        r.add_term(MilnorBasisElement::one(), MilnorBasisElement::one(), 1);
        return r;
    }
    static TensorElement basis(std::int64_t p, MilnorBasisElement u, MilnorBasisElement v,
                               std::int64_t c = 1) {
        TensorElement r(p);
        u.validate();
        v.validate();
        r.add_term(std::move(u), std::move(v), c);
        return r;
    }

    std::int64_t p() const { return p_; }
    const std::map<Key, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(MilnorBasisElement u, MilnorBasisElement v, std::int64_t c) {
        c = mod_reduce(c, p_);
        if (c == 0)
            return;
        auto [it, fresh] = terms_.try_emplace({std::move(u), std::move(v)}, 0);
        it->second = mod_reduce(it->second + c, p_);
        if (it->second == 0)
            terms_.erase(it);
    }

    TensorElement& operator+=(const TensorElement& o) {
        check(o);
        for (const auto& [k, c] : o.terms_)
            add_term(k.first, k.second, c);
        return *this;
    }
    TensorElement& operator-=(const TensorElement& o) {
        check(o);
        for (const auto& [k, c] : o.terms_)
            add_term(k.first, k.second, -c);
        return *this;
    }
    friend TensorElement operator+(TensorElement a, const TensorElement& b) {
        a += b;
        return a;
    }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) {
        a -= b;
        return a;
    }
    friend TensorElement operator*(const TensorElement& a, const TensorElement& b) {
        a.check(b);
        TensorElement r(a.p_);
        for (const auto& [k1, c1] : a.terms_)
            for (const auto& [k2, c2] : b.terms_) {
                int sign = (k1.second.odd_degree() && k2.first.odd_degree()) ? -1 : 1;
                auto left = multiply_basis(k1.first, k2.first);
                if (!left)
                    continue;
                auto right = multiply_basis(k1.second, k2.second);
                if (!right)
                    continue;
                r.add_term(left->second, right->second,
                           sign * left->first * right->first * c1 * c2);
            }
        return r;
    }

    TensorElement pow(std::uint32_t n) const {
        TensorElement r = unit(p_);
        for (std::uint32_t k = 0; k < n; ++k)
            r = r * *this;
        return r;
    }

    // Swaps the factors with the Koszul sign.
    TensorElement transposed() const {
        TensorElement r(p_);
        for (const auto& [k, c] : terms_) {
            int sign = (k.first.odd_degree() && k.second.odd_degree()) ? -1 : 1;
            r.add_term(k.second, k.first, sign * c);
        }
        return r;
    }

    friend bool operator==(const TensorElement& a, const TensorElement& b) {
        return a.p_ == b.p_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty())
            return "0";
        std::string s;
        for (const auto& [k, c] : terms_) {
            if (!s.empty())
                s += " + ";
            if (c != 1)
                s += std::to_string(c) + "*";
            s += k.first.to_string() + "(x)" + k.second.to_string();
        }
        return s;
    }

  private:
    void check(const TensorElement& o) const {
        if (p_ != o.p_)
            throw DomainError("TensorElement: primes differ");
    }

    std::int64_t p_;
    std::map<Key, std::int64_t> terms_;
};

class Tensor3Element {
  public:
    using Key = std::array<MilnorBasisElement, 3>;

    explicit Tensor3Element(std::int64_t p) : p_(p) {}

    void add_term(Key k, std::int64_t c) {
        c = mod_reduce(c, p_);
        if (c == 0)
            return;
        auto [it, fresh] = terms_.try_emplace(std::move(k), 0);
        it->second = mod_reduce(it->second + c, p_);
        if (it->second == 0)
            terms_.erase(it);
    }

    const std::map<Key, std::int64_t>& terms() const { return terms_; }

    friend bool operator==(const Tensor3Element& a, const Tensor3Element& b) {
        return a.p_ == b.p_ && a.terms_ == b.terms_;
    }

  private:
    std::int64_t p_;
    std::map<Key, std::int64_t> terms_;
};

// Coproduct on the generators:
//   psi(tau_i) = tau_i (x) 1 + sum_{j <= i} xi_{i-j}^{p^j} (x) tau_j
//   psi(xi_i)  = sum_{j <= i} xi_{i-j}^{p^j} (x) xi_j       (xi_0 = 1)
inline TensorElement psi_tau(std::int64_t p, std::uint32_t i) {
    TensorElement r(p);
    r.add_term(MilnorBasisElement{{i}, {}}, MilnorBasisElement::one(), 1);
    for (std::uint32_t j = 0; j <= i; ++j) {
        MilnorBasisElement left;
        if (i - j > 0)
            left.xi.push_back({i - j, static_cast<std::uint32_t>(checked_pow(p, j))});
        r.add_term(std::move(left), MilnorBasisElement{{j}, {}}, 1);
    }
    return r;
}

inline TensorElement psi_xi(std::int64_t p, std::uint32_t i) {
    TensorElement r(p);
    for (std::uint32_t j = 0; j <= i; ++j) {
        MilnorBasisElement left, right;
        if (i - j > 0)
            left.xi.push_back({i - j, static_cast<std::uint32_t>(checked_pow(p, j))});
        if (j > 0)
            right.xi.push_back({j, 1});
        r.add_term(std::move(left), std::move(right), 1);
    }
    return r;
}

// Multiplicative extension of the coproduct to a basis monomial, multiplying
// the generator coproducts in the monomial's canonical word order.
inline TensorElement psi(std::int64_t p, const MilnorBasisElement& m) {
    TensorElement r = TensorElement::unit(p);
    for (std::uint32_t i : m.tau)
        r = r * psi_tau(p, i);
    for (auto [i, e] : m.xi)
        r = r * psi_xi(p, i).pow(e);
    return r;
}

inline TensorElement psi(const SteenrodElement& x) {
    TensorElement r(x.p());
    for (const auto& [m, c] : x.terms()) {
        TensorElement t = psi(x.p(), m);
        for (const auto& [k, v] : t.terms())
            r.add_term(k.first, k.second, v * c);
    }
    return r;
}

inline Tensor3Element psi_on_left(const TensorElement& t) {
    Tensor3Element r(t.p());
    for (const auto& [k, c] : t.terms()) {
        TensorElement inner = psi(t.p(), k.first);
        for (const auto& [ik, ic] : inner.terms())
            r.add_term({ik.first, ik.second, k.second}, ic * c);
    }
    return r;
}

inline Tensor3Element psi_on_right(const TensorElement& t) {
    Tensor3Element r(t.p());
    for (const auto& [k, c] : t.terms()) {
        TensorElement inner = psi(t.p(), k.second);
        for (const auto& [ik, ic] : inner.terms())
            r.add_term({k.first, ik.first, ik.second}, ic * c);
    }
    return r;
}

// Collapse of the left (resp. right) tensor factor along the counit.
inline SteenrodElement counit_left(const TensorElement& t) {
    SteenrodElement r(t.p());
    for (const auto& [k, c] : t.terms())
        if (k.first.is_one())
            r.add_term(k.second, c);
    return r;
}

inline SteenrodElement counit_right(const TensorElement& t) {
    SteenrodElement r(t.p());
    for (const auto& [k, c] : t.terms())
        if (k.second.is_one())
            r.add_term(k.first, c);
    return r;
}

inline std::int64_t degree_of(std::int64_t p, const MilnorBasisElement& m) {
    require_odd_prime(p, "degree_of");
    return m.degree(p);
}

// All basis monomials of the exact degree, in the canonical monomial order.
inline std::vector<MilnorBasisElement> basis_in_degree(std::int64_t p, std::int64_t degree) {
    require_odd_prime(p, "basis_in_degree");
    std::vector<MilnorBasisElement> out;
    if (degree < 0)
        return out;

    std::vector<std::uint32_t> taus;  // indices with 2p^i - 1 <= degree
    for (std::uint32_t i = 0; 2 * checked_pow(p, i) - 1 <= degree; ++i)
        taus.push_back(i);
    std::vector<std::uint32_t> xis;  // indices >= 1 with 2p^i - 2 <= degree
    for (std::uint32_t i = 1; 2 * checked_pow(p, i) - 2 <= degree; ++i)
        xis.push_back(i);

    MilnorBasisElement cur;
    auto rec_xi = [&](auto&& self, std::size_t k, std::int64_t remaining) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (k == xis.size())
            return;
        std::int64_t d = 2 * checked_pow(p, xis[k]) - 2;
        self(self, k + 1, remaining);  // exponent 0
        for (std::int64_t e = 1; e * d <= remaining; ++e) {
            cur.xi.push_back({xis[k], static_cast<std::uint32_t>(e)});
            self(self, k + 1, remaining - e * d);
            cur.xi.pop_back();
        }
    };
    auto rec_tau = [&](auto&& self, std::size_t k, std::int64_t remaining) -> void {
        rec_xi(rec_xi, 0, remaining);
        for (std::size_t t = k; t < taus.size(); ++t) {
            std::int64_t d = 2 * checked_pow(p, taus[t]) - 1;
            if (d > remaining)
                break;
            cur.tau.push_back(taus[t]);
            self(self, t + 1, remaining - d);
            cur.tau.pop_back();
        }
    };
    rec_tau(rec_tau, 0, degree);
    std::sort(out.begin(), out.end());
    return out;
}

struct PoincareRow {
    std::int64_t degree = 0;
    std::int64_t dimension = 0;
};

inline std::vector<PoincareRow> poincare_dims(std::int64_t p, std::int64_t max_degree) {
    require_odd_prime(p, "poincare_dims");
    std::vector<PoincareRow> rows;
    for (std::int64_t d = 0; d <= max_degree; ++d)
        rows.push_back({d, static_cast<std::int64_t>(basis_in_degree(p, d).size())});
    return rows;
}

struct HopfReport {
    std::int64_t p = 0;
    std::int64_t max_degree = 0;
    std::int64_t elements_checked = 0;
    std::int64_t pairs_checked = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// Coassociativity, counit, and multiplicativity of the coproduct on every
// basis element (resp. pair of elements) in total degree <= max_degree.
inline HopfReport verify_hopf(std::int64_t p, std::int64_t max_degree, unsigned threads = 1) {
    require_odd_prime(p, "verify_hopf");
    HopfReport report;
    report.p = p;
    report.max_degree = max_degree;

    std::vector<std::vector<MilnorBasisElement>> by_degree;
    for (std::int64_t d = 0; d <= max_degree; ++d)
        by_degree.push_back(basis_in_degree(p, d));

    // Per-degree coalgebra checks.
    std::vector<std::vector<std::string>> coal_violations(by_degree.size());
    std::vector<std::int64_t> coal_counts(by_degree.size(), 0);
    parallel_for(by_degree.size(), threads, [&](std::size_t d) {
        for (const MilnorBasisElement& m : by_degree[d]) {
            TensorElement t = psi(p, m);
            if (!(psi_on_left(t) == psi_on_right(t)))
                coal_violations[d].push_back("coassociativity fails on " + m.to_string());
            SteenrodElement e = SteenrodElement::basis(p, m);
            if (!(counit_left(t) == e) || !(counit_right(t) == e))
                coal_violations[d].push_back("counit fails on " + m.to_string());
            ++coal_counts[d];
        }
    });

    // Multiplicativity over unordered pairs of positive-degree elements.
    std::vector<std::pair<std::size_t, std::size_t>> degree_pairs;
    for (std::size_t d1 = 1; d1 <= static_cast<std::size_t>(max_degree); ++d1)
        for (std::size_t d2 = d1; d1 + d2 <= static_cast<std::size_t>(max_degree); ++d2)
            degree_pairs.push_back({d1, d2});
    std::vector<std::vector<std::string>> mult_violations(degree_pairs.size());
    std::vector<std::int64_t> mult_counts(degree_pairs.size(), 0);
    parallel_for(degree_pairs.size(), threads, [&](std::size_t k) {
        auto [d1, d2] = degree_pairs[k];
        const auto& left = by_degree[d1];
        const auto& right = by_degree[d2];
        for (std::size_t i = 0; i < left.size(); ++i) {
            std::size_t j0 = (d1 == d2) ? i : 0;
            for (std::size_t j = j0; j < right.size(); ++j) {
                SteenrodElement prod =
                    SteenrodElement::basis(p, left[i]) * SteenrodElement::basis(p, right[j]);
                TensorElement lhs = psi(prod);
                TensorElement rhs = psi(p, left[i]) * psi(p, right[j]);
                if (!(lhs == rhs))
                    mult_violations[k].push_back("coproduct not multiplicative on " +
                                                 left[i].to_string() + " , " +
                                                 right[j].to_string());
                ++mult_counts[k];
            }
        }
    });

    for (std::size_t d = 0; d < by_degree.size(); ++d) {
        report.elements_checked += coal_counts[d];
        for (std::string& v : coal_violations[d])
            report.violations.push_back(std::move(v));
    }
    for (std::size_t k = 0; k < degree_pairs.size(); ++k) {
        report.pairs_checked += mult_counts[k];
        for (std::string& v : mult_violations[k])
            report.violations.push_back(std::move(v));
    }
    return report;
}

// Antipode by convolution inversion: on a basis element m of positive degree,
// chi(m) = -sum chi(u) v over the coproduct terms u (x) v with v != 1.
inline SteenrodElement antipode(const SteenrodElement& x) {
    const std::int64_t p = x.p();
    std::map<MilnorBasisElement, SteenrodElement> memo;
    auto chi_basis = [&](auto&& self, const MilnorBasisElement& m) -> const SteenrodElement& {
        auto it = memo.find(m);
        if (it != memo.end())
            return it->second;
        SteenrodElement r(p);
        if (m.is_one()) {
            r = SteenrodElement::unit(p);
        } else {
            TensorElement cop = psi(p, m);
            for (const auto& [k, c] : cop.terms()) {
                if (k.second.is_one())
                    continue;
                r -= c * (self(self, k.first) * SteenrodElement::basis(p, k.second));
            }
        }
        return memo.emplace(m, std::move(r)).first->second;
    };
    SteenrodElement out(p);
    for (const auto& [m, c] : x.terms())
        out += c * chi_basis(chi_basis, m);
    return out;
}

// ---------------------------------------------------------------------------
// Duality with the filtered automorphism picture

// Packages generator images of the dual algebra into a filtered automorphism:
// tau_i -> a_i and xi_i -> b_i, with the degree constraints checked by the
// FilteredAutomorphism constructor.
inline FilteredAutomorphism automorphism_from_character(std::int64_t p, TablePtr ring,
                                                        std::vector<GradedPolynomial> tau_images,
                                                        std::vector<GradedPolynomial> xi_images) {
    require_odd_prime(p, "automorphism_from_character");
    if (tau_images.size() != xi_images.size() + 1)
        throw DomainError("automorphism_from_character: need tau_0..tau_m and xi_1..xi_m images");
    return FilteredAutomorphism(p, std::move(ring), std::move(tau_images), std::move(xi_images));
}

enum class DualityOrientation { LeftOfPair, RightOfPair };

struct DualityLine {
    std::string generator;
    bool matched = false;
    std::string computed;
    std::string expected;
};

struct DualityReport {
    std::int64_t p = 0;
    std::int64_t jet_order = 0;
    DualityOrientation orientation = DualityOrientation::LeftOfPair;
    std::vector<DualityLine> lines;

    bool ok() const {
        for (const DualityLine& l : lines)
            if (!l.matched)
                return false;
        return true;
    }
};

// Compares the closed composition of two generic filtered automorphisms with
// the coproduct of the dual algebra: the composite's coefficient of
// gamma^{p^n} in each coordinate must embed psi(tau_n) resp. psi(xi_n) into
// the two-sided ring generated by left and right copies of the generators.
//
// The orientation selects which tensor factor hosts the first-applied
// automorphism; both choices are checked against the correspondingly
// transposed coproduct.
inline DualityReport duality_check(std::int64_t p, std::int64_t jet_order,
                                   DualityOrientation orient = DualityOrientation::RightOfPair) {
    require_odd_prime(p, "duality_check");
    if (jet_order < 0)
        throw DomainError("duality_check: negative jet order");
    const std::size_t m = static_cast<std::size_t>(jet_order);

    // Ring carrying left and right copies of tau_0..tau_m, xi_1..xi_m.
    std::vector<Generator> gens;
    for (int side = 0; side < 2; ++side) {
        std::string s = side == 0 ? "L" : "R";
        for (std::size_t i = 0; i <= m; ++i)
            gens.push_back({"tau" + s + std::to_string(i),
                            Degree{2 * checked_pow(p, static_cast<std::int64_t>(i)) - 1}});
        for (std::size_t i = 1; i <= m; ++i)
            gens.push_back({"xi" + s + std::to_string(i),
                            Degree{2 * checked_pow(p, static_cast<std::int64_t>(i)) - 2}});
    }
    TablePtr ring = make_table(std::move(gens));
    CoefficientDomain dom = CoefficientDomain::prime_field(p);

    auto gen_poly = [&](const std::string& name) {
        return GradedPolynomial::generator(dom, ring, name);
    };
    auto side_images = [&](const std::string& s) {
        std::vector<GradedPolynomial> taus, xis;
        for (std::size_t i = 0; i <= m; ++i)
            taus.push_back(gen_poly("tau" + s + std::to_string(i)));
        for (std::size_t i = 1; i <= m; ++i)
            xis.push_back(gen_poly("xi" + s + std::to_string(i)));
        return std::make_pair(std::move(taus), std::move(xis));
    };

    bool first_on_right = orient == DualityOrientation::RightOfPair;
    auto [f_taus, f_xis] = side_images(first_on_right ? "R" : "L");
    auto [g_taus, g_xis] = side_images(first_on_right ? "L" : "R");
    FilteredAutomorphism f = automorphism_from_character(p, ring, f_taus, f_xis);
    FilteredAutomorphism g = automorphism_from_character(p, ring, g_taus, g_xis);
    FilteredAutomorphism h = compose_filtered(f, g);

    // Monomial embedding u (x) v -> uL * vR; multiplication supplies the signs.
    auto embed_one = [&](const MilnorBasisElement& u, const std::string& s) {
        GradedPolynomial r = GradedPolynomial::one(dom, ring);
        for (std::uint32_t i : u.tau)
            r = r * gen_poly("tau" + s + std::to_string(i));
        for (auto [i, e] : u.xi)
            r = r * gen_poly("xi" + s + std::to_string(i)).pow(e);
        return r;
    };
    auto embed = [&](const TensorElement& t) {
        GradedPolynomial r = GradedPolynomial::zero(dom, ring);
        for (const auto& [k, c] : t.terms())
            r += Integer(c) * (embed_one(k.first, "L") * embed_one(k.second, "R"));
        return r;
    };

    DualityReport report;
    report.p = p;
    report.jet_order = jet_order;
    report.orientation = orient;
    auto compare = [&](const std::string& label, const GradedPolynomial& computed,
                       const TensorElement& coproduct) {
        TensorElement expected = first_on_right ? coproduct : coproduct.transposed();
        GradedPolynomial want = embed(expected);
        report.lines.push_back(
            {label, computed == want, computed.to_string(), want.to_string()});
    };
    for (std::size_t n = 0; n <= m; ++n)
        compare("tau" + std::to_string(n), h.a(n), psi_tau(p, static_cast<std::uint32_t>(n)));
    for (std::size_t n = 1; n <= m; ++n)
        compare("xi" + std::to_string(n), h.b(n), psi_xi(p, static_cast<std::uint32_t>(n)));
    return report;
}

}  // namespace dirac
