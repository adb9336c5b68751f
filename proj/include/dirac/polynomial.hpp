#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirac/degree.hpp"
#include "dirac/domain.hpp"
#include "dirac/generators.hpp"

namespace dirac {

// Dense exponent vector indexed by generator-table position.
using Exponents = std::vector<std::uint32_t>;

inline Degree degree_of(const Exponents& e, const GeneratorTable& table) {
    Degree d{0};
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0)
            d += static_cast<std::int64_t>(e[i]) * table.degree(i);
    return d;
}

// True when the monomial contains an odd generator squared, i.e. lands in the
// 2-torsion part of the free graded-commutative algebra over Z.
inline bool has_odd_square(const Exponents& e, const GeneratorTable& table) {
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] >= 2 && table.degree(i).odd())
            return true;
    return false;
}

// Sign for concatenating two monomials in generator order: each odd-generator
// unit of the right factor crosses every odd unit of the left factor with a
// strictly larger index. Equal indices merge without crossing.
inline int koszul_sign(const Exponents& left, const Exponents& right, const GeneratorTable& table) {
    std::uint64_t crossings = 0;
    std::uint64_t odd_left_above = 0;  // odd units of `left` with index > i, updated descending
    for (std::size_t i = table.size(); i-- > 0;) {
        if (!table.degree(i).odd())
            continue;
        crossings += odd_left_above * right[i];
        odd_left_above += left[i];
    }
    return (crossings & 1) ? -1 : 1;
}

// Element of a free graded-commutative ("Dirac") algebra over Z or F_p.
// Normal form: terms keyed by exponent vectors in lexicographic order with
// canonical coefficients. Over Z a monomial with an odd square keeps its
// coefficient modulo 2; over F_p with p odd such monomials vanish.
class GradedPolynomial {
  public:
    using TermMap = std::map<Exponents, Integer>;

    GradedPolynomial(CoefficientDomain domain, TablePtr table)
        : domain_(domain), table_(std::move(table)) {
        if (!table_)
            throw DomainError("GradedPolynomial: null generator table");
    }

    static GradedPolynomial zero(CoefficientDomain domain, TablePtr table) {
        return GradedPolynomial(domain, std::move(table));
    }

    static GradedPolynomial constant(CoefficientDomain domain, TablePtr table, Integer c) {
        GradedPolynomial r(domain, std::move(table));
        r.add_term(Exponents(r.table().size(), 0), std::move(c));
        return r;
    }

    static GradedPolynomial one(CoefficientDomain domain, TablePtr table) {
        return constant(domain, std::move(table), 1);
    }

    static GradedPolynomial generator(CoefficientDomain domain, TablePtr table, std::size_t i) {
        GradedPolynomial r(domain, std::move(table));
        if (i >= r.table().size())
            throw DomainError("GradedPolynomial::generator: index out of range");
        Exponents e(r.table().size(), 0);
        e[i] = 1;
        r.add_term(std::move(e), 1);
        return r;
    }

    static GradedPolynomial generator(CoefficientDomain domain, TablePtr table,
                                      const std::string& name) {
        std::size_t i = table->index(name);
        return generator(domain, std::move(table), i);
    }

    static GradedPolynomial monomial(CoefficientDomain domain, TablePtr table, Exponents e,
                                     Integer c = Integer(1)) {
        GradedPolynomial r(domain, std::move(table));
        if (e.size() != r.table().size())
            throw DomainError("GradedPolynomial::monomial: exponent vector has wrong length");
        r.add_term(std::move(e), std::move(c));
        return r;
    }

    const CoefficientDomain& domain() const { return domain_; }
    const TablePtr& table_ptr() const { return table_; }
    const GeneratorTable& table() const { return *table_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    Integer coefficient_of(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Integer(0) : it->second;
    }

    // Adds c * x^e and renormalizes that term.
    void add_term(Exponents e, Integer c) {
        if (e.size() != table_->size())
            throw DomainError("GradedPolynomial::add_term: exponent vector has wrong length");
        accumulate(e, std::move(c));
    }

    GradedPolynomial& operator+=(const GradedPolynomial& o) {
        check_compatible(o, "+");
        for (const auto& [e, c] : o.terms_)
            accumulate(e, c);
        return *this;
    }

    GradedPolynomial& operator-=(const GradedPolynomial& o) {
        check_compatible(o, "-");
        for (const auto& [e, c] : o.terms_)
            accumulate(e, -c);
        return *this;
    }

    GradedPolynomial operator-() const {
        GradedPolynomial r(domain_, table_);
        for (const auto& [e, c] : terms_) {
            Exponents e2 = e;
            Integer c2 = -c;
            r.add_term(std::move(e2), std::move(c2));
        }
        return r;
    }

    GradedPolynomial& operator*=(const Integer& s) {
        TermMap old = std::move(terms_);
        terms_.clear();
        for (auto& [e, c] : old) {
            Exponents e2 = e;
            accumulate(e2, c * s);
        }
        return *this;
    }

    friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) {
        a += b;
        return a;
    }
    friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) {
        a -= b;
        return a;
    }
    friend GradedPolynomial operator*(GradedPolynomial a, const Integer& s) {
        a *= s;
        return a;
    }
    friend GradedPolynomial operator*(const Integer& s, GradedPolynomial a) {
        a *= s;
        return a;
    }

    friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
        a.check_compatible(b, "*");
        GradedPolynomial r(a.domain_, a.table_);
        const GeneratorTable& t = a.table();
        for (const auto& [e1, c1] : a.terms_) {
            for (const auto& [e2, c2] : b.terms_) {
                int sign = koszul_sign(e1, e2, t);
                Exponents e(e1.size());
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] = e1[i] + e2[i];
                Integer prod = c1 * c2;
                if (sign < 0)
                    prod = -prod;
                r.accumulate(e, std::move(prod));
            }
        }
        return r;
    }

    GradedPolynomial pow(std::uint64_t n) const {
        GradedPolynomial r = one(domain_, table_);
        GradedPolynomial base = *this;
        while (n > 0) {
            if (n & 1)
                r = r * base;
            n >>= 1;
            if (n)
                base = base * base;
        }
        return r;
    }

    // Degree when homogeneous; nullopt otherwise. The zero polynomial is
    // homogeneous of every degree and reports degree 0.
    std::optional<Degree> homogeneous_degree() const {
        std::optional<Degree> d;
        for (const auto& [e, c] : terms_) {
            Degree de = degree_of(e, *table_);
            if (!d)
                d = de;
            else if (*d != de)
                return std::nullopt;
        }
        return d ? d : std::optional<Degree>(Degree{0});
    }

    bool is_homogeneous_of(Degree d) const {
        for (const auto& [e, c] : terms_)
            if (degree_of(e, *table_) != d)
                return false;
        return true;
    }

    // All terms share one degree parity; required of substitution images.
    std::optional<bool> parity() const {
        std::optional<bool> par;
        for (const auto& [e, c] : terms_) {
            bool b = degree_of(e, *table_).odd();
            if (!par)
                par = b;
            else if (*par != b)
                return std::nullopt;
        }
        return par;
    }

    std::map<Degree, GradedPolynomial> homogeneous_components() const {
        std::map<Degree, GradedPolynomial> parts;
        for (const auto& [e, c] : terms_) {
            Degree d = degree_of(e, *table_);
            auto it = parts.find(d);
            if (it == parts.end())
                it = parts.emplace(d, GradedPolynomial(domain_, table_)).first;
            it->second.add_term(e, c);
        }
        return parts;
    }

    friend bool operator==(const GradedPolynomial& a, const GradedPolynomial& b) {
        return a.domain_ == b.domain_ && same_table(a.table_, b.table_) && a.terms_ == b.terms_;
    }
    friend bool operator!=(const GradedPolynomial& a, const GradedPolynomial& b) {
        return !(a == b);
    }

    std::string to_string() const {
        if (terms_.empty())
            return "0";
        std::string s;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first)
                s += " + ";
            first = false;
            std::string mono = monomial_to_string(e);
            if (mono.empty())
                s += c.get_str();
            else if (c == 1)
                s += mono;
            else if (c == -1)
                s += "-" + mono;
            else
                s += c.get_str() + "*" + mono;
        }
        return s;
    }

    std::string monomial_to_string(const Exponents& e) const {
        std::string s;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (!s.empty())
                s += "*";
            s += table_->name(i);
            if (e[i] > 1)
                s += "^" + std::to_string(e[i]);
        }
        return s;
    }

  private:
    void check_compatible(const GradedPolynomial& o, const char* op) const {
        if (domain_ != o.domain_)
            throw DomainError(std::string("GradedPolynomial: mixed domains in '") + op + "' (" +
                              domain_.describe() + " vs " + o.domain_.describe() + ")");
        if (!same_table(table_, o.table_))
            throw DomainError(std::string("GradedPolynomial: mixed generator tables in '") + op +
                              "'");
    }

    // Torsion rules first, then the domain's canonical representative.
    void normalize(const Exponents& e, Integer& c) const {
        if (has_odd_square(e, *table_)) {
            if (domain_.is_integers() || domain_.characteristic() != 2) {
                if (domain_.is_integers()) {
                    c %= 2;
                    if (c < 0)
                        c += 2;
                } else {
                    c = 0;  // odd p: odd squares vanish
                }
                return;
            }
        }
        c = domain_.reduce(c);
    }

    void accumulate(const Exponents& e, Integer c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            normalize(e, c);
            if (c != 0)
                terms_.emplace(e, std::move(c));
        } else {
            it->second += c;
            normalize(e, it->second);
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    CoefficientDomain domain_;
    TablePtr table_;
    TermMap terms_;
};

// Image data for a graded algebra map out of a free Dirac algebra: generator i
// goes to images[i]. Images must be parity-homogeneous with the parity of the
// source generator, otherwise the Koszul sign rule is not respected.
inline GradedPolynomial substitute_generators(const GradedPolynomial& f,
                                              const std::vector<GradedPolynomial>& images) {
    if (images.size() != f.table().size())
        throw DomainError("substitute_generators: need one image per generator");
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (i > 0 && (images[i].domain() != images[0].domain() ||
                      !same_table(images[i].table_ptr(), images[0].table_ptr())))
            throw DomainError("substitute_generators: images live in different rings");
        if (!images[i].is_zero()) {
            auto par = images[i].parity();
            if (!par)
                throw DomainError("substitute_generators: image of '" + f.table().name(i) +
                                  "' mixes parities");
            if (*par != f.table().degree(i).odd())
                throw DomainError("substitute_generators: image of '" + f.table().name(i) +
                                  "' has the wrong parity");
        }
    }
    CoefficientDomain dom = images.empty() ? f.domain() : images[0].domain();
    TablePtr tgt = images.empty() ? f.table_ptr() : images[0].table_ptr();
    if (dom != f.domain())
        throw DomainError("substitute_generators: coefficient domain mismatch");
    GradedPolynomial result(dom, tgt);
    for (const auto& [e, c] : f.terms()) {
        GradedPolynomial term = GradedPolynomial::constant(dom, tgt, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0)
                term = term * images[i].pow(e[i]);
        result += term;
    }
    return result;
}

// All monomials of the exact target degree, in lexicographic order. Requires
// every generator degree positive so the list is finite. Over an odd prime
// field, odd generators are capped at exponent 1.
inline std::vector<Exponents> monomials_of_degree(const GeneratorTable& table,
                                                  const CoefficientDomain& domain, Degree target) {
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table.degree(i).value <= 0)
            throw DomainError("monomials_of_degree: generator '" + table.name(i) +
                              "' has non-positive degree, graded pieces are not finite");
    std::vector<Exponents> out;
    if (target.value < 0)
        return out;
    Exponents cur(table.size(), 0);
    bool drop_odd_squares = domain.is_field() && domain.characteristic() != 2;
    auto rec = [&](auto&& self, std::size_t i, std::int64_t remaining) -> void {
        if (i == table.size()) {
            if (remaining == 0)
                out.push_back(cur);
            return;
        }
        std::int64_t d = table.degree(i).value;
        std::uint32_t cap = static_cast<std::uint32_t>(remaining / d);
        if (drop_odd_squares && table.degree(i).odd())
            cap = std::min<std::uint32_t>(cap, 1);
        for (std::uint32_t e = 0; e <= cap; ++e) {
            cur[i] = e;
            self(self, i + 1, remaining - static_cast<std::int64_t>(e) * d);
        }
        cur[i] = 0;
    };
    rec(rec, 0, target.value);
    return out;
}

}  // namespace dirac
