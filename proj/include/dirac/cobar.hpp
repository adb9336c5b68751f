#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dirac/cochain.hpp"
#include "dirac/steenrod.hpp"

namespace dirac {

// Finite left comodule over the dual Steenrod algebra: a graded F_p-space
// with coaction rho(m_j) = sum c (x) m_k, stored per basis vector. Counit and
// coassociativity of the coaction are verified at construction.
class HopfComoduleSpec {
  public:
    struct CoactionTerm {
        MilnorBasisElement op;
        std::int64_t coeff = 0;
        std::size_t target = 0;  // index of the comodule basis vector
    };

    HopfComoduleSpec(std::int64_t p, GradedVectorSpace space,
                     std::vector<std::vector<CoactionTerm>> coaction)
        : p_(p), space_(std::move(space)), coaction_(std::move(coaction)) {
        require_odd_prime(p_, "HopfComoduleSpec");
        if (coaction_.size() != space_.dim())
            throw DomainError("HopfComoduleSpec: need one coaction row per basis vector");
        for (std::size_t j = 0; j < coaction_.size(); ++j)
            for (const CoactionTerm& t : coaction_[j]) {
                t.op.validate();
                if (t.target >= space_.dim())
                    throw DomainError("HopfComoduleSpec: coaction target out of range");
                if (t.op.degree(p_) + space_[t.target].degree.value != space_[j].degree.value)
                    throw DomainError("HopfComoduleSpec: coaction term on '" + space_[j].name +
                                      "' breaks the grading");
            }
        verify();
    }

    // F_p itself in degree zero.
    static HopfComoduleSpec trivial(std::int64_t p) {
        GradedVectorSpace space({{"1", Degree{0}}});
        std::vector<std::vector<CoactionTerm>> rho{{{MilnorBasisElement::one(), 1, 0}}};
        return HopfComoduleSpec(p, std::move(space), std::move(rho));
    }

    std::int64_t p() const { return p_; }
    const GradedVectorSpace& space() const { return space_; }
    const std::vector<CoactionTerm>& coaction(std::size_t j) const { return coaction_[j]; }

  private:
    void verify() const {
        for (std::size_t j = 0; j < space_.dim(); ++j) {
            // Counit: collapsing the operator factor returns the vector.
            std::vector<std::int64_t> collapsed(space_.dim(), 0);
            for (const CoactionTerm& t : coaction_[j])
                if (t.op.is_one())
                    collapsed[t.target] = mod_reduce(collapsed[t.target] + t.coeff, p_);
            for (std::size_t k = 0; k < space_.dim(); ++k)
                if (collapsed[k] != (k == j ? 1 : 0))
                    throw DomainError("HopfComoduleSpec: counit fails on '" + space_[j].name + "'");

            // Coassociativity: (psi (x) id) rho = (id (x) rho) rho.
            std::map<std::tuple<MilnorBasisElement, MilnorBasisElement, std::size_t>, std::int64_t>
                lhs, rhs;
            auto put = [&](auto& acc, MilnorBasisElement a, MilnorBasisElement b, std::size_t k,
                           std::int64_t c) {
                auto key = std::make_tuple(std::move(a), std::move(b), k);
                auto [it, fresh] = acc.try_emplace(std::move(key), 0);
                it->second = mod_reduce(it->second + c, p_);
                if (it->second == 0)
                    acc.erase(it);
            };
            for (const CoactionTerm& t : coaction_[j]) {
                TensorElement cop = psi(p_, t.op);
                for (const auto& [pair, c] : cop.terms())
                    put(lhs, pair.first, pair.second, t.target, c * t.coeff);
                for (const CoactionTerm& u : coaction_[t.target])
                    put(rhs, t.op, u.op, u.target, t.coeff * u.coeff);
            }
            if (!(lhs == rhs))
                throw DomainError("HopfComoduleSpec: coaction is not coassociative on '" +
                                  space_[j].name + "'");
        }
    }

    std::int64_t p_;
    GradedVectorSpace space_;
    std::vector<std::vector<CoactionTerm>> coaction_;
};

// Basis word of the reduced cobar construction: positive-degree operator
// factors and a comodule vector.
struct CobarWord {
    std::vector<MilnorBasisElement> factors;
    std::size_t vector = 0;

    friend bool operator==(const CobarWord&, const CobarWord&) = default;
    friend bool operator<(const CobarWord& a, const CobarWord& b) {
        if (a.factors != b.factors)
            return a.factors < b.factors;
        return a.vector < b.vector;
    }
};

// Reduced cobar complex of the dual algebra with coefficients in the comodule:
// level s has basis words with s positive-degree factors and total internal
// degree <= max_t. Levels above max_s are still generated so cohomology at
// max_s sees its outgoing differential.
class CobarComplex {
  public:
    CobarComplex(HopfComoduleSpec comodule, std::int64_t max_s, std::int64_t max_t,
                 std::size_t basis_cap = 500000)
        : p_(comodule.p()), comodule_(std::move(comodule)), max_s_(max_s), max_t_(max_t) {
        if (max_s < 0 || max_t < 0)
            throw DomainError("CobarComplex: window must be nonnegative");
        build(basis_cap);
    }

    std::int64_t p() const { return p_; }
    std::size_t levels() const { return words_.size(); }
    const std::vector<CobarWord>& level_words(std::size_t s) const { return words_[s]; }

    CochainComplex complex() const {
        std::vector<GradedVectorSpace> levels;
        for (std::size_t s = 0; s < words_.size(); ++s) {
            std::vector<BasisElement> basis;
            for (const CobarWord& w : words_[s])
                basis.push_back({word_name(w), Degree{word_degree(w)}});
            levels.push_back(GradedVectorSpace(std::move(basis)));
        }
        std::vector<IntMat> diffs;
        for (std::size_t s = 0; s + 1 < words_.size(); ++s)
            diffs.push_back(differential(s));
        return CochainComplex(CoefficientDomain::prime_field(p_), std::move(levels),
                              std::move(diffs));
    }

    std::int64_t word_degree(const CobarWord& w) const {
        std::int64_t d = comodule_.space()[w.vector].degree.value;
        for (const MilnorBasisElement& f : w.factors)
            d += f.degree(p_);
        return d;
    }

  private:
    std::string word_name(const CobarWord& w) const {
        std::string s = "[";
        for (std::size_t i = 0; i < w.factors.size(); ++i)
            s += (i ? "|" : "") + w.factors[i].to_string();
        return s + "]" + comodule_.space()[w.vector].name;
    }

    void build(std::size_t basis_cap) {
        // Positive-degree basis elements per degree, reused by every level.
        std::vector<std::vector<MilnorBasisElement>> positive(static_cast<std::size_t>(max_t_) + 1);
        for (std::int64_t d = 1; d <= max_t_; ++d)
            positive[static_cast<std::size_t>(d)] = basis_in_degree(p_, d);

        const std::size_t top = static_cast<std::size_t>(max_s_) + 2;
        words_.resize(top);
        index_.resize(top);
        std::size_t total = 0;
        for (std::size_t s = 0; s < top; ++s) {
            CobarWord cur;
            cur.factors.resize(s);
            auto rec = [&](auto&& self, std::size_t at, std::int64_t remaining) -> void {
                if (at == s) {
                    for (std::size_t v = 0; v < comodule_.space().dim(); ++v)
                        if (comodule_.space()[v].degree.value <= remaining) {
                            cur.vector = v;
                            words_[s].push_back(cur);
                        }
                    return;
                }
                for (std::int64_t d = 1; d <= remaining; ++d)
                    for (const MilnorBasisElement& m : positive[static_cast<std::size_t>(d)]) {
                        cur.factors[at] = m;
                        self(self, at + 1, remaining - d);
                    }
            };
            rec(rec, 0, max_t_);
            std::sort(words_[s].begin(), words_[s].end());
            total += words_[s].size();
            if (total > basis_cap)
                throw ResourceError("CobarComplex: basis size exceeds the cap of " +
                                    std::to_string(basis_cap) + " words");
            for (std::size_t k = 0; k < words_[s].size(); ++k)
                index_[s].emplace(words_[s][k], static_cast<EIndex>(k));
        }
    }

    // Reduced coproduct: psi(a) - a (x) 1 - 1 (x) a, supported on positive
    // degrees on both sides.
    TensorElement reduced_psi(const MilnorBasisElement& m) const {
        TensorElement t = psi(p_, m);
        t.add_term(m, MilnorBasisElement::one(), -1);
        t.add_term(MilnorBasisElement::one(), m, -1);
        return t;
    }

    IntMat differential(std::size_t s) const {
        IntMat d = IntMat::Zero(static_cast<EIndex>(words_[s + 1].size()),
                                static_cast<EIndex>(words_[s].size()));
        for (std::size_t col = 0; col < words_[s].size(); ++col) {
            const CobarWord& w = words_[s][col];
            auto emit = [&](const CobarWord& target, std::int64_t coeff) {
                auto it = index_[s + 1].find(target);
                if (it == index_[s + 1].end())
                    return;  // outside the degree window; degree is preserved, so
                             // this only drops words that were never generated
                d(it->second, static_cast<EIndex>(col)) += coeff;
            };
            // Splice the reduced coproduct into each factor slot.
            for (std::size_t i = 0; i < w.factors.size(); ++i) {
                std::int64_t sign = (i + 1) % 2 == 0 ? 1 : -1;  // (-1)^{i+1}
                TensorElement cop = reduced_psi(w.factors[i]);
                for (const auto& [pair, c] : cop.terms()) {
                    CobarWord target;
                    target.factors.reserve(w.factors.size() + 1);
                    for (std::size_t k = 0; k < i; ++k)
                        target.factors.push_back(w.factors[k]);
                    target.factors.push_back(pair.first);
                    target.factors.push_back(pair.second);
                    for (std::size_t k = i + 1; k < w.factors.size(); ++k)
                        target.factors.push_back(w.factors[k]);
                    target.vector = w.vector;
                    emit(target, sign * c);
                }
            }
            // Reduced coaction on the comodule vector, inserted before it.
            std::int64_t sign = (w.factors.size() + 1) % 2 == 0 ? 1 : -1;
            for (const auto& t : comodule_.coaction(w.vector)) {
                if (t.op.is_one())
                    continue;  // the 1 (x) m term is removed in the reduced complex
                CobarWord target;
                target.factors = w.factors;
                target.factors.push_back(t.op);
                target.vector = t.target;
                emit(target, sign * t.coeff);
            }
        }
        return d;
    }

    std::int64_t p_;
    HopfComoduleSpec comodule_;
    std::int64_t max_s_;
    std::int64_t max_t_;
    std::vector<std::vector<CobarWord>> words_;
    std::vector<std::map<CobarWord, EIndex>> index_;
};

inline CochainComplex cobar_complex(const HopfComoduleSpec& comodule, std::int64_t max_s,
                                    std::int64_t max_t, std::size_t basis_cap = 500000) {
    return CobarComplex(comodule, max_s, max_t, basis_cap).complex();
}

// Cohomology of the reduced cobar complex of F_p in the requested window.
inline E2Page adams_e2(std::int64_t p, std::int64_t max_s, std::int64_t max_t,
                       std::size_t basis_cap = 500000) {
    require_odd_prime(p, "adams_e2");
    CochainComplex complex = cobar_complex(HopfComoduleSpec::trivial(p), max_s, max_t, basis_cap);
    E2Page page = complex.cohomology();
    // Entries above max_s come from the padding level; drop them.
    E2Page trimmed;
    for (const E2Entry& e : page.entries())
        if (e.s <= max_s)
            trimmed.add(e);
    trimmed.sort();
    trimmed.metadata["p"] = std::to_string(p);
    trimmed.metadata["max_s"] = std::to_string(max_s);
    trimmed.metadata["max_t"] = std::to_string(max_t);
    return trimmed;
}

inline E2Page adams_e2_for_comodule(const HopfComoduleSpec& comodule, std::int64_t max_s,
                                    std::int64_t max_t, std::size_t basis_cap = 500000) {
    CochainComplex complex = cobar_complex(comodule, max_s, max_t, basis_cap);
    E2Page page = complex.cohomology();
    E2Page trimmed;
    for (const E2Entry& e : page.entries())
        if (e.s <= max_s)
            trimmed.add(e);
    trimmed.sort();
    trimmed.metadata["p"] = std::to_string(comodule.p());
    trimmed.metadata["max_s"] = std::to_string(max_s);
    trimmed.metadata["max_t"] = std::to_string(max_t);
    return trimmed;
}

}  // namespace dirac
