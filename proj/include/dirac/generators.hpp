#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "dirac/degree.hpp"
#include "dirac/errors.hpp"

namespace dirac {

struct Generator {
    std::string name;
    Degree degree;

    friend bool operator==(const Generator&, const Generator&) = default;
};

// Ordered list of named homogeneous generators. The list order is the canonical
// order used for monomial normal forms, so two polynomials only interoperate
// when their tables agree entry for entry.
class GeneratorTable {
  public:
    GeneratorTable() = default;

    explicit GeneratorTable(std::vector<Generator> gens) : gens_(std::move(gens)) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i].name.empty())
                throw DomainError("GeneratorTable: empty generator name");
            auto [it, fresh] = index_.emplace(gens_[i].name, i);
            if (!fresh)
                throw DomainError("GeneratorTable: duplicate generator '" + gens_[i].name + "'");
        }
    }

    GeneratorTable(std::initializer_list<Generator> gens)
        : GeneratorTable(std::vector<Generator>(gens)) {}

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& entries() const { return gens_; }

    Degree degree(std::size_t i) const { return gens_[i].degree; }
    const std::string& name(std::size_t i) const { return gens_[i].name; }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t index(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            throw DomainError("GeneratorTable: unknown generator '" + name + "'");
        return it->second;
    }

    friend bool operator==(const GeneratorTable& a, const GeneratorTable& b) {
        return a.gens_ == b.gens_;
    }
    friend bool operator!=(const GeneratorTable& a, const GeneratorTable& b) { return !(a == b); }

  private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, std::size_t> index_;
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

inline TablePtr make_table(std::vector<Generator> gens) {
    return std::make_shared<const GeneratorTable>(std::move(gens));
}

inline TablePtr make_table(std::initializer_list<Generator> gens) {
    return std::make_shared<const GeneratorTable>(gens);
}

inline bool same_table(const TablePtr& a, const TablePtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return *a == *b;
}

}  // namespace dirac
