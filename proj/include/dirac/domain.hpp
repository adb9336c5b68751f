#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "dirac/errors.hpp"

namespace dirac {

using Integer = mpz_class;

// Coefficient domain for polynomials and modules: the integers or a prime field.
// Scalars are kept canonical: arbitrary integers over Z, representatives in [0, p) over F_p.
class CoefficientDomain {
  public:
    enum class Kind { Integers, PrimeField };

    static CoefficientDomain integers() { return CoefficientDomain(Kind::Integers, 0); }

    static CoefficientDomain prime_field(std::int64_t p) {
        if (!is_prime(p))
            throw DomainError("prime_field: " + std::to_string(p) + " is not prime");
        return CoefficientDomain(Kind::PrimeField, p);
    }

    Kind kind() const { return kind_; }
    bool is_integers() const { return kind_ == Kind::Integers; }
    bool is_field() const { return kind_ == Kind::PrimeField; }
    // Characteristic: 0 for Z, p for F_p.
    std::int64_t characteristic() const { return p_; }

    // Canonical representative of c in this domain.
    Integer reduce(const Integer& c) const {
        if (is_integers())
            return c;
        Integer r = c % p_;
        if (r < 0)
            r += p_;
        return r;
    }

    // Multiplicative inverse of a unit; over Z only +-1 qualify.
    Integer inverse(const Integer& c) const {
        if (is_integers()) {
            if (c == 1 || c == -1)
                return c;
            throw DomainError("inverse: " + c.get_str() + " is not a unit in Z");
        }
        Integer r, p(p_);
        if (mpz_invert(r.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t()) == 0)
            throw DomainError("inverse: " + c.get_str() + " not invertible mod " + std::to_string(p_));
        return reduce(r);
    }

    bool is_unit(const Integer& c) const {
        if (is_integers())
            return c == 1 || c == -1;
        return reduce(c) != 0;
    }

    friend bool operator==(const CoefficientDomain& a, const CoefficientDomain& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }
    friend bool operator!=(const CoefficientDomain& a, const CoefficientDomain& b) { return !(a == b); }

    std::string describe() const {
        return is_integers() ? "Z" : "F_" + std::to_string(p_);
    }

    static bool is_prime(std::int64_t p) {
        if (p < 2)
            return false;
        for (std::int64_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                return false;
        return true;
    }

  private:
    CoefficientDomain(Kind k, std::int64_t p) : kind_(k), p_(p) {}

    Kind kind_;
    std::int64_t p_;
};

}  // namespace dirac
