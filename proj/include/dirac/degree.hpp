#pragma once

#include <cstdint>
#include <compare>
#include <string>

namespace dirac {

// Degrees are integers counting half-spins: an element of spin s sits in degree 2s.
// Parity decides all Koszul signs, so degree arithmetic stays exact and integral.
struct Degree {
    std::int64_t value = 0;

    constexpr Degree() = default;
    constexpr explicit Degree(std::int64_t v) : value(v) {}

    constexpr bool odd() const { return (value & 1) != 0; }
    constexpr bool even() const { return !odd(); }

    friend constexpr Degree operator+(Degree a, Degree b) { return Degree{a.value + b.value}; }
    friend constexpr Degree operator-(Degree a, Degree b) { return Degree{a.value - b.value}; }
    friend constexpr Degree operator-(Degree a) { return Degree{-a.value}; }
    friend constexpr Degree operator*(std::int64_t n, Degree a) { return Degree{n * a.value}; }
    constexpr Degree& operator+=(Degree b) { value += b.value; return *this; }
    constexpr Degree& operator-=(Degree b) { value -= b.value; return *this; }

    friend constexpr auto operator<=>(Degree, Degree) = default;
};

// Sign picked up when two homogeneous elements of these degrees move past each other.
constexpr int koszul_sign(Degree a, Degree b) { return (a.odd() && b.odd()) ? -1 : 1; }

inline std::string to_string(Degree d) { return std::to_string(d.value); }

}  // namespace dirac
