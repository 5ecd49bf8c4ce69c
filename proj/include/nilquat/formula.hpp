#pragma once

// Closed-form count of products of s nilpotents in H(R) for |R| = q^n.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "nilquat/galois_field.hpp"

namespace nilquat {

using BigInt = boost::multiprecision::cpp_int;

/// True when q = p^r for an odd prime p and r >= 1.
inline bool is_odd_prime_power(std::uint64_t q) {
    if (q < 3 || q % 2 == 0) return false;
    std::uint64_t p = 3;
    while (p * p <= q && q % p != 0) p += 2;
    if (q % p != 0) p = q;
    while (q % p == 0) q /= p;
    return q == 1;
}

inline BigInt big_pow(const BigInt& base, unsigned exp) {
    BigInt out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

/// (q + 2) q^{3n+1} + q^3 + q^2 + 1, the numerator that must be divisible
/// by q^2 + q + 1.
inline BigInt formula_numerator(std::uint64_t q, unsigned n) {
    const BigInt Q = q;
    return (Q + 2) * big_pow(Q, 3 * n + 1) + Q * Q * Q + Q * Q + 1;
}
inline BigInt formula_denominator(std::uint64_t q) {
    const BigInt Q = q;
    return Q * Q + Q + 1;
}

/// Number of elements of H(R) that are products of s nilpotents, valid for
/// s >= 2n - 1.
inline BigInt formula_count(std::uint64_t q, unsigned n, unsigned s) {
    if (!is_odd_prime_power(q)) throw std::invalid_argument("q must be a power of an odd prime");
    if (n == 0 || s == 0) throw std::invalid_argument("n and s must be >= 1");
    if (s < 2 * n - 1) throw std::domain_error("outside theorem's range: s < 2n - 1");
    const BigInt Q = q;
    if (n == 1 && s == 1) return Q * Q;
    if (n == 1 && s == 2) return Q * Q * Q - Q + 1;
    const BigInt num = formula_numerator(q, n);
    const BigInt den = formula_denominator(q);
    if (num % den != 0) throw std::logic_error("formula numerator not divisible by q^2 + q + 1");
    return big_pow(Q, 2 * n) - big_pow(Q, n + 1) + num / den - 1;
}

/// q^{2(2n-1)}, the number of nilpotents in H(R).
inline BigInt nilpotent_formula(std::uint64_t q, unsigned n) { return big_pow(BigInt(q), 2 * (2 * n - 1)); }

}  // namespace nilquat
