#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace twistcoh {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical lowest-terms text: "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& q);

Rational factorial(std::int64_t n);
Rational binomial(std::int64_t n, std::int64_t k);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace twistcoh
