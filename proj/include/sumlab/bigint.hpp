#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sumlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", a plain integer, or a finite decimal such as "0.625".
/// The result is canonicalized; malformed input throws ConfigError.
Rational parse_rational(std::string_view text);

std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

BigInt pow2(std::size_t exponent);
BigInt floor_of(const Rational& value);

/// log2 of a positive integer, accurate to double precision for any size.
double log2_of(const BigInt& value);

/// Exact power of a rational.
Rational power(const Rational& base, unsigned exponent);

std::uint64_t to_u64(const BigInt& value);

}  // namespace sumlab
