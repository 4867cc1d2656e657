// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace intent {

/// Arbitrary-precision integer used for every asset quantity (base units).
using Amount = boost::multiprecision::cpp_int;
/// Exact rational used for ICL arithmetic and ratio comparisons.
using Rational = boost::multiprecision::cpp_rational;

Amount pow10(unsigned exponent);

/// Largest integer not greater than `value`.
Amount floorRational(const Rational& value);

/// Parses the ICL numeric lexeme forms (`12`, `0.005`, `.5`, `5.`, `1e3`,
/// `1.5E-2`, `3p4`) into an exact rational. `p`/`P` is a binary exponent.
/// Throws std::invalid_argument on malformed text.
Rational parseDecimal(std::string_view text);

/// Decimal integer string, optionally signed.
Amount parseAmount(std::string_view text);

std::string toString(const Amount& value);
/// `num/den` in lowest terms, or just `num` when integral.
std::string toString(const Rational& value);

/// Lossy conversion for reporting only.
double toDouble(const Rational& value);

/// Integer square root (floor).
Amount isqrt(const Amount& value);

}  // namespace intent
