#pragma once

#include <gmpxx.h>

#include <string>

namespace folwerk {

/// Exact rational scalar. GMP keeps it canonical (positive denominator, lowest terms).
using Rational = mpq_class;

std::string to_string(const Rational& q);

/// Parses "3", "-2/5"; throws on malformed input.
Rational parse_rational(const std::string& text);

} // namespace folwerk
