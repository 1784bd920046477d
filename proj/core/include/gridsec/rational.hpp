#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gridsec {

/// Exact rational number in canonical form (GMP keeps numerator/denominator reduced
/// with a positive denominator after every arithmetic operation).
using Rational = mpq_class;

/// Parses an integer, fraction ("3/4") or decimal literal ("0.05917", "-1.5e-2")
/// into an exact rational. Throws InvalidArgument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

}  // namespace gridsec
