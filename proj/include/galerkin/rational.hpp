#pragma once
// Exact rational numbers for exponent bookkeeping (p, r, sigma, lambda ...).

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace galerkin {

using Rational = boost::multiprecision::cpp_rational;

/// Accepts "11/5", "-3", "2.25", "1e-3"; decimals are converted exactly.
/// Throws ConfigError on malformed input.
Rational parse_rational(const std::string& text);

/// Exact rational of the shortest decimal that round-trips `x`.
Rational rational_from_double(double x);

/// "11/3", "6", "-1/2"
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace galerkin
