#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace quiverforge {

/// Arbitrary-precision rational, used wherever a result is claimed exact
/// (balanced stability parameters, slope comparisons, symmetric polynomials).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double x);

inline std::string rational_to_string(const Rational& r) { return r.str(); }

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input.
Rational rational_from_string(const std::string& s);

}  // namespace quiverforge
