#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "votekit/errors.hpp"

namespace votekit {

// Exact rational probability; numerator/denominator are arbitrary precision
// and always kept in lowest terms by the backend.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Canonical text form: "0", "1", "5/6". Used for all CLI output so reruns
// are byte-identical.
inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "3", "3/7", and finite decimals like "0.25".
Rational parse_rational(const std::string& text);

// Parses and checks 0 <= r <= 1.
Rational parse_probability(const std::string& text);

} // namespace votekit
