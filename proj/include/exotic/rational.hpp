#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace exotic {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

// Canonical text form: lowest terms, positive denominator, "p" when the
// denominator is 1, otherwise "p/q".
std::string rat_to_string(const Rat& r);

// Accepts "p" or "p/q" with optional sign on p; q must be nonzero.
Rat rat_from_string(const std::string& text);

} // namespace exotic
