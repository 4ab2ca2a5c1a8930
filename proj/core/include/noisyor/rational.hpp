#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace noisyor {

/// Exact rational number. All network weights, biases and probabilities that
/// feed identity tests are kept in this type end to end; doubles are a
/// separate fast path.
using Rational = mpq_class;

/// Parses "3/4", "-1/2", "0.25" (exact decimal) or "2" into a canonical
/// rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

/// Canonical serialization: "num/den", or just "num" when den == 1.
std::string rational_to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Strict-weak order usable as a comparator for std::map / sorting.
struct RationalLess {
  bool operator()(const Rational& a, const Rational& b) const { return a < b; }
};

std::string rationals_to_string(const std::vector<Rational>& qs, char sep = ',');

}  // namespace noisyor
