#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace thermo {

// Exact rational scalar. All convergence-class decisions go through these so
// that no comparison ever degenerates into floating-point equality.
using Rational = mpq_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShiftMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts "3", "-1/2", "7/4"; tolerates a U+2212 minus sign and surrounding
// whitespace. Throws ParseError on anything else (including zero denominators).
Rational parse_rational(const std::string& text);

std::string rational_str(const Rational& q);

inline double rat_d(const Rational& q) { return q.get_d(); }

inline bool rat_zero(const Rational& q) { return sgn(q) == 0; }

inline Rational rat_of(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace thermo
