#pragma once

#include <map>
#include <optional>
#include <string>

#include "thermo/rational.hpp"

namespace thermo {

// Closed-form branch data of the shape
//
//   e(n) = c0 + c1*log(n+s1) + c2*loglog(n+s2) + c3*logloglog(n+s3)
//
// valid for n >= n_min, with a finite override table taking precedence at any
// branch. The iterated-log coefficients are exact rationals because every
// convergence decision reads them; the constant term and the shifts only enter
// numeric values, so they are doubles (constants like log 2 and shifts like
// 1+e are transcendental).
struct AsymptoticExpr {
  double c0 = 0.0;
  Rational c1{0}, c2{0}, c3{0};
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  long n_min = 0;
  std::map<long, double> overrides;

  // Checks that every iterated-log argument exceeds 1 at n_min (arguments are
  // increasing in n, so the smallest branch is the binding one) and that
  // n_min and override keys are nonnegative. Throws DomainError.
  void validate() const;

  bool has_override(long n) const { return overrides.count(n) != 0; }

  // Override value if present, else the closed form; DomainError for
  // n < n_min without an override.
  double evaluate(long n) const;

  // The closed form at a real argument, ignoring overrides and n_min.
  // Used by integral tail bounds, which only probe the region x >= n_min.
  double closed_form(double x) const;

  bool all_log_coeffs_zero() const {
    return rat_zero(c1) && rat_zero(c2) && rat_zero(c3);
  }
};

// a*e1 + b*e2 with exact coefficient arithmetic. Levels where both inputs
// carry a nonzero coefficient must agree on the shift (ShiftMismatch
// otherwise, even if the combined coefficient cancels: log(n+2)-log(n+5) is
// not an expression of this shape). Override tables are merged pointwise;
// a key that one side cannot evaluate raises DomainError.
AsymptoticExpr linear_combine(const Rational& a, const AsymptoticExpr& e1,
                              const Rational& b, const AsymptoticExpr& e2);

AsymptoticExpr scale_expr(const Rational& a, const AsymptoticExpr& e);

AsymptoticExpr constant_expr(double c0);

// True when the two expressions are structurally identical (exact coefficient
// and shift equality, identical overrides). Used to detect proportional
// potential pairs, where a cheaper constant-series path applies.
bool same_expr(const AsymptoticExpr& a, const AsymptoticExpr& b);

}  // namespace thermo
