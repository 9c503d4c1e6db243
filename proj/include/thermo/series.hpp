#pragma once

#include <optional>
#include <string>

#include "thermo/expr.hpp"

namespace thermo {

// Decay class of a positive term family
//   T(n) ~ C * n^-p (log n)^-q (loglog n)^-r (logloglog n)^-w,
// or exponential behaviour when a linear exponent coefficient dominates.
// Exponents are exact rationals; convergence is decided by the classical
// Bertrand rule, extended one iterate deeper (w) because multiplying a family
// by an iterated-log factor shifts the exponent ladder down one level.
struct BertrandClass {
  enum Kind { PowerLog, ExpDecay, ExpGrowth, FiniteSupport } kind = PowerLog;
  Rational p{0}, q{0}, r{0}, w{0};

  bool convergent() const;
  std::string describe() const;
};

// Multiplicative prefactor A(n) = mu*n + expr(n). Entropy series use
// A = -log(weight); occupation-time series use A = return time.
struct FactorSpec {
  Rational mu{0};
  AsymptoticExpr expr;

  double value(double x) const { return rat_d(mu) * x + expr.closed_form(x); }
  double value_at(long n) const { return rat_d(mu) * (double)n + expr.evaluate(n); }
};

// Positive term family over branches n_start..n_end (open-ended when n_end is
// empty):
//   T(n) = exp((lin + lin_f) * n + expr(n)) * factor(n).
// lin is the exact part of the linear exponent coefficient; lin_f carries
// transcendental contributions (e.g. a constant potential value). Families
// whose classification must be exact keep lin_f == 0.
struct TermFamily {
  Rational lin{0};
  double lin_f = 0.0;
  AsymptoticExpr expr;
  std::optional<FactorSpec> factor;
  long n_start = 0;
  std::optional<long> n_end;

  // Symbolic mark: the exponential part sums to exactly 1 over the branch
  // range (families normalized by construction). Dropped by every transform
  // except index shifts.
  bool sum_is_one = false;

  double lin_total() const { return rat_d(lin) + lin_f; }
  bool lin_exact() const { return lin_f == 0.0; }
  double log_exp_part(long n) const { return lin_total() * (double)n + expr.evaluate(n); }
  double term(long n) const;
};

struct SeriesValue {
  enum Status { Finite, Divergent, Indeterminate } status = Indeterminate;
  // Certified enclosure: the true sum lies in [value, value + err].
  double value = 0.0;
  double err = 0.0;
  BertrandClass cls;
  long terms_used = 0;
  std::string note;
};

struct SeriesOptions {
  double tol = 1e-12;  // absolute width target for the enclosure
  long cap = 0;        // explicit-term budget; 0 = THERMO_MAX_TERMS or 1e8
};

enum class Cmp { Below, Above, Straddles };
const char* cmp_name(Cmp c);

long series_term_cap(long requested = 0);

BertrandClass classify_family(const TermFamily& f);
// Class of the terms exp(u * e(n)).
BertrandClass classify_terms(const Rational& u, const AsymptoticExpr& e);

SeriesValue sum_family(const TermFamily& f, const SeriesOptions& opt = {});
// Sum of exp(u * e(n)) over n >= 0.
SeriesValue sum_series(const Rational& u, const AsymptoticExpr& e,
                       const SeriesOptions& opt = {});

// Certified three-way comparison of the sum against a threshold, refining the
// partial sum adaptively before giving up. A certified-divergent family
// compares Above any finite threshold.
Cmp compare_family(const TermFamily& f, double threshold,
                   const SeriesOptions& opt = {});

// a*f1 + b*f2 in the exponent (pointwise product/power of the term families).
// Factors are not combinable; both inputs must be factor-free.
TermFamily combine_families(const Rational& a, const TermFamily& f1,
                            const Rational& b, const TermFamily& f2);

// Reindexes n -> n + by (new branch n reads old branch n - by).
TermFamily shift_index(const TermFamily& f, long by);

// Multiplies terms by exp(delta_lin * n + delta_c0).
TermFamily tilt_family(const TermFamily& f, const Rational& delta_lin,
                       double delta_c0);

TermFamily with_factor(const TermFamily& f, FactorSpec factor);

}  // namespace thermo
