#pragma once

#include "thermo/expr.hpp"
#include "thermo/series.hpp"

#include <map>
#include <optional>
#include <vector>

namespace thermo {

enum class ModelKind { Renewal, FiniteSFT, CountableFull };

// Return time per induced branch: r_n = slope*n + offset, with explicit
// exceptions for small branches.
struct ReturnTimes {
  long slope = 1;
  long offset = 1;
  std::map<long, long> special;

  long value(long n) const;
};

struct MarkovModel {
  ModelKind kind = ModelKind::Renewal;

  // FiniteSFT only
  std::vector<std::vector<int>> matrix;
  bool mixing = false;

  // Renewal / CountableFull: induced return times
  ReturnTimes returns;

  long alphabet_size() const;
  long return_time(long n) const;
};

MarkovModel build_renewal_model();
MarkovModel build_finite_sft(const std::vector<std::vector<int>>& matrix);
MarkovModel build_full_shift_model();

// Per-branch real values v(n) = lin*n + expr(n) with an exact linear
// coefficient, so growth-rate comparisons stay exact.
struct BranchValues {
  Rational lin = 0;
  AsymptoticExpr expr;

  double value(long n) const;
};

BranchValues combine_values(const Rational& a, const BranchValues& v1,
                            const Rational& b, const BranchValues& v2);
BranchValues scale_values(const Rational& a, const BranchValues& v);
BranchValues constant_values(double c);

// True when every branch value is exactly zero: all coefficients, the
// constant offset, and every override.
bool values_are_zero(const BranchValues& v);

// Weight family with terms exp(u * v(n)) over branches n >= 0.
TermFamily weight_family(const Rational& u, const BranchValues& v);

// Declares that sum_n exp(t0*potential(n) - s0*roof(n)) equals 1 exactly.
struct NormalizationHint {
  Rational t0;
  Rational s0;
};

struct FlowSpec {
  MarkovModel base;
  BranchValues roof;
  BranchValues potential;
  std::optional<double> cusp_value;
  bool hopf_ok = false;
  std::optional<NormalizationHint> hint;
};

// Smallest ladder point (16 * 4^k, bounded by 2^22) from which
// lin*n + expr(n) is certified nondecreasing by derivative bounds, at least
// lo and past n_min and every override. nullopt when no ladder point
// certifies (e.g. the values eventually decrease).
std::optional<long> certified_nondecreasing_from(const BranchValues& v,
                                                 long lo = 16);

// Throws DomainError unless roof values are certified positive on every
// branch (explicit prefix check plus a monotonicity bound for the tail).
void validate_roof(const BranchValues& roof);

FlowSpec make_flow_spec(const MarkovModel& base, const BranchValues& roof,
                        const BranchValues& potential,
                        std::optional<double> cusp_value = std::nullopt,
                        std::optional<NormalizationHint> hint = std::nullopt);

struct GibbsWeights {
  TermFamily family;    // p_n = exp(induced potential(n) - P * r_n)
  SeriesValue total;    // certified sum of p_n
  BertrandClass cls;
};

}  // namespace thermo
