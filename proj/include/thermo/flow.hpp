#pragma once

#include <optional>
#include <string>

#include "thermo/inducing.hpp"
#include "thermo/model.hpp"
#include "thermo/pressure.hpp"
#include "thermo/series.hpp"

namespace thermo {

enum class RecurrenceClass {
  PositiveRecurrent,
  NullRecurrent,
  Transient,
  Indeterminate
};
const char* class_name(RecurrenceClass c);

enum class EqExistence { UniqueExists, None, TwoExist, Indeterminate };
const char* existence_name(EqExistence e);

// Smallest s for which sum_n exp(-s * roof(n)) converges, computed exactly
// from the leading roof coefficient. nullopt encodes +infinity (roof grows
// slower than log on an infinite alphabet).
std::optional<Rational> s_infinity(const BranchValues& roof,
                                   bool finite_alphabet);
std::optional<Rational> s_infinity(const FlowSpec& spec);

// Exact limit of potential(n)/roof(n): the coefficient ratio at the roof's
// leading level. nullopt when the potential carries weight at a strictly
// shallower level, so the ratio has no finite limit.
std::optional<Rational> alpha_limit(const BranchValues& potential,
                                    const BranchValues& roof);
std::optional<Rational> alpha_limit(const FlowSpec& spec);

// Pressure of the time-t multiple of the flow potential. `sticks` means the
// infimum is attained at the convergence boundary of the defining series
// (exact value in `exact`); boundary_side records the certified comparison
// of the boundary series against 1 (Straddles + boundary_symbolic is exact
// equality from a normalization hint). NoFiniteEntropy: the series diverges
// for every parameter, the pressure is +infinity.
struct FlowPressure {
  enum Status { Finite, NoFiniteEntropy, Indeterminate } status = Indeterminate;
  double value = 0.0;  // Finite: pressure lies in [value, value + err]
  double err = 0.0;
  std::optional<Rational> exact;
  bool sticks = false;
  bool has_boundary = false;
  Cmp boundary_side = Cmp::Above;
  bool boundary_symbolic = false;
  long bisection_steps = 0;
  std::string note;
};

FlowPressure flow_pressure(const FlowSpec& spec, const Rational& t,
                           const SeriesOptions& opt = {},
                           double root_tol = 1e-12);

// Recurrence of a base potential given by return-time weights u_k (the
// series sum_k u_k e^{-pk} drives everything): transient when the boundary
// sum is certified below 1, positive recurrent at an interior root, positive
// or null at a symbolic boundary root depending on the mean return time.
struct BaseClassification {
  RecurrenceClass cls = RecurrenceClass::Indeterminate;
  PressureValue pressure;
  std::optional<Rational> exact_pressure;
  bool at_boundary = false;
  ExtReal mean_return;
  ReturnEquation equation;
};

BaseClassification classify_base(const TermFamily& return_weights,
                                 std::optional<Rational> unit_sum_at = {},
                                 const SeriesOptions& opt = {});
BaseClassification classify_base(const BranchValues& potential,
                                 std::optional<Rational> unit_sum_at = {},
                                 const SeriesOptions& opt = {});

RecurrenceClass classify_flow(const FlowSpec& spec, const Rational& t,
                              const SeriesOptions& opt = {});

struct ClassificationReport {
  PressureValue base_pressure;  // of t * potential alone, as a base potential
  FlowPressure flow_pressure;
  std::optional<Rational> s_infinity;  // nullopt = +infinity
  std::optional<Rational> alpha;       // nullopt = no limit
  RecurrenceClass base_class = RecurrenceClass::Indeterminate;
  RecurrenceClass flow_class = RecurrenceClass::Indeterminate;
  EqExistence equilibrium = EqExistence::Indeterminate;
  EqExistence mme = EqExistence::Indeterminate;
  MeasureStats stats;
  std::string theorem_case;  // a, b, i, ii, iii, iv; empty if undecided
  bool cusp_dominates = false;
  std::string note;
};

ClassificationReport equilibrium_decision(const FlowSpec& spec,
                                          const Rational& t,
                                          const SeriesOptions& opt = {});

}  // namespace thermo
