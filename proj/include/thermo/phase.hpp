#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermo/flow.hpp"
#include "thermo/model.hpp"
#include "thermo/series.hpp"

namespace thermo {

// Regime of one pressure sample. Affine: the pressure sticks to the line
// s_inf + t*alpha. Analytic: the pressure is certified strictly above the
// line and the defining series has a root with a finite positive roof
// integral (the implicit-function hypotheses, checked numerically, not a
// symbolic analyticity proof). Indeterminate: neither side certified, or the
// sample sits on a transition endpoint.
enum class Regime { Affine, Analytic, Indeterminate };
const char* regime_name(Regime r);

// One endpoint of the affine window: a certified enclosure [lo, hi], plus an
// exact rational value when the endpoint is symbolic (a normalization hint
// or a convergence edge). `closed` is set only when membership of the exact
// endpoint in the window is known.
struct PhaseBound {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<Rational> exact;
  bool closed = false;
  long steps = 0;
};

// The set of parameters t whose boundary series sum_n exp(t*potential(n) -
// (s_inf + t*alpha)*roof(n)) stays at or below 1. Each term is log-affine in
// t, so the sum is convex and the set is empty, an interval, a half line, or
// all of R.
struct PhaseInterval {
  enum Kind { Empty, Bounded, RayAbove, RayBelow, AllReals, Indeterminate };
  Kind kind = Indeterminate;
  PhaseBound lower;  // Bounded, RayAbove
  PhaseBound upper;  // Bounded, RayBelow
  std::string note;
};

struct PhaseSample {
  Rational t{0};
  FlowPressure pressure;
  Regime regime = Regime::Indeterminate;
  RecurrenceClass flow_class = RecurrenceClass::Indeterminate;
};

struct PhaseReport {
  Rational s_infinity{0};
  Rational alpha{0};
  PhaseInterval interval;
  std::vector<PhaseSample> samples;  // sorted by t
  std::vector<PhaseBound> transition_points;
};

// Locates the affine window by exact convergence-class arithmetic in t plus
// certified bisection of the boundary sum against 1. Endpoint brackets are
// refined to `endpoint_tol` within `max_steps` bisection steps per endpoint.
// Throws DomainError when the convergence abscissa is infinite or the
// potential-to-roof ratio has no finite limit.
PhaseInterval interval_I(const FlowSpec& spec, const SeriesOptions& opt = {},
                         double endpoint_tol = 1e-6, long max_steps = 60);

// Pressure curve over a parameter grid with per-sample regime and flow
// recurrence tags, plus the located window and its endpoints.
PhaseReport phase_scan(const FlowSpec& spec, const std::vector<Rational>& grid,
                       const SeriesOptions& opt = {});

// CSV rows t,pressure,pressure_err,regime,flow_class with a header line and
// 12 significant digits. The pressure lies in [pressure, pressure + err];
// an infinite pressure prints inf, an undecided sample prints nan.
std::string scan_csv(const PhaseReport& report);

}  // namespace thermo
