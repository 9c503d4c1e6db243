#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermo/flow.hpp"
#include "thermo/model.hpp"
#include "thermo/phase.hpp"
#include "thermo/series.hpp"

namespace thermo {

struct UnknownScenario : std::runtime_error {
  explicit UnknownScenario(const std::string& name)
      : std::runtime_error("unknown scenario: " + name) {}
};

// One checked statement about a scenario: the expected outcome, the computed
// outcome, and a note saying how the expected value is grounded in the
// construction itself.
struct Expectation {
  std::string field;
  std::string expected;
  std::string computed;
  bool pass = false;
  std::string provenance;
};

struct Verdict {
  std::string name;
  std::vector<Expectation> expectations;
  bool pass = false;
};

struct Scenario;
using ScenarioCheck =
    std::function<Expectation(const Scenario&, const SeriesOptions&)>;

// A named flow specification bundled with its derived parameters, a sample
// parameter grid for scans, and the list of checks run_scenario evaluates.
// base_unit_sums records parameters t at which the return-weight sum of
// t * potential equals 1 exactly (value: the pinned root), so base
// classification can use the symbolic normalization instead of a float sum.
struct Scenario {
  std::string name;
  std::string summary;
  FlowSpec spec;
  std::map<std::string, Rational> params;
  std::map<Rational, Rational> base_unit_sums;
  std::vector<Rational> sample_ts;
  std::vector<ScenarioCheck> checks;
};

std::vector<std::string> scenario_names();

// One-line description of a catalog entry without building it. Throws
// UnknownScenario for a name outside the catalog.
std::string scenario_summary(const std::string& name);

// Builds a catalog scenario by name. Integer parameters are resolved by
// certified minimal-shift searches at build time, so rebuilding reproduces
// them. Throws UnknownScenario for a name outside the catalog.
Scenario build_scenario(const std::string& name);

// Intermittent-map scenario at the given exponent, with an induced scheme of
// branch_count branches and a fitted surrogate roof for scan verbs.
Scenario build_mp_scenario(double alpha, long branch_count = 4000);

// Runs every check; a check that throws becomes a failing row whose computed
// value carries the error text.
Verdict run_scenario(const Scenario& sc, const SeriesOptions& opt = {});

std::string verdict_json(const Verdict& v);
std::string verdict_text(const Verdict& v);

// One witnessed cell of the base-by-flow recurrence table.
struct MatrixCell {
  RecurrenceClass base = RecurrenceClass::Indeterminate;
  RecurrenceClass flow = RecurrenceClass::Indeterminate;
  std::string scenario;
  Rational t{0};
};

// The nine base-by-flow recurrence pairs, each witnessed by a catalog
// scenario at an explicit parameter value.
std::vector<MatrixCell> recurrence_matrix(const SeriesOptions& opt = {});

}  // namespace thermo
