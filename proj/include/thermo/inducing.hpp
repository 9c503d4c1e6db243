#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermo/model.hpp"
#include "thermo/series.hpp"

namespace thermo {

// First-coordinate base potential whose cumulative sums stay in closed form.
// The value at symbol 0 is `head`; for j >= 1 the value is
// gen(j) - gen(j-1) unless j is listed in `special`. Writing the tail as
// consecutive differences is what makes the induced values telescope.
struct BasePotential {
  double head = 0.0;
  BranchValues gen;
  std::map<long, double> special;

  double value(long j) const;
};

BasePotential constant_potential(double c);

struct InducedPotential {
  // branch n holds phi(0) + sum_{j=1..n} phi(j)
  BranchValues values;
  // false: the tail of `values` is a least-squares fit over a tabulated
  // prefix, good for numerics but carrying no certified class information
  bool telescoped = true;
};

// Cumulative-sum inducing on the renewal base. The BasePotential overload is
// always exact; the plain-expression overload telescopes only constant
// potentials (plus finitely many overrides) and otherwise tabulates branch
// values up to table_cap and fits the tail.
InducedPotential induce_potential(const MarkovModel& base,
                                  const BasePotential& phi);
InducedPotential induce_potential(const MarkovModel& base,
                                  const AsymptoticExpr& phi,
                                  long table_cap = 10000);

// Bookkeeping wrapper: one renewal base, several induced potentials by name.
struct InducedSystem {
  MarkovModel base;
  std::vector<std::pair<std::string, InducedPotential>> registered;
};

InducedSystem make_induced_system(const MarkovModel& base);
void register_potential(InducedSystem& sys, const std::string& name,
                        const BasePotential& phi);
const InducedPotential& lookup(const InducedSystem& sys,
                               const std::string& name);

// Reindex a branch family (n >= 0) by return time r = n + 1.
TermFamily return_indexed(const TermFamily& branch_family);

// p_n = exp(pot(n) - P * r_n) with certified normalization. unit_sum marks
// the family as summing to exactly 1 (a symbolic fact supplied by the
// caller, e.g. a potential normalized by construction).
GibbsWeights gibbs_weights(const BranchValues& pot, const Rational& base_pressure,
                           const ReturnTimes& returns, bool unit_sum = false,
                           const SeriesOptions& opt = {});

// Extended real with a certified enclosure in the finite case.
struct ExtReal {
  enum Status { Finite, PlusInfinity, MinusInfinity, Indeterminate };
  Status status = Finite;
  double value = 0.0;
  double err = 0.0;  // Finite: the quantity lies in [value, value + err]
};

const char* ext_name(ExtReal::Status s);

// Certified sum of weights(n) * v(n): explicit prefix up to a branch from
// which v is certified single-signed, factored series tail beyond it.
// Divergence is decided by the tail's convergence class.
ExtReal weighted_integral(const TermFamily& weights, const BranchValues& v,
                          const SeriesOptions& opt = {});

struct MeasureStats {
  ExtReal entropy;       // of the induced product measure
  ExtReal integral_r;    // mean return time
  ExtReal integral_tau;  // mean roof value
  ExtReal integral_phi;  // mean induced potential
  ExtReal base_entropy;  // entropy / integral_r
  ExtReal flow_entropy;  // entropy / integral_tau
  bool finite_base_measure = false;
};

// Statistics of a normalized Gibbs vector, projected to the base (mean
// return time) and to the flow (mean roof value). Requires the certified
// normalization interval to contain 1 within 1e-6 (exactly normalized
// families carry the sum_is_one mark and pass trivially).
MeasureStats project_stats(const GibbsWeights& w, const ReturnTimes& returns,
                           const BranchValues& roof,
                           const BranchValues& induced_phi,
                           const SeriesOptions& opt = {});

}  // namespace thermo
