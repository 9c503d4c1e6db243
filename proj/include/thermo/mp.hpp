#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermo/expr.hpp"
#include "thermo/flow.hpp"

namespace thermo {

// Interval map x(1 + 2^a x^a) on [0,1/2), 2x-1 on [1/2,1). The left branch
// fixes 0 with derivative 1 and maps [0,1/2) onto [0,1); the right branch
// maps [1/2,1) onto [0,1) with derivative 2.
double mp_map(double x, double alpha);
double mp_deriv(double x, double alpha);

struct ConvergenceFailure : std::runtime_error {
  long step;
  explicit ConvergenceFailure(long k)
      : std::runtime_error("preimage chain stalled at step " +
                           std::to_string(k)),
        step(k) {}
};

// First-return branch to [1/2,1). Branch n spends n steps in the left
// half after one right-branch step, so the return time is n + 1. The roof
// values are log-derivatives of the return map along the cylinder,
// increasing from tau_lo (left endpoint) to tau_hi (right endpoint limit).
struct MpBranch {
  long steps = 0;
  double left = 0.0;
  double right = 0.0;
  double tau_lo = 0.0;
  double tau_hi = 0.0;
  double length() const { return right - left; }
};

// chain[k] is the k-th preimage of 1/2 under the left branch (chain[0] is
// 1/2 itself); chain_logd[k] the log-derivative there. Branch n's cylinder
// is [(chain[n]+1)/2, (chain[n-1]+1)/2).
struct MpBranchData {
  double alpha = 1.0;
  std::vector<MpBranch> branches;
  std::vector<double> chain;
  std::vector<double> chain_logd;
};

MpBranchData build_branches(double alpha, long n_max);

struct MpBracket {
  double lo = 0.0;
  double hi = 0.0;
  std::string note;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Enclosure of the abscissa inf{s : sum_n exp(-s * roof(n)) finite} from
// local log-slopes of the roof arrays at geometric checkpoints, padded by
// the observed inter-checkpoint drift.
MpBracket mp_s_infinity(const MpBranchData& data);

// Enclosure of the root of s -> pressure of -s * roof. Two monotone
// bisection runs on the endpoint roof arrays give the coarse enclosure; a
// positive-operator bound on a mesh refinement tightens it. The tail beyond
// the built branches enters only the upper end, extrapolated from the
// fitted decay and noted as such.
MpBracket mp_flow_entropy(const MpBranchData& data);

enum class MpSide { RenewalSide, CuspSide, Tie, Indeterminate };
const char* side_name(MpSide s);

// Pressure split between the return-branch series and the atom at the
// neutral fixed point: the flow pressure is the larger of the two, and the
// equilibrium measure lives on whichever side wins.
struct MpEquilibriumReport {
  MpBracket root;      // root of the return-branch pressure equation
  double cusp = 0.0;   // value carried by the neutral atom
  MpBracket pressure;  // max of the two sides
  MpSide side = MpSide::Indeterminate;
  EqExistence verdict = EqExistence::Indeterminate;
  std::string note;
};

MpEquilibriumReport mp_equilibrium(const MpBranchData& data,
                                   const AsymptoticExpr& induced_potential,
                                   double cusp_value);

// Columns: n, tau_lo, tau_hi, cyl_len.
void write_branch_csv(std::ostream& os, const MpBranchData& data);

}  // namespace thermo
