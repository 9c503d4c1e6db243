#pragma once

#include "thermo/model.hpp"
#include "thermo/series.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace thermo {

struct NotIrreducible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PressureValue {
  enum Status {
    Finite,
    PlusInfinity,
    NonPositiveCertified,
    Indeterminate
  } status = Finite;
  // Finite: the pressure lies in [value, value + err].
  // NonPositiveCertified: value is a certified negative upper bound for the
  // induced pressure at the finiteness boundary; err is unused.
  double value = 0.0;
  double err = 0.0;
  std::string note;
};

// log of the certified sum of a positive weight family; PlusInfinity when the
// series is certified divergent.
PressureValue induced_pressure(const TermFamily& weights,
                               const SeriesOptions& opt = {});
// Weights exp(u * e(n)) over n >= 0.
PressureValue induced_pressure(const Rational& u, const AsymptoticExpr& e,
                               const SeriesOptions& opt = {});

// Renewal convolution z_n = sum_{k=1..n} u_k z_{n-k}, z_0 = 1, carried in
// log space. For first-coordinate potentials on the renewal shift z_n is the
// partition value over period-n orbits through the base cylinder, exactly.
struct RenewalDP {
  std::vector<double> log_u;  // indexed by return time, [0] unused
  std::vector<double> log_z;  // log_z[0] = 0
};

RenewalDP renewal_dp(const std::vector<double>& log_u, long n_max);

// log u_k for k = 1..n_max from a family indexed by return time.
std::vector<double> return_weight_logs(const TermFamily& ret_weights,
                                       long n_max);

struct DpEstimate {
  double estimate = 0.0;
  double oscillation = 0.0;  // max - min ratio over the averaging window
  long window = 0;
};

// Growth-rate estimate log(z_n / z_{n-1}) averaged over the last quarter.
DpEstimate dp_pressure_estimate(const RenewalDP& dp);

struct PerronResult {
  // Certified enclosure of log lambda for the leading eigenvalue.
  double log_lo = 0.0;
  double log_hi = 0.0;
  long iterations = 0;
};

// Power iteration on a nonnegative irreducible matrix; every iterate's
// per-state ratio range brackets the leading eigenvalue, and the brackets are
// intersected across iterates. Throws NotIrreducible when the support graph
// is not strongly connected.
PerronResult truncated_perron(const std::vector<std::vector<double>>& weights);

// Weighted adjacency matrix of the renewal graph restricted to states 0..m,
// with weight exp(phi[state]) on each outgoing edge.
std::vector<std::vector<double>> renewal_truncation_weights(
    const std::vector<double>& phi, long m);

// Analysis of F(p) = sum_k u_k exp(-p k) over return times k for a
// return-indexed weight family: finiteness boundary, certified side of
// F(boundary+) against 1, and an interior root bracket when one exists.
struct ReturnEquation {
  double boundary = 0.0;
  bool boundary_exact = false;   // boundary is the exact rational coefficient
  Cmp boundary_side = Cmp::Straddles;
  bool boundary_symbolic = false;  // normalization hint fixed F at exactly 1
  SeriesValue boundary_sum;
  bool has_root = false;
  double root_lo = 0.0, root_hi = 0.0;
  bool closed_form_root = false;  // geometric family, root solved exactly
};

// The family u_k exp(-p k), tilted exactly (a double p converts to a rational
// without rounding).
TermFamily return_series_at(const TermFamily& ret_weights, const Rational& p);
TermFamily return_series_at(const TermFamily& ret_weights, double p);

// unit_sum_at declares that F is exactly 1 at that parameter.
ReturnEquation solve_return_equation(
    const TermFamily& ret_weights,
    std::optional<Rational> unit_sum_at = std::nullopt,
    const SeriesOptions& opt = {}, double root_tol = 1e-12);

}  // namespace thermo
