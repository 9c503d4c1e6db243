#include "thermo/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thermo {

double BasePotential::value(long j) const {
  if (j < 0) throw DomainError("base symbol must be nonnegative");
  if (j == 0) return head;
  auto it = special.find(j);
  if (it != special.end()) return it->second;
  return gen.value(j) - gen.value(j - 1);
}

BasePotential constant_potential(double c) {
  BasePotential p;
  p.head = c;
  p.gen.lin = Rational(c);
  return p;
}

InducedPotential induce_potential(const MarkovModel& base,
                                  const BasePotential& phi) {
  if (base.kind != ModelKind::Renewal)
    throw DomainError("inducing is defined on the renewal base");
  if (!phi.special.empty() && phi.special.begin()->first < 1)
    throw DomainError("special base values start at symbol 1");

  const AsymptoticExpr& g = phi.gen.expr;

  // Branch n sums phi over the first-return word (0, n, n-1, ..., 1); the
  // generator differences telescope, and each special value contributes a
  // constant offset from its index onward.
  double delta = 0.0;
  long last_special = -1;
  for (const auto& [j, v] : phi.special) {
    delta += v - (phi.gen.value(j) - phi.gen.value(j - 1));
    last_special = j;
  }

  InducedPotential out;
  out.values.lin = phi.gen.lin;
  out.values.expr = g;
  out.values.expr.c0 += phi.head - phi.gen.value(0) + delta;
  out.values.expr.overrides.clear();

  // Below the last special index (and anywhere the generator's own closed
  // form does not apply) the cumulative sums are explicit.
  long prefix_end = last_special - 1;
  if (!g.overrides.empty())
    prefix_end = std::max(prefix_end, g.overrides.rbegin()->first);
  prefix_end = std::max(prefix_end, g.n_min - 1);
  double lin_d = rat_d(out.values.lin);
  double cum = phi.head;
  for (long n = 0; n <= prefix_end; ++n) {
    if (n > 0) cum += phi.value(n);
    out.values.expr.overrides[n] = cum - lin_d * (double)n;
  }
  out.values.expr.validate();
  out.telescoped = true;
  return out;
}

namespace {

// Least-squares fit of y(n) ~ a*n + b*log(n+1) + c over the window, by
// normal equations (3x3 Gaussian elimination with partial pivoting).
void fit_tail(const std::vector<double>& cum, long lo, long hi, double& a,
              double& b, double& c) {
  double m[3][4] = {};
  for (long n = lo; n <= hi; ++n) {
    double x[3] = {(double)n, std::log((double)n + 1.0), 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += x[i] * x[j];
      m[i][3] += x[i] * cum[(size_t)n];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < 3; ++rr)
      if (std::abs(m[rr][col]) > std::abs(m[piv][col])) piv = rr;
    std::swap(m[col], m[piv]);
    if (m[col][col] == 0.0) throw DomainError("degenerate tail fit");
    for (int rr = 0; rr < 3; ++rr) {
      if (rr == col) continue;
      double f = m[rr][col] / m[col][col];
      for (int cc = col; cc < 4; ++cc) m[rr][cc] -= f * m[col][cc];
    }
  }
  a = m[0][3] / m[0][0];
  b = m[1][3] / m[1][1];
  c = m[2][3] / m[2][2];
}

}  // namespace

InducedPotential induce_potential(const MarkovModel& base,
                                  const AsymptoticExpr& phi, long table_cap) {
  if (base.kind != ModelKind::Renewal)
    throw DomainError("inducing is defined on the renewal base");
  if (phi.all_log_coeffs_zero()) {
    BasePotential b;
    b.head = phi.evaluate(0);
    b.gen.lin = Rational(phi.c0);
    for (const auto& [k, v] : phi.overrides)
      if (k >= 1) b.special[k] = v;
    return induce_potential(base, b);
  }

  // No closed cumulative form: tabulate, keep the table exact, fit the tail.
  long cap = std::max<long>(table_cap, 64);
  std::vector<double> cum((size_t)cap + 1);
  cum[0] = phi.evaluate(0);
  for (long j = 1; j <= cap; ++j)
    cum[(size_t)j] = cum[(size_t)j - 1] + phi.evaluate(j);

  double a, b, c;
  fit_tail(cum, cap / 2, cap, a, b, c);

  InducedPotential out;
  out.telescoped = false;
  out.values.lin = Rational(a);
  out.values.expr.c1 = Rational(b);
  out.values.expr.s1 = 1.0;
  out.values.expr.c0 = c;
  out.values.expr.n_min = 1;
  for (long n = 0; n <= cap; ++n)
    out.values.expr.overrides[n] = cum[(size_t)n] - a * (double)n;
  out.values.expr.validate();
  return out;
}

InducedSystem make_induced_system(const MarkovModel& base) {
  if (base.kind != ModelKind::Renewal)
    throw DomainError("inducing is defined on the renewal base");
  InducedSystem sys;
  sys.base = base;
  return sys;
}

void register_potential(InducedSystem& sys, const std::string& name,
                        const BasePotential& phi) {
  sys.registered.emplace_back(name, induce_potential(sys.base, phi));
}

const InducedPotential& lookup(const InducedSystem& sys,
                               const std::string& name) {
  for (const auto& [k, v] : sys.registered)
    if (k == name) return v;
  throw DomainError("no induced potential named " + name);
}

TermFamily return_indexed(const TermFamily& branch_family) {
  return shift_index(branch_family, 1);
}

GibbsWeights gibbs_weights(const BranchValues& pot,
                           const Rational& base_pressure,
                           const ReturnTimes& returns, bool unit_sum,
                           const SeriesOptions& opt) {
  TermFamily f = weight_family(Rational(1), pot);
  f = tilt_family(f, -base_pressure * returns.slope,
                  -rat_d(base_pressure) * (double)returns.offset);
  for (const auto& [n, r] : returns.special) {
    long affine = returns.slope * n + returns.offset;
    if (r == affine) continue;
    double cur = f.expr.evaluate(n);
    f.expr.overrides[n] = cur - rat_d(base_pressure) * (double)(r - affine);
  }
  if (unit_sum) f.sum_is_one = true;
  GibbsWeights w;
  w.family = f;
  w.cls = classify_family(f);
  w.total = sum_family(f, opt);
  return w;
}

const char* ext_name(ExtReal::Status s) {
  switch (s) {
    case ExtReal::Finite: return "finite";
    case ExtReal::PlusInfinity: return "+infinity";
    case ExtReal::MinusInfinity: return "-infinity";
    default: return "indeterminate";
  }
}

namespace {

int eventual_sign(const BranchValues& v) {
  if (!rat_zero(v.lin)) return sgn(v.lin);
  if (!rat_zero(v.expr.c1)) return sgn(v.expr.c1);
  if (!rat_zero(v.expr.c2)) return sgn(v.expr.c2);
  if (!rat_zero(v.expr.c3)) return sgn(v.expr.c3);
  if (v.expr.c0 > 0.0) return 1;
  if (v.expr.c0 < 0.0) return -1;
  return 0;
}

ExtReal indeterminate() {
  ExtReal e;
  e.status = ExtReal::Indeterminate;
  return e;
}

}  // namespace

ExtReal weighted_integral(const TermFamily& weights, const BranchValues& v,
                          const SeriesOptions& opt) {
  if (weights.factor)
    throw DomainError("weighted integral expects a plain weight family");
  ExtReal out;

  if (weights.n_end) {
    double acc = 0.0, aacc = 0.0;
    for (long n = weights.n_start; n <= *weights.n_end; ++n) {
      double t = weights.term(n) * v.value(n);
      acc += t;
      aacc += std::abs(t);
    }
    double slop = aacc * 1e-14 + 1e-300;
    out.value = acc - slop;
    out.err = 2.0 * slop;
    return out;
  }

  int s = eventual_sign(v);
  if (s == 0) {
    // v vanishes beyond its overrides; only those branches contribute
    double acc = 0.0, aacc = 0.0;
    for (const auto& [n, val] : v.expr.overrides) {
      if (n < weights.n_start) continue;
      double t = weights.term(n) * val;
      acc += t;
      aacc += std::abs(t);
    }
    double slop = aacc * 1e-14 + 1e-300;
    out.value = acc - slop;
    out.err = 2.0 * slop;
    return out;
  }

  BranchValues w = s > 0 ? v : scale_values(Rational(-1), v);
  std::optional<long> from = certified_nondecreasing_from(w, weights.n_start);
  if (!from) return indeterminate();
  long n1 = *from;
  while (!(w.value(n1) > 0.0)) {
    if (n1 > (1L << 22)) return indeterminate();
    n1 *= 2;
  }

  TermFamily tail = weights;
  tail.n_start = std::max(weights.n_start, n1);
  tail.sum_is_one = false;
  FactorSpec fac;
  fac.mu = w.lin;
  fac.expr = w.expr;
  tail.factor = fac;

  BertrandClass cls = classify_family(tail);
  if (!cls.convergent()) {
    out.status = s > 0 ? ExtReal::PlusInfinity : ExtReal::MinusInfinity;
    return out;
  }
  SeriesValue sv = sum_family(tail, opt);
  if (sv.status == SeriesValue::Divergent) {
    out.status = s > 0 ? ExtReal::PlusInfinity : ExtReal::MinusInfinity;
    return out;
  }
  if (sv.status != SeriesValue::Finite) return indeterminate();

  double acc = 0.0, aacc = 0.0;
  for (long n = weights.n_start; n < tail.n_start; ++n) {
    double t = weights.term(n) * v.value(n);
    acc += t;
    aacc += std::abs(t);
  }
  double slop = aacc * 1e-14 + 1e-300;
  if (s > 0) {
    out.value = acc - slop + sv.value;
    out.err = 2.0 * slop + sv.err;
  } else {
    out.value = acc - slop - (sv.value + sv.err);
    out.err = 2.0 * slop + sv.err;
  }
  return out;
}

namespace {

ExtReal ext_ratio(const ExtReal& num, const ExtReal& den) {
  if (num.status == ExtReal::Indeterminate ||
      den.status == ExtReal::Indeterminate || den.status == ExtReal::MinusInfinity)
    return indeterminate();
  if (den.status == ExtReal::PlusInfinity) {
    if (num.status == ExtReal::Finite) return ExtReal{ExtReal::Finite, 0.0, 0.0};
    return indeterminate();
  }
  double dlo = den.value, dhi = den.value + den.err;
  if (!(dlo > 0.0)) return indeterminate();
  ExtReal out;
  if (num.status != ExtReal::Finite) {
    out.status = num.status;
    return out;
  }
  double q1 = num.value / dlo, q2 = num.value / dhi;
  double q3 = (num.value + num.err) / dlo, q4 = (num.value + num.err) / dhi;
  double lo = std::min(std::min(q1, q2), std::min(q3, q4));
  double hi = std::max(std::max(q1, q2), std::max(q3, q4));
  out.value = lo;
  out.err = hi - lo;
  return out;
}

}  // namespace

MeasureStats project_stats(const GibbsWeights& w, const ReturnTimes& returns,
                           const BranchValues& roof,
                           const BranchValues& induced_phi,
                           const SeriesOptions& opt) {
  if (w.total.status != SeriesValue::Finite ||
      w.total.value > 1.0 + 1e-6 || w.total.value + w.total.err < 1.0 - 1e-6)
    throw DomainError("weights are not a certified probability vector");
  if (!w.family.lin_exact())
    throw DomainError("entropy series needs an exact linear exponent");

  BranchValues log_weight;
  log_weight.lin = w.family.lin;
  log_weight.expr = w.family.expr;

  MeasureStats st;
  st.entropy = weighted_integral(w.family, scale_values(Rational(-1), log_weight), opt);

  BranchValues mean_return;
  mean_return.lin = Rational(returns.slope);
  mean_return.expr = constant_expr((double)returns.offset);
  for (const auto& [n, r] : returns.special) {
    long affine = returns.slope * n + returns.offset;
    if (r != affine)
      mean_return.expr.overrides[n] = (double)(r - returns.slope * n);
  }
  st.integral_r = weighted_integral(w.family, mean_return, opt);
  st.integral_tau = weighted_integral(w.family, roof, opt);
  st.integral_phi = weighted_integral(w.family, induced_phi, opt);
  st.finite_base_measure = st.integral_r.status == ExtReal::Finite;
  st.base_entropy = ext_ratio(st.entropy, st.integral_r);
  st.flow_entropy = ext_ratio(st.entropy, st.integral_tau);
  return st;
}

}  // namespace thermo
