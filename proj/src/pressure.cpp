#include "thermo/pressure.hpp"

#include "thermo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace thermo {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

PressureValue pressure_from_sum(const SeriesValue& s) {
  PressureValue out;
  switch (s.status) {
    case SeriesValue::Divergent:
      out.status = PressureValue::PlusInfinity;
      out.note = s.note;
      return out;
    case SeriesValue::Indeterminate:
      out.status = PressureValue::Indeterminate;
      out.note = s.note;
      return out;
    case SeriesValue::Finite:
      break;
  }
  out.status = PressureValue::Finite;
  if (s.value <= 0.0) {
    out.value = -kInf;
    out.err = s.err > 0.0 ? kInf : 0.0;
  } else {
    out.value = std::log(s.value);
    out.err = std::log(s.value + s.err) - out.value;
  }
  out.note = s.note;
  return out;
}

}  // namespace

PressureValue induced_pressure(const TermFamily& weights,
                               const SeriesOptions& opt) {
  return pressure_from_sum(sum_family(weights, opt));
}

PressureValue induced_pressure(const Rational& u, const AsymptoticExpr& e,
                               const SeriesOptions& opt) {
  TermFamily f;
  f.expr = scale_expr(u, e);
  f.n_start = 0;
  return induced_pressure(f, opt);
}

RenewalDP renewal_dp(const std::vector<double>& log_u, long n_max) {
  if (n_max < 1) throw DomainError("renewal convolution needs n_max >= 1");
  if ((long)log_u.size() < n_max + 1)
    throw DomainError("weight table shorter than n_max");
  RenewalDP dp;
  dp.log_u = log_u;
  dp.log_u.resize((size_t)n_max + 1);
  dp.log_z = kernels::renewal_log_dp_omp(dp.log_u, n_max);
  return dp;
}

std::vector<double> return_weight_logs(const TermFamily& ret_weights,
                                       long n_max) {
  std::vector<double> log_u((size_t)n_max + 1, -kInf);
  long last = ret_weights.n_end ? std::min(*ret_weights.n_end, n_max) : n_max;
  for (long k = std::max(1L, ret_weights.n_start); k <= last; ++k) {
    double v = ret_weights.log_exp_part(k);
    if (ret_weights.factor) {
      double a = ret_weights.factor->value_at(k);
      if (!(a > 0.0))
        throw DomainError("weight factor not positive at return time " +
                          std::to_string(k));
      v += std::log(a);
    }
    log_u[(size_t)k] = v;
  }
  return log_u;
}

DpEstimate dp_pressure_estimate(const RenewalDP& dp) {
  long n = (long)dp.log_z.size() - 1;
  if (n < 64) throw DomainError("growth estimate needs n_max >= 64");
  long from = n - n / 4 + 1;
  auto collect = [&](long stride) {
    std::vector<double> r;
    for (long i = std::max(from, stride); i <= n; ++i) {
      double a = dp.log_z[(size_t)i], b = dp.log_z[(size_t)(i - stride)];
      if (std::isfinite(a) && std::isfinite(b))
        r.push_back((a - b) / (double)stride);
    }
    return r;
  };
  std::vector<double> ratios = collect(1);
  if ((long)ratios.size() < (n / 4) / 2) ratios = collect(2);
  if (ratios.empty())
    throw DomainError("partition values vanish across the averaging window");
  DpEstimate out;
  out.window = (long)ratios.size();
  double lo = ratios[0], hi = ratios[0], sum = 0.0;
  for (double r : ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  out.estimate = sum / (double)ratios.size();
  out.oscillation = hi - lo;
  return out;
}

namespace {

void check_connected(const std::vector<std::vector<double>>& w) {
  size_t m = w.size();
  auto reach = [&](bool forward) {
    std::vector<char> seen(m, 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      size_t i = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < m; ++j) {
        double edge = forward ? w[i][j] : w[j][i];
        if (edge > 0.0 && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    return seen;
  };
  std::vector<char> fwd = reach(true), bwd = reach(false);
  for (size_t i = 0; i < m; ++i)
    if (!fwd[i] || !bwd[i])
      throw NotIrreducible("truncated graph is not strongly connected");
}

}  // namespace

PerronResult truncated_perron(const std::vector<std::vector<double>>& w) {
  size_t m = w.size();
  if (m == 0) throw DomainError("empty weight matrix");
  for (const auto& row : w) {
    if (row.size() != m) throw DomainError("weight matrix must be square");
    for (double v : row)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError("weights must be finite and nonnegative");
  }
  check_connected(w);

  std::vector<double> x(m, 1.0), y(m);
  double best_lo = 0.0, best_hi = kInf;
  PerronResult out;
  const long max_iter = 100000;
  for (long it = 1; it <= max_iter; ++it) {
    double lo = kInf, hi = 0.0, ymax = 0.0;
    for (size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (size_t j = 0; j < m; ++j) s += w[i][j] * x[j];
      y[i] = s;
      double ratio = s / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ymax = std::max(ymax, s);
    }
    // every iterate's ratio range contains the eigenvalue, so the
    // intersection is a valid, monotonically shrinking bracket
    best_lo = std::max(best_lo, lo);
    best_hi = std::min(best_hi, hi);
    out.iterations = it;
    if (best_hi - best_lo <= 1e-12 * std::max(1.0, best_hi)) break;
    for (size_t i = 0; i < m; ++i) x[i] = y[i] / ymax;
  }
  out.log_lo = std::log(best_lo);
  out.log_hi = std::log(best_hi);
  return out;
}

std::vector<std::vector<double>> renewal_truncation_weights(
    const std::vector<double>& phi, long m) {
  if (m < 1) throw DomainError("truncation must keep at least states 0 and 1");
  if ((long)phi.size() < m + 1)
    throw DomainError("potential table shorter than the truncation");
  std::vector<std::vector<double>> w((size_t)m + 1,
                                     std::vector<double>((size_t)m + 1, 0.0));
  for (long j = 0; j <= m; ++j) w[0][(size_t)j] = std::exp(phi[0]);
  for (long n = 1; n <= m; ++n)
    w[(size_t)n][(size_t)(n - 1)] = std::exp(phi[(size_t)n]);
  return w;
}

TermFamily return_series_at(const TermFamily& ret_weights, const Rational& p) {
  return tilt_family(ret_weights, -p, 0.0);
}

TermFamily return_series_at(const TermFamily& ret_weights, double p) {
  return return_series_at(ret_weights, Rational(p));
}

namespace {

bool pure_geometric(const TermFamily& w) {
  return w.expr.all_log_coeffs_zero() && w.expr.overrides.empty() &&
         !w.factor && !w.n_end && w.n_start == 1;
}

}  // namespace

ReturnEquation solve_return_equation(const TermFamily& ret_weights,
                                     std::optional<Rational> unit_sum_at,
                                     const SeriesOptions& opt,
                                     double root_tol) {
  const TermFamily& w = ret_weights;
  if (w.n_start < 1)
    throw DomainError("return-indexed weights must start at return time 1");
  ReturnEquation out;

  if (pure_geometric(w)) {
    // F(p) = e^{c0} x / (1 - x), x = e^{lin - p}: root at x = 1/(1+e^{c0})
    out.boundary = w.lin_total();
    out.boundary_exact = w.lin_exact();
    out.boundary_side = Cmp::Above;
    out.has_root = true;
    out.closed_form_root = true;
    double amp = w.expr.c0 == 0.0 ? 2.0 : 1.0 + std::exp(w.expr.c0);
    double root = w.lin_total() + std::log(amp);
    out.root_lo = out.root_hi = root;
    out.boundary_sum.status = SeriesValue::Divergent;
    out.boundary_sum.cls.kind = BertrandClass::PowerLog;
    out.boundary_sum.note = "geometric family, boundary sum diverges";
    return out;
  }

  if (!w.lin_exact())
    throw DomainError(
        "boundary analysis needs an exact linear exponent coefficient");
  if (unit_sum_at && w.factor)
    throw DomainError("normalization hints apply to factor-free families");

  auto at = [&](const Rational& p) { return tilt_family(w, -p, 0.0); };

  // the recorded boundary sum is informational; side decisions go through
  // compare_family, which picks its own working tolerance
  SeriesOptions info = opt;
  info.tol = std::max(opt.tol, 1e-9);

  bool finite_support = w.n_end.has_value();
  out.boundary = finite_support ? -kInf : rat_d(w.lin);
  out.boundary_exact = !finite_support;

  if (unit_sum_at && !finite_support) {
    int rel = cmp(*unit_sum_at, w.lin);
    if (rel < 0)
      throw DomainError("normalization hint below the finiteness boundary");
    if (rel == 0) {
      TermFamily t = at(w.lin);
      t.sum_is_one = true;
      out.boundary_sum = sum_family(t, info);
      out.boundary_side = Cmp::Straddles;
      out.boundary_symbolic = true;
      return out;
    }
    // F is exactly 1 strictly above the boundary: an exact interior root
    out.has_root = true;
    out.root_lo = out.root_hi = rat_d(*unit_sum_at);
    out.boundary_side = Cmp::Above;
    TermFamily tb = at(w.lin);
    out.boundary_sum = sum_family(tb, info);
    return out;
  }

  double lo, hi;
  bool have_bracket = false;

  if (!finite_support) {
    TermFamily tb = at(w.lin);
    BertrandClass cls = classify_family(tb);
    if (!cls.convergent()) {
      out.boundary_side = Cmp::Above;
      out.boundary_sum = sum_family(tb, info);
    } else {
      out.boundary_sum = sum_family(tb, info);
      out.boundary_side = compare_family(tb, 1.0, opt);
    }
    if (out.boundary_side != Cmp::Above) return out;
    // expand upward to a certified sub-unit point
    lo = out.boundary;
    double step = 1.0;
    hi = out.boundary + step;
    for (int tries = 0; tries < 64; ++tries) {
      Cmp c = compare_family(at(Rational(hi)), 1.0, opt);
      if (c == Cmp::Below) {
        have_bracket = true;
        break;
      }
      if (c == Cmp::Above) lo = hi;
      step *= 2.0;
      hi = out.boundary + step;
    }
  } else {
    // finite support: F is a strictly decreasing homeomorphism of the line
    out.boundary_side = Cmp::Above;
    out.boundary_sum.status = SeriesValue::Divergent;
    out.boundary_sum.cls.kind = BertrandClass::FiniteSupport;
    out.boundary_sum.note = "finite family, sum grows without bound as the "
                            "parameter decreases";
    lo = 0.0;
    double step = 1.0;
    for (int tries = 0; tries < 64; ++tries) {
      if (compare_family(at(Rational(lo)), 1.0, opt) == Cmp::Above) break;
      lo -= step;
      step *= 2.0;
    }
    if (compare_family(at(Rational(lo)), 1.0, opt) != Cmp::Above)
      throw DomainError("no lower bracket for the finite-support root");
    step = 1.0;
    hi = lo + step;
    for (int tries = 0; tries < 64; ++tries) {
      Cmp c = compare_family(at(Rational(hi)), 1.0, opt);
      if (c == Cmp::Below) {
        have_bracket = true;
        break;
      }
      if (c == Cmp::Above) lo = hi;
      step *= 2.0;
      hi = lo + step;
    }
  }

  if (!have_bracket)
    throw DomainError("could not bracket the pressure equation root");

  while (hi - lo > root_tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    // tighten the series enclosure along with the bracket, floored where
    // float rounding of the partial sums dominates
    SeriesOptions mid_opt = opt;
    mid_opt.tol =
        std::min(opt.tol, std::max(1e-14, 0.125 * (hi - lo)));
    Cmp c = compare_family(at(Rational(mid)), 1.0, mid_opt);
    if (c == Cmp::Above) {
      lo = mid;
    } else if (c == Cmp::Below) {
      hi = mid;
    } else {
      break;  // series enclosure contains 1: the root is inside [lo, hi]
    }
  }
  out.has_root = true;
  out.root_lo = lo;
  out.root_hi = hi;
  return out;
}

}  // namespace thermo
