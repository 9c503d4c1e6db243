#include "thermo/mp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "thermo/kernels.hpp"

namespace thermo {

double mp_map(double x, double alpha) {
  if (x < 0.5) return x * (1.0 + std::pow(2.0, alpha) * std::pow(x, alpha));
  return 2.0 * x - 1.0;
}

double mp_deriv(double x, double alpha) {
  if (x < 0.5)
    return 1.0 + std::pow(2.0, alpha) * (1.0 + alpha) * std::pow(x, alpha);
  return 2.0;
}

namespace {

constexpr double kLog2 = 0.6931471805599453;

// Solves x*(1 + c*x^alpha) = target for the root in (0, start]. The left
// branch is increasing and convex, so Newton from above converges
// monotonically; a bisection pass picks up the rare stall near the neutral
// point.
double left_inverse(double target, double start, double alpha, double c,
                    long step_id) {
  double x = start;
  double tol = 1e-15 + 4e-16 * target;
  for (int it = 0; it < 100; ++it) {
    double p = std::pow(x, alpha);
    double r = x * (1.0 + c * p) - target;
    if (std::abs(r) <= tol) return x;
    double d = 1.0 + c * (1.0 + alpha) * p;
    double xn = x - r / d;
    if (!(xn > 0.0) || xn >= x) break;
    x = xn;
  }
  double lo = 0.0, hi = start;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double r = mid * (1.0 + c * std::pow(mid, alpha)) - target;
    if (std::abs(r) <= tol) return mid;
    if (r > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double r = hi * (1.0 + c * std::pow(hi, alpha)) - target;
  if (std::abs(r) <= 1e-13) return hi;
  throw ConvergenceFailure(step_id);
}

double logd_left(double x, double alpha, double c) {
  return std::log1p(c * (1.0 + alpha) * std::pow(x, alpha));
}

}  // namespace

MpBranchData build_branches(double alpha, long n_max) {
  if (!(alpha > 0.0) || n_max < 2)
    throw std::invalid_argument("build_branches: need alpha > 0, n_max >= 2");
  double c = std::pow(2.0, alpha);
  MpBranchData data;
  data.alpha = alpha;
  data.chain.resize((size_t)n_max);
  data.chain_logd.resize((size_t)n_max);
  data.chain[0] = 0.5;
  data.chain_logd[0] = logd_left(0.5, alpha, c);
  for (long k = 1; k < n_max; ++k) {
    data.chain[(size_t)k] =
        left_inverse(data.chain[(size_t)k - 1], data.chain[(size_t)k - 1],
                     alpha, c, k);
    data.chain_logd[(size_t)k] = logd_left(data.chain[(size_t)k], alpha, c);
  }
  data.branches.resize((size_t)n_max);
  double prefix = 0.0;  // sum of chain_logd[0..n-1]
  for (long n = 0; n < n_max; ++n) {
    MpBranch& b = data.branches[(size_t)n];
    b.steps = n;
    b.left = 0.5 * (data.chain[(size_t)n] + 1.0);
    b.right = n == 0 ? 1.0 : 0.5 * (data.chain[(size_t)n - 1] + 1.0);
    if (n == 0) {
      b.tau_lo = kLog2;
      b.tau_hi = kLog2;
    } else {
      b.tau_hi = kLog2 + prefix;
      b.tau_lo = b.tau_hi + data.chain_logd[(size_t)n] - data.chain_logd[0];
    }
    prefix += data.chain_logd[(size_t)n];
  }
  return data;
}

namespace {

// Fitted decay exponent of e_n over the last decade of the built range,
// deflated for safety. Used only to majorize the branch tail beyond the
// cap, and flagged in notes as an extrapolation.
double tail_exponent(const std::vector<double>& e) {
  long n = (long)e.size();
  if (n < 16) return 0.0;
  long a = std::max(2L, n / 10);
  double slope = (e[(size_t)(n - 1)] - e[(size_t)a]) /
                 (std::log((double)(n - 1)) - std::log((double)a));
  return 0.8 * slope;
}

double tail_majorant(double last_value, double q, long n_total) {
  if (q <= 1.02) return 1e300;
  double nn = (double)n_total;
  return std::exp(-last_value) * std::pow((nn - 1.0) / nn, q) *
         (1.0 + nn / (q - 1.0));
}

struct ArrayEquation {
  const std::vector<double>* tau;
  const std::vector<double>* pot;  // null for zero potential
  bool with_tail = false;
  double exponent_at(double s, long n) const {
    double e = s * (*tau)[(size_t)n];
    if (pot) e -= (*pot)[(size_t)n];
    return e;
  }
  double value(double s) const {
    const std::vector<double>& tv = *tau;
    long n = (long)tv.size();
    double sum = kernels::sum_indexed(
        0, n, [&](long k) { return std::exp(-exponent_at(s, k)); });
    // The tail exponent is refit at each s from the live combination of
    // roof and potential; a fixed pre-scaled fit would undershoot when the
    // potential carries its own slope.
    if (with_tail && n >= 16) {
      long a = std::max(2L, n / 10);
      double e1 = exponent_at(s, n - 1);
      double q = 0.8 * (e1 - exponent_at(s, a)) /
                 (std::log((double)(n - 1)) - std::log((double)a));
      sum += tail_majorant(e1, q, n);
    }
    return sum;
  }
};

// Root of eq(s) = 1 on [lo, hi]; eq is strictly decreasing. An exact
// floating hit collapses the bracket to a point.
struct RootResult {
  double lo, hi;
  bool exact;
};

RootResult bisect_unit(const ArrayEquation& eq, double lo, double hi) {
  double flo = eq.value(lo);
  if (flo == 1.0) return {lo, lo, true};
  if (flo < 1.0) return {lo, lo, false};
  for (int it = 0; it < 64; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = eq.value(mid);
    if (f == 1.0) return {mid, mid, true};
    if (f > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi, false};
}

}  // namespace

MpBracket mp_s_infinity(const MpBranchData& data) {
  long n = (long)data.branches.size();
  if (n < 64) throw std::invalid_argument("mp_s_infinity: too few branches");
  long cps[4] = {n / 8, n / 4, n / 2, n - 1};
  double est[6];
  int k = 0;
  double last_pair[2] = {0.0, 0.0}, prev_pair[2] = {0.0, 0.0};
  for (int arr = 0; arr < 2; ++arr) {
    for (int w = 0; w < 3; ++w) {
      double t1, t0;
      if (arr == 0) {
        t1 = data.branches[(size_t)cps[w + 1]].tau_lo;
        t0 = data.branches[(size_t)cps[w]].tau_lo;
      } else {
        t1 = data.branches[(size_t)cps[w + 1]].tau_hi;
        t0 = data.branches[(size_t)cps[w]].tau_hi;
      }
      double slope =
          (t1 - t0) / (std::log((double)cps[w + 1]) - std::log((double)cps[w]));
      est[k] = 1.0 / slope;
      if (w == 2) last_pair[arr] = est[k];
      if (w == 1) prev_pair[arr] = est[k];
      ++k;
    }
  }
  double drift = std::max(std::abs(last_pair[0] - prev_pair[0]),
                          std::abs(last_pair[1] - prev_pair[1]));
  double pad = std::max(1e-3, 4.0 * drift);
  MpBracket out;
  out.lo = *std::min_element(est, est + 6) - pad;
  out.hi = *std::max_element(est, est + 6) + pad;
  out.note = "reciprocal roof slopes at geometric checkpoints, padded by 4x "
             "the inter-window drift (floor 1e-3)";
  return out;
}

namespace {

// Mesh refinement of [1/2,1): cylinder endpoints plus extra subdivision
// points in the heavy cylinders. Row j of `roof` holds the roof value at
// the branch-n preimage of mesh point j; cell_lo/cell_hi bracket the cell
// containing that preimage (nudged one point either way so a boundary
// rounding error can only widen the enclosure).
struct Mesh {
  std::vector<double> y;               // mesh points, ascending, 0.5 .. 1.0
  std::vector<std::vector<double>> roof;
  std::vector<std::vector<int>> cell_lo, cell_hi;
};

int cell_of(const std::vector<double>& y, double x) {
  auto it = std::upper_bound(y.begin(), y.end(), x);
  long i = (long)(it - y.begin()) - 1;
  i = std::max(0L, std::min(i, (long)y.size() - 2));
  return (int)i;
}

Mesh build_mesh(const MpBranchData& data) {
  long n_max = (long)data.branches.size();
  long bcyl = std::min<long>(96, n_max / 4);
  std::vector<double> pts;
  pts.push_back(0.5);
  pts.push_back(1.0);
  for (long n = 0; n < bcyl; ++n) {
    const MpBranch& b = data.branches[(size_t)n];
    pts.push_back(b.left);
    long sub = n == 0 ? 24 : n < 8 ? 6 : n < 24 ? 2 : 0;
    for (long j = 1; j <= sub; ++j)
      pts.push_back(b.left + b.length() * (double)j / (double)(sub + 1));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Mesh mesh;
  mesh.y = std::move(pts);
  long m = (long)mesh.y.size();
  mesh.roof.assign((size_t)m, {});
  mesh.cell_lo.assign((size_t)m, {});
  mesh.cell_hi.assign((size_t)m, {});
  double c = std::pow(2.0, data.alpha);

#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < m; ++j) {
    std::vector<double>& row = mesh.roof[(size_t)j];
    std::vector<int>& clo = mesh.cell_lo[(size_t)j];
    std::vector<int>& chi = mesh.cell_hi[(size_t)j];
    row.resize((size_t)n_max);
    clo.resize((size_t)n_max);
    chi.resize((size_t)n_max);
    double yj = mesh.y[(size_t)j];
    bool bottom = j == 0;          // y = 1/2: preimages are the z-chain
    bool top = j == m - 1;         // y = 1: preimages are the shifted chain
    double cur = yj;
    double acc = 0.0;
    for (long n = 0; n < n_max; ++n) {
      double pre;  // branch-n preimage of yj, as a point of [1/2,1)
      if (n == 0) {
        pre = 0.5 * (yj + 1.0);
        row[0] = kLog2;
      } else {
        if (bottom) {
          cur = data.chain[(size_t)n];
          acc += data.chain_logd[(size_t)n];
        } else if (top) {
          cur = data.chain[(size_t)n - 1];
          acc += data.chain_logd[(size_t)n - 1];
        } else {
          cur = left_inverse(cur, std::min(cur, 0.5), data.alpha, c, n);
          acc += logd_left(cur, data.alpha, c);
        }
        pre = 0.5 * (cur + 1.0);
        row[(size_t)n] = kLog2 + acc;
      }
      clo[(size_t)n] = cell_of(mesh.y, pre - 1e-13);
      chi[(size_t)n] = cell_of(mesh.y, pre + 1e-13);
    }
  }
  return mesh;
}

// One-sided growth-rate bounds for the weighted preimage operator at
// parameter s, over the cone of positive decreasing functions. h is built
// by plain iteration; the returned pair brackets the leading eigenvalue,
// so log lower > 0 certifies s below the root and log upper < 0 certifies
// s above it.
struct OperatorBound {
  const Mesh* mesh;
  long n_max;
  double tail_q;

  std::pair<double, double> eigen_bounds(double s) const {
    const Mesh& msh = *mesh;
    long m = (long)msh.y.size();
    std::vector<std::vector<double>> w((size_t)m);
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < m; ++j) {
      w[(size_t)j].resize((size_t)n_max);
      for (long n = 0; n < n_max; ++n)
        w[(size_t)j][(size_t)n] =
            std::exp(-s * msh.roof[(size_t)j][(size_t)n]);
    }
    double tail = 0.0;
    {
      double last = s * msh.roof[0][(size_t)(n_max - 1)];
      tail = tail_majorant(last, s * tail_q, n_max);
    }
    std::vector<double> h((size_t)m, 1.0), hn((size_t)m);
    double spread_prev = -1.0;
    for (int it = 0; it < 80; ++it) {
#pragma omp parallel for schedule(static)
      for (long j = 0; j < m; ++j) {
        double sum = 0.0;
        for (long n = 0; n < n_max; ++n)
          sum += w[(size_t)j][(size_t)n] *
                 h[(size_t)msh.cell_hi[(size_t)j][(size_t)n]];
        hn[(size_t)j] = sum;
      }
      double rmin = 1e300, rmax = 0.0;
      for (long j = 0; j < m; ++j) {
        double r = hn[(size_t)j] / h[(size_t)j];
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
      }
      double top = hn[0];
      for (long j = 0; j < m; ++j) h[(size_t)j] = hn[(size_t)j] / top;
      double spread = rmax / rmin;
      if (spread_prev > 0.0 && std::abs(spread - spread_prev) < 1e-11) break;
      spread_prev = spread;
    }
    std::vector<double> app_lo((size_t)m), app_hi((size_t)m);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < m; ++j) {
      double slo = 0.0, shi = 0.0;
      for (long n = 0; n < n_max; ++n) {
        double wv = w[(size_t)j][(size_t)n];
        slo += wv * h[(size_t)(msh.cell_hi[(size_t)j][(size_t)n] + 1)];
        shi += wv * h[(size_t)msh.cell_lo[(size_t)j][(size_t)n]];
      }
      app_lo[(size_t)j] = slo;
      app_hi[(size_t)j] = shi + tail * h[0];
    }
    double lam_lo = 1e300, lam_hi = 0.0;
    for (long i = 0; i + 1 < m; ++i) {
      lam_lo = std::min(lam_lo, app_lo[(size_t)i + 1] / h[(size_t)i]);
      lam_hi = std::max(lam_hi, app_hi[(size_t)i] / h[(size_t)i + 1]);
    }
    return {lam_lo, lam_hi};
  }
};

}  // namespace

MpBracket mp_flow_entropy(const MpBranchData& data) {
  long n_max = (long)data.branches.size();
  std::vector<double> tau_lo((size_t)n_max), tau_hi((size_t)n_max);
  for (long n = 0; n < n_max; ++n) {
    tau_lo[(size_t)n] = data.branches[(size_t)n].tau_lo;
    tau_hi[(size_t)n] = data.branches[(size_t)n].tau_hi;
  }
  double tail_q = tail_exponent(tau_lo);

  ArrayEquation up{&tau_hi, nullptr, false};
  ArrayEquation dn{&tau_lo, nullptr, true};
  RootResult coarse_lo = bisect_unit(up, 0.0, 8.0);
  RootResult coarse_hi = bisect_unit(dn, 0.0, 8.0);
  double lo = coarse_lo.lo, hi = coarse_hi.hi;

  if (n_max >= 256) {
    Mesh mesh = build_mesh(data);
    OperatorBound op{&mesh, n_max, tail_q};
    double blo = 1e-6, bhi = 8.0;
    // largest s certified below the root
    {
      double a = blo, b = bhi;
      if (op.eigen_bounds(a).first > 1.0) {
        for (int it = 0; it < 44; ++it) {
          double mid = 0.5 * (a + b);
          if (op.eigen_bounds(mid).first > 1.0)
            a = mid;
          else
            b = mid;
        }
        lo = std::max(lo, a);
      }
    }
    // smallest s certified above the root
    {
      double a = blo, b = bhi;
      if (op.eigen_bounds(b).second < 1.0) {
        for (int it = 0; it < 44; ++it) {
          double mid = 0.5 * (a + b);
          if (op.eigen_bounds(mid).second < 1.0)
            b = mid;
          else
            a = mid;
        }
        hi = std::min(hi, b);
      }
    }
  }
  MpBracket out;
  if (lo <= hi) {
    out.lo = lo;
    out.hi = hi;
  } else {
    out.lo = std::min(coarse_lo.lo, lo);
    out.hi = std::max(coarse_hi.hi, hi);
  }
  out.note = "endpoint-array bisections intersected with a positive-operator "
             "mesh bound; branch tail beyond the cap extrapolated from the "
             "fitted decay";
  return out;
}

const char* side_name(MpSide s) {
  switch (s) {
    case MpSide::RenewalSide: return "renewal";
    case MpSide::CuspSide: return "cusp";
    case MpSide::Tie: return "tie";
    default: return "indeterminate";
  }
}

MpEquilibriumReport mp_equilibrium(const MpBranchData& data,
                                   const AsymptoticExpr& induced_potential,
                                   double cusp_value) {
  induced_potential.validate();
  long n_max = (long)data.branches.size();
  std::vector<double> tau_lo((size_t)n_max), tau_hi((size_t)n_max),
      pot((size_t)n_max);
  for (long n = 0; n < n_max; ++n) {
    tau_lo[(size_t)n] = data.branches[(size_t)n].tau_lo;
    tau_hi[(size_t)n] = data.branches[(size_t)n].tau_hi;
    pot[(size_t)n] = induced_potential.evaluate(n);
  }

  MpEquilibriumReport rep;
  rep.cusp = cusp_value;

  ArrayEquation up{&tau_hi, &pot, false};
  ArrayEquation dn{&tau_lo, &pot, true};
  RootResult rlo = bisect_unit(up, -16.0, 16.0);
  RootResult rhi = bisect_unit(dn, -16.0, 16.0);
  rep.root.lo = rlo.lo;
  rep.root.hi = rhi.hi;
  if (rlo.exact && rhi.exact && rlo.lo == rhi.hi)
    rep.root.note = "exact floating collapse of the defining equation";

  rep.pressure.lo = std::max(rep.root.lo, cusp_value);
  rep.pressure.hi = std::max(rep.root.hi, cusp_value);

  // Decay exponent of the Gibbs weights at the root, used for the
  // return-time integrability verdicts.
  double q_gibbs = 0.0;
  if (n_max >= 16) {
    long a = std::max(2L, n_max / 10);
    double e1 = rep.root.lo * tau_lo[(size_t)(n_max - 1)] -
                pot[(size_t)(n_max - 1)];
    double e0 = rep.root.lo * tau_lo[(size_t)a] - pot[(size_t)a];
    q_gibbs = (e1 - e0) /
              (std::log((double)(n_max - 1)) - std::log((double)a));
  }

  if (rep.root.lo == rep.root.hi && rep.root.lo == cusp_value) {
    rep.side = MpSide::Tie;
    rep.verdict = EqExistence::TwoExist;
    rep.note = "both sides attain the pressure";
  } else if (cusp_value > rep.root.hi) {
    rep.side = MpSide::CuspSide;
    rep.verdict = EqExistence::UniqueExists;
    rep.note = "the neutral atom carries the pressure";
  } else if (cusp_value < rep.root.lo) {
    rep.side = MpSide::RenewalSide;
    if (n_max < 16) {
      rep.verdict = EqExistence::Indeterminate;
      rep.note = "too few branches to fit the weight decay";
    } else if (q_gibbs >= 1.15) {
      rep.verdict = EqExistence::UniqueExists;
      rep.note = "interior root with summable return-time integral";
      if (q_gibbs - 1.0 >= 1.15)
        rep.note += "; projects to a finite invariant measure of the "
                    "interval map";
      else if (q_gibbs - 1.0 <= 0.95)
        rep.note += "; projects to an infinite invariant measure of the "
                    "interval map";
      else
        rep.note += "; projection finiteness unresolved at this fit";
    } else if (q_gibbs <= 0.95) {
      rep.verdict = EqExistence::None;
      rep.note = "return-time integral diverges at the fitted decay";
    } else {
      rep.verdict = EqExistence::Indeterminate;
      rep.note = "return-time integrability unresolved at this fit";
    }
  } else {
    rep.side = MpSide::Indeterminate;
    rep.verdict = EqExistence::Indeterminate;
    rep.note = "atom value lies inside the root enclosure";
  }
  return rep;
}

void write_branch_csv(std::ostream& os, const MpBranchData& data) {
  os << "n,tau_lo,tau_hi,cyl_len\n";
  char buf[128];
  for (const MpBranch& b : data.branches) {
    std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.12g\n", b.steps,
                  b.tau_lo, b.tau_hi, b.length());
    os << buf;
  }
}

}  // namespace thermo
