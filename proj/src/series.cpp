#include "thermo/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "thermo/kernels.hpp"

namespace thermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Increment psi(k+1) - psi(k) of the level-`level` ladder function with shift
// s. Positive and decreasing in k, which is what every sup/inf bound below
// leans on.
double ladder_increment(int level, double s, double k) {
  switch (level) {
    case 1:
      return std::log((k + 1 + s) / (k + s));
    case 2:
      return std::log(std::log(k + 1 + s) / std::log(k + s));
    default:
      return std::log(std::log(std::log(k + 1 + s)) / std::log(std::log(k + s)));
  }
}

double ladder_derivative(int level, double s, double x) {
  double a = x + s;
  switch (level) {
    case 1:
      return 1.0 / a;
    case 2:
      return 1.0 / (a * std::log(a));
    default: {
      double l = std::log(a);
      return 1.0 / (a * l * std::log(l));
    }
  }
}

struct Integrand {
  const TermFamily* f;
  double operator()(double x) const {
    double lg = f->lin_total() * x + f->expr.closed_form(x);
    double v = lg < -745.0 ? 0.0 : std::exp(lg);
    if (f->factor) v *= f->factor->value(x);
    return v;
  }
};

// ---------------------------------------------------------------------------
// adaptive Simpson quadrature

template <class F>
void simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth, double& out,
                 double& errest) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double d = left + right - whole;
  if (depth <= 0 || std::abs(d) <= 15.0 * tol) {
    out += left + right + d / 15.0;
    errest += std::abs(d) / 15.0;
    return;
  }
  simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out, errest);
  simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out, errest);
}

template <class F>
Interval integrate_segment(F f, double a, double b, double reltol) {
  if (!(b > a)) return {0.0, 0.0};
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol = std::max(std::abs(whole) * reltol, 1e-320);
  double out = 0.0, errest = 0.0;
  simpson_rec(f, a, b, fa, fm, fb, whole, tol, 44, out, errest);
  double slack = errest * 8.0 + std::abs(out) * 4e-14 + 1e-300;
  return {out - slack, out + slack};
}

// ---------------------------------------------------------------------------
// shiftless asymptotic remainders
//
//   integral over [U, inf) of exp(logC) * e^{-lam*u} u^{-g1} (log u)^{-g2}
//   (loglog u)^{-g3} du
//
// evaluated by geometric sweeps in the substituted coordinate, with an
// analytic bound on the crumb beyond the last segment.

Interval exp_polylog_tail(double lam, double g1, double g2, double g3,
                          double logC, double U) {
  if (!(lam > 0.0)) throw DomainError("tail exponent is not positive");
  auto lh = [&](double u) {
    double v = logC - lam * u;
    if (g1 != 0.0) v -= g1 * std::log(u);
    if (g2 != 0.0) v -= g2 * std::log(std::log(u));
    if (g3 != 0.0) v -= g3 * std::log(std::log(std::log(u)));
    return v;
  };
  auto h = [&](double u) {
    double v = lh(u);
    return v < -745.0 ? 0.0 : std::exp(v);
  };
  double gneg = std::max(0.0, -g1) + std::max(0.0, -g2) + std::max(0.0, -g3);
  Interval acc{0.0, 0.0};
  double l = U;
  for (int seg = 0; seg < 512; ++seg) {
    double r = 2.0 * l + 16.0;
    Interval s = integrate_segment(h, l, r, 1e-13);
    acc.lo += s.lo;
    acc.hi += s.hi;
    l = r;
    bool safe = l >= 2.0 * (gneg + 1.0) / lam;
    if (!safe) continue;
    double rest = h(l) * 2.0 / lam;
    if (lh(l) < std::min(logC, 0.0) - 900.0 ||
        rest <= 1e-16 * std::max(acc.lo, 0.0) + 1e-300) {
      acc.hi += rest + 1e-300;
      acc.lo = std::max(acc.lo, 0.0);
      return acc;
    }
  }
  throw DomainError("tail integral did not settle");
}

Interval shiftless_tail(const std::array<Rational, 4>& beta, double logC,
                        double U) {
  if (beta[0] > 1) {
    double lam = rat_d(beta[0] - Rational(1));
    return exp_polylog_tail(lam, rat_d(beta[1]), rat_d(beta[2]),
                            rat_d(beta[3]), logC, std::log(U));
  }
  if (beta[0] == 1) {
    if (U <= 1.05) throw DomainError("tail substitution left its domain");
    return shiftless_tail({beta[1], beta[2], beta[3], Rational(0)}, logC,
                          std::log(U));
  }
  throw DomainError("tail class is divergent");
}

// Bound on |log f_shifted(x) - log f_shiftless(x)| for x >= X coming from the
// ladder shifts in the exponent.
double shift_dev(const AsymptoticExpr& e, double X) {
  double d = 0.0;
  auto add = [&](const Rational& c, double s, int level) {
    if (rat_zero(c)) return;
    double as = std::abs(s);
    double base = as / (X - as);
    if (level >= 2) base /= std::log(0.5 * X);
    if (level >= 3) base /= std::log(std::log(0.5 * X));
    d += std::abs(rat_d(c)) * base;
  };
  add(e.c1, e.s1, 1);
  add(e.c2, e.s2, 2);
  add(e.c3, e.s3, 3);
  return d;
}

struct FreezeInfo {
  std::array<Rational, 4> beta;
  double logC = 0.0;
  double dev = 0.0;
};

// Shiftless power-log form matching the family beyond X, with a relative
// deviation bound. The factor contributes one exponent level and its
// sub-leading terms go into the deviation.
FreezeInfo freeze_family(const TermFamily& f, double X) {
  FreezeInfo z;
  z.beta = {-f.expr.c1, -f.expr.c2, -f.expr.c3, Rational(0)};
  z.logC = f.expr.c0;
  z.dev = shift_dev(f.expr, X);
  if (!f.factor) return z;
  const FactorSpec& A = *f.factor;
  double l1 = std::log(X);
  double f1 = rat_d(A.expr.c1), f2 = rat_d(A.expr.c2), f3 = rat_d(A.expr.c3);
  double a1 = std::abs(A.expr.s1), a2 = std::abs(A.expr.s2),
         a3 = std::abs(A.expr.s3);
  double t1 = std::abs(f1) * std::log(X + a1);
  double t2 = std::abs(f2) * std::log(std::log(X + a2));
  double t3 = std::abs(f3) * std::log(std::log(std::log(X + a3 + 16.0)));
  double t0 = std::abs(A.expr.c0);
  if (sgn(A.mu) > 0) {
    z.beta[0] -= 1;
    z.logC += std::log(rat_d(A.mu));
    z.dev += (t1 + t2 + t3 + t0) / (rat_d(A.mu) * X);
  } else if (sgn(A.mu) < 0) {
    throw DomainError("factor with negative linear part");
  } else if (f1 != 0.0) {
    if (f1 < 0.0) throw DomainError("factor leading coefficient must be positive");
    z.beta[1] -= 1;
    z.logC += std::log(f1);
    double drift = std::abs(f1) * a1 / (X - a1);
    z.dev += (drift + t2 + t3 + t0) / (f1 * l1);
  } else if (f2 != 0.0) {
    if (f2 < 0.0) throw DomainError("factor leading coefficient must be positive");
    z.beta[2] -= 1;
    z.logC += std::log(f2);
    double drift = std::abs(f2) * a2 / (X - a2);
    z.dev += (drift + t3 + t0) / (f2 * std::log(l1));
  } else if (f3 != 0.0) {
    if (f3 < 0.0) throw DomainError("factor leading coefficient must be positive");
    z.beta[3] -= 1;
    z.logC += std::log(f3);
    double drift = std::abs(f3) * a3 / (X - a3);
    z.dev += (drift + t0) / (f3 * std::log(std::log(l1 + 3.0)));
  } else {
    if (A.expr.c0 <= 0.0) throw DomainError("nonpositive constant factor");
    z.logC += std::log(A.expr.c0);
  }
  return z;
}

double max_abs_shift(const TermFamily& f) {
  double m = std::max({std::abs(f.expr.s1), std::abs(f.expr.s2),
                       std::abs(f.expr.s3), 1.0});
  if (f.factor)
    m = std::max({m, std::abs(f.factor->expr.s1), std::abs(f.factor->expr.s2),
                  std::abs(f.factor->expr.s3)});
  return m;
}

// integral over [a, inf) of the family integrand: geometric Simpson sweep up
// to a freeze point, then the shiftless remainder inflated by the deviation
// bound.
Interval quad_tail(const TermFamily& f, double a, double tol_hint) {
  Integrand g{&f};
  double X = std::max({2.0 * a, 1e8, 1e4 * max_abs_shift(f)});
  for (int t = 0; t < 9; ++t) {
    double dev = freeze_family(f, X).dev;
    double rmag = g(X) * X * (1.0 + std::log(X)) * 20.0;
    if (dev * rmag <= 0.25 * tol_hint + 1e-18 || X > 6e12) break;
    X *= 8.0;
  }
  Interval S{0.0, 0.0};
  double l = a;
  while (l < X) {
    double r = std::min(X, 2.0 * l + 16.0);
    Interval s = integrate_segment(g, l, r, 5e-14);
    S.lo += s.lo;
    S.hi += s.hi;
    l = r;
  }
  FreezeInfo z = freeze_family(f, X);
  Interval R = shiftless_tail(z.beta, z.logC, X);
  S.lo += std::max(0.0, R.lo) * std::exp(-z.dev);
  S.hi += R.hi * std::exp(z.dev);
  S.lo = std::max(S.lo, 0.0);
  return S;
}

// Exact antiderivative patterns for factor-free families whose active shifts
// agree; these carry the high-precision comparisons near critical lines.
std::optional<Interval> pure_closed_tail(const TermFamily& f,
                                         const BertrandClass& c, double a) {
  if (f.factor) return std::nullopt;
  const AsymptoticExpr& e = f.expr;
  double C = std::exp(e.c0);
  double I = 0.0;
  if (c.p > 1 && rat_zero(c.q) && rat_zero(c.r)) {
    double pd = rat_d(c.p);
    I = C * std::pow(a + e.s1, 1.0 - pd) / (pd - 1.0);
  } else if (c.p == 1 && c.q > 1 && rat_zero(c.r) && e.s1 == e.s2) {
    double qd = rat_d(c.q);
    I = C * std::pow(std::log(a + e.s1), 1.0 - qd) / (qd - 1.0);
  } else if (c.p == 1 && c.q == 1 && c.r > 1 && e.s1 == e.s2 && e.s2 == e.s3) {
    double rd = rat_d(c.r);
    I = C * std::pow(std::log(std::log(a + e.s1)), 1.0 - rd) / (rd - 1.0);
  } else {
    return std::nullopt;
  }
  return Interval{I * (1.0 - 2e-13), I * (1.0 + 2e-13)};
}

// Certifies that the integrand decreases on [N, inf): the leading 1/x decay
// must dominate every growing contribution, each frozen at N by monotonicity.
bool certified_decreasing_from(const TermFamily& f, double N) {
  double p = -rat_d(f.expr.c1);
  if (!(p > 0.0)) return false;
  double s1 = f.expr.s1;
  auto ksup = [&](double so) { return std::max(1.0, (N + s1) / (N + so)); };
  double frac = 0.0;
  double c2 = rat_d(f.expr.c2), c3 = rat_d(f.expr.c3);
  if (c2 > 0.0) frac += c2 * ksup(f.expr.s2) / (p * std::log(N + f.expr.s2));
  if (c3 > 0.0) {
    double lg = std::log(N + f.expr.s3);
    frac += c3 * ksup(f.expr.s3) / (p * lg * std::log(lg));
  }
  if (f.factor) {
    const FactorSpec& A = *f.factor;
    double mu = rat_d(A.mu);
    double f1 = rat_d(A.expr.c1), f2 = rat_d(A.expr.c2), f3 = rat_d(A.expr.c3);
    if (mu < 0.0) return false;
    if (mu > 0.0) {
      double rest = std::abs(f1) * std::log(N + std::abs(A.expr.s1) + 2.0) +
                    std::abs(f2) * std::log(std::log(N + std::abs(A.expr.s2) + 2.0)) +
                    std::abs(f3) * 3.0 + std::abs(A.expr.c0);
      double slack = rest / (mu * N);
      if (slack > 0.5) return false;
      double posder = std::max(0.0, f1) * ladder_derivative(1, A.expr.s1, N) +
                      std::max(0.0, f2) * ladder_derivative(2, A.expr.s2, N) +
                      std::max(0.0, f3) * ladder_derivative(3, A.expr.s3, N);
      frac += ksup(0.0) * (mu + posder) / (p * mu * (1.0 - slack));
    } else {
      double aN = A.value(N);
      if (!(aN > 0.0)) return false;
      int lead = f1 != 0.0 ? 1 : (f2 != 0.0 ? 2 : (f3 != 0.0 ? 3 : 0));
      if (lead != 0) {
        const double cs[4] = {0.0, f1, f2, f3};
        const double ss[4] = {0.0, A.expr.s1, A.expr.s2, A.expr.s3};
        if (cs[lead] <= 0.0) return false;
        // levels below the leading one are zero, deeper negative ones must
        // not flip the factor derivative; their derivative ratio to the
        // leading level decreases in x, so freezing it at N is a sup
        double dlead = ladder_derivative(lead, ss[lead], N);
        double margin = cs[lead];
        // (x+s1)*psi_i'(x) is decreasing, so its value at N is a sup
        double dercap = cs[lead] * ksup(ss[lead]) * dlead * (N + ss[lead]);
        for (int i = lead + 1; i <= 3; ++i) {
          if (cs[i] == 0.0) continue;
          double di = ladder_derivative(i, ss[i], N);
          if (cs[i] < 0.0)
            margin -= -cs[i] * di / dlead;
          else
            dercap += cs[i] * ksup(ss[i]) * di * (N + ss[i]);
        }
        if (margin < 0.0) return false;
        frac += dercap / (p * aN);
      } else if (A.expr.c0 <= 0.0) {
        return false;
      }
    }
  }
  return frac <= 0.97;
}

long closed_start(const TermFamily& f) {
  long e = std::max(f.n_start, f.expr.n_min);
  if (!f.expr.overrides.empty())
    e = std::max(e, f.expr.overrides.rbegin()->first + 1);
  if (f.factor) {
    e = std::max(e, f.factor->expr.n_min);
    if (!f.factor->expr.overrides.empty())
      e = std::max(e, f.factor->expr.overrides.rbegin()->first + 1);
  }
  return e;
}

Interval explicit_interval(const TermFamily& f, long from, long to_incl) {
  if (to_incl < from) return {0.0, 0.0};
  double sum =
      kernels::sum_indexed(from, to_incl + 1, [&](long n) { return f.term(n); });
  double abssum = sum;
  if (f.factor)
    abssum = kernels::sum_indexed(from, to_incl + 1,
                                  [&](long n) { return std::abs(f.term(n)); });
  double slop = std::abs(abssum) * 1e-14 + 1e-300;
  return {sum - slop, sum + slop};
}

// Geometric tail bound for exponentially decaying families: the term ratio is
// sandwiched by frozen ladder increments, the factor ratio by its increment
// bound.
std::optional<Interval> ratio_tail(const TermFamily& f, long N) {
  double m0 = (double)(N + 1);
  double up = f.lin_total(), dn = f.lin_total();
  auto fold = [&](const Rational& c, double s, int level) {
    if (rat_zero(c)) return;
    double cd = rat_d(c);
    double inc = ladder_increment(level, s, m0);
    if (cd > 0.0)
      up += cd * inc;
    else
      dn += cd * inc;
  };
  fold(f.expr.c1, f.expr.s1, 1);
  fold(f.expr.c2, f.expr.s2, 2);
  fold(f.expr.c3, f.expr.s3, 3);
  double fratio = 1.0;
  if (f.factor) {
    const FactorSpec& A = *f.factor;
    double aM = A.value_at(N + 1);
    if (!(aM > 0.0)) return std::nullopt;
    double mu = rat_d(A.mu);
    double inc_lo = mu, inc_hi = mu;
    auto ffold = [&](const Rational& c, double s, int level) {
      if (rat_zero(c)) return;
      double cd = rat_d(c);
      double inc = ladder_increment(level, s, m0);
      if (cd > 0.0)
        inc_hi += cd * inc;
      else
        inc_lo += cd * inc;
    };
    ffold(A.expr.c1, A.expr.s1, 1);
    ffold(A.expr.c2, A.expr.s2, 2);
    ffold(A.expr.c3, A.expr.s3, 3);
    if (inc_lo < 0.0) return std::nullopt;
    fratio = 1.0 + inc_hi / aM;
  }
  double log_rho_hi = up + std::log(fratio);
  if (!(log_rho_hi < -1e-12)) return std::nullopt;
  double rho_hi = std::exp(log_rho_hi);
  double rho_lo = std::min(rho_hi, std::exp(dn));
  long M = N + 64;
  Interval chunk = explicit_interval(f, N + 1, M);
  double tM = f.term(M + 1);
  double lo = chunk.lo + tM / (1.0 - rho_lo) * (1.0 - 4e-14);
  double hi = chunk.hi + tM / (1.0 - rho_hi) * (1.0 + 4e-14);
  return Interval{lo, hi};
}

std::optional<Interval> power_tail(const TermFamily& f,
                                   const BertrandClass& cls, long N,
                                   double tol_hint) {
  double nd = (double)N;
  if (!certified_decreasing_from(f, nd)) return std::nullopt;
  auto closed_n = pure_closed_tail(f, cls, nd);
  if (closed_n) {
    auto closed_n1 = pure_closed_tail(f, cls, nd + 1.0);
    return Interval{std::max(0.0, closed_n1->lo), closed_n->hi};
  }
  Interval in = quad_tail(f, nd, tol_hint);
  Interval seg = integrate_segment(Integrand{&f}, nd, nd + 1.0, 1e-14);
  return Interval{std::max(0.0, in.lo - seg.hi), in.hi};
}

std::optional<Interval> enclose(const TermFamily& f, const BertrandClass& cls,
                                long& N, double tol_hint) {
  long e0 = closed_start(f);
  if (N < e0 + 64) N = e0 + 64;
  for (long probe : {f.n_start, e0, (f.n_start + N) / 2, N}) {
    if (probe < f.n_start) continue;
    double lg = f.log_exp_part(probe);
    if (lg > 700.0) {
      double v = std::exp(std::min(lg, 700.0));
      if (f.factor) {
        double a = f.factor->value_at(probe);
        if (!(a > 0.0)) continue;
        v *= std::min(a, 1.0);
      }
      return Interval{v * 0.99, kInf};
    }
  }
  Interval part = explicit_interval(f, f.n_start, N);
  std::optional<Interval> tail;
  if (cls.kind == BertrandClass::ExpDecay)
    tail = ratio_tail(f, N);
  else
    tail = power_tail(f, cls, N, tol_hint);
  if (!tail) return std::nullopt;
  return Interval{part.lo + tail->lo, part.hi + tail->hi};
}

SeriesValue finite_sum(const TermFamily& f) {
  SeriesValue out;
  out.cls.kind = BertrandClass::FiniteSupport;
  long hi = *f.n_end;
  if (hi - f.n_start > 200000000L)
    throw DomainError("finite support range too large");
  Interval v = explicit_interval(f, f.n_start, hi);
  out.status = SeriesValue::Finite;
  out.value = v.lo;
  out.err = v.width();
  out.terms_used = std::max(0L, hi - f.n_start + 1);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool BertrandClass::convergent() const {
  switch (kind) {
    case FiniteSupport:
    case ExpDecay:
      return true;
    case ExpGrowth:
      return false;
    case PowerLog:
      break;
  }
  if (p != 1) return p > 1;
  if (q != 1) return q > 1;
  if (r != 1) return r > 1;
  return w > 1;
}

std::string BertrandClass::describe() const {
  switch (kind) {
    case FiniteSupport:
      return "finite";
    case ExpDecay:
      return "exp-decay";
    case ExpGrowth:
      return "exp-growth";
    case PowerLog:
      break;
  }
  std::ostringstream os;
  os << "power-log(p=" << rational_str(p) << ", q=" << rational_str(q)
     << ", r=" << rational_str(r);
  if (!rat_zero(w)) os << ", w=" << rational_str(w);
  os << ")";
  return os.str();
}

double TermFamily::term(long n) const {
  double lg = log_exp_part(n);
  double v = lg < -745.0 ? 0.0 : std::exp(lg);
  if (factor) v *= factor->value_at(n);
  return v;
}

const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Below:
      return "below";
    case Cmp::Above:
      return "above";
    default:
      return "straddles";
  }
}

long series_term_cap(long requested) {
  if (requested > 0) return requested;
  static const long cached = [] {
    if (const char* s = std::getenv("THERMO_MAX_TERMS")) {
      long v = std::atol(s);
      if (v >= 1024) return v;
    }
    return 100000000L;
  }();
  return cached;
}

BertrandClass classify_family(const TermFamily& f) {
  BertrandClass c;
  if (f.n_end) {
    c.kind = BertrandClass::FiniteSupport;
    return c;
  }
  int s;
  if (f.lin_exact()) {
    s = sgn(f.lin);
  } else {
    double t = f.lin_total();
    s = (t > 0.0) - (t < 0.0);
  }
  if (s < 0) {
    c.kind = BertrandClass::ExpDecay;
    return c;
  }
  if (s > 0) {
    c.kind = BertrandClass::ExpGrowth;
    return c;
  }
  c.kind = BertrandClass::PowerLog;
  c.p = -f.expr.c1;
  c.q = -f.expr.c2;
  c.r = -f.expr.c3;
  if (f.factor) {
    const FactorSpec& a = *f.factor;
    if (!rat_zero(a.mu))
      c.p -= 1;
    else if (!rat_zero(a.expr.c1))
      c.q -= 1;
    else if (!rat_zero(a.expr.c2))
      c.r -= 1;
    else if (!rat_zero(a.expr.c3))
      c.w -= 1;
  }
  return c;
}

BertrandClass classify_terms(const Rational& u, const AsymptoticExpr& e) {
  TermFamily f;
  f.expr = scale_expr(u, e);
  f.n_start = 0;
  return classify_family(f);
}

SeriesValue sum_family(const TermFamily& f, const SeriesOptions& opt) {
  f.expr.validate();
  if (f.factor) f.factor->expr.validate();
  BertrandClass cls = classify_family(f);
  SeriesValue out;
  out.cls = cls;
  if (f.n_end) return finite_sum(f);
  if (!cls.convergent()) {
    out.status = SeriesValue::Divergent;
    out.note = "divergent by class " + cls.describe();
    return out;
  }
  if (f.sum_is_one && !f.factor) {
    out.status = SeriesValue::Finite;
    out.value = 1.0;
    out.err = 0.0;
    out.note = "normalized family";
    return out;
  }
  long cap = series_term_cap(opt.cap);
  std::optional<Interval> best;
  long used = 0;
  for (long N = 4096;;) {
    long used_n = N;
    auto iv = enclose(f, cls, used_n, opt.tol);
    if (iv) {
      // successive enclosures all contain the truth, so intersecting them
      // keeps the certification monotone in N
      if (best) {
        iv->lo = std::max(iv->lo, best->lo);
        iv->hi = std::min(iv->hi, best->hi);
      }
      best = iv;
      used = used_n;
      if (iv->width() <= opt.tol) break;
    }
    if (N >= cap) break;
    N = std::min(cap, N * 8);
  }
  if (!best) {
    out.status = SeriesValue::Indeterminate;
    out.note = "cap";
    return out;
  }
  out.status = SeriesValue::Finite;
  out.value = best->lo;
  out.err = best->width();
  out.terms_used = used;
  if (out.err > opt.tol) out.note = "tolerance not reached within the term cap";
  return out;
}

SeriesValue sum_series(const Rational& u, const AsymptoticExpr& e,
                       const SeriesOptions& opt) {
  TermFamily f;
  f.expr = scale_expr(u, e);
  // the series starts at the first branch the expression can evaluate:
  // n_min, extended downward through contiguous overrides
  long start = f.expr.n_min;
  while (start > 0 && f.expr.has_override(start - 1)) --start;
  f.n_start = start;
  return sum_family(f, opt);
}

Cmp compare_family(const TermFamily& f, double threshold,
                   const SeriesOptions& opt) {
  f.expr.validate();
  if (f.factor) f.factor->expr.validate();
  BertrandClass cls = classify_family(f);
  if (f.n_end) {
    SeriesValue v = finite_sum(f);
    if (v.value > threshold) return Cmp::Above;
    if (v.value + v.err < threshold) return Cmp::Below;
    return Cmp::Straddles;
  }
  if (!cls.convergent()) return Cmp::Above;
  if (f.sum_is_one && !f.factor) {
    if (threshold > 1.0) return Cmp::Below;
    if (threshold < 1.0) return Cmp::Above;
    return Cmp::Straddles;
  }
  long cap = series_term_cap(opt.cap);
  double tol_hint = std::max(opt.tol, std::abs(threshold) * 1e-13);
  for (long N = 4096;;) {
    long used_n = N;
    auto iv = enclose(f, cls, used_n, tol_hint);
    if (iv) {
      if (iv->lo > threshold) return Cmp::Above;
      if (iv->hi < threshold) return Cmp::Below;
      if (iv->width() <= tol_hint) return Cmp::Straddles;
    }
    if (N >= cap) return Cmp::Straddles;
    N = std::min(cap, N * 8);
  }
}

TermFamily combine_families(const Rational& a, const TermFamily& f1,
                            const Rational& b, const TermFamily& f2) {
  if (f1.factor || f2.factor)
    throw DomainError("cannot combine factored families");
  TermFamily out;
  out.lin = a * f1.lin + b * f2.lin;
  out.lin_f = rat_d(a) * f1.lin_f + rat_d(b) * f2.lin_f;
  out.expr = linear_combine(a, f1.expr, b, f2.expr);
  out.n_start = std::max(f1.n_start, f2.n_start);
  if (f1.n_end && f2.n_end)
    out.n_end = std::min(*f1.n_end, *f2.n_end);
  else if (f1.n_end)
    out.n_end = f1.n_end;
  else if (f2.n_end)
    out.n_end = f2.n_end;
  out.sum_is_one = false;
  return out;
}

TermFamily shift_index(const TermFamily& f, long by) {
  TermFamily out = f;
  out.n_start = f.n_start + by;
  if (f.n_end) out.n_end = *f.n_end + by;
  // new branch m evaluates the old branch m - by; the linear part of the
  // exponent (resp. the factor) sees the unshifted index, so every branch
  // value, override or closed, picks up the same rebate
  auto shift_expr = [&](const AsymptoticExpr& e, double rebate) {
    AsymptoticExpr s = e;
    s.s1 = e.s1 - (double)by;
    s.s2 = e.s2 - (double)by;
    s.s3 = e.s3 - (double)by;
    s.n_min = e.n_min + by;
    s.c0 -= rebate;
    s.overrides.clear();
    for (const auto& [n, v] : e.overrides) s.overrides[n + by] = v - rebate;
    s.validate();
    return s;
  };
  out.expr = shift_expr(f.expr, f.lin_total() * (double)by);
  if (f.factor) {
    FactorSpec a = *f.factor;
    a.expr = shift_expr(f.factor->expr, rat_d(a.mu) * (double)by);
    out.factor = a;
  }
  return out;
}

TermFamily tilt_family(const TermFamily& f, const Rational& delta_lin,
                       double delta_c0) {
  TermFamily out = f;
  out.lin += delta_lin;
  // the constant tilt multiplies every term, so override branches (which
  // bypass the closed-form c0) must carry it explicitly
  out.expr.c0 += delta_c0;
  for (auto& [n, v] : out.expr.overrides) v += delta_c0;
  if (!rat_zero(delta_lin) || delta_c0 != 0.0) out.sum_is_one = false;
  return out;
}

TermFamily with_factor(const TermFamily& f, FactorSpec factor) {
  TermFamily out = f;
  out.factor = std::move(factor);
  return out;
}

}  // namespace thermo
