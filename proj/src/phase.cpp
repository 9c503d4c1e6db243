#include "thermo/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace thermo {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Affine:
      return "affine";
    case Regime::Analytic:
      return "analytic";
    default:
      return "indeterminate";
  }
}

namespace {

// Affine rational function a + b*t.
struct AffineQ {
  Rational a{0};
  Rational b{0};
  Rational at(const Rational& t) const { return Rational(a + b * t); }
};

// Convergence data of the boundary family exp(t*potential - (s+t*alpha)*roof)
// as a function of t: the exponential rate and the three iterated-log
// exponents are affine in t with exact coefficients. Level 0 compares
// against 0 (decay rate), levels 1..3 against 1 (Bertrand exponents).
struct ClassLine {
  AffineQ level[4];
};

Rational level_threshold(int i) { return i == 0 ? Rational(0) : Rational(1); }

ClassLine class_line(const BranchValues& d, const BranchValues& roof,
                     const Rational& s) {
  ClassLine cl;
  cl.level[0] = AffineQ{Rational(s * roof.lin), Rational(-d.lin)};
  cl.level[1] = AffineQ{Rational(s * roof.expr.c1), Rational(-d.expr.c1)};
  cl.level[2] = AffineQ{Rational(s * roof.expr.c2), Rational(-d.expr.c2)};
  cl.level[3] = AffineQ{Rational(s * roof.expr.c3), Rational(-d.expr.c3)};
  return cl;
}

bool chain_converges_at(const ClassLine& cl, const Rational& t, int from) {
  for (int i = from; i < 4; ++i) {
    Rational v = cl.level[i].at(t);
    Rational th = level_threshold(i);
    if (v > th) return true;
    if (v < th) return false;
  }
  return false;  // every level exactly critical
}

struct Ray {
  enum Kind { None, All, Up, Down } kind = None;
  Rational edge{0};
  bool closed = false;
};

// The set of t where the boundary family converges, solved lexicographically
// over the affine class levels. Always empty, everything, or a half line:
// the first level with a t-dependence decides with a strict ray, and only
// the single edge point falls through to the deeper levels.
Ray convergence_ray(const ClassLine& cl, int i = 0) {
  if (i == 4) return Ray{Ray::None, Rational(0), false};
  const AffineQ& f = cl.level[i];
  Rational th = level_threshold(i);
  if (rat_zero(f.b)) {
    if (f.a > th) return Ray{Ray::All, Rational(0), false};
    if (f.a < th) return Ray{Ray::None, Rational(0), false};
    return convergence_ray(cl, i + 1);
  }
  Ray out;
  out.kind = f.b > 0 ? Ray::Up : Ray::Down;
  out.edge = Rational((th - f.a) / f.b);
  out.closed = chain_converges_at(cl, out.edge, i + 1);
  return out;
}

struct IntervalScan {
  const FlowSpec& spec;
  BranchValues d;  // potential - alpha*roof, the t-slope of each branch
  Rational s;
  Rational alpha;
  bool d_zero = false;
  ClassLine cl;
  Ray fin;
  SeriesOptions popt;
};

// Whether the normalization hint pins the boundary sum at parameter t to
// exactly 1: the asserted family must coincide branchwise with
// t*potential - (s + t*alpha)*roof.
bool hint_pins(const IntervalScan& sc, const Rational& t) {
  if (!sc.spec.hint) return false;
  const NormalizationHint& h = *sc.spec.hint;
  Rational scrit = Rational(sc.s + t * sc.alpha);
  if (h.t0 == t && h.s0 == scrit) return true;
  if (sc.d_zero) {
    // proportional potential: the assertion collapses to a statement about
    // the single family exp(-s*roof)
    Rational eff = Rational(h.s0 - h.t0 * sc.alpha);
    return eff == sc.s;
  }
  return false;
}

bool ray_contains(const Ray& r, const Rational& t) {
  switch (r.kind) {
    case Ray::All:
      return true;
    case Ray::Up:
      if (t > r.edge) return true;
      return t == r.edge && r.closed;
    case Ray::Down:
      if (t < r.edge) return true;
      return t == r.edge && r.closed;
    default:
      return false;
  }
}

struct Probe {
  Cmp side = Cmp::Straddles;  // Below: in the window, Above: out
  bool exact_one = false;     // hint equality, B(t) == 1
};

Probe probe_at(const IntervalScan& sc, const Rational& t) {
  if (!ray_contains(sc.fin, t)) {
    if (hint_pins(sc, t))
      throw DomainError(
          "normalization hint asserts a finite boundary sum where the "
          "convergence class is divergent");
    return Probe{Cmp::Above, false};
  }
  if (hint_pins(sc, t)) return Probe{Cmp::Below, true};
  Rational scrit = Rational(sc.s + t * sc.alpha);
  BranchValues psi =
      combine_values(t, sc.spec.potential, Rational(-scrit), sc.spec.roof);
  TermFamily fam = weight_family(rat_of(1), psi);
  return Probe{compare_family(fam, 1.0, sc.popt), false};
}

// Sign of the branch values in the limit n -> infinity, from the leading
// coefficient: +1 / -1 for a signed divergence or a signed constant, 0 for
// the identically-constant-zero closed form.
int limit_sign(const BranchValues& v) {
  if (!rat_zero(v.lin)) return sgn(v.lin);
  if (!rat_zero(v.expr.c1)) return sgn(v.expr.c1);
  if (!rat_zero(v.expr.c2)) return sgn(v.expr.c2);
  if (!rat_zero(v.expr.c3)) return sgn(v.expr.c3);
  if (v.expr.c0 > 0.0) return 1;
  if (v.expr.c0 < 0.0) return -1;
  return 0;
}

// Does any branch carry a positive value? Decided exactly for constant
// closed forms; by a witness walk when the limit is positive; by a
// monotone-tail certificate plus a prefix scan when the limit is not.
// nullopt when the tail cannot be pinned.
std::optional<bool> any_positive_value(const BranchValues& v) {
  if (rat_zero(v.lin) && v.expr.all_log_coeffs_zero()) {
    for (const auto& kv : v.expr.overrides)
      if (kv.second > 0.0) return true;
    return v.expr.c0 > 0.0;
  }
  long first = std::max(v.expr.n_min, 0L);
  for (const auto& kv : v.expr.overrides)
    if (kv.second > 0.0) return true;
  if (limit_sign(v) > 0) {
    long n = std::max(first, 1L);
    for (int k = 0; k < 50; ++k, n *= 2)
      if (v.value(n) > 0.0) return true;
    return std::nullopt;
  }
  std::optional<long> from =
      certified_nondecreasing_from(scale_values(rat_of(-1), v));
  if (!from) return std::nullopt;
  if (v.value(*from) > 0.0) return true;
  for (long n = 0; n < *from; ++n)
    if (v.value(n) > 0.0) return true;
  return false;
}

std::optional<bool> any_negative_value(const BranchValues& v) {
  return any_positive_value(scale_values(rat_of(-1), v));
}

// Certified bisection of the window endpoint between an inside and an
// outside parameter. A midpoint pinned to B == 1 by the hint is the exact
// endpoint: the sum is convex, below 1 at t_in, so it crosses 1 exactly
// once across [t_in, t_out].
PhaseBound bisect_endpoint(const IntervalScan& sc, Rational t_in,
                           Rational t_out, double tol, long max_steps) {
  PhaseBound b;
  long steps = 0;
  while (steps < max_steps) {
    if (std::abs(rat_d(t_out) - rat_d(t_in)) <= tol) break;
    Rational mid = Rational((t_in + t_out) / 2);
    Probe p = probe_at(sc, mid);
    ++steps;
    if (p.exact_one) {
      b.exact = mid;
      b.closed = true;
      b.lo = rat_d(mid);
      b.hi = b.lo;
      b.steps = steps;
      return b;
    }
    if (p.side == Cmp::Below) {
      t_in = mid;
    } else if (p.side == Cmp::Above) {
      t_out = mid;
    } else {
      break;  // keep the certified bracket
    }
  }
  b.lo = std::min(rat_d(t_in), rat_d(t_out));
  b.hi = std::max(rat_d(t_in), rat_d(t_out));
  b.steps = steps;
  return b;
}

}  // namespace

PhaseInterval interval_I(const FlowSpec& spec, const SeriesOptions& opt,
                         double endpoint_tol, long max_steps) {
  std::optional<Rational> s = s_infinity(spec);
  if (!s)
    throw DomainError(
        "window analysis requires a finite convergence abscissa");
  std::optional<Rational> a = alpha_limit(spec);
  if (!a)
    throw DomainError("the potential-to-roof ratio has no finite limit");

  IntervalScan sc{spec,
                  combine_values(rat_of(1), spec.potential, Rational(-*a),
                                 spec.roof),
                  *s,
                  *a,
                  false,
                  {},
                  {},
                  {}};
  sc.d_zero = values_are_zero(sc.d);
  sc.cl = class_line(sc.d, spec.roof, sc.s);
  sc.fin = convergence_ray(sc.cl);
  sc.popt = SeriesOptions{std::max(opt.tol, 1e-9),
                          opt.cap > 0 ? std::min(opt.cap, 8000000L)
                                      : 8000000L};

  PhaseInterval out;
  if (sc.fin.kind == Ray::None) {
    out.kind = PhaseInterval::Empty;
    out.note = "boundary series diverges at every parameter";
    return out;
  }

  if (sc.d_zero) {
    Probe p = probe_at(sc, Rational(0));
    if (p.side == Cmp::Below) {
      out.kind = PhaseInterval::AllReals;
      out.note = "boundary series is independent of the parameter and stays "
                 "at or below 1";
    } else if (p.side == Cmp::Above) {
      out.kind = PhaseInterval::Empty;
      out.note = "boundary series exceeds 1 independently of the parameter";
    } else {
      out.kind = PhaseInterval::Indeterminate;
      out.note = "parameter-independent boundary sum could not be certified "
                 "against 1";
    }
    return out;
  }

  // candidate parameters for a certified inside point: the hinted parameter
  // when it sits on the critical line, the convergence edge when the class
  // keeps it finite, then a doubling ladder into the convergence ray
  std::vector<Rational> cands;
  auto push = [&cands](const Rational& t) {
    for (const Rational& c : cands)
      if (c == t) return;
    cands.push_back(t);
  };
  if (spec.hint) {
    Rational t0 = spec.hint->t0;
    if (Rational(sc.s + t0 * sc.alpha) == spec.hint->s0) push(t0);
  }
  if (sc.fin.kind == Ray::Up) {
    if (sc.fin.closed) push(sc.fin.edge);
    for (int k = 0; k <= 12; ++k)
      push(Rational(sc.fin.edge + Rational(1L << k)));
  } else if (sc.fin.kind == Ray::Down) {
    if (sc.fin.closed) push(sc.fin.edge);
    for (int k = 0; k <= 12; ++k)
      push(Rational(sc.fin.edge - Rational(1L << k)));
  } else {
    push(Rational(0));
    for (int k = 0; k <= 12; ++k) {
      push(Rational(1L << k));
      push(Rational(-(1L << k)));
    }
  }

  std::optional<Rational> t_in;
  for (const Rational& c : cands) {
    if (!ray_contains(sc.fin, c)) continue;
    Probe p = probe_at(sc, c);
    if (p.side == Cmp::Below) {
      t_in = c;
      break;
    }
  }
  if (!t_in) {
    out.kind = PhaseInterval::Indeterminate;
    out.note = "no parameter with a boundary sum certified at or below 1 "
               "was found";
    return out;
  }

  std::optional<bool> grows_up = any_positive_value(sc.d);
  std::optional<bool> grows_down = any_negative_value(sc.d);

  // doubling walk toward one side until the boundary sum certifies above 1;
  // returns the outside point and the nearest certified inside point
  auto search_out = [&sc](const Rational& from, int dir)
      -> std::pair<std::optional<Rational>, Rational> {
    Rational cur_in = from;
    Rational step(1);
    for (int j = 0; j < 40; ++j) {
      Rational t;
      if (dir > 0)
        t = Rational(cur_in + step);
      else
        t = Rational(cur_in - step);
      Probe p = probe_at(sc, t);
      if (p.side == Cmp::Above) return {t, cur_in};
      if (p.side != Cmp::Below) return {std::nullopt, cur_in};
      cur_in = t;
      step = Rational(step * 2);
    }
    return {std::nullopt, cur_in};
  };

  auto snap_hint = [&](PhaseBound& b) {
    if (!spec.hint || b.exact) return;
    Rational t0 = spec.hint->t0;
    if (hint_pins(sc, t0) && rat_d(t0) >= b.lo && rat_d(t0) <= b.hi) {
      b.exact = t0;
      b.closed = true;
      b.lo = rat_d(t0);
      b.hi = b.lo;
    }
  };

  std::optional<PhaseBound> lower, upper;
  bool lower_unbounded = false, upper_unbounded = false;
  bool unresolved = false;

  // lower side
  if (sc.fin.kind == Ray::Up) {
    // below the edge the class diverges, so the window is capped there
    if (*t_in == sc.fin.edge) {
      PhaseBound b;
      b.exact = sc.fin.edge;
      b.closed = true;
      b.lo = rat_d(sc.fin.edge);
      b.hi = b.lo;
      lower = b;
    } else {
      lower = bisect_endpoint(sc, *t_in, sc.fin.edge, endpoint_tol, max_steps);
      snap_hint(*lower);
    }
  } else if (grows_down.has_value() && !*grows_down) {
    lower_unbounded = true;  // every branch shrinks the sum as t decreases
  } else {
    auto [o, i] = search_out(*t_in, -1);
    if (o) {
      lower = bisect_endpoint(sc, i, *o, endpoint_tol, max_steps);
      snap_hint(*lower);
    } else {
      unresolved = true;
    }
  }

  // upper side
  if (sc.fin.kind == Ray::Down) {
    if (*t_in == sc.fin.edge) {
      PhaseBound b;
      b.exact = sc.fin.edge;
      b.closed = true;
      b.lo = rat_d(sc.fin.edge);
      b.hi = b.lo;
      upper = b;
    } else {
      upper = bisect_endpoint(sc, *t_in, sc.fin.edge, endpoint_tol, max_steps);
      snap_hint(*upper);
    }
  } else if (grows_up.has_value() && !*grows_up) {
    upper_unbounded = true;
  } else {
    auto [o, i] = search_out(*t_in, +1);
    if (o) {
      upper = bisect_endpoint(sc, i, *o, endpoint_tol, max_steps);
      snap_hint(*upper);
    } else {
      unresolved = true;
    }
  }

  if (unresolved) {
    out.kind = PhaseInterval::Indeterminate;
    if (lower) out.lower = *lower;
    if (upper) out.upper = *upper;
    out.note = "one side of the window could not be certified";
    return out;
  }
  if (lower && upper) {
    out.kind = PhaseInterval::Bounded;
    out.lower = *lower;
    out.upper = *upper;
  } else if (lower && upper_unbounded) {
    out.kind = PhaseInterval::RayAbove;
    out.lower = *lower;
  } else if (lower_unbounded && upper) {
    out.kind = PhaseInterval::RayBelow;
    out.upper = *upper;
  } else {
    out.kind = PhaseInterval::AllReals;
  }
  return out;
}

PhaseReport phase_scan(const FlowSpec& spec, const std::vector<Rational>& grid,
                       const SeriesOptions& opt) {
  PhaseReport rep;
  std::optional<Rational> s = s_infinity(spec);
  if (!s)
    throw DomainError(
        "window analysis requires a finite convergence abscissa");
  std::optional<Rational> a = alpha_limit(spec);
  if (!a)
    throw DomainError("the potential-to-roof ratio has no finite limit");
  rep.s_infinity = *s;
  rep.alpha = *a;
  rep.interval = interval_I(spec, opt);
  switch (rep.interval.kind) {
    case PhaseInterval::Bounded:
      rep.transition_points = {rep.interval.lower, rep.interval.upper};
      break;
    case PhaseInterval::RayAbove:
      rep.transition_points = {rep.interval.lower};
      break;
    case PhaseInterval::RayBelow:
      rep.transition_points = {rep.interval.upper};
      break;
    default:
      break;
  }

  double root_tol = std::max(1e-9, opt.tol * 1e-2);
  // recurrence tags ride on exact class decisions; value precision beyond
  // the class thresholds only burns the term budget
  SeriesOptions copt{std::max(opt.tol, 1e-4),
                     opt.cap > 0 ? std::min(opt.cap, 2000000L) : 2000000L};
  for (const Rational& t : grid) {
    PhaseSample smp;
    smp.t = t;
    smp.pressure = flow_pressure(spec, t, opt, root_tol);
    smp.flow_class = classify_flow(spec, t, copt);
    Rational line = Rational(*s + t * *a);
    smp.regime = Regime::Indeterminate;
    bool on_endpoint = false;
    for (const PhaseBound& b : rep.transition_points) {
      if (b.exact && *b.exact == t) on_endpoint = true;
      double td = rat_d(t);
      if (td >= b.lo && td <= b.hi) on_endpoint = true;
    }
    if (!on_endpoint && smp.pressure.status == FlowPressure::Finite) {
      bool on_line = smp.pressure.sticks ||
                     (smp.pressure.exact && *smp.pressure.exact == line);
      if (on_line) {
        smp.regime = Regime::Affine;
      } else if (smp.pressure.value > rat_d(line) &&
                 smp.flow_class == RecurrenceClass::PositiveRecurrent) {
        smp.regime = Regime::Analytic;
      }
    }
    rep.samples.push_back(smp);
  }
  std::sort(rep.samples.begin(), rep.samples.end(),
            [](const PhaseSample& x, const PhaseSample& y) {
              return x.t < y.t;
            });
  return rep;
}

std::string scan_csv(const PhaseReport& rep) {
  std::string out = "t,pressure,pressure_err,regime,flow_class\n";
  char buf[192];
  for (const PhaseSample& smp : rep.samples) {
    double p, e;
    switch (smp.pressure.status) {
      case FlowPressure::Finite:
        p = smp.pressure.value;
        e = smp.pressure.err;
        break;
      case FlowPressure::NoFiniteEntropy:
        p = std::numeric_limits<double>::infinity();
        e = 0.0;
        break;
      default:
        p = std::numeric_limits<double>::quiet_NaN();
        e = std::numeric_limits<double>::quiet_NaN();
        break;
    }
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%s,%s\n", rat_d(smp.t),
                  p, e, regime_name(smp.regime), class_name(smp.flow_class));
    out += buf;
  }
  return out;
}

}  // namespace thermo
