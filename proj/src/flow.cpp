#include "thermo/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace thermo {

const char* class_name(RecurrenceClass c) {
  switch (c) {
    case RecurrenceClass::PositiveRecurrent: return "positive recurrent";
    case RecurrenceClass::NullRecurrent: return "null recurrent";
    case RecurrenceClass::Transient: return "transient";
    default: return "indeterminate";
  }
}

const char* existence_name(EqExistence e) {
  switch (e) {
    case EqExistence::UniqueExists: return "unique";
    case EqExistence::None: return "none";
    case EqExistence::TwoExist: return "two";
    default: return "indeterminate";
  }
}

std::optional<Rational> s_infinity(const BranchValues& roof,
                                   bool finite_alphabet) {
  if (finite_alphabet) return Rational(0);
  if (sgn(roof.lin) > 0) return Rational(0);
  if (sgn(roof.lin) < 0)
    throw DomainError("roof has a negative leading coefficient");
  if (sgn(roof.expr.c1) > 0) return Rational(1) / roof.expr.c1;
  if (sgn(roof.expr.c1) < 0)
    throw DomainError("roof has a negative leading coefficient");
  return std::nullopt;
}

std::optional<Rational> s_infinity(const FlowSpec& spec) {
  return s_infinity(spec.roof, spec.base.kind == ModelKind::FiniteSFT);
}

std::optional<Rational> alpha_limit(const BranchValues& potential,
                                    const BranchValues& roof) {
  const Rational pot[4] = {potential.lin, potential.expr.c1,
                           potential.expr.c2, potential.expr.c3};
  const Rational tau[4] = {roof.lin, roof.expr.c1, roof.expr.c2,
                           roof.expr.c3};
  for (int lvl = 0; lvl < 4; ++lvl) {
    if (!rat_zero(tau[lvl])) return pot[lvl] / tau[lvl];
    if (!rat_zero(pot[lvl])) return std::nullopt;
  }
  // constant roof; the ratio of constants is the limit
  if (roof.expr.c0 == 0.0)
    throw DomainError("roof is identically zero");
  return Rational(potential.expr.c0 / roof.expr.c0);
}

std::optional<Rational> alpha_limit(const FlowSpec& spec) {
  return alpha_limit(spec.potential, spec.roof);
}

namespace {

ExtReal ext_indet() {
  ExtReal e;
  e.status = ExtReal::Indeterminate;
  return e;
}

MeasureStats stats_indet() {
  MeasureStats s;
  s.entropy = ext_indet();
  s.integral_r = ext_indet();
  s.integral_tau = ext_indet();
  s.integral_phi = ext_indet();
  s.base_entropy = ext_indet();
  s.flow_entropy = ext_indet();
  s.finite_base_measure = false;
  return s;
}

BranchValues return_values(const ReturnTimes& rt) {
  BranchValues v;
  v.lin = rt.slope;
  v.expr.c0 = (double)rt.offset;
  for (const auto& [n, r] : rt.special)
    v.expr.overrides[n] = (double)(r - rt.slope * n);
  return v;
}

// Exact convergence of sum_n exp(t*pot(n) - s*roof(n)) at a rational s.
bool exact_convergent_at(const Rational& s, const Rational& t,
                         const BranchValues& pot, const BranchValues& roof) {
  Rational lin = t * pot.lin - s * roof.lin;
  if (sgn(lin) < 0) return true;
  if (sgn(lin) > 0) return false;
  Rational p = s * roof.expr.c1 - t * pot.expr.c1;
  if (p > 1) return true;
  if (p < 1) return false;
  Rational q = s * roof.expr.c2 - t * pot.expr.c2;
  if (q > 1) return true;
  if (q < 1) return false;
  Rational r = s * roof.expr.c3 - t * pot.expr.c3;
  return r > 1;
}

// Convergence region of s -> sum_n exp(t*pot(n) - s*roof(n)). Since roof
// values are positive the region is an upper half-line: everything, nothing,
// or (s_star, infinity) with the boundary itself decided exactly.
struct CriticalLine {
  enum Kind { AllS, NoS, Boundary } kind = Boundary;
  Rational s_star{0};
  bool conv_at_boundary = false;
};

CriticalLine compute_critical(const Rational& t, const BranchValues& pot,
                              const BranchValues& roof) {
  const Rational pi[4] = {t * pot.lin, t * pot.expr.c1, t * pot.expr.c2,
                          t * pot.expr.c3};
  const Rational tau[4] = {roof.lin, roof.expr.c1, roof.expr.c2,
                           roof.expr.c3};
  CriticalLine out;
  for (int lvl = 0; lvl < 4; ++lvl) {
    if (sgn(tau[lvl]) < 0)
      throw DomainError("roof has a negative leading coefficient");
    if (sgn(tau[lvl]) > 0) {
      out.kind = CriticalLine::Boundary;
      if (lvl == 0)
        out.s_star = pi[0] / tau[0];
      else
        out.s_star = (Rational(1) + pi[lvl]) / tau[lvl];
      out.conv_at_boundary = exact_convergent_at(out.s_star, t, pot, roof);
      return out;
    }
    // roof carries no weight at this level; the potential coefficient is a
    // fixed offset that settles convergence unless it is exactly critical
    if (lvl == 0) {
      if (sgn(pi[0]) < 0) out.kind = CriticalLine::AllS;
      if (sgn(pi[0]) > 0) out.kind = CriticalLine::NoS;
      if (sgn(pi[0]) != 0) return out;
      continue;
    }
    Rational exponent = -pi[lvl];
    if (exponent > 1) {
      out.kind = CriticalLine::AllS;
      return out;
    }
    if (exponent < 1) {
      out.kind = CriticalLine::NoS;
      return out;
    }
  }
  out.kind = CriticalLine::NoS;  // exactly critical at every level
  return out;
}

// Exact ratio c with potential == c * roof branchwise, when one exists.  A
// proportional potential collapses the defining family to a function of
// t*c - s alone, so one normalization statement transports along the whole
// parameter axis.
std::optional<Rational> proportional_ratio(const BranchValues& pot,
                                           const BranchValues& roof) {
  Rational c;
  if (sgn(roof.lin) != 0) c = pot.lin / roof.lin;
  else if (sgn(roof.expr.c1) != 0) c = pot.expr.c1 / roof.expr.c1;
  else if (sgn(roof.expr.c2) != 0) c = pot.expr.c2 / roof.expr.c2;
  else if (sgn(roof.expr.c3) != 0) c = pot.expr.c3 / roof.expr.c3;
  else return std::nullopt;
  try {
    if (values_are_zero(combine_values(Rational(1), pot, -c, roof))) return c;
  } catch (const ShiftMismatch&) {
  }
  return std::nullopt;
}

// Exact root of the defining equation implied by the hint at parameter t,
// when the hint determines one there.
std::optional<Rational> hinted_root(const FlowSpec& spec, const Rational& t) {
  if (!spec.hint) return std::nullopt;
  if (spec.hint->t0 == t) return spec.hint->s0;
  if (auto c = proportional_ratio(spec.potential, spec.roof))
    return Rational(spec.hint->s0 + (t - spec.hint->t0) * *c);
  return std::nullopt;
}

TermFamily combined_family(const FlowSpec& spec, const Rational& t,
                           const Rational& s) {
  BranchValues comb = combine_values(t, spec.potential, -s, spec.roof);
  TermFamily f = weight_family(Rational(1), comb);
  if (auto h = hinted_root(spec, t))
    if (*h == s) f.sum_is_one = true;
  return f;
}

// Certified side of the defining sum against 1 at parameter s.
Cmp side_at(const FlowSpec& spec, const Rational& t, const Rational& s,
            const SeriesOptions& opt) {
  TermFamily f = combined_family(spec, t, s);
  if (f.sum_is_one) return Cmp::Straddles;
  if (!classify_family(f).convergent()) return Cmp::Above;
  return compare_family(f, 1.0, opt);
}

struct FlowSolve {
  FlowPressure fp;
  std::optional<Rational> lo, hi;  // certified rational root bracket
};

void set_bracket(FlowSolve& out, const Rational& lo, const Rational& hi,
                 long steps) {
  out.fp.status = FlowPressure::Finite;
  out.fp.bisection_steps = steps;
  double v = std::nextafter(rat_d(lo), -1e308);
  double u = std::nextafter(rat_d(hi), 1e308);
  out.fp.value = v;
  out.fp.err = u - v;
  out.lo = lo;
  out.hi = hi;
}

FlowSolve solve_flow(const FlowSpec& spec, const Rational& t,
                     const SeriesOptions& opt, double root_tol) {
  if (spec.base.kind == ModelKind::FiniteSFT)
    throw DomainError(
        "flow pressure over a finite alphabet goes through the matrix route");
  if (!spec.hopf_ok)
    throw DomainError("flow spec was not built through make_flow_spec");

  CriticalLine cl = compute_critical(t, spec.potential, spec.roof);
  FlowSolve out;
  FlowPressure& fp = out.fp;

  if (cl.kind == CriticalLine::NoS) {
    fp.status = FlowPressure::NoFiniteEntropy;
    fp.note = "the defining series diverges at every parameter";
    return out;
  }

  if (auto pinned = hinted_root(spec, t)) {
    const Rational s0 = *pinned;
    if (cl.kind == CriticalLine::Boundary) {
      if (s0 < cl.s_star)
        throw DomainError(
            "normalization hint lies below the convergence boundary");
      fp.has_boundary = true;
      if (s0 == cl.s_star) {
        if (!cl.conv_at_boundary)
          throw DomainError(
              "normalization hint contradicts the convergence class");
        fp.status = FlowPressure::Finite;
        fp.sticks = true;
        fp.boundary_symbolic = true;
        fp.boundary_side = Cmp::Straddles;
        fp.exact = s0;
        fp.value = rat_d(s0);
        fp.note = "pressure attained at the boundary, normalized exactly";
        out.lo = out.hi = s0;
        return out;
      }
    }
    fp.status = FlowPressure::Finite;
    fp.exact = s0;
    fp.value = rat_d(s0);
    fp.boundary_side = Cmp::Above;
    fp.note = "exact interior root from the normalization";
    out.lo = out.hi = s0;
    return out;
  }

  Rational lo, hi;
  if (cl.kind == CriticalLine::Boundary) {
    fp.has_boundary = true;
    const Rational& sB = cl.s_star;
    Cmp side =
        cl.conv_at_boundary ? side_at(spec, t, sB, opt) : Cmp::Above;
    fp.boundary_side = side;
    if (side == Cmp::Below) {
      fp.status = FlowPressure::Finite;
      fp.sticks = true;
      fp.exact = sB;
      fp.value = rat_d(sB);
      fp.note = "boundary series certified below 1, pressure sticks there";
      out.lo = out.hi = sB;
      return out;
    }
    if (side == Cmp::Straddles) {
      fp.status = FlowPressure::Indeterminate;
      fp.value = rat_d(sB);
      fp.note = "boundary series too close to 1 to certify a side";
      return out;
    }
    lo = sB;
    Rational step = 1;
    bool bracketed = false;
    for (int k = 0; k < 64 && !bracketed; ++k) {
      hi = lo + step;
      Cmp side_hi = side_at(spec, t, hi, opt);
      if (side_hi == Cmp::Below) {
        bracketed = true;
      } else if (side_hi == Cmp::Straddles) {
        fp.status = FlowPressure::Indeterminate;
        fp.note = "upward expansion hit an undecidable comparison";
        return out;
      } else {
        lo = hi;
        step *= 2;
      }
    }
    if (!bracketed) {
      fp.status = FlowPressure::Indeterminate;
      fp.note = "no upper bracket found within the expansion range";
      return out;
    }
  } else {
    Cmp at_zero = side_at(spec, t, Rational(0), opt);
    if (at_zero == Cmp::Straddles) {
      fp.status = FlowPressure::Indeterminate;
      fp.note = "probe comparison straddled 1";
      return out;
    }
    Rational step = 1;
    bool bracketed = false;
    if (at_zero == Cmp::Above) {
      lo = 0;
      for (int k = 0; k < 64 && !bracketed; ++k) {
        hi = lo + step;
        Cmp s = side_at(spec, t, hi, opt);
        if (s == Cmp::Below) bracketed = true;
        else if (s == Cmp::Straddles) break;
        else { lo = hi; step *= 2; }
      }
    } else {
      hi = 0;
      for (int k = 0; k < 64 && !bracketed; ++k) {
        lo = hi - step;
        Cmp s = side_at(spec, t, lo, opt);
        if (s == Cmp::Above) bracketed = true;
        else if (s == Cmp::Straddles) break;
        else { hi = lo; step *= 2; }
      }
    }
    if (!bracketed) {
      fp.status = FlowPressure::Indeterminate;
      fp.note = "no certified bracket found in the two-sided expansion";
      return out;
    }
  }

  long steps = 0;
  while (steps < 300) {
    double width = rat_d(hi - lo);
    if (width <= root_tol) break;
    Rational mid = (lo + hi) / 2;
    SeriesOptions mo = opt;
    mo.tol = std::min(opt.tol, std::max(1e-14, 0.125 * width));
    Cmp side = side_at(spec, t, mid, mo);
    if (side == Cmp::Straddles) {
      fp.note = "midpoint straddled 1, reporting the last certified bracket";
      break;
    }
    if (side == Cmp::Above) lo = mid;
    else hi = mid;
    ++steps;
  }
  set_bracket(out, lo, hi, steps);
  return out;
}

// Theorem-case decision for the potential t*g: pins the flow pressure, then
// classifies the pressure-shifted weights by the finiteness of the mean
// return time (recurrence type on the base) and of the roof integral
// (recurrence type for the flow, and the existence bit).
struct Decision {
  FlowPressure fp;
  std::optional<Rational> blo, bhi;
  RecurrenceClass combined_cls = RecurrenceClass::Indeterminate;
  RecurrenceClass flow_cls = RecurrenceClass::Indeterminate;
  ExtReal mean_return;
  ExtReal tau_integral;
  std::string label;
  EqExistence exists = EqExistence::Indeterminate;
  bool exact_unit = false;
  std::optional<Rational> p_param;
  std::string note;
};

RecurrenceClass class_from(const ExtReal& integral) {
  if (integral.status == ExtReal::Finite)
    return RecurrenceClass::PositiveRecurrent;
  if (integral.status == ExtReal::PlusInfinity)
    return RecurrenceClass::NullRecurrent;
  return RecurrenceClass::Indeterminate;
}

// Hull of an integral evaluated at both ends of a parameter bracket; the
// weights decrease in s pointwise, so the true value sits between the two.
ExtReal bracket_hull(const ExtReal& at_lo, const ExtReal& at_hi) {
  if (at_lo.status == ExtReal::Finite && at_hi.status == ExtReal::Finite) {
    ExtReal out;
    out.value = at_hi.value;
    out.err = std::max(0.0, at_lo.value + at_lo.err - at_hi.value);
    return out;
  }
  if (at_lo.status == ExtReal::PlusInfinity &&
      at_hi.status == ExtReal::PlusInfinity) {
    ExtReal out;
    out.status = ExtReal::PlusInfinity;
    return out;
  }
  return ext_indet();
}

Decision decide_case(const FlowSpec& spec, const Rational& t,
                     const SeriesOptions& opt) {
  Decision d;
  d.mean_return = ext_indet();
  d.tau_integral = ext_indet();
  // the classification only needs the bracket to clear the class thresholds
  // and keep the Gibbs normalization within its slack, not a 1e-12 root
  double root_tol = std::max(1e-8, opt.tol * 1e-2);
  FlowSolve fs = solve_flow(spec, t, opt, root_tol);
  d.fp = fs.fp;
  d.blo = fs.lo;
  d.bhi = fs.hi;

  if (d.fp.status == FlowPressure::NoFiniteEntropy) {
    // with infinite pressure every shifted series diverges, a degenerate
    // form of the negative-pressure obstruction
    d.label = "i";
    d.exists = EqExistence::None;
    d.note = "no finite parameter normalizes the series";
    return d;
  }
  if (d.fp.status == FlowPressure::Indeterminate) return d;

  if (d.fp.sticks && !d.fp.boundary_symbolic) {
    // boundary sum certified below 1; the shifted weights keep a unit
    // first-coordinate boundary, so the potential is transient there
    d.combined_cls = RecurrenceClass::Transient;
    d.flow_cls = RecurrenceClass::Transient;
    d.label = "iv";
    d.exists = EqExistence::None;
    d.p_param = d.fp.exact;
    return d;
  }

  d.exact_unit = d.fp.exact.has_value();
  d.p_param = d.fp.exact ? *d.fp.exact : (*d.blo + *d.bhi) / 2;
  SeriesOptions dopt{std::max(opt.tol, 1e-4), opt.cap};
  BranchValues rv = return_values(spec.base.returns);
  if (d.fp.exact) {
    TermFamily fam = combined_family(spec, t, *d.fp.exact);
    d.mean_return = weighted_integral(fam, rv, dopt);
    d.tau_integral = weighted_integral(fam, spec.roof, dopt);
  } else {
    TermFamily fam_lo = combined_family(spec, t, *d.blo);
    TermFamily fam_hi = combined_family(spec, t, *d.bhi);
    d.mean_return = bracket_hull(weighted_integral(fam_lo, rv, dopt),
                                 weighted_integral(fam_hi, rv, dopt));
    d.tau_integral =
        bracket_hull(weighted_integral(fam_lo, spec.roof, dopt),
                     weighted_integral(fam_hi, spec.roof, dopt));
  }

  d.combined_cls = class_from(d.mean_return);
  d.flow_cls = class_from(d.tau_integral);
  bool tau_fin = d.tau_integral.status == ExtReal::Finite;
  bool tau_inf = d.tau_integral.status == ExtReal::PlusInfinity;
  switch (d.combined_cls) {
    case RecurrenceClass::PositiveRecurrent:
      if (tau_fin) { d.label = "a"; d.exists = EqExistence::UniqueExists; }
      else if (tau_inf) { d.label = "ii"; d.exists = EqExistence::None; }
      break;
    case RecurrenceClass::NullRecurrent:
      if (tau_fin) { d.label = "b"; d.exists = EqExistence::UniqueExists; }
      else if (tau_inf) { d.label = "iii"; d.exists = EqExistence::None; }
      break;
    default:
      if (tau_fin) {
        d.exists = EqExistence::UniqueExists;
        d.note = "recurrent with integrable roof; positive vs null undecided";
      }
      break;
  }
  return d;
}

}  // namespace

FlowPressure flow_pressure(const FlowSpec& spec, const Rational& t,
                           const SeriesOptions& opt, double root_tol) {
  return solve_flow(spec, t, opt, root_tol).fp;
}

BaseClassification classify_base(const TermFamily& return_weights,
                                 std::optional<Rational> unit_sum_at,
                                 const SeriesOptions& opt) {
  BaseClassification out;
  out.mean_return = ext_indet();
  out.equation = solve_return_equation(return_weights, unit_sum_at, opt);
  const ReturnEquation& eq = out.equation;
  BranchValues id;
  id.lin = 1;

  if (eq.has_root) {
    out.cls = RecurrenceClass::PositiveRecurrent;
    out.pressure.status = PressureValue::Finite;
    out.pressure.value = eq.root_lo;
    out.pressure.err = eq.root_hi - eq.root_lo;
    if (unit_sum_at && rat_d(*unit_sum_at) == eq.root_lo &&
        eq.root_lo == eq.root_hi)
      out.exact_pressure = unit_sum_at;
    if (eq.root_lo == eq.root_hi) {
      out.mean_return = weighted_integral(
          return_series_at(return_weights, eq.root_lo), id, opt);
    } else {
      TermFamily at_lo = return_series_at(return_weights, eq.root_lo);
      TermFamily at_hi = return_series_at(return_weights, eq.root_hi);
      out.mean_return = bracket_hull(weighted_integral(at_lo, id, opt),
                                     weighted_integral(at_hi, id, opt));
    }
    return out;
  }
  if (eq.boundary_symbolic) {
    out.at_boundary = true;
    out.pressure.status = PressureValue::Finite;
    out.pressure.value = eq.boundary;
    out.exact_pressure = unit_sum_at;
    out.mean_return = weighted_integral(
        return_series_at(return_weights, *unit_sum_at), id, opt);
    out.cls = out.mean_return.status == ExtReal::Finite
                  ? RecurrenceClass::PositiveRecurrent
                  : out.mean_return.status == ExtReal::PlusInfinity
                        ? RecurrenceClass::NullRecurrent
                        : RecurrenceClass::Indeterminate;
    return out;
  }
  if (eq.boundary_side == Cmp::Below) {
    out.cls = RecurrenceClass::Transient;
    out.at_boundary = true;
    out.pressure.status = PressureValue::Finite;
    out.pressure.value = eq.boundary;
    if (eq.boundary_exact) out.exact_pressure = return_weights.lin;
    return out;
  }
  out.cls = RecurrenceClass::Indeterminate;
  out.pressure.status = PressureValue::Indeterminate;
  out.pressure.note = "boundary comparison could not be certified";
  return out;
}

BaseClassification classify_base(const BranchValues& potential,
                                 std::optional<Rational> unit_sum_at,
                                 const SeriesOptions& opt) {
  TermFamily ret = return_indexed(weight_family(Rational(1), potential));
  return classify_base(ret, unit_sum_at, opt);
}

RecurrenceClass classify_flow(const FlowSpec& spec, const Rational& t,
                              const SeriesOptions& opt) {
  return decide_case(spec, t, opt).flow_cls;
}

ClassificationReport equilibrium_decision(const FlowSpec& spec,
                                          const Rational& t,
                                          const SeriesOptions& opt) {
  ClassificationReport rep;
  rep.s_infinity = s_infinity(spec);
  rep.alpha = alpha_limit(spec);
  rep.stats = stats_indet();

  Decision d = decide_case(spec, t, opt);
  rep.flow_pressure = d.fp;
  rep.flow_class = d.flow_cls;
  rep.theorem_case = d.label;
  rep.equilibrium = d.exists;
  rep.note = d.note;

  // informational side of the report; bound the effort so a boundary sum
  // that equals 1 without a hint cannot grind the full term budget
  SeriesOptions bopt{std::max(opt.tol, 1e-9),
                     opt.cap > 0 ? std::min(opt.cap, 2000000L) : 2000000L};
  BaseClassification bc = classify_base(scale_values(t, spec.potential),
                                        std::nullopt, bopt);
  rep.base_pressure = bc.pressure;
  rep.base_class = bc.cls;

  bool recurrent = d.fp.status == FlowPressure::Finite &&
                   !(d.fp.sticks && !d.fp.boundary_symbolic);
  if (recurrent && d.p_param) {
    SeriesOptions sopt{std::max(opt.tol, 1e-9), opt.cap};
    BranchValues comb =
        combine_values(t, spec.potential, -*d.p_param, spec.roof);
    try {
      GibbsWeights gw = gibbs_weights(comb, Rational(0), spec.base.returns,
                                      d.exact_unit, sopt);
      rep.stats = project_stats(gw, spec.base.returns, spec.roof,
                                scale_values(t, spec.potential), sopt);
    } catch (const DomainError& e) {
      rep.note += rep.note.empty() ? "" : "; ";
      rep.note += std::string("measure statistics unavailable: ") + e.what();
    }
  }

  {
    FlowSpec zero = spec;
    zero.potential = constant_values(0.0);
    if (!(spec.hint && rat_zero(spec.hint->t0))) zero.hint.reset();
    zero.cusp_value.reset();
    Decision dm = decide_case(zero, Rational(0), opt);
    rep.mme = dm.exists;
  }

  if (spec.cusp_value && rep.flow_pressure.status == FlowPressure::Finite) {
    double c = *spec.cusp_value;
    double lo = rep.flow_pressure.value;
    double hi = rep.flow_pressure.value + rep.flow_pressure.err;
    bool exact_tie =
        rep.flow_pressure.exact && *rep.flow_pressure.exact == Rational(c);
    if (exact_tie) {
      rep.equilibrium = rep.equilibrium == EqExistence::UniqueExists
                            ? EqExistence::TwoExist
                            : EqExistence::UniqueExists;
      rep.note += rep.note.empty() ? "" : "; ";
      rep.note += "pressure ties the cusp value exactly";
    } else if (hi < c) {
      rep.cusp_dominates = true;
      rep.equilibrium = EqExistence::UniqueExists;
      rep.flow_class = RecurrenceClass::Transient;
      rep.theorem_case = "i";
      rep.flow_pressure.value = c;
      rep.flow_pressure.err = 0.0;
      rep.flow_pressure.exact = Rational(c);
      rep.flow_pressure.sticks = false;
      rep.stats = stats_indet();
      rep.note += rep.note.empty() ? "" : "; ";
      rep.note += "cusp term dominates the series pressure";
    } else if (lo <= c) {
      rep.equilibrium = EqExistence::Indeterminate;
      rep.note += rep.note.empty() ? "" : "; ";
      rep.note += "pressure enclosure straddles the cusp value";
    }
  }

  return rep;
}

}  // namespace thermo
