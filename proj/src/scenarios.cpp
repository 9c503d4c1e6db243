#include "thermo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <utility>

#include "thermo/inducing.hpp"
#include "thermo/kernels.hpp"
#include "thermo/mp.hpp"

namespace thermo {
namespace {

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string bracket_str(double lo, double hi) {
  return "[" + fmt_g(lo) + ", " + fmt_g(hi) + "]";
}

Expectation row(std::string field, std::string expected, std::string computed,
                bool pass, std::string provenance) {
  Expectation e;
  e.field = std::move(field);
  e.expected = std::move(expected);
  e.computed = std::move(computed);
  e.pass = pass;
  e.provenance = std::move(provenance);
  return e;
}

const char* kind_str(PhaseInterval::Kind k) {
  switch (k) {
    case PhaseInterval::Empty: return "empty";
    case PhaseInterval::Bounded: return "bounded";
    case PhaseInterval::RayAbove: return "ray above";
    case PhaseInterval::RayBelow: return "ray below";
    case PhaseInterval::AllReals: return "all reals";
    default: return "indeterminate";
  }
}

// Options for rows that must not depend on the ambient term-cap override.
SeriesOptions pinned_opt(double tol, long cap) {
  SeriesOptions opt;
  opt.tol = tol;
  opt.cap = cap;
  return opt;
}

// ---- certified integer search and normalization masses ----

TermFamily shifted_weight_family(long shift) {
  TermFamily f;
  f.expr.c1 = -1;
  f.expr.c2 = -2;
  f.expr.s1 = (double)shift;
  f.expr.s2 = (double)shift;
  return f;
}

Cmp compare_shifted(long shift, double threshold) {
  Cmp c = compare_family(shifted_weight_family(shift), threshold,
                         pinned_opt(1e-7, 4000000));
  if (c == Cmp::Straddles)
    c = compare_family(shifted_weight_family(shift), threshold,
                       pinned_opt(1e-9, 40000000));
  if (c == Cmp::Straddles)
    throw DomainError("shift search cannot separate the sum at shift " +
                      std::to_string(shift));
  return c;
}

// Least integer shift >= lo whose weight sum is certified below the
// threshold. Every term decreases in the shift, so the sum is strictly
// decreasing and the bracketed binary search is sound.
long minimal_shift(double threshold, long lo) {
  if (compare_shifted(lo, threshold) == Cmp::Below) return lo;
  long above = lo;
  long below = -1;
  for (long k = lo * 2; k < (1L << 24); k *= 2) {
    if (compare_shifted(k, threshold) == Cmp::Below) {
      below = k;
      break;
    }
    above = k;
  }
  if (below < 0) throw DomainError("shift search exhausted its range");
  while (below - above > 1) {
    long mid = above + (below - above) / 2;
    if (compare_shifted(mid, threshold) == Cmp::Below)
      below = mid;
    else
      above = mid;
  }
  return below;
}

// sum_{n>=1} 1/((n+shift) log^2(n+shift)): explicit prefix plus the
// midpoint-rule tail integral (antiderivative -1/log). The midpoint error
// is bounded by |f'(prefix)|/24, far below 1e-12 here.
double shifted_weight_mass(long shift) {
  const long prefix = 200000;
  double head = kernels::sum_indexed(1, prefix + 1, [&](long n) {
    double x = (double)(n + shift);
    double lg = std::log(x);
    return 1.0 / (x * lg * lg);
  });
  return head + 1.0 / std::log((double)prefix + 0.5 + (double)shift);
}

AsymptoticExpr shifted_weight_expr(long shift) {
  AsymptoticExpr e;
  e.c1 = 1;
  e.c2 = 2;
  e.s1 = (double)shift;
  e.s2 = (double)shift;
  return e;
}

// ---- check factories ----

ScenarioCheck check_param(const std::string& key, long want,
                          std::string prov) {
  return [key, want, prov](const Scenario& sc, const SeriesOptions&) {
    auto it = sc.params.find(key);
    std::string com =
        it == sc.params.end() ? "missing" : rational_str(it->second);
    bool pass = it != sc.params.end() && it->second == rat_of(want);
    return row(key, std::to_string(want), com, pass, prov);
  };
}

ScenarioCheck check_s_infinity(std::optional<Rational> want,
                               std::string prov) {
  return [want, prov](const Scenario& sc, const SeriesOptions&) {
    auto got = s_infinity(sc.spec);
    std::string exp = want ? rational_str(*want) : "+infinity";
    std::string com = got ? rational_str(*got) : "+infinity";
    bool pass =
        want.has_value() == got.has_value() && (!want || *want == *got);
    return row("s_infinity", exp, com, pass, prov);
  };
}

ScenarioCheck check_alpha(const Rational& want, std::string prov) {
  return [want, prov](const Scenario& sc, const SeriesOptions&) {
    auto got = alpha_limit(sc.spec);
    std::string com = got ? rational_str(*got) : "no finite limit";
    bool pass = got.has_value() && *got == want;
    return row("alpha", rational_str(want), com, pass, prov);
  };
}

ScenarioCheck check_pressure_exact(const Rational& t, const Rational& want,
                                   std::string prov) {
  return [t, want, prov](const Scenario& sc, const SeriesOptions&) {
    FlowPressure fp = flow_pressure(sc.spec, t, pinned_opt(1e-9, 8000000));
    std::string field = "pressure(t=" + rational_str(t) + ")";
    std::string com;
    bool pass = false;
    if (fp.status == FlowPressure::Finite && fp.exact) {
      com = rational_str(*fp.exact) + " exact";
      pass = *fp.exact == want;
    } else if (fp.status == FlowPressure::Finite) {
      com = bracket_str(fp.value, fp.value + fp.err);
    } else if (fp.status == FlowPressure::NoFiniteEntropy) {
      com = "+infinity";
    } else {
      com = "indeterminate";
    }
    return row(field, rational_str(want) + " exact", com, pass, prov);
  };
}

ScenarioCheck check_pressure_above(const Rational& t, double line,
                                   double margin, std::string prov) {
  return [t, line, margin, prov](const Scenario& sc, const SeriesOptions&) {
    FlowPressure fp = flow_pressure(sc.spec, t, pinned_opt(1e-9, 2000000));
    std::string field = "pressure(t=" + rational_str(t) + ")";
    std::string com = fp.status == FlowPressure::Finite
                          ? bracket_str(fp.value, fp.value + fp.err)
                          : "not finite";
    bool pass = fp.status == FlowPressure::Finite && fp.value > line + margin;
    return row(field, "> " + fmt_g(line + margin), com, pass, prov);
  };
}

ScenarioCheck check_pressure_infinite(const Rational& t, std::string prov) {
  return [t, prov](const Scenario& sc, const SeriesOptions&) {
    FlowPressure fp = flow_pressure(sc.spec, t, pinned_opt(1e-9, 2000000));
    std::string field = "pressure(t=" + rational_str(t) + ")";
    std::string com;
    switch (fp.status) {
      case FlowPressure::NoFiniteEntropy: com = "+infinity"; break;
      case FlowPressure::Finite: com = bracket_str(fp.value, fp.value + fp.err); break;
      default: com = "indeterminate"; break;
    }
    return row(field, "+infinity",
               com, fp.status == FlowPressure::NoFiniteEntropy, prov);
  };
}

ScenarioCheck check_flow_class(const Rational& t, RecurrenceClass want,
                               std::string prov) {
  return [t, want, prov](const Scenario& sc, const SeriesOptions&) {
    RecurrenceClass got = classify_flow(sc.spec, t, pinned_opt(1e-9, 4000000));
    return row("flow_class(t=" + rational_str(t) + ")", class_name(want),
               class_name(got), got == want, prov);
  };
}

ScenarioCheck check_base_class(const Rational& t, RecurrenceClass want,
                               std::string prov) {
  return [t, want, prov](const Scenario& sc, const SeriesOptions&) {
    std::optional<Rational> unit;
    auto it = sc.base_unit_sums.find(t);
    if (it != sc.base_unit_sums.end()) unit = it->second;
    BaseClassification bc = classify_base(scale_values(t, sc.spec.potential),
                                          unit, pinned_opt(1e-9, 4000000));
    return row("base_class(t=" + rational_str(t) + ")", class_name(want),
               class_name(bc.cls), bc.cls == want, prov);
  };
}

// Recurrence class of the weight potential -roof itself (scenarios whose
// flow potential is zero but whose weights carry the claim).
ScenarioCheck check_weight_class(RecurrenceClass want,
                                 std::optional<Rational> unit,
                                 std::string prov) {
  return [want, unit, prov](const Scenario& sc, const SeriesOptions&) {
    BaseClassification bc = classify_base(
        scale_values(rat_of(-1), sc.spec.roof), unit, pinned_opt(1e-9, 4000000));
    return row("base_class(weights)", class_name(want), class_name(bc.cls),
               bc.cls == want, prov);
  };
}

ScenarioCheck check_case(const Rational& t, std::string want,
                         std::string prov) {
  return [t, want, prov](const Scenario& sc, const SeriesOptions&) {
    ClassificationReport rep =
        equilibrium_decision(sc.spec, t, pinned_opt(1e-9, 4000000));
    std::string com = rep.theorem_case.empty() ? "undecided" : rep.theorem_case;
    return row("case(t=" + rational_str(t) + ")", want, com,
               rep.theorem_case == want, prov);
  };
}

ScenarioCheck check_equilibrium(const Rational& t, EqExistence want,
                                std::string prov) {
  return [t, want, prov](const Scenario& sc, const SeriesOptions&) {
    ClassificationReport rep =
        equilibrium_decision(sc.spec, t, pinned_opt(1e-9, 4000000));
    return row("equilibrium(t=" + rational_str(t) + ")", existence_name(want),
               existence_name(rep.equilibrium), rep.equilibrium == want, prov);
  };
}

ScenarioCheck check_mme(EqExistence want, std::string prov) {
  return [want, prov](const Scenario& sc, const SeriesOptions&) {
    ClassificationReport rep =
        equilibrium_decision(sc.spec, rat_of(0), pinned_opt(1e-9, 4000000));
    return row("mme", existence_name(want), existence_name(rep.mme),
               rep.mme == want, prov);
  };
}

ScenarioCheck check_mean_return_diverges(const Rational& t,
                                         std::string prov) {
  return [t, prov](const Scenario& sc, const SeriesOptions&) {
    ClassificationReport rep =
        equilibrium_decision(sc.spec, t, pinned_opt(1e-9, 4000000));
    bool diverges = rep.stats.integral_r.status == ExtReal::PlusInfinity;
    bool pass = diverges && !rep.stats.finite_base_measure;
    return row("mean_return(t=" + rational_str(t) + ")", "diverges",
               diverges ? "diverges" : ext_name(rep.stats.integral_r.status),
               pass, prov);
  };
}

ScenarioCheck check_induced_entropy_infinite(std::string prov) {
  return [prov](const Scenario& sc, const SeriesOptions&) {
    TermFamily w = weight_family(rat_of(-1), sc.spec.roof);
    w.sum_is_one = true;
    ExtReal h = weighted_integral(w, sc.spec.roof, pinned_opt(1e-9, 2000000));
    std::string com;
    switch (h.status) {
      case ExtReal::PlusInfinity: com = "+infinity"; break;
      case ExtReal::Finite: com = bracket_str(h.value, h.value + h.err); break;
      default: com = ext_name(h.status); break;
    }
    return row("induced_entropy", "+infinity", com,
               h.status == ExtReal::PlusInfinity, prov);
  };
}

ScenarioCheck check_entropy_floor(long count, double floor,
                                  std::string prov) {
  return [count, floor, prov](const Scenario& sc, const SeriesOptions&) {
    const BranchValues& roof = sc.spec.roof;
    double total = kernels::sum_indexed(1, count + 1,
                                        [&](long n) { return roof.value(n); });
    double bound = (double)count * std::log((double)count) / total;
    char field[48];
    std::snprintf(field, sizeof field, "entropy_floor(N=%ld)", count);
    return row(field, "> " + fmt_g(floor), fmt_g(bound), bound > floor, prov);
  };
}

ScenarioCheck check_window_bounded(double lo1, double hi1, double lo2,
                                   double hi2, std::string prov) {
  return [lo1, hi1, lo2, hi2, prov](const Scenario& sc,
                                    const SeriesOptions&) {
    PhaseInterval w = interval_I(sc.spec, pinned_opt(1e-8, 8000000), 1e-7, 60);
    std::string com;
    bool pass = false;
    if (w.kind == PhaseInterval::Bounded) {
      com = "bounded, lower " + bracket_str(w.lower.lo, w.lower.hi) +
            ", upper " + bracket_str(w.upper.lo, w.upper.hi);
      pass = lo1 < w.lower.lo && w.lower.hi < hi1 && lo2 < w.upper.lo &&
             w.upper.hi < hi2;
    } else {
      com = kind_str(w.kind);
    }
    std::string exp = "bounded, lower in (" + fmt_g(lo1) + ", " + fmt_g(hi1) +
                      "), upper in (" + fmt_g(lo2) + ", " + fmt_g(hi2) + ")";
    return row("window", exp, com, pass, prov);
  };
}

ScenarioCheck check_window_kind(PhaseInterval::Kind want, std::string prov) {
  return [want, prov](const Scenario& sc, const SeriesOptions&) {
    PhaseInterval w = interval_I(sc.spec, pinned_opt(1e-8, 4000000), 1e-6, 60);
    return row("window", kind_str(want), kind_str(w.kind), w.kind == want,
               prov);
  };
}

ScenarioCheck check_window_ray_above(const Rational& endpoint,
                                     std::string prov) {
  return [endpoint, prov](const Scenario& sc, const SeriesOptions&) {
    PhaseInterval w = interval_I(sc.spec, pinned_opt(1e-8, 4000000), 1e-6, 60);
    std::string com = kind_str(w.kind);
    bool pass = false;
    if (w.kind == PhaseInterval::RayAbove) {
      if (w.lower.exact)
        com += " from " + rational_str(*w.lower.exact) +
               (w.lower.closed ? " (closed)" : "");
      else
        com += " from " + bracket_str(w.lower.lo, w.lower.hi);
      pass = w.lower.exact && *w.lower.exact == endpoint && w.lower.closed;
    }
    return row("window",
               "ray above from " + rational_str(endpoint) + " (closed)", com,
               pass, prov);
  };
}

// ---- intermittent-map checks ----

ScenarioCheck check_mp_entropy(std::shared_ptr<MpBranchData> data) {
  return [data](const Scenario&, const SeriesOptions&) {
    MpBracket h = mp_flow_entropy(*data);
    bool pass = h.contains(1.0) && h.width() <= 0.1;
    return row("entropy_bracket", "contains 1, width <= 0.1",
               bracket_str(h.lo, h.hi), pass,
               "endpoint-array roots intersected with a positive-operator "
               "mesh bound");
  };
}

ScenarioCheck check_mp_abscissa(std::shared_ptr<MpBranchData> data,
                                const Rational& target) {
  return [data, target](const Scenario&, const SeriesOptions&) {
    MpBracket s = mp_s_infinity(*data);
    bool pass = s.contains(rat_d(target)) && s.width() <= 0.1;
    return row("s_infinity_bracket",
               "contains " + rational_str(target) + ", width <= 0.1",
               bracket_str(s.lo, s.hi), pass,
               "checkpoint log-slopes padded by the drift between windows");
  };
}

ScenarioCheck check_mp_mme(std::shared_ptr<MpBranchData> data) {
  return [data](const Scenario&, const SeriesOptions&) {
    AsymptoticExpr zero;
    MpEquilibriumReport rep = mp_equilibrium(*data, zero, 0.0);
    bool pass = rep.verdict == EqExistence::UniqueExists &&
                rep.side == MpSide::RenewalSide;
    std::string com = std::string(existence_name(rep.verdict)) + " on " +
                      side_name(rep.side) + " side";
    return row("mme", "unique on renewal side", com, pass,
               "interior root above the neutral atom with a summable "
               "return-time integral");
  };
}

ScenarioCheck check_mp_projection(std::shared_ptr<MpBranchData> data,
                                  const std::string& want) {
  return [data, want](const Scenario&, const SeriesOptions&) {
    AsymptoticExpr zero;
    MpEquilibriumReport rep = mp_equilibrium(*data, zero, 0.0);
    bool pass = rep.note.find(want + " invariant measure") != std::string::npos;
    return row("projection", want + " invariant measure for the interval map",
               rep.note, pass, "fitted decay exponent of the weight sequence");
  };
}

// ---- builders ----

Scenario build_hofbauer_transient() {
  Scenario sc;
  sc.name = "hofbauer_transient";
  sc.summary =
      "unnormalized slow-decay weights: critical sum below one, entropy one, "
      "no maximal measure";
  long k = minimal_shift(1.0, 3);
  sc.params["k"] = rat_of(k);
  BranchValues roof;
  roof.expr = shifted_weight_expr(k);
  sc.spec =
      make_flow_spec(build_renewal_model(), roof, constant_values(0.0));
  sc.sample_ts = {rat_of(0)};
  sc.checks = {
      check_param("k", 4,
                  "smallest integer shift whose certified weight sum drops "
                  "below one"),
      check_s_infinity(rat_of(1), "exact from the leading roof coefficient"),
      check_pressure_exact(rat_of(0), rat_of(1),
                           "critical weight sum certified below one, so the "
                           "infimum sits at the convergence edge"),
      check_flow_class(rat_of(0), RecurrenceClass::Transient,
                       "boundary sum certified below one"),
      check_case(rat_of(0), "iv", "transient boundary split"),
      check_mme(EqExistence::None,
                "no conservative weight vector at the critical parameter"),
      check_weight_class(RecurrenceClass::Transient, std::nullopt,
                         "return-weight sum certified below one at its "
                         "boundary"),
  };
  return sc;
}

Scenario build_hofbauer_null() {
  Scenario sc;
  sc.name = "hofbauer_null";
  sc.summary =
      "normalized slow-decay weights: null recurrent at the critical "
      "parameter, still no maximal measure";
  long k = minimal_shift(1.0, 3);
  sc.params["k"] = rat_of(k);
  double head = 1.0 - shifted_weight_mass(k);
  BranchValues roof;
  roof.expr = shifted_weight_expr(k);
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = -std::log(head);
  NormalizationHint hint{rat_of(0), rat_of(1)};
  sc.spec = make_flow_spec(build_renewal_model(), roof, constant_values(0.0),
                           std::nullopt, hint);
  sc.sample_ts = {rat_of(0)};
  sc.checks = {
      check_param("k", 4,
                  "smallest integer shift whose certified weight sum drops "
                  "below one"),
      check_s_infinity(rat_of(1), "exact from the leading roof coefficient"),
      check_pressure_exact(rat_of(0), rat_of(1),
                           "normalization pins the critical sum at one"),
      check_flow_class(rat_of(0), RecurrenceClass::NullRecurrent,
                       "mean roof integral diverges by its decay class at "
                       "the pinned boundary"),
      check_case(rat_of(0), "iii", "pinned boundary with divergent mean roof"),
      check_mme(EqExistence::None,
                "the critical weight vector carries no finite mean roof"),
      check_weight_class(RecurrenceClass::NullRecurrent, rat_of(0),
                         "normalization pins the return sum at one; the mean "
                         "return time diverges by its class"),
      check_induced_entropy_infinite(
          "the weight-times-roof series diverges by its decay class"),
  };
  return sc;
}

Scenario build_two_phase() {
  Scenario sc;
  sc.name = "two_phase";
  sc.summary =
      "log roof with an iterated-log potential: affine window with two "
      "transition points";
  long K = minimal_shift(1.0 / 9.0, 3);
  sc.params["K"] = rat_of(K);
  BranchValues roof;
  roof.expr.c1 = 1;
  roof.expr.s1 = (double)(K - 1);
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = std::log(2.0);
  BranchValues pot;
  pot.expr.c2 = -1;
  pot.expr.s2 = (double)(K - 1);
  pot.expr.n_min = 1;
  pot.expr.overrides[0] = std::log(4.0 / 3.0);
  sc.spec = make_flow_spec(build_renewal_model(), roof, pot);
  sc.sample_ts = {rat_of(1, 2), rat_of(3, 2), rat_of(2), rat_of(5, 2),
                  rat_of(7, 2)};
  sc.checks = {
      check_param("K", 8104,
                  "smallest integer shift whose certified weight sum drops "
                  "below one ninth"),
      check_s_infinity(rat_of(1), "exact from the leading roof coefficient"),
      check_alpha(rat_of(0),
                  "the potential sits one log level below the roof"),
      check_window_bounded(1.0, 2.0, 2.0, 3.0,
                           "boundary sum certified above one at the integer "
                           "parameters and below one between them"),
      check_pressure_exact(rat_of(2), rat_of(1),
                           "the shifted weight sum stays below one ninth, "
                           "keeping the boundary sum below one here"),
      check_pressure_exact(rat_of(21, 10), rat_of(1),
                           "boundary sum certified below one at this "
                           "parameter"),
      check_pressure_above(rat_of(1, 2), 1.0, 1e-2,
                           "certified lower enclosure of the solved root "
                           "stays above the affine line"),
      check_pressure_above(rat_of(7, 2), 1.0, 1e-2,
                           "certified lower enclosure of the solved root "
                           "stays above the affine line"),
      check_flow_class(rat_of(2), RecurrenceClass::Transient,
                       "boundary sum certified below one"),
      check_case(rat_of(2), "iv", "transient boundary split"),
      check_equilibrium(rat_of(2), EqExistence::None,
                        "no conservative weight vector inside the window"),
  };
  return sc;
}

Scenario build_improve_case_1() {
  Scenario sc;
  sc.name = "improve_case_1";
  sc.summary =
      "potential proportional to a transient roof: flow transient at every "
      "parameter";
  long k = minimal_shift(1.0, 3);
  sc.params["k"] = rat_of(k);
  sc.params["C"] = rat_of(1);
  BranchValues roof;
  roof.expr = shifted_weight_expr(k);
  sc.spec = make_flow_spec(build_renewal_model(), roof, roof);
  sc.sample_ts = {rat_of(-2), rat_of(-1), rat_of(0), rat_of(1), rat_of(2)};
  sc.checks = {
      check_s_infinity(rat_of(1), "exact from the leading roof coefficient"),
      check_alpha(rat_of(1), "the potential equals the roof"),
      check_pressure_exact(rat_of(0), rat_of(1),
                           "the tilted boundary sum collapses to the "
                           "parameter-free weight sum, certified below one"),
      check_pressure_exact(rat_of(2), rat_of(3),
                           "the tilted boundary sum collapses to the "
                           "parameter-free weight sum, certified below one"),
      check_pressure_exact(rat_of(-2), rat_of(-1),
                           "the tilted boundary sum collapses to the "
                           "parameter-free weight sum, certified below one"),
      check_flow_class(rat_of(1), RecurrenceClass::Transient,
                       "boundary sum certified below one at every parameter"),
      check_case(rat_of(1), "iv", "transient boundary split"),
      check_equilibrium(rat_of(1), EqExistence::None,
                        "no conservative weight vector at any parameter"),
      check_base_class(rat_of(1), RecurrenceClass::PositiveRecurrent,
                       "the return series diverges at its edge, forcing an "
                       "interior root with exponentially decaying weights"),
      check_base_class(rat_of(-1), RecurrenceClass::Transient,
                       "at minus the reciprocal of the proportionality "
                       "constant the return sum is the certified-below-one "
                       "weight sum"),
      check_base_class(rat_of(-2), RecurrenceClass::Transient,
                       "squared weights certified below one"),
      check_window_kind(PhaseInterval::AllReals,
                        "the window series is parameter-free and certified "
                        "below one"),
  };
  return sc;
}

Scenario build_improve_case_2() {
  Scenario sc;
  sc.name = "improve_case_2";
  sc.summary =
      "normalized slow-decay roof: flow null recurrent at every parameter";
  const long shift = 3;
  sc.params["shift"] = rat_of(shift);
  sc.params["C"] = rat_of(1);
  double head = 1.0 - shifted_weight_mass(shift);
  BranchValues roof;
  roof.expr = shifted_weight_expr(shift);
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = -std::log(head);
  NormalizationHint hint{rat_of(0), rat_of(1)};
  sc.spec =
      make_flow_spec(build_renewal_model(), roof, roof, std::nullopt, hint);
  sc.base_unit_sums[rat_of(-1)] = rat_of(0);
  sc.sample_ts = {rat_of(-2), rat_of(-1), rat_of(0), rat_of(1), rat_of(2)};
  sc.checks = {
      check_s_infinity(rat_of(1), "exact from the leading roof coefficient"),
      check_alpha(rat_of(1), "the potential equals the roof"),
      check_pressure_exact(rat_of(0), rat_of(1),
                           "normalization transported along the proportional "
                           "potential pins the boundary root"),
      check_pressure_exact(rat_of(2), rat_of(3),
                           "normalization transported along the proportional "
                           "potential pins the boundary root"),
      check_flow_class(rat_of(0), RecurrenceClass::NullRecurrent,
                       "mean roof integral diverges by its decay class at "
                       "the pinned boundary"),
      check_flow_class(rat_of(2), RecurrenceClass::NullRecurrent,
                       "the root weights are parameter-free, so the mean "
                       "roof diverges at every parameter"),
      check_case(rat_of(0), "iii", "pinned boundary with divergent mean roof"),
      check_mme(EqExistence::None,
                "the critical weight vector carries no finite mean roof"),
      check_base_class(rat_of(1), RecurrenceClass::PositiveRecurrent,
                       "the return series diverges at its edge, forcing an "
                       "interior root with exponentially decaying weights"),
      check_base_class(rat_of(-1), RecurrenceClass::NullRecurrent,
                       "normalization pins the return sum at one; the mean "
                       "return time diverges by its class"),
      check_base_class(rat_of(-2), RecurrenceClass::Transient,
                       "squared weights certified below one"),
      check_window_kind(PhaseInterval::AllReals,
                        "the pinned boundary sum stays at one for every "
                        "parameter"),
  };
  return sc;
}

Scenario build_improve_case_3() {
  Scenario sc;
  sc.name = "improve_case_3";
  sc.summary =
      "normalized square-decay roof: flow positive recurrent with an "
      "infinite base projection";
  sc.params["C"] = rat_of(1);
  double head = 2.0 - std::numbers::pi * std::numbers::pi / 6.0;
  BranchValues roof;
  roof.expr.c1 = 2;
  roof.expr.s1 = 1.0;
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = -std::log(head);
  NormalizationHint hint{rat_of(0), rat_of(1)};
  sc.spec =
      make_flow_spec(build_renewal_model(), roof, roof, std::nullopt, hint);
  sc.base_unit_sums[rat_of(-1)] = rat_of(0);
  sc.sample_ts = {rat_of(-2), rat_of(-1), rat_of(0), rat_of(1), rat_of(2)};
  sc.checks = {
      check_s_infinity(rat_of(1, 2),
                       "exact from the leading roof coefficient"),
      check_alpha(rat_of(1), "the potential equals the roof"),
      check_pressure_exact(rat_of(0), rat_of(1),
                           "normalization transported along the proportional "
                           "potential pins an interior root"),
      check_pressure_exact(rat_of(2), rat_of(3),
                           "normalization transported along the proportional "
                           "potential pins an interior root"),
      check_flow_class(rat_of(0), RecurrenceClass::PositiveRecurrent,
                       "mean roof integral converges by its decay class at "
                       "the pinned root"),
      check_flow_class(rat_of(2), RecurrenceClass::PositiveRecurrent,
                       "the root weights are parameter-free, so the mean "
                       "roof converges at every parameter"),
      check_case(rat_of(0), "b", "interior root with convergent mean roof"),
      check_mme(EqExistence::UniqueExists,
                "pinned interior root with a convergent mean roof integral"),
      check_mean_return_diverges(rat_of(0),
                                 "the equilibrium projects to an infinite "
                                 "base measure: the mean return time "
                                 "diverges while the mean roof converges"),
      check_base_class(rat_of(1), RecurrenceClass::PositiveRecurrent,
                       "the return series diverges at its edge, forcing an "
                       "interior root with exponentially decaying weights"),
      check_base_class(rat_of(-1), RecurrenceClass::NullRecurrent,
                       "normalization pins the return sum at one; the mean "
                       "return time diverges by its class"),
      check_base_class(rat_of(-2), RecurrenceClass::Transient,
                       "squared weights certified below one"),
      check_window_kind(PhaseInterval::Empty,
                        "the window series keeps a divergent decay class at "
                        "every parameter"),
  };
  return sc;
}

Scenario build_trans_null() {
  Scenario sc;
  sc.name = "trans_null";
  sc.summary =
      "linear roof with a sign-flipped potential: base null recurrent while "
      "the flow is transient";
  const long shift = 3;
  sc.params["shift"] = rat_of(shift);
  double head = 1.0 - shifted_weight_mass(shift);
  BranchValues roof;
  roof.lin = 1;
  roof.expr = shifted_weight_expr(shift);
  roof.expr.c0 = 1.0;
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = -std::log(head) + 1.0;
  BranchValues pot;
  pot.lin = 1;
  pot.expr = scale_expr(rat_of(-1), shifted_weight_expr(shift));
  pot.expr.c0 = 1.0;
  pot.expr.n_min = 1;
  pot.expr.overrides[0] = std::log(head) + 1.0;
  NormalizationHint hint{rat_of(1, 2), rat_of(1, 2)};
  sc.spec =
      make_flow_spec(build_renewal_model(), roof, pot, std::nullopt, hint);
  sc.base_unit_sums[rat_of(1)] = rat_of(1);
  sc.sample_ts = {rat_of(1, 4), rat_of(1, 2), rat_of(1), rat_of(2)};
  sc.checks = {
      check_s_infinity(rat_of(0), "the roof grows linearly"),
      check_alpha(rat_of(1), "ratio of the linear coefficients"),
      check_pressure_exact(rat_of(1), rat_of(1),
                           "the squared-weight boundary sum is certified "
                           "below one"),
      check_flow_class(rat_of(1), RecurrenceClass::Transient,
                       "boundary sum certified below one"),
      check_case(rat_of(1), "iv", "transient boundary split"),
      check_base_class(rat_of(1), RecurrenceClass::NullRecurrent,
                       "normalization pins the return sum at one at unit "
                       "decay; the mean return time diverges by its class"),
      check_pressure_exact(rat_of(1, 2), rat_of(1, 2),
                           "normalization pins the boundary sum at one"),
      check_flow_class(rat_of(1, 2), RecurrenceClass::NullRecurrent,
                       "mean roof integral diverges at the pinned boundary"),
      check_case(rat_of(1, 2), "iii",
                 "pinned boundary with divergent mean roof"),
      check_mme(EqExistence::UniqueExists,
                "interior root with exponentially decaying return weights"),
      check_case(rat_of(0), "a", "interior root with finite mean roof"),
      check_window_ray_above(rat_of(1, 2),
                             "the window series equals the squared "
                             "normalization and crosses one exactly at the "
                             "hint parameter"),
  };
  return sc;
}

Scenario build_inf_entropy() {
  Scenario sc;
  sc.name = "inf_entropy";
  sc.summary =
      "iterated-log roof with infinite flow entropy and no maximal measure";
  BranchValues roof;
  roof.expr.c2 = 1;
  roof.expr.s2 = 1.0 + std::numbers::e;
  sc.spec =
      make_flow_spec(build_renewal_model(), roof, constant_values(0.0));
  sc.sample_ts = {rat_of(0)};
  sc.checks = {
      check_s_infinity(std::nullopt,
                       "the roof grows below every power of the branch "
                       "index, so no parameter sums"),
      check_pressure_infinite(rat_of(0),
                              "the defining series diverges at every "
                              "parameter"),
      check_mme(EqExistence::None, "no finite critical parameter exists"),
      check_case(rat_of(0), "i", "infinite entropy"),
      check_entropy_floor(1000000, 5.0,
                          "direct summation of the first million roof "
                          "values"),
  };
  return sc;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"inf_entropy",    "hofbauer_transient", "hofbauer_null",
          "two_phase",      "improve_case_1",     "improve_case_2",
          "improve_case_3", "trans_null",         "mp_alpha"};
}

std::string scenario_summary(const std::string& name) {
  if (name == "inf_entropy")
    return "iterated-log roof with infinite flow entropy and no maximal "
           "measure";
  if (name == "hofbauer_transient")
    return "unnormalized slow-decay weights: critical sum below one, entropy "
           "one, no maximal measure";
  if (name == "hofbauer_null")
    return "normalized slow-decay weights: null recurrent at the critical "
           "parameter, still no maximal measure";
  if (name == "two_phase")
    return "log roof with an iterated-log potential: affine window with two "
           "transition points";
  if (name == "improve_case_1")
    return "potential proportional to a transient roof: flow transient at "
           "every parameter";
  if (name == "improve_case_2")
    return "normalized slow-decay roof: flow null recurrent at every "
           "parameter";
  if (name == "improve_case_3")
    return "normalized square-decay roof: flow positive recurrent with an "
           "infinite base projection";
  if (name == "trans_null")
    return "linear roof with a sign-flipped potential: base null recurrent "
           "while the flow is transient";
  if (name == "mp_alpha")
    return "intermittent interval map: certified entropy and abscissa "
           "brackets from the induced scheme";
  throw UnknownScenario(name);
}

Scenario build_scenario(const std::string& name) {
  if (name == "inf_entropy") return build_inf_entropy();
  if (name == "hofbauer_transient") return build_hofbauer_transient();
  if (name == "hofbauer_null") return build_hofbauer_null();
  if (name == "two_phase") return build_two_phase();
  if (name == "improve_case_1") return build_improve_case_1();
  if (name == "improve_case_2") return build_improve_case_2();
  if (name == "improve_case_3") return build_improve_case_3();
  if (name == "trans_null") return build_trans_null();
  if (name == "mp_alpha") return build_mp_scenario(1.0);
  throw UnknownScenario(name);
}

Scenario build_mp_scenario(double alpha, long branch_count) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("intermittency exponent must be positive");
  if (branch_count < 64)
    throw DomainError("need at least 64 branches for the slope windows");
  auto data =
      std::make_shared<MpBranchData>(build_branches(alpha, branch_count));
  Rational a(alpha);
  Rational lead = (a + 1) / a;
  Rational target = a / (a + 1);

  long hi = branch_count - 1;
  long lo = std::max<long>(1, hi - hi / 10);
  double acc = 0.0;
  for (long n = lo; n <= hi; ++n) {
    const MpBranch& b = data->branches[(size_t)n];
    acc += 0.5 * (b.tau_lo + b.tau_hi) - rat_d(lead) * std::log((double)n + 1.0);
  }
  BranchValues roof;
  roof.expr.c0 = acc / (double)(hi - lo + 1);
  roof.expr.c1 = lead;
  roof.expr.s1 = 1.0;
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = std::log(2.0);

  Scenario sc;
  sc.name = "mp_alpha";
  sc.summary =
      "intermittent interval map: certified entropy and abscissa brackets "
      "from the induced scheme";
  sc.spec = make_flow_spec(build_renewal_model(), roof, constant_values(0.0),
                           0.0);
  sc.params["alpha"] = a;
  sc.params["branches"] = rat_of(branch_count);
  sc.sample_ts = {rat_of(0)};
  sc.checks = {
      check_mp_entropy(data),
      check_mp_abscissa(data, target),
      check_s_infinity(target,
                       "leading coefficient of the fitted surrogate roof"),
      check_mp_mme(data),
  };
  if (alpha <= 0.8)
    sc.checks.push_back(check_mp_projection(data, "finite"));
  else if (alpha >= 1.25)
    sc.checks.push_back(check_mp_projection(data, "infinite"));
  return sc;
}

Verdict run_scenario(const Scenario& sc, const SeriesOptions& opt) {
  Verdict v;
  v.name = sc.name;
  v.pass = true;
  for (const auto& check : sc.checks) {
    Expectation e;
    try {
      e = check(sc, opt);
    } catch (const std::exception& ex) {
      e = row("check", "completed", std::string("error: ") + ex.what(), false,
              "");
    }
    v.pass = v.pass && e.pass;
    v.expectations.push_back(std::move(e));
  }
  return v;
}

namespace {

void json_escape_into(std::string& out, const std::string& s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
}

void json_field(std::string& out, const char* key, const std::string& value,
                bool last = false) {
  out += '"';
  out += key;
  out += "\": \"";
  json_escape_into(out, value);
  out += last ? "\"" : "\", ";
}

}  // namespace

std::string verdict_json(const Verdict& v) {
  std::string out = "{";
  json_field(out, "name", v.name);
  out += "\"pass\": ";
  out += v.pass ? "true" : "false";
  out += ", \"expectations\": [";
  for (size_t i = 0; i < v.expectations.size(); ++i) {
    const Expectation& e = v.expectations[i];
    if (i) out += ", ";
    out += "{";
    json_field(out, "field", e.field);
    json_field(out, "expected", e.expected);
    json_field(out, "computed", e.computed);
    out += "\"pass\": ";
    out += e.pass ? "true" : "false";
    out += ", ";
    json_field(out, "provenance", e.provenance, true);
    out += "}";
  }
  out += "]}";
  return out;
}

std::string verdict_text(const Verdict& v) {
  std::string out = v.name;
  out += v.pass ? ": pass\n" : ": FAIL\n";
  for (const Expectation& e : v.expectations) {
    out += e.pass ? "  ok    " : "  FAIL  ";
    out += e.field;
    out += " = ";
    out += e.computed;
    out += " (expected ";
    out += e.expected;
    out += ")";
    if (!e.provenance.empty()) {
      out += "  ";
      out += e.provenance;
    }
    out += "\n";
  }
  return out;
}

std::vector<MatrixCell> recurrence_matrix(const SeriesOptions& opt) {
  struct Entry {
    const char* scenario;
    long t_num;
    long t_den;
  };
  static const Entry entries[] = {
      {"improve_case_3", 1, 1},  {"improve_case_2", 1, 1},
      {"improve_case_1", 1, 1},  {"improve_case_3", -1, 1},
      {"improve_case_2", -1, 1}, {"trans_null", 1, 1},
      {"improve_case_3", -2, 1}, {"improve_case_2", -2, 1},
      {"improve_case_1", -2, 1},
  };
  SeriesOptions work = opt;
  if (work.cap == 0 || work.cap > 4000000) work.cap = 4000000;
  if (work.tol > 1e-9) work.tol = 1e-9;
  std::vector<MatrixCell> cells;
  std::map<std::string, Scenario> built;
  for (const Entry& en : entries) {
    auto it = built.find(en.scenario);
    if (it == built.end())
      it = built.emplace(en.scenario, build_scenario(en.scenario)).first;
    const Scenario& sc = it->second;
    Rational t = rat_of(en.t_num, en.t_den);
    MatrixCell cell;
    cell.scenario = en.scenario;
    cell.t = t;
    std::optional<Rational> unit;
    auto us = sc.base_unit_sums.find(t);
    if (us != sc.base_unit_sums.end()) unit = us->second;
    cell.base =
        classify_base(scale_values(t, sc.spec.potential), unit, work).cls;
    cell.flow = classify_flow(sc.spec, t, work);
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace thermo
