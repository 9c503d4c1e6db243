#include <cmath>
#include <vector>

#include "doctest.h"
#include "thermo/flow.hpp"

using namespace thermo;

namespace {

const double kLog2 = std::log(2.0);

BranchValues log_roof(double shift) {
  BranchValues v;
  v.expr.c1 = 1;
  v.expr.s1 = shift;
  return v;
}

BranchValues affine_roof(const Rational& slope, double offset) {
  BranchValues v;
  v.lin = slope;
  v.expr.c0 = offset;
  return v;
}

// log(n + shift) + 2 loglog(n + shift), the weight shape 1/(m log^2 m)
BranchValues log_square_values(double shift) {
  BranchValues v;
  v.expr.c1 = 1;
  v.expr.s1 = shift;
  v.expr.c2 = 2;
  v.expr.s2 = shift;
  return v;
}

// partial sum of m^{-s} for m >= first, plus integral tail bounds
double zeta_partial(double s, long first, long terms) {
  double acc = 0.0;
  for (long m = first; m < first + terms; ++m)
    acc += std::pow((double)m, -s);
  double a = (double)(first + terms - 1);
  return acc + std::pow(a + 0.5, 1.0 - s) / (s - 1.0);
}

}  // namespace

TEST_CASE("convergence abscissa follows the roof's leading level") {
  BranchValues two_log = log_roof(3.0);
  two_log.expr.c1 = 2;
  CHECK(*s_infinity(two_log, false) == rat_of(1, 2));
  CHECK(*s_infinity(log_roof(4.0), false) == rat_of(1));

  BranchValues slow;
  slow.expr.c2 = 1;
  slow.expr.s2 = 8.0;
  CHECK(!s_infinity(slow, false).has_value());

  CHECK(*s_infinity(constant_values(3.0), true) == rat_of(0));
  CHECK(!s_infinity(constant_values(3.0), false).has_value());
  CHECK(*s_infinity(affine_roof(rat_of(1, 3), 1.0), false) == rat_of(0));

  FlowSpec spec = make_flow_spec(build_renewal_model(), log_roof(4.0),
                                 constant_values(0.0));
  CHECK(*s_infinity(spec) == rat_of(1));
}

TEST_CASE("potential-to-roof ratios are exact at the leading level") {
  BranchValues roof = log_roof(4.0);

  BranchValues pot;
  pot.expr.c1 = rat_of(-3, 2);
  pot.expr.s1 = 4.0;
  CHECK(*alpha_limit(pot, roof) == rat_of(-3, 2));

  BranchValues deep;
  deep.expr.c2 = -1;
  deep.expr.s2 = 4.0;
  CHECK(*alpha_limit(deep, roof) == rat_of(0));

  BranchValues steep;
  steep.lin = 1;
  CHECK(!alpha_limit(steep, roof).has_value());

  CHECK(*alpha_limit(steep, affine_roof(rat_of(2), 1.0)) == rat_of(1, 2));
  CHECK(*alpha_limit(constant_values(1.0), constant_values(2.0)) ==
        Rational(0.5));
  CHECK(*alpha_limit(constant_values(0.0), roof) == rat_of(0));
}

TEST_CASE("interior root for a geometric roof") {
  FlowSpec spec = make_flow_spec(build_renewal_model(),
                                 affine_roof(rat_of(1, 2), 0.5),
                                 constant_values(0.0));
  FlowPressure fp = flow_pressure(spec, rat_of(0));
  CHECK(fp.status == FlowPressure::Finite);
  CHECK(!fp.sticks);
  CHECK(fp.has_boundary);
  CHECK(fp.boundary_side == Cmp::Above);
  CHECK(fp.err < 1e-10);
  CHECK(std::abs(fp.value + fp.err / 2 - 2.0 * kLog2) < 1e-10);

  CHECK(classify_flow(spec, rat_of(0)) == RecurrenceClass::PositiveRecurrent);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(0));
  CHECK(rep.theorem_case == "a");
  CHECK(rep.equilibrium == EqExistence::UniqueExists);
  CHECK(rep.mme == EqExistence::UniqueExists);
  CHECK(rep.stats.flow_entropy.status == ExtReal::Finite);
  CHECK(std::abs(rep.stats.flow_entropy.value - 2.0 * kLog2) <
        rep.stats.flow_entropy.err + 1e-6);
  CHECK(rep.base_class == RecurrenceClass::PositiveRecurrent);
}

TEST_CASE("pressure sticks when the boundary series stays below one") {
  BranchValues pot;
  pot.expr.c2 = -2;
  pot.expr.s2 = 4.0;
  FlowSpec spec =
      make_flow_spec(build_renewal_model(), log_roof(4.0), pot);

  FlowPressure fp = flow_pressure(spec, rat_of(1));
  CHECK(fp.status == FlowPressure::Finite);
  CHECK(fp.sticks);
  CHECK(fp.boundary_side == Cmp::Below);
  REQUIRE(fp.exact.has_value());
  CHECK(*fp.exact == rat_of(1));

  CHECK(classify_flow(spec, rat_of(1)) == RecurrenceClass::Transient);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(1));
  CHECK(rep.theorem_case == "iv");
  CHECK(rep.equilibrium == EqExistence::None);
  CHECK(*rep.s_infinity == rat_of(1));
  CHECK(*rep.alpha == rat_of(0));
  // the maximal-entropy question for the same roof has an interior root
  CHECK(rep.mme == EqExistence::UniqueExists);
}

TEST_CASE("boundary equality through a normalization hint") {
  BranchValues roof = log_square_values(5.0);
  TermFamily tail = weight_family(rat_of(-1), roof);
  tail.n_start = 1;
  // the residual weight only seeds a double-precision override; the exact
  // normalization statement travels through the hint
  SeriesValue S = sum_family(tail, SeriesOptions{1e-7, 0});
  REQUIRE(S.status == SeriesValue::Finite);
  double a0 = 1.0 - (S.value + S.err / 2);
  REQUIRE(a0 > 0.1);
  roof.expr.overrides[0] = -std::log(a0);

  FlowSpec spec = make_flow_spec(build_renewal_model(), roof,
                                 constant_values(0.0), std::nullopt,
                                 NormalizationHint{rat_of(0), rat_of(1)});

  FlowPressure fp = flow_pressure(spec, rat_of(0));
  CHECK(fp.status == FlowPressure::Finite);
  CHECK(fp.sticks);
  CHECK(fp.boundary_symbolic);
  REQUIRE(fp.exact.has_value());
  CHECK(*fp.exact == rat_of(1));

  CHECK(classify_flow(spec, rat_of(0)) == RecurrenceClass::NullRecurrent);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(0));
  CHECK(rep.theorem_case == "iii");
  CHECK(rep.equilibrium == EqExistence::None);
  CHECK(rep.mme == EqExistence::None);
  CHECK(rep.stats.entropy.status == ExtReal::PlusInfinity);
  CHECK(rep.stats.integral_tau.status == ExtReal::PlusInfinity);
  CHECK(rep.stats.base_entropy.status == ExtReal::Indeterminate);
  CHECK(!rep.stats.finite_base_measure);
}

TEST_CASE("root above a divergent boundary, null recurrent with finite roof") {
  FlowSpec spec = make_flow_spec(build_renewal_model(), log_roof(2.0),
                                 constant_values(0.0));
  SeriesOptions opt{1e-12, 0};
  FlowPressure fp = flow_pressure(spec, rat_of(0), opt, 1e-9);
  CHECK(fp.status == FlowPressure::Finite);
  CHECK(!fp.sticks);
  CHECK(fp.err < 3e-9);

  // independent residual: sum of m^{-s} over m >= 2 should be 1 at the root
  double mid = fp.value + fp.err / 2;
  double residual = std::abs(zeta_partial(mid, 2, 200000) - 1.0);
  CHECK(residual < 5e-8);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(0),
                                                  SeriesOptions{1e-5, 0});
  CHECK(rep.theorem_case == "b");
  CHECK(rep.equilibrium == EqExistence::UniqueExists);
  CHECK(rep.mme == EqExistence::UniqueExists);
  // infinite invariant base measure, yet the flow measure normalizes
  CHECK(rep.flow_class == RecurrenceClass::PositiveRecurrent);
  CHECK(rep.stats.integral_r.status == ExtReal::PlusInfinity);
  CHECK(rep.stats.integral_tau.status == ExtReal::Finite);
  CHECK(!rep.stats.finite_base_measure);
  // the base measure is infinite, so entropy per base step degenerates to 0
  CHECK(rep.stats.base_entropy.status == ExtReal::Finite);
  CHECK(rep.stats.base_entropy.value == 0.0);
  // flow entropy matches the pressure for a maximal-entropy parameter
  CHECK(rep.stats.flow_entropy.status == ExtReal::Finite);
  CHECK(std::abs(rep.stats.flow_entropy.value -
                 (rep.flow_pressure.value + rep.flow_pressure.err / 2)) <
        rep.stats.flow_entropy.err + 1e-4);
}

TEST_CASE("base classification catalog") {
  SeriesOptions opt{1e-10, 0};

  BranchValues const_log2;
  const_log2.lin = Rational(-kLog2);
  const_log2.expr.c0 = -kLog2;
  BaseClassification bc = classify_base(const_log2, std::nullopt, opt);
  CHECK(bc.cls == RecurrenceClass::PositiveRecurrent);
  CHECK(bc.equation.closed_form_root);
  CHECK(std::abs(bc.pressure.value) < 1e-15);
  CHECK(bc.mean_return.status == ExtReal::Finite);
  CHECK(std::abs(bc.mean_return.value - 2.0) < bc.mean_return.err + 1e-9);

  TermFamily slow;
  slow.n_start = 1;
  slow.expr.c1 = -1;
  slow.expr.s1 = 3.0;
  slow.expr.c2 = -2;
  slow.expr.s2 = 3.0;
  BaseClassification tr = classify_base(slow, std::nullopt, opt);
  CHECK(tr.cls == RecurrenceClass::Transient);
  CHECK(tr.at_boundary);
  CHECK(tr.pressure.value == 0.0);
  REQUIRE(tr.exact_pressure.has_value());
  CHECK(*tr.exact_pressure == rat_of(0));
  CHECK(tr.mean_return.status == ExtReal::Indeterminate);

  TermFamily balanced = slow;
  TermFamily deeper = slow;
  deeper.n_start = 2;
  SeriesValue S2 = sum_family(deeper, SeriesOptions{1e-7, 0});
  REQUIRE(S2.status == SeriesValue::Finite);
  balanced.expr.overrides[1] = std::log(1.0 - (S2.value + S2.err / 2));
  BaseClassification nr = classify_base(balanced, rat_of(0), opt);
  CHECK(nr.cls == RecurrenceClass::NullRecurrent);
  CHECK(nr.at_boundary);
  CHECK(nr.pressure.value == 0.0);
  CHECK(nr.mean_return.status == ExtReal::PlusInfinity);

  BranchValues sub;
  sub.lin = Rational(std::log(0.4));
  sub.expr.c0 = std::log(0.4);
  BaseClassification ps = classify_base(sub, std::nullopt, opt);
  CHECK(ps.cls == RecurrenceClass::PositiveRecurrent);
  CHECK(std::abs(ps.pressure.value - std::log(0.8)) < 1e-14);

  TermFamily damped = slow;
  damped.lin = Rational(std::log(0.4));
  BaseClassification td = classify_base(damped, std::nullopt, opt);
  CHECK(td.cls == RecurrenceClass::Transient);
  REQUIRE(td.exact_pressure.has_value());
  CHECK(*td.exact_pressure == Rational(std::log(0.4)));
}

TEST_CASE("exact interior root carried by a normalization hint") {
  BranchValues roof = affine_roof(rat_of(1), 1.0);
  BranchValues pot = scale_values(Rational(-kLog2), roof);
  FlowSpec spec = make_flow_spec(build_renewal_model(), roof, pot,
                                 std::nullopt,
                                 NormalizationHint{rat_of(1), rat_of(0)});

  FlowPressure fp = flow_pressure(spec, rat_of(1));
  CHECK(fp.status == FlowPressure::Finite);
  REQUIRE(fp.exact.has_value());
  CHECK(*fp.exact == rat_of(0));
  CHECK(fp.err == 0.0);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(1),
                                                  SeriesOptions{1e-10, 0});
  CHECK(rep.theorem_case == "a");
  CHECK(rep.equilibrium == EqExistence::UniqueExists);
  CHECK(rep.mme == EqExistence::UniqueExists);
  CHECK(rep.flow_class == RecurrenceClass::PositiveRecurrent);
  CHECK(rep.stats.integral_tau.status == ExtReal::Finite);
  CHECK(std::abs(rep.stats.integral_tau.value - 2.0) <
        rep.stats.integral_tau.err + 1e-8);
  CHECK(std::abs(rep.stats.flow_entropy.value - kLog2) <
        rep.stats.flow_entropy.err + 1e-8);
  CHECK(std::abs(rep.stats.base_entropy.value - kLog2) <
        rep.stats.base_entropy.err + 1e-8);
  CHECK(rep.stats.finite_base_measure);
}

TEST_CASE("cusp value competes with the series pressure") {
  BranchValues roof = affine_roof(rat_of(1), 1.0);
  BranchValues pot = scale_values(Rational(-kLog2), roof);
  NormalizationHint hint{rat_of(1), rat_of(0)};
  MarkovModel base = build_renewal_model();

  ClassificationReport low =
      equilibrium_decision(make_flow_spec(base, roof, pot, -0.5, hint),
                           rat_of(1), SeriesOptions{1e-10, 0});
  CHECK(!low.cusp_dominates);
  CHECK(low.equilibrium == EqExistence::UniqueExists);
  CHECK(low.theorem_case == "a");

  ClassificationReport high =
      equilibrium_decision(make_flow_spec(base, roof, pot, 0.25, hint),
                           rat_of(1), SeriesOptions{1e-10, 0});
  CHECK(high.cusp_dominates);
  CHECK(high.equilibrium == EqExistence::UniqueExists);
  CHECK(high.theorem_case == "i");
  CHECK(high.flow_class == RecurrenceClass::Transient);
  CHECK(high.flow_pressure.value == 0.25);
  CHECK(high.stats.entropy.status == ExtReal::Indeterminate);

  ClassificationReport tie =
      equilibrium_decision(make_flow_spec(base, roof, pot, 0.0, hint),
                           rat_of(1), SeriesOptions{1e-10, 0});
  CHECK(!tie.cusp_dominates);
  CHECK(tie.equilibrium == EqExistence::TwoExist);
}

TEST_CASE("null recurrent base potential with a transient flow potential") {
  BranchValues f = log_square_values(3.0);
  TermFamily tail = weight_family(rat_of(-1), f);
  tail.n_start = 1;
  SeriesValue S = sum_family(tail, SeriesOptions{1e-7, 0});
  REQUIRE(S.status == SeriesValue::Finite);
  double a0 = 1.0 - (S.value + S.err / 2);
  REQUIRE(a0 > 0.05);
  f.expr.overrides[0] = -std::log(a0);

  BranchValues rv = affine_roof(rat_of(1), 1.0);
  BranchValues roof = combine_values(rat_of(1), f, rat_of(1), rv);
  BranchValues pot = combine_values(rat_of(-1), f, rat_of(1), rv);
  FlowSpec spec =
      make_flow_spec(build_renewal_model(), roof, pot, std::nullopt,
                     NormalizationHint{rat_of(1, 2), rat_of(1, 2)});

  // the flow potential alone is a null recurrent base potential
  BaseClassification bc = classify_base(pot, rat_of(1), SeriesOptions{1e-9, 0});
  CHECK(bc.cls == RecurrenceClass::NullRecurrent);
  CHECK(bc.at_boundary);
  REQUIRE(bc.exact_pressure.has_value());
  CHECK(*bc.exact_pressure == rat_of(1));
  CHECK(bc.mean_return.status == ExtReal::PlusInfinity);

  // yet the flow classification at t = 1 is transient
  CHECK(*s_infinity(spec) == rat_of(0));
  CHECK(*alpha_limit(spec) == rat_of(1));
  FlowPressure fp = flow_pressure(spec, rat_of(1));
  CHECK(fp.sticks);
  REQUIRE(fp.exact.has_value());
  CHECK(*fp.exact == rat_of(1));
  CHECK(classify_flow(spec, rat_of(1)) == RecurrenceClass::Transient);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(1));
  CHECK(rep.theorem_case == "iv");
  CHECK(rep.equilibrium == EqExistence::None);

  // halving the parameter lands exactly on the normalized boundary
  FlowPressure half = flow_pressure(spec, rat_of(1, 2));
  CHECK(half.sticks);
  CHECK(half.boundary_symbolic);
  CHECK(classify_flow(spec, rat_of(1, 2)) == RecurrenceClass::NullRecurrent);
  ClassificationReport rep_half = equilibrium_decision(spec, rat_of(1, 2));
  CHECK(rep_half.theorem_case == "iii");
  CHECK(rep_half.equilibrium == EqExistence::None);
}

TEST_CASE("proportional potentials give an affine pressure line") {
  BranchValues roof = affine_roof(rat_of(1), 1.0);
  BranchValues pot = scale_values(Rational(-kLog2), roof);
  FlowSpec spec = make_flow_spec(build_renewal_model(), roof, pot);
  SeriesOptions opt{1e-12, 0};

  std::vector<double> p;
  for (long k = -2; k <= 2; ++k) {
    FlowPressure fp = flow_pressure(spec, rat_of(k), opt, 1e-11);
    REQUIRE(fp.status == FlowPressure::Finite);
    double expect = (1.0 - (double)k) * kLog2;
    CHECK(std::abs(fp.value + fp.err / 2 - expect) < fp.err + 1e-9);
    // pressure dominates the asymptotic slope line s_inf + t*alpha
    double floor_line = (double)k * rat_d(*alpha_limit(spec));
    CHECK(fp.value + fp.err >= floor_line - 1e-12);
    p.push_back(fp.value + fp.err / 2);
  }
  for (size_t i = 1; i + 1 < p.size(); ++i)
    CHECK(p[i] <= (p[i - 1] + p[i + 1]) / 2 + 1e-8);

  CHECK(classify_flow(spec, rat_of(2), SeriesOptions{1e-10, 0}) ==
        RecurrenceClass::PositiveRecurrent);
}

TEST_CASE("finite alphabets are rejected by the series route") {
  MarkovModel sft = build_finite_sft({{1, 1}, {1, 1}});
  FlowSpec spec =
      make_flow_spec(sft, constant_values(1.0), constant_values(0.0));
  CHECK(*s_infinity(spec) == rat_of(0));
  CHECK_THROWS_AS(flow_pressure(spec, rat_of(0)), DomainError);
}

TEST_CASE("no finite pressure when the roof grows too slowly") {
  BranchValues slow;
  slow.expr.c2 = 1;
  slow.expr.s2 = 1.0 + std::exp(1.0);
  FlowSpec spec =
      make_flow_spec(build_renewal_model(), slow, constant_values(0.0));

  CHECK(!s_infinity(spec).has_value());
  FlowPressure fp = flow_pressure(spec, rat_of(0));
  CHECK(fp.status == FlowPressure::NoFiniteEntropy);

  ClassificationReport rep = equilibrium_decision(spec, rat_of(0));
  CHECK(rep.theorem_case == "i");
  CHECK(rep.equilibrium == EqExistence::None);
  CHECK(rep.mme == EqExistence::None);
  CHECK(rep.flow_class == RecurrenceClass::Indeterminate);
  CHECK(!rep.note.empty());
}
