#include <cmath>
#include <limits>

#include "doctest.h"
#include "thermo/series.hpp"

using namespace thermo;

namespace {

// containment check with a hair of slack for the reference's own rounding
void check_contains(const SeriesValue& v, double truth) {
  REQUIRE(v.status == SeriesValue::Finite);
  double slack = 1e-13 * (1.0 + std::abs(truth));
  CHECK(v.value <= truth + slack);
  CHECK(truth <= v.value + v.err + slack);
}

TermFamily power_family(long num, long den, double shift, long n_start) {
  TermFamily f;
  f.expr.c1 = -rat_of(num, den);
  f.expr.s1 = shift;
  f.expr.n_min = n_start;
  f.n_start = n_start;
  return f;
}

}  // namespace

TEST_CASE("classification") {
  TermFamily geo;
  geo.lin = rat_of(-1);
  CHECK(classify_family(geo).kind == BertrandClass::ExpDecay);

  TermFamily grow;
  grow.lin = rat_of(1, 100);
  CHECK(classify_family(grow).kind == BertrandClass::ExpGrowth);
  CHECK(!classify_family(grow).convergent());

  TermFamily fin;
  fin.lin = rat_of(3);
  fin.n_end = 17;
  CHECK(classify_family(fin).kind == BertrandClass::FiniteSupport);
  CHECK(classify_family(fin).convergent());

  // exact cancellation between the rational and floating linear parts
  TermFamily cancel;
  cancel.lin = rat_of(-1, 2);
  cancel.lin_f = 0.5;
  cancel.expr.c1 = rat_of(-2);
  cancel.expr.s1 = 1.0;
  CHECK(classify_family(cancel).kind == BertrandClass::PowerLog);
  CHECK(classify_family(cancel).p == rat_of(2));

  TermFamily f = power_family(1, 1, 0.0, 2);
  f.expr.c2 = -rat_of(3, 2);
  f.expr.s2 = 0.0;
  BertrandClass c = classify_family(f);
  CHECK(c.kind == BertrandClass::PowerLog);
  CHECK(c.p == rat_of(1));
  CHECK(c.q == rat_of(3, 2));
  CHECK(c.convergent());

  // a log-level factor lowers the next exponent
  FactorSpec fac;
  fac.expr.c1 = rat_of(1);
  fac.expr.s1 = 0.0;
  fac.expr.n_min = 2;
  BertrandClass cf = classify_family(with_factor(f, fac));
  CHECK(cf.q == rat_of(1, 2));
  CHECK(!cf.convergent());

  FactorSpec lin_fac;
  lin_fac.mu = rat_of(1);
  BertrandClass cl = classify_family(with_factor(power_family(3, 1, 1.0, 0), lin_fac));
  CHECK(cl.p == rat_of(2));
  CHECK(cl.convergent());
}

TEST_CASE("convergence rule on exact boundaries") {
  auto cls = [](long pn, long pd, long qn, long qd, long rn, long rd) {
    BertrandClass c;
    c.kind = BertrandClass::PowerLog;
    c.p = rat_of(pn, pd);
    c.q = rat_of(qn, qd);
    c.r = rat_of(rn, rd);
    return c;
  };
  CHECK(cls(2, 1, 0, 1, 0, 1).convergent());
  CHECK(!cls(1, 1, 1, 1, 1, 1).convergent());
  CHECK(cls(1, 1, 1, 1, 10001, 10000).convergent());
  CHECK(!cls(1, 1, 9999, 10000, 5, 1).convergent());
  CHECK(cls(10001, 10000, -3, 1, 0, 1).convergent());
  BertrandClass w = cls(1, 1, 1, 1, 1, 1);
  w.w = rat_of(-1);
  CHECK(!w.convergent());
  w.w = rat_of(2);
  CHECK(w.convergent());
}

TEST_CASE("geometric series") {
  TermFamily f;
  f.lin = rat_of(-1);
  SeriesValue v = sum_family(f);
  check_contains(v, 1.0 / (1.0 - std::exp(-1.0)));
  CHECK(v.err < 1e-10);

  // slow decay through the floating part of the linear coefficient
  TermFamily slow;
  slow.lin_f = -1e-3;
  SeriesValue vs = sum_family(slow);
  check_contains(vs, 1.0 / (1.0 - std::exp(-1e-3)));
  CHECK(vs.err < 1e-6 * vs.value);
}

TEST_CASE("factored geometric series") {
  // sum of n*x^n = x/(1-x)^2 at x = exp(-1/2)
  TermFamily f;
  f.lin = rat_of(-1, 2);
  FactorSpec fac;
  fac.mu = rat_of(1);
  f.factor = fac;
  double x = std::exp(-0.5);
  check_contains(sum_family(f), x / ((1.0 - x) * (1.0 - x)));
}

TEST_CASE("zeta-type series hits the closed-form sandwich") {
  // branch 0 has log argument exactly 1, so it must come as an override
  TermFamily f = power_family(2, 1, 1.0, 0);
  f.expr.n_min = 1;
  f.expr.overrides[0] = 0.0;
  SeriesValue v = sum_family(f);
  check_contains(v, M_PI * M_PI / 6.0);
  CHECK(v.err < 1e-9);
}

TEST_CASE("critical-line series with pure closed-form tail") {
  // terms 1/(n (log n)^(3/2)) from n = 3
  TermFamily f = power_family(1, 1, 0.0, 3);
  f.expr.c2 = -rat_of(3, 2);
  f.expr.s2 = 0.0;

  long n_ref = 400000;
  long double part = 0.0L;
  for (long n = f.n_start; n <= n_ref; ++n)
    part += 1.0L / ((long double)n * std::pow(std::log((long double)n), 1.5L));
  auto tail_at = [](double a) { return 2.0 / std::sqrt(std::log(a)); };
  double ref_lo = (double)part + tail_at((double)n_ref + 1.0);
  double ref_hi = (double)part + tail_at((double)n_ref);

  SeriesOptions opt;
  opt.tol = 1e-7;
  SeriesValue v = sum_family(f, opt);
  REQUIRE(v.status == SeriesValue::Finite);
  CHECK(v.value <= ref_hi + 1e-9);
  CHECK(v.value + v.err >= ref_lo - 1e-9);
  CHECK(v.err < 1e-6);
}

TEST_CASE("quadrature tail with a growing log factor in the exponent") {
  // terms log(n)/n^2 from n = 3: not a pure pattern, so the engine must
  // integrate; reference bracket from the exact antiderivative (log x + 1)/x
  TermFamily f = power_family(2, 1, 0.0, 3);
  f.expr.c2 = rat_of(1);
  f.expr.s2 = 0.0;

  long n_ref = 300000;
  long double part = 0.0L;
  for (long n = 3; n <= n_ref; ++n) {
    long double x = (long double)n;
    part += std::log(x) / (x * x);
  }
  auto tail_at = [](double a) { return (std::log(a) + 1.0) / a; };
  double ref_lo = (double)part + tail_at((double)n_ref + 1.0);
  double ref_hi = (double)part + tail_at((double)n_ref);

  SeriesOptions opt;
  opt.tol = 1e-8;
  SeriesValue v = sum_family(f, opt);
  REQUIRE(v.status == SeriesValue::Finite);
  CHECK(v.value <= ref_hi + 1e-8);
  CHECK(v.value + v.err >= ref_lo - 1e-8);
}

TEST_CASE("quadrature tail with a multiplicative log factor") {
  // terms log(n)/n^3 from n = 1 via an override at the log(1) = 0 branch;
  // reference bracket from the antiderivative (2 log x + 1)/(4 x^2)
  TermFamily f = power_family(3, 1, 0.0, 1);
  f.expr.n_min = 2;
  f.expr.overrides[1] = 0.0;
  FactorSpec fac;
  fac.expr.c1 = rat_of(1);
  fac.expr.s1 = 0.0;
  fac.expr.n_min = 2;
  fac.expr.overrides[1] = 0.0;
  f.factor = fac;

  long n_ref = 200000;
  long double part = 0.0L;
  for (long n = 2; n <= n_ref; ++n) {
    long double x = (long double)n;
    part += std::log(x) / (x * x * x);
  }
  auto tail_at = [](double a) { return (2.0 * std::log(a) + 1.0) / (4.0 * a * a); };
  double ref_lo = (double)part + tail_at((double)n_ref + 1.0);
  double ref_hi = (double)part + tail_at((double)n_ref);

  SeriesOptions opt;
  opt.tol = 1e-9;
  SeriesValue v = sum_family(f, opt);
  REQUIRE(v.status == SeriesValue::Finite);
  CHECK(v.value <= ref_hi + 1e-9);
  CHECK(v.value + v.err >= ref_lo - 1e-9);
}

TEST_CASE("near-critical exponent stays certified") {
  TermFamily f = power_family(1, 1, 0.0, 3);
  f.expr.c2 = -rat_of(10001, 10000);
  f.expr.s2 = 0.0;
  CHECK(classify_family(f).convergent());
  SeriesOptions opt;
  opt.tol = 1.0;
  opt.cap = 3000000;
  SeriesValue v = sum_family(f, opt);
  REQUIRE(v.status == SeriesValue::Finite);
  CHECK(v.value > 1000.0);
  CHECK(v.err < 1.0);
}

TEST_CASE("divergence by class") {
  TermFamily f = power_family(1, 1, 0.0, 3);
  f.expr.c2 = -rat_of(1);
  f.expr.s2 = 0.0;
  SeriesValue v = sum_family(f);
  CHECK(v.status == SeriesValue::Divergent);
  CHECK(compare_family(f, 1e9) == Cmp::Above);

  TermFamily g;
  g.lin = rat_of(1, 1000);
  CHECK(sum_family(g).status == SeriesValue::Divergent);
}

TEST_CASE("finite support") {
  TermFamily f;
  f.lin = rat_of(-1);
  f.n_end = 10;
  double ref = (1.0 - std::exp(-11.0)) / (1.0 - std::exp(-1.0));
  check_contains(sum_family(f), ref);
  CHECK(compare_family(f, ref + 0.1) == Cmp::Below);
  CHECK(compare_family(f, ref - 0.1) == Cmp::Above);
}

TEST_CASE("symbolic normalization") {
  TermFamily f;
  f.lin = rat_of(-1);
  f.sum_is_one = true;  // by fiat for the test
  SeriesValue v = sum_family(f);
  CHECK(v.value == 1.0);
  CHECK(v.err == 0.0);
  CHECK(compare_family(f, 1.0) == Cmp::Straddles);
  CHECK(compare_family(f, 0.999999999) == Cmp::Above);
  CHECK(compare_family(f, 1.000000001) == Cmp::Below);
}

TEST_CASE("threshold comparisons") {
  TermFamily f;
  f.lin = rat_of(-1);
  double ref = 1.0 / (1.0 - std::exp(-1.0));
  CHECK(compare_family(f, ref - 1e-6) == Cmp::Above);
  CHECK(compare_family(f, ref + 1e-6) == Cmp::Below);
  CHECK(compare_family(f, ref) == Cmp::Straddles);
}

TEST_CASE("index shift preserves the sum") {
  TermFamily f = power_family(2, 1, 2.0, 0);
  f.sum_is_one = true;
  TermFamily g = shift_index(f, 3);
  CHECK(g.n_start == 3);
  CHECK(g.sum_is_one);
  CHECK(g.expr.s1 == -1.0);
  g.sum_is_one = false;
  TermFamily f0 = f;
  f0.sum_is_one = false;
  SeriesValue a = sum_family(f0);
  SeriesValue b = sum_family(g);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));

  // shifting moves override keys and rebates the linear part into c0
  TermFamily h;
  h.lin = rat_of(-1);
  h.expr.overrides[0] = 0.5;
  h.expr.n_min = 0;
  TermFamily hs = shift_index(h, 2);
  CHECK(hs.expr.has_override(2));
  CHECK(hs.term(2) == doctest::Approx(h.term(0)));
  CHECK(hs.term(7) == doctest::Approx(h.term(5)));
}

TEST_CASE("tilting") {
  TermFamily f = power_family(2, 1, 2.0, 0);
  TermFamily t = tilt_family(f, rat_of(-1), 0.25);
  CHECK(classify_family(t).kind == BertrandClass::ExpDecay);
  long double ref = 0.0L;
  for (long n = 0; n < 300; ++n)
    ref += std::exp(0.25L - (long double)n) / ((2.0L + n) * (2.0L + n));
  check_contains(sum_family(t), (double)ref);
}

TEST_CASE("combining families") {
  TermFamily a = power_family(1, 1, 2.0, 0);
  TermFamily b = power_family(3, 2, 2.0, 0);
  TermFamily c = combine_families(rat_of(2), a, rat_of(-1), b);
  CHECK(classify_family(c).p == rat_of(1, 2));
  CHECK(!c.sum_is_one);

  TermFamily d = power_family(1, 1, 5.0, 0);
  CHECK_THROWS_AS(combine_families(rat_of(1), a, rat_of(1), d), ShiftMismatch);
  // but a dead side cannot conflict
  CHECK_NOTHROW(combine_families(rat_of(1), a, rat_of(0), d));

  FactorSpec fac;
  fac.mu = rat_of(1);
  CHECK_THROWS_AS(combine_families(rat_of(1), with_factor(a, fac), rat_of(1), b),
                  DomainError);
}

TEST_CASE("wrapper entry points") {
  AsymptoticExpr e;
  e.c1 = rat_of(2);
  e.s1 = 1.0;
  e.n_min = 1;
  e.overrides[0] = 0.0;
  CHECK(classify_terms(rat_of(-1), e).p == rat_of(2));
  // the sum starts at branch 0 because the override chain reaches it
  SeriesValue v = sum_series(rat_of(-1), e);
  check_contains(v, M_PI * M_PI / 6.0);
}
