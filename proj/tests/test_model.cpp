#include "doctest.h"

#include "thermo/model.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace thermo;

TEST_CASE("renewal model return times") {
  MarkovModel m = build_renewal_model();
  CHECK(m.kind == ModelKind::Renewal);
  CHECK(m.return_time(0) == 1);
  CHECK(m.return_time(3) == 4);
  for (long n = 1; n <= 100; ++n) CHECK(m.return_time(n) == n + 1);
  CHECK_THROWS_AS(m.return_time(-1), DomainError);
}

// The renewal graph has edges 0->0, 0->n, n->n-1. Enumerating first-return
// words at state 0 must find exactly one word per length, matching the
// model's return-time table branch for branch.
TEST_CASE("renewal first-return words by direct enumeration") {
  const long max_len = 13;
  std::vector<long> count(max_len + 1, 0);
  std::function<void(long, long)> walk = [&](long state, long steps) {
    if (steps > max_len) return;
    if (state == 0 && steps > 0) {
      count[steps] += 1;
      return;
    }
    if (state == 0) {
      walk(0, 1);
      for (long n = 1; n <= max_len; ++n) walk(n, 1);
    } else {
      walk(state - 1, steps + 1);
    }
  };
  walk(0, 0);
  MarkovModel m = build_renewal_model();
  std::vector<long> expected(max_len + 1, 0);
  for (long n = 0; n + 1 <= max_len; ++n) {
    long r = m.return_time(n);
    if (r <= max_len) expected[r] += 1;
  }
  for (long len = 1; len <= max_len; ++len) {
    CHECK(count[len] == 1);
    CHECK(count[len] == expected[len]);
  }
}

TEST_CASE("finite shift construction and mixing") {
  MarkovModel full2 = build_finite_sft({{1, 1}, {1, 1}});
  CHECK(full2.kind == ModelKind::FiniteSFT);
  CHECK(full2.alphabet_size() == 2);
  CHECK(full2.mixing);

  // a pure 2-cycle is irreducible but never strictly positive
  MarkovModel swap = build_finite_sft({{0, 1}, {1, 0}});
  CHECK_FALSE(swap.mixing);

  // golden-mean shift mixes
  MarkovModel golden = build_finite_sft({{1, 1}, {1, 0}});
  CHECK(golden.mixing);

  CHECK_THROWS_AS(build_finite_sft({{1, 0}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(build_finite_sft({{0, 0}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(build_finite_sft({{1, 1}}), DomainError);
  CHECK_THROWS_AS(build_finite_sft({{1, 2}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(build_finite_sft({}), DomainError);
}

TEST_CASE("full shift model has unit return times") {
  MarkovModel m = build_full_shift_model();
  CHECK(m.kind == ModelKind::CountableFull);
  for (long n = 0; n <= 50; ++n) CHECK(m.return_time(n) == 1);
}

TEST_CASE("zero expression evaluates to zero everywhere") {
  BranchValues v;
  for (long n = 0; n <= 40; ++n) CHECK(v.value(n) == 0.0);
}

TEST_CASE("combining branch values") {
  // two-level pair in the style of the two-phase construction, K = 100:
  // potential's closed form is -loglog(K+n-1), roof's is log(K+n-1)
  BranchValues pot;
  pot.expr.c2 = Rational(-1);
  pot.expr.s2 = 99.0;
  pot.expr.n_min = 1;
  pot.expr.overrides[0] = std::log(4.0 / 3.0);

  BranchValues roof;
  roof.expr.c1 = Rational(1);
  roof.expr.s1 = 99.0;
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = std::log(2.0);

  BranchValues c = combine_values(Rational(2), pot, Rational(-1), roof);
  for (long n = 1; n <= 30; ++n) {
    double want = -std::log(99.0 + n) - 2.0 * std::log(std::log(99.0 + n));
    CHECK(c.value(n) == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK(c.value(0) ==
        doctest::Approx(2.0 * std::log(4.0 / 3.0) - std::log(2.0)));

  BranchValues s = scale_values(rat_of(-1, 2), roof);
  CHECK(s.value(5) == doctest::Approx(-0.5 * std::log(104.0)));
}

TEST_CASE("weight family from branch values") {
  BranchValues v;
  v.lin = rat_of(1, 2);
  v.expr.c1 = Rational(3);
  v.expr.s1 = 2.0;
  TermFamily f = weight_family(Rational(-1), v);
  CHECK(f.lin == rat_of(-1, 2));
  CHECK(f.expr.c1 == Rational(-3));
  for (long n = 0; n <= 10; ++n)
    CHECK(f.term(n) == doctest::Approx(std::exp(-v.value(n))));
}

TEST_CASE("linear combination is bilinear on random rational draws") {
  std::mt19937 rng(20240811u);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  std::uniform_int_distribution<long> pick_n(0, 60);
  auto rnd_rat = [&]() { return rat_of(num(rng), den(rng)); };
  for (int trial = 0; trial < 1000; ++trial) {
    AsymptoticExpr e1, e2;
    e1.c0 = (double)num(rng) / 4.0;
    e2.c0 = (double)num(rng) / 4.0;
    e1.c1 = rnd_rat();
    e2.c1 = rnd_rat();
    e1.c2 = rnd_rat();
    e2.c2 = rnd_rat();
    e1.s1 = e2.s1 = 2.0;
    e1.s2 = e2.s2 = 3.0;
    Rational a = rnd_rat(), b = rnd_rat();
    AsymptoticExpr c = linear_combine(a, e1, b, e2);
    for (int k = 0; k < 3; ++k) {
      long n = pick_n(rng);
      double direct = rat_d(a) * e1.evaluate(n) + rat_d(b) * e2.evaluate(n);
      CHECK(c.evaluate(n) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("roof validation") {
  BranchValues log_roof;
  log_roof.expr.c1 = Rational(1);
  log_roof.expr.s1 = 2.0;
  CHECK_NOTHROW(validate_roof(log_roof));

  // mixed signs at different log depths, still eventually increasing
  BranchValues mixed;
  mixed.expr.c0 = 5.0;
  mixed.expr.c1 = Rational(1);
  mixed.expr.c2 = Rational(-3);
  mixed.expr.s1 = 3.0;
  mixed.expr.s2 = 3.0;
  CHECK_NOTHROW(validate_roof(mixed));

  // linear growth dominating a negative log term
  BranchValues lin_roof;
  lin_roof.lin = Rational(1);
  lin_roof.expr.c0 = 1.0;
  lin_roof.expr.c1 = Rational(-1);
  lin_roof.expr.s1 = 2.0;
  CHECK_NOTHROW(validate_roof(lin_roof));

  BranchValues neg_const = constant_values(-1.0);
  CHECK_THROWS_AS(validate_roof(neg_const), DomainError);
  CHECK_THROWS_AS(validate_roof(constant_values(0.0)), DomainError);

  BranchValues falling;
  falling.expr.c1 = Rational(-1);
  falling.expr.s1 = 2.0;
  CHECK_THROWS_AS(validate_roof(falling), DomainError);

  BranchValues bad_override = log_roof;
  bad_override.expr.overrides[4] = -0.25;
  CHECK_THROWS_AS(validate_roof(bad_override), DomainError);

  // slow linear growth against a large negative log coefficient dips below
  // zero in the middle range, so it must be rejected
  BranchValues dipping;
  dipping.lin = rat_of(1, 100);
  dipping.expr.c1 = Rational(-5);
  dipping.expr.s1 = 2.0;
  CHECK_THROWS_AS(validate_roof(dipping), DomainError);

  BranchValues neg_lin;
  neg_lin.lin = Rational(-1);
  neg_lin.expr.c0 = 100.0;
  CHECK_THROWS_AS(validate_roof(neg_lin), DomainError);
}

TEST_CASE("flow spec assembly") {
  MarkovModel base = build_renewal_model();
  BranchValues roof;
  roof.expr.c1 = Rational(1);
  roof.expr.s1 = 1.0;
  roof.expr.n_min = 1;
  roof.expr.overrides[0] = std::log(2.0);
  BranchValues pot = constant_values(0.0);

  FlowSpec spec = make_flow_spec(base, roof, pot);
  CHECK(spec.hopf_ok);
  CHECK_FALSE(spec.cusp_value.has_value());
  CHECK_FALSE(spec.hint.has_value());

  NormalizationHint hint;
  hint.t0 = Rational(1);
  hint.s0 = Rational(0);
  FlowSpec with_hint = make_flow_spec(base, roof, pot, 0.75, hint);
  CHECK(with_hint.cusp_value.has_value());
  CHECK(with_hint.hint.has_value());
  CHECK(with_hint.hint->t0 == Rational(1));

  MarkovModel non_mixing = build_finite_sft({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(make_flow_spec(non_mixing, roof, pot), DomainError);
}
