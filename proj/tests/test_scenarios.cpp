#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "thermo/scenarios.hpp"

using namespace thermo;

namespace {

const Expectation& find_row(const Verdict& v, const std::string& field) {
  for (const auto& e : v.expectations)
    if (e.field == field) return e;
  static Expectation missing;
  FAIL("missing row ", field, " in ", v.name);
  return missing;
}

void require_all_pass(const Verdict& v) {
  for (const auto& e : v.expectations) {
    INFO(v.name, " row ", e.field, ": computed ", e.computed, ", expected ",
         e.expected);
    CHECK(e.pass);
  }
  CHECK(v.pass);
}

}  // namespace

TEST_CASE("catalog lists nine names and rejects unknown ones") {
  auto names = scenario_names();
  CHECK(names.size() == 9);
  std::set<std::string> uniq(names.begin(), names.end());
  CHECK(uniq.size() == 9);
  CHECK(uniq.count("two_phase") == 1);
  CHECK(uniq.count("mp_alpha") == 1);
  CHECK_THROWS_AS(build_scenario("renewal"), UnknownScenario);
  CHECK_THROWS_AS(build_scenario(""), UnknownScenario);
}

TEST_CASE("every catalog entry builds with a usable spec") {
  for (const auto& name : scenario_names()) {
    Scenario sc = build_scenario(name);
    CHECK(sc.name == name);
    CHECK(!sc.summary.empty());
    CHECK(!sc.checks.empty());
    CHECK(!sc.sample_ts.empty());
    CHECK(sc.spec.hopf_ok);
  }
}

TEST_CASE("shift searches are deterministic and minimal") {
  Scenario a = build_scenario("two_phase");
  Scenario b = build_scenario("two_phase");
  CHECK(a.params.at("K") == b.params.at("K"));
  CHECK(a.params.at("K") == rat_of(8104));

  Scenario h = build_scenario("hofbauer_transient");
  CHECK(h.params.at("k") == rat_of(4));

  auto shifted = [](long shift) {
    TermFamily f;
    f.expr.c1 = -1;
    f.expr.c2 = -2;
    f.expr.s1 = (double)shift;
    f.expr.s2 = (double)shift;
    return f;
  };
  SeriesOptions opt;
  opt.tol = 1e-8;
  opt.cap = 20000000;
  CHECK(compare_family(shifted(8104), 1.0 / 9.0, opt) == Cmp::Below);
  CHECK(compare_family(shifted(8103), 1.0 / 9.0, opt) == Cmp::Above);
  CHECK(compare_family(shifted(4), 1.0, opt) == Cmp::Below);
  CHECK(compare_family(shifted(3), 1.0, opt) == Cmp::Above);
}

TEST_CASE("hofbauer pair verdicts pass") {
  Verdict vt = run_scenario(build_scenario("hofbauer_transient"));
  require_all_pass(vt);
  CHECK(find_row(vt, "base_class(weights)").computed == "transient");
  CHECK(find_row(vt, "mme").computed == "none");

  Verdict vn = run_scenario(build_scenario("hofbauer_null"));
  require_all_pass(vn);
  CHECK(find_row(vn, "base_class(weights)").computed == "null recurrent");
  CHECK(find_row(vn, "induced_entropy").computed == "+infinity");
}

TEST_CASE("two_phase verdict passes with both transition points located") {
  Verdict v = run_scenario(build_scenario("two_phase"));
  require_all_pass(v);
  const Expectation& w = find_row(v, "window");
  CHECK(w.computed.find("bounded") == 0);
}

TEST_CASE("improvement ladder verdicts pass") {
  require_all_pass(run_scenario(build_scenario("improve_case_1")));
  require_all_pass(run_scenario(build_scenario("improve_case_2")));
  Verdict v3 = run_scenario(build_scenario("improve_case_3"));
  require_all_pass(v3);
  CHECK(find_row(v3, "mean_return(t=0)").computed == "diverges");
}

TEST_CASE("trans_null verdict passes including the exact ray endpoint") {
  Verdict v = run_scenario(build_scenario("trans_null"));
  require_all_pass(v);
  CHECK(find_row(v, "window").computed == "ray above from 1/2 (closed)");
  CHECK(find_row(v, "base_class(t=1)").computed == "null recurrent");
  CHECK(find_row(v, "flow_class(t=1)").computed == "transient");
}

TEST_CASE("inf_entropy verdict passes") {
  Verdict v = run_scenario(build_scenario("inf_entropy"));
  require_all_pass(v);
  double bound = std::stod(find_row(v, "entropy_floor(N=1000000)").computed);
  CHECK(bound > 5.0);
  CHECK(bound < 7.0);
}

TEST_CASE("affine pressure across the sample grids") {
  for (const char* name :
       {"improve_case_1", "improve_case_2", "improve_case_3"}) {
    Scenario sc = build_scenario(name);
    Rational line_base = *s_infinity(sc.spec);
    Rational slope = *alpha_limit(sc.spec);
    for (const Rational& t : sc.sample_ts) {
      SeriesOptions opt;
      opt.tol = 1e-9;
      opt.cap = 2000000;
      FlowPressure fp = flow_pressure(sc.spec, t, opt);
      REQUIRE(fp.status == FlowPressure::Finite);
      REQUIRE(fp.exact.has_value());
      Rational want = rat_of(1) + t;
      CHECK(*fp.exact == want);
      CHECK(*fp.exact >= line_base + t * slope);
    }
  }
}

TEST_CASE("recurrence matrix covers all nine class pairs") {
  auto cells = recurrence_matrix();
  CHECK(cells.size() == 9);
  std::set<std::pair<int, int>> seen;
  for (const auto& c : cells) {
    CHECK(c.base != RecurrenceClass::Indeterminate);
    CHECK(c.flow != RecurrenceClass::Indeterminate);
    seen.insert({(int)c.base, (int)c.flow});
  }
  CHECK(seen.size() == 9);
  for (RecurrenceClass b :
       {RecurrenceClass::PositiveRecurrent, RecurrenceClass::NullRecurrent,
        RecurrenceClass::Transient})
    for (RecurrenceClass f :
         {RecurrenceClass::PositiveRecurrent, RecurrenceClass::NullRecurrent,
          RecurrenceClass::Transient})
      CHECK(seen.count({(int)b, (int)f}) == 1);
}

TEST_CASE("intermittent-map scenarios pass at reduced branch counts") {
  Verdict fine = run_scenario(build_mp_scenario(0.5, 1200));
  require_all_pass(fine);
  CHECK(find_row(fine, "projection").expected.find("finite") == 0);

  Verdict coarse = run_scenario(build_mp_scenario(2.0, 2500));
  require_all_pass(coarse);
  CHECK(find_row(coarse, "projection").expected.find("infinite") == 0);

  CHECK_THROWS_AS(build_mp_scenario(-1.0, 1200), DomainError);
  CHECK_THROWS_AS(build_mp_scenario(1.0, 8), DomainError);
}

TEST_CASE("verdict serialization is deterministic with fixed key order") {
  Scenario sc = build_scenario("hofbauer_transient");
  Verdict v1 = run_scenario(sc);
  Verdict v2 = run_scenario(sc);
  std::string j1 = verdict_json(v1);
  std::string j2 = verdict_json(v2);
  CHECK(j1 == j2);
  CHECK(j1.find("{\"name\": \"hofbauer_transient\"") == 0);
  size_t pf = j1.find("\"field\"");
  size_t pe = j1.find("\"expected\"");
  size_t pc = j1.find("\"computed\"");
  size_t pp = j1.find("\"pass\"", pf);
  size_t pv = j1.find("\"provenance\"");
  REQUIRE(pf != std::string::npos);
  CHECK(pf < pe);
  CHECK(pe < pc);
  CHECK(pc < pp);
  CHECK(pp < pv);

  std::string text = verdict_text(v1);
  CHECK(text.find("hofbauer_transient: pass") == 0);
  CHECK(text.find("  ok    ") != std::string::npos);
}
