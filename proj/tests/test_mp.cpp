#include <cmath>
#include <sstream>

#include "doctest.h"
#include "thermo/mp.hpp"

using namespace thermo;

namespace {

// Return-map log-derivative at x by forward iteration, independent of the
// chain construction.
double tau_direct(double x, long steps, double alpha) {
  double acc = std::log(2.0);
  double y = 2.0 * x - 1.0;
  for (long j = 0; j < steps; ++j) {
    REQUIRE(y < 0.5);
    acc += std::log(mp_deriv(y, alpha));
    y = mp_map(y, alpha);
  }
  REQUIRE(y >= 0.5);
  return acc;
}

double mid_tau(const MpBranch& b) { return 0.5 * (b.tau_lo + b.tau_hi); }

}  // namespace

TEST_CASE("map and derivative basics") {
  CHECK(mp_map(0.0, 1.0) == 0.0);
  CHECK(mp_deriv(0.0, 1.0) == 1.0);
  CHECK(mp_map(0.75, 1.7) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mp_map(0.5, 0.3) == 0.0);
  CHECK(mp_deriv(0.5, 1.0) == 2.0);
  CHECK(mp_deriv(0.5 - 1e-12, 1.0) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(mp_deriv(0.5 - 1e-12, 2.0) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("branch construction") {
  MpBranchData d = build_branches(1.0, 2000);
  CHECK(d.branches.size() == 2000);
  CHECK(d.branches[0].tau_lo == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(d.branches[0].tau_hi == d.branches[0].tau_lo);
  CHECK(d.branches[0].left == 0.75);
  CHECK(d.branches[0].right == 1.0);
  for (size_t n = 1; n < d.branches.size(); ++n) {
    CHECK(d.branches[n].right == d.branches[n - 1].left);
    CHECK(d.branches[n].tau_lo <= d.branches[n].tau_hi);
    CHECK(d.branches[n].tau_lo > 0.0);
    CHECK(d.chain[n] < d.chain[n - 1]);
  }
  for (long k : {1L, 7L, 100L, 1024L, 1999L}) {
    double back = mp_map(d.chain[(size_t)k], 1.0);
    CHECK(std::abs(back - d.chain[(size_t)k - 1]) < 1e-13);
  }
  // z_k ~ 1/(2k) at alpha = 1
  CHECK(d.chain[1000] * 2000.0 > 0.8);
  CHECK(d.chain[1000] * 2000.0 < 1.2);
}

TEST_CASE("roof brackets are genuine") {
  double alpha = 1.0;
  MpBranchData d = build_branches(alpha, 1200);
  for (long n : {0L, 1L, 2L, 3L, 7L, 19L, 63L, 200L, 1199L}) {
    const MpBranch& b = d.branches[(size_t)n];
    for (int j = 1; j <= 100; ++j) {
      double x = b.left + b.length() * (double)j / 101.0;
      double t = tau_direct(x, n, alpha);
      CHECK(t >= b.tau_lo - 1e-9);
      CHECK(t <= b.tau_hi + 1e-9);
    }
  }
}

TEST_CASE("roof slope and cylinder decay") {
  MpBranchData d = build_branches(1.0, 4000);
  double dt = mid_tau(d.branches[3999]) - mid_tau(d.branches[100]);
  double slope = dt / (std::log(3999.0) - std::log(100.0));
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
  double dl = std::log(d.branches[1999].length()) -
              std::log(d.branches[100].length());
  double lslope = dl / (std::log(1999.0) - std::log(100.0));
  CHECK(lslope > -2.3);
  CHECK(lslope < -1.7);
}

TEST_CASE("abscissa bracket") {
  struct Case {
    double alpha;
    long n;
    double target;
  } cases[] = {{1.0, 4000, 0.5}, {0.5, 2000, 1.0 / 3.0}, {2.0, 2000, 2.0 / 3.0}};
  for (const Case& c : cases) {
    MpBranchData d = build_branches(c.alpha, c.n);
    MpBracket b = mp_s_infinity(d);
    CHECK(b.contains(c.target));
    CHECK(b.width() <= 0.1);
  }
}

TEST_CASE("entropy bracket and refinement") {
  MpBranchData d = build_branches(1.0, 2500);
  MpBracket e = mp_flow_entropy(d);
  CHECK(e.contains(1.0));
  CHECK(e.width() <= 0.1);
  CHECK(!e.note.empty());

  double w_prev = 1e300;
  for (long n : {600L, 1200L, 2500L}) {
    MpBracket en = mp_flow_entropy(build_branches(1.0, n));
    CHECK(en.contains(1.0));
    CHECK(en.width() <= w_prev + 5e-3);
    w_prev = en.width();
  }
}

TEST_CASE("entropy of a single exact branch") {
  MpBranchData deg;
  deg.alpha = 1.0;
  deg.branches.push_back({0, 0.75, 1.0, std::log(2.0), std::log(2.0)});
  MpBracket e = mp_flow_entropy(deg);
  CHECK(e.contains(0.0));
  CHECK(e.width() <= 1e-9);
}

TEST_CASE("equilibrium decision") {
  MpBranchData d = build_branches(1.0, 2000);
  AsymptoticExpr zero;

  MpEquilibriumReport mme = mp_equilibrium(d, zero, 0.0);
  CHECK(mme.side == MpSide::RenewalSide);
  CHECK(mme.verdict == EqExistence::UniqueExists);
  CHECK(mme.root.contains(1.0));
  CHECK(mme.pressure.lo == mme.root.lo);
  CHECK(mme.pressure.hi == mme.root.hi);

  MpEquilibriumReport atom = mp_equilibrium(d, zero, 5.0);
  CHECK(atom.side == MpSide::CuspSide);
  CHECK(atom.verdict == EqExistence::UniqueExists);
  CHECK(atom.pressure.lo == 5.0);
  CHECK(atom.pressure.hi == 5.0);

  double mid = 0.5 * (mme.root.lo + mme.root.hi);
  MpEquilibriumReport tie_ish = mp_equilibrium(d, zero, mid);
  CHECK(tie_ish.side == MpSide::Indeterminate);
  CHECK(tie_ish.verdict == EqExistence::Indeterminate);

  for (double cv : {-1.0, 0.97, 2.0}) {
    MpEquilibriumReport r = mp_equilibrium(d, zero, cv);
    CHECK(r.pressure.lo == std::max(r.root.lo, cv));
    CHECK(r.pressure.hi == std::max(r.root.hi, cv));
  }
}

TEST_CASE("projection notes by alpha") {
  AsymptoticExpr zero;
  MpEquilibriumReport small = mp_equilibrium(build_branches(0.5, 2000), zero, 0.0);
  CHECK(small.note.find("finite invariant measure") != std::string::npos);
  MpEquilibriumReport big = mp_equilibrium(build_branches(2.0, 2000), zero, 0.0);
  CHECK(big.note.find("infinite invariant measure") != std::string::npos);
}

TEST_CASE("two equilibria at an exact tie") {
  MpBranchData deg;
  deg.alpha = 1.0;
  deg.branches.push_back({0, 0.75, 1.0, std::log(2.0), std::log(2.0)});
  AsymptoticExpr zero;
  MpEquilibriumReport r = mp_equilibrium(deg, zero, 0.0);
  CHECK(r.side == MpSide::Tie);
  CHECK(r.verdict == EqExistence::TwoExist);
  CHECK(r.root.lo == 0.0);
  CHECK(r.root.hi == 0.0);
}

TEST_CASE("determinism and csv") {
  MpBranchData a = build_branches(1.0, 500);
  MpBranchData b = build_branches(1.0, 500);
  REQUIRE(a.chain.size() == b.chain.size());
  for (size_t k = 0; k < a.chain.size(); ++k) {
    CHECK(a.chain[k] == b.chain[k]);
    CHECK(a.branches[k].tau_lo == b.branches[k].tau_lo);
    CHECK(a.branches[k].tau_hi == b.branches[k].tau_hi);
  }
  MpBracket e1 = mp_flow_entropy(a);
  MpBracket e2 = mp_flow_entropy(b);
  CHECK(e1.lo == e2.lo);
  CHECK(e1.hi == e2.hi);

  std::ostringstream s1, s2;
  write_branch_csv(s1, a);
  write_branch_csv(s2, b);
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().substr(0, 24) == "n,tau_lo,tau_hi,cyl_len\n");
  CHECK(s1.str().find("0,0.69314718056,0.69314718056,0.25\n") !=
        std::string::npos);
}
