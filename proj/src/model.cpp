#include "thermo/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thermo {

long ReturnTimes::value(long n) const {
  if (n < 0) throw DomainError("branch index must be nonnegative");
  auto it = special.find(n);
  long r = (it != special.end()) ? it->second : slope * n + offset;
  if (r < 1)
    throw DomainError("return time must be a positive integer at branch " +
                      std::to_string(n));
  return r;
}

long MarkovModel::alphabet_size() const {
  if (kind != ModelKind::FiniteSFT)
    throw DomainError("alphabet_size only applies to finite models");
  return (long)matrix.size();
}

long MarkovModel::return_time(long n) const {
  if (kind == ModelKind::FiniteSFT)
    throw DomainError("return times belong to induced countable models");
  return returns.value(n);
}

MarkovModel build_renewal_model() {
  MarkovModel m;
  m.kind = ModelKind::Renewal;
  m.returns.slope = 1;
  m.returns.offset = 1;
  m.returns.special[0] = 1;
  return m;
}

namespace {

bool has_positive_power(const std::vector<std::vector<int>>& a) {
  size_t m = a.size();
  // Wielandt: a primitive 0/1 matrix reaches a strictly positive power by
  // exponent (m-1)^2 + 1; anything slower is not primitive.
  size_t cap = (m - 1) * (m - 1) + 1;
  std::vector<std::vector<int>> b = a;
  for (size_t step = 0; step < cap; ++step) {
    bool all = true;
    for (size_t i = 0; i < m && all; ++i)
      for (size_t j = 0; j < m; ++j)
        if (b[i][j] == 0) {
          all = false;
          break;
        }
    if (all) return true;
    std::vector<std::vector<int>> c(m, std::vector<int>(m, 0));
    for (size_t i = 0; i < m; ++i)
      for (size_t k = 0; k < m; ++k) {
        if (b[i][k] == 0) continue;
        for (size_t j = 0; j < m; ++j)
          if (a[k][j] != 0) c[i][j] = 1;
      }
    b = std::move(c);
  }
  return false;
}

}  // namespace

MarkovModel build_finite_sft(const std::vector<std::vector<int>>& matrix) {
  size_t m = matrix.size();
  if (m == 0) throw DomainError("transition matrix must be nonempty");
  for (const auto& row : matrix) {
    if (row.size() != m) throw DomainError("transition matrix must be square");
    for (int v : row)
      if (v != 0 && v != 1)
        throw DomainError("transition matrix entries must be 0 or 1");
  }
  for (size_t i = 0; i < m; ++i) {
    bool row_live = false, col_live = false;
    for (size_t j = 0; j < m; ++j) {
      row_live = row_live || matrix[i][j] != 0;
      col_live = col_live || matrix[j][i] != 0;
    }
    if (!row_live)
      throw DomainError("transition matrix row " + std::to_string(i) +
                        " is all zero");
    if (!col_live)
      throw DomainError("transition matrix column " + std::to_string(i) +
                        " is all zero");
  }
  MarkovModel out;
  out.kind = ModelKind::FiniteSFT;
  out.matrix = matrix;
  out.mixing = has_positive_power(matrix);
  return out;
}

MarkovModel build_full_shift_model() {
  MarkovModel m;
  m.kind = ModelKind::CountableFull;
  m.returns.slope = 0;
  m.returns.offset = 1;
  return m;
}

double BranchValues::value(long n) const {
  return rat_d(lin) * (double)n + expr.evaluate(n);
}

BranchValues combine_values(const Rational& a, const BranchValues& v1,
                            const Rational& b, const BranchValues& v2) {
  BranchValues out;
  out.lin = a * v1.lin + b * v2.lin;
  out.expr = linear_combine(a, v1.expr, b, v2.expr);
  return out;
}

BranchValues scale_values(const Rational& a, const BranchValues& v) {
  BranchValues out;
  out.lin = a * v.lin;
  out.expr = scale_expr(a, v.expr);
  return out;
}

BranchValues constant_values(double c) {
  BranchValues out;
  out.expr = constant_expr(c);
  return out;
}

bool values_are_zero(const BranchValues& v) {
  if (!rat_zero(v.lin) || !v.expr.all_log_coeffs_zero()) return false;
  if (v.expr.c0 != 0.0) return false;
  for (const auto& kv : v.expr.overrides)
    if (kv.second != 0.0) return false;
  return true;
}

TermFamily weight_family(const Rational& u, const BranchValues& v) {
  TermFamily f;
  f.lin = u * v.lin;
  f.expr = scale_expr(u, v.expr);
  f.n_start = 0;
  return f;
}

namespace {

// Certifies that lin*x + expr(x) is nondecreasing for x >= n0 by bounding the
// derivative of each iterated-log term. Returns false when the bound at n0 is
// not strong enough (the caller retries with a larger n0).
bool nondecreasing_from(const Rational& lin, const AsymptoticExpr& e,
                        double n0) {
  double a1 = rat_d(e.c1), a2 = rat_d(e.c2), a3 = rat_d(e.c3);
  double l = rat_d(lin);
  if (l > 0.0) {
    // |d/dx ci-term| <= |ci| / (x+si) on the validated domain
    double need = 0.0;
    if (a1 != 0.0) need += std::fabs(a1) / (n0 + e.s1);
    if (a2 != 0.0) need += std::fabs(a2) / (n0 + e.s2);
    if (a3 != 0.0) need += std::fabs(a3) / (n0 + e.s3);
    return l >= need;
  }
  if (l < 0.0) return false;
  // Pure iterated-log expression: compare the leading term's derivative with
  // the deeper ones via ratio bounds frozen at n0. Each ratio of shifted
  // arguments (x+s)/(x+s') is monotone toward 1, so its value at n0 caps it.
  auto arg_ratio = [&](double s_hi, double s_lo) {
    return 1.0 + std::max(0.0, s_hi - s_lo) / (n0 + s_lo);
  };
  if (a1 != 0.0) {
    if (a1 < 0.0) return false;
    double need = 0.0;
    if (a2 != 0.0)
      need += std::fabs(a2) * arg_ratio(e.s1, e.s2) / std::log(n0 + e.s2);
    if (a3 != 0.0)
      need += std::fabs(a3) * arg_ratio(e.s1, e.s3) /
              (std::log(n0 + e.s3) * std::log(std::log(n0 + e.s3)));
    return a1 >= need;
  }
  if (a2 != 0.0) {
    if (a2 < 0.0) return false;
    if (a3 == 0.0) return true;
    double r = arg_ratio(e.s2, e.s3);
    double log_lo = std::log(n0 + e.s3);
    double log_ratio = 1.0 + std::max(0.0, std::log(r)) / log_lo;
    double need = std::fabs(a3) * r * log_ratio / std::log(log_lo);
    return a2 >= need;
  }
  if (a3 != 0.0) return a3 > 0.0;
  return true;  // constant
}

}  // namespace

std::optional<long> certified_nondecreasing_from(const BranchValues& v,
                                                 long lo) {
  const AsymptoticExpr& e = v.expr;
  long n0 = std::max({lo, (long)16, e.n_min});
  if (!e.overrides.empty())
    n0 = std::max(n0, e.overrides.rbegin()->first + 1);
  const long cap = 1L << 22;
  while (n0 <= cap) {
    if (nondecreasing_from(v.lin, e, (double)n0)) return n0;
    n0 *= 4;
  }
  return std::nullopt;
}

void validate_roof(const BranchValues& roof) {
  roof.expr.validate();
  const AsymptoticExpr& e = roof.expr;
  for (const auto& [n, v] : e.overrides)
    if (!(v > 0.0))
      throw DomainError("roof value not positive at branch " +
                        std::to_string(n));
  if (sgn(roof.lin) < 0)
    throw DomainError("roof decreases linearly, eventually nonpositive");
  if (rat_zero(roof.lin) && e.all_log_coeffs_zero()) {
    if (!(e.c0 > 0.0)) throw DomainError("constant roof must be positive");
    return;
  }
  std::optional<long> certified = certified_nondecreasing_from(roof);
  if (!certified)
    throw DomainError("could not certify roof positivity for large branches");
  for (long n = 0; n <= *certified; ++n)
    if (!(roof.value(n) > 0.0))
      throw DomainError("roof value not positive at branch " +
                        std::to_string(n));
}

FlowSpec make_flow_spec(const MarkovModel& base, const BranchValues& roof,
                        const BranchValues& potential,
                        std::optional<double> cusp_value,
                        std::optional<NormalizationHint> hint) {
  if (base.kind == ModelKind::FiniteSFT && !base.mixing)
    throw DomainError("flow base must be topologically mixing");
  validate_roof(roof);
  potential.expr.validate();
  FlowSpec spec;
  spec.base = base;
  spec.roof = roof;
  spec.potential = potential;
  spec.cusp_value = cusp_value;
  // A validated roof is nondecreasing past the certified prefix, so it is
  // uniformly bounded below by a positive constant and orbit sums diverge.
  spec.hopf_ok = true;
  spec.hint = hint;
  return spec;
}

}  // namespace thermo
