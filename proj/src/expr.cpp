#include "thermo/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace thermo {

Rational parse_rational(const std::string& text) {
  std::string clean;
  clean.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    unsigned char c = text[i];
    if (c == ' ' || c == '\t') continue;
    // U+2212 (minus sign) comes in as e2 88 92
    if (c == 0xe2 && i + 2 < text.size() &&
        (unsigned char)text[i + 1] == 0x88 && (unsigned char)text[i + 2] == 0x92) {
      clean += '-';
      i += 2;
      continue;
    }
    clean += (char)c;
  }
  if (clean.empty()) throw ParseError("empty rational literal");
  for (char c : clean) {
    if (!(std::isdigit((unsigned char)c) || c == '-' || c == '+' || c == '/'))
      throw ParseError("bad rational literal: " + text);
  }
  Rational q;
  if (q.set_str(clean, 10) != 0) throw ParseError("bad rational literal: " + text);
  if (sgn(q.get_den()) == 0) throw ParseError("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::string rational_str(const Rational& q) { return q.get_str(); }

namespace {

const double kE = std::exp(1.0);
const double kEE = std::exp(kE);

double ll(double x) { return std::log(std::log(x)); }
double lll(double x) { return std::log(std::log(std::log(x))); }

}  // namespace

void AsymptoticExpr::validate() const {
  if (n_min < 0) throw DomainError("n_min must be nonnegative");
  for (const auto& [n, v] : overrides) {
    (void)v;
    if (n < 0) throw DomainError("override at negative branch");
  }
  // Each active level needs its whole iterated-log chain positive, i.e. every
  // nested log argument > 1 at n_min.
  double x = (double)n_min;
  if (!rat_zero(c1) && !(x + s1 > 1.0))
    throw DomainError("log argument <= 1 at n_min");
  if (!rat_zero(c2) && !(x + s2 > kE))
    throw DomainError("loglog argument chain <= 1 at n_min");
  if (!rat_zero(c3) && !(x + s3 > kEE))
    throw DomainError("logloglog argument chain <= 1 at n_min");
}

double AsymptoticExpr::evaluate(long n) const {
  auto it = overrides.find(n);
  if (it != overrides.end()) return it->second;
  if (n < n_min) {
    std::ostringstream os;
    os << "branch " << n << " below n_min=" << n_min << " and not overridden";
    throw DomainError(os.str());
  }
  return closed_form((double)n);
}

double AsymptoticExpr::closed_form(double x) const {
  double v = c0;
  if (!rat_zero(c1)) v += rat_d(c1) * std::log(x + s1);
  if (!rat_zero(c2)) v += rat_d(c2) * ll(x + s2);
  if (!rat_zero(c3)) v += rat_d(c3) * lll(x + s3);
  return v;
}

namespace {

// Shift for a level of the combined expression. Contributing sides with a
// nonzero coefficient must agree.
double merge_shift(bool live1, double sh1, bool live2, double sh2) {
  if (live1 && live2) {
    if (sh1 != sh2) throw ShiftMismatch("shift disagreement in linear_combine");
    return sh1;
  }
  return live1 ? sh1 : sh2;
}

}  // namespace

AsymptoticExpr linear_combine(const Rational& a, const AsymptoticExpr& e1,
                              const Rational& b, const AsymptoticExpr& e2) {
  bool live1 = !rat_zero(a), live2 = !rat_zero(b);
  AsymptoticExpr out;
  out.c0 = (live1 ? rat_d(a) * e1.c0 : 0.0) + (live2 ? rat_d(b) * e2.c0 : 0.0);
  out.c1 = a * e1.c1 + b * e2.c1;
  out.c2 = a * e1.c2 + b * e2.c2;
  out.c3 = a * e1.c3 + b * e2.c3;
  bool l1 = live1 && !rat_zero(e1.c1), l2 = live2 && !rat_zero(e2.c1);
  out.s1 = merge_shift(l1, e1.s1, l2, e2.s1);
  l1 = live1 && !rat_zero(e1.c2), l2 = live2 && !rat_zero(e2.c2);
  out.s2 = merge_shift(l1, e1.s2, l2, e2.s2);
  l1 = live1 && !rat_zero(e1.c3), l2 = live2 && !rat_zero(e2.c3);
  out.s3 = merge_shift(l1, e1.s3, l2, e2.s3);
  out.n_min = std::max(live1 ? e1.n_min : 0, live2 ? e2.n_min : 0);
  // Pointwise merge wherever a live side deviates from its closed form.
  auto merge_overrides = [&](const AsymptoticExpr& e) {
    for (const auto& [n, v] : e.overrides) {
      (void)v;
      if (out.overrides.count(n)) continue;
      out.overrides[n] = (live1 ? rat_d(a) * e1.evaluate(n) : 0.0) +
                         (live2 ? rat_d(b) * e2.evaluate(n) : 0.0);
    }
  };
  if (live1) merge_overrides(e1);
  if (live2) merge_overrides(e2);
  out.validate();
  return out;
}

AsymptoticExpr scale_expr(const Rational& a, const AsymptoticExpr& e) {
  return linear_combine(a, e, Rational(0), AsymptoticExpr{});
}

AsymptoticExpr constant_expr(double c0) {
  AsymptoticExpr e;
  e.c0 = c0;
  return e;
}

bool same_expr(const AsymptoticExpr& a, const AsymptoticExpr& b) {
  return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2 && a.c3 == b.c3 &&
         a.s1 == b.s1 && a.s2 == b.s2 && a.s3 == b.s3 && a.n_min == b.n_min &&
         a.overrides == b.overrides;
}

}  // namespace thermo
