#include "thermo/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thermo/flow.hpp"
#include "thermo/inducing.hpp"
#include "thermo/mp.hpp"
#include "thermo/phase.hpp"
#include "thermo/pressure.hpp"
#include "thermo/rational.hpp"
#include "thermo/scenarios.hpp"
#include "thermo/series.hpp"

namespace thermo {

namespace {

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void json_escape_into(std::string& out, const std::string& s) {
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += (char)c;
        }
    }
  }
}

// Appends key/value pairs in insertion order; values arrive pre-encoded.
struct JsonObject {
  std::string body;

  void raw(const std::string& key, const std::string& value) {
    if (!body.empty()) body += ", ";
    body += '"';
    json_escape_into(body, key);
    body += "\": ";
    body += value;
  }
  void str(const std::string& key, const std::string& value) {
    std::string enc = "\"";
    json_escape_into(enc, value);
    enc += '"';
    raw(key, enc);
  }
  void num(const std::string& key, double value) { raw(key, fmt_g(value)); }
  void integer(const std::string& key, long value) {
    raw(key, std::to_string(value));
  }
  void boolean(const std::string& key, bool value) {
    raw(key, value ? "true" : "false");
  }
  void null(const std::string& key) { raw(key, "null"); }

  std::string done() const { return "{" + body + "}"; }
};

std::string bracket_str(double lo, double hi) {
  return "[" + fmt_g(lo) + ", " + fmt_g(hi) + "]";
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

const char* pressure_status_name(PressureValue::Status s) {
  switch (s) {
    case PressureValue::Finite: return "finite";
    case PressureValue::PlusInfinity: return "+infinity";
    case PressureValue::NonPositiveCertified: return "nonpositive";
    default: return "indeterminate";
  }
}

const char* flow_status_name(FlowPressure::Status s) {
  switch (s) {
    case FlowPressure::Finite: return "finite";
    case FlowPressure::NoFiniteEntropy: return "no finite entropy";
    default: return "indeterminate";
  }
}

const char* model_name(ModelKind k) {
  switch (k) {
    case ModelKind::Renewal: return "renewal";
    case ModelKind::FiniteSFT: return "finite";
    default: return "full";
  }
}

std::string normalize_minus(const std::string& text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && (unsigned char)text[i] == 0xe2 &&
        (unsigned char)text[i + 1] == 0x88 &&
        (unsigned char)text[i + 2] == 0x92) {
      out += '-';
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

// Parameter values: exact rationals like 3/2, or decimals taken at their
// binary value.
Rational parse_param(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const DomainError&) {
  }
  std::string plain = normalize_minus(text);
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(plain, &pos);
  } catch (const std::exception&) {
    throw DomainError("cannot parse parameter: " + text);
  }
  if (pos != plain.size())
    throw DomainError("cannot parse parameter: " + text);
  return Rational(v);
}

double parse_const_potential(const std::string& text) {
  std::string s = normalize_minus(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s == "log2" || s == "log 2") return std::log(2.0);
  if (s == "-log2" || s == "-log 2") return -std::log(2.0);
  return rat_d(parse_param(s));
}

std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_param(item));
  }
  if (out.empty()) throw DomainError("empty parameter grid: " + text);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string rational_or(const std::optional<Rational>& r,
                        const char* if_missing) {
  return r ? rational_str(*r) : std::string(if_missing);
}

// ---- spec files ----

using nlohmann::json;

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw DomainError("unknown key \"" + it.key() + "\" in " + where);
  }
}

Rational exact_from_json(const json& e, const std::string& where) {
  if (e.is_string()) return parse_rational(e.get<std::string>());
  if (e.is_number_integer()) return rat_of(e.get<long long>());
  throw DomainError(where + " must be an exact rational string or integer");
}

double double_from_json(const json& e, const std::string& where) {
  if (e.is_number()) return e.get<double>();
  if (e.is_string()) return rat_d(parse_param(e.get<std::string>()));
  throw DomainError(where + " must be a number");
}

BranchValues values_from_json(const json& jv, const std::string& which) {
  if (!jv.is_object()) throw DomainError(which + " must be an object");
  check_keys(jv, {"lin", "c", "s", "overrides", "n_min"}, which);
  BranchValues v;
  if (jv.contains("lin")) v.lin = exact_from_json(jv["lin"], which + ".lin");
  if (jv.contains("c")) {
    const json& c = jv["c"];
    if (!c.is_array() || c.empty() || c.size() > 4)
      throw DomainError(which + ".c must be an array of 1 to 4 entries");
    v.expr.c0 = double_from_json(c[0], which + ".c[0]");
    if (c.size() > 1) v.expr.c1 = exact_from_json(c[1], which + ".c[1]");
    if (c.size() > 2) v.expr.c2 = exact_from_json(c[2], which + ".c[2]");
    if (c.size() > 3) v.expr.c3 = exact_from_json(c[3], which + ".c[3]");
  }
  if (jv.contains("s")) {
    const json& s = jv["s"];
    if (!s.is_array() || s.size() > 3)
      throw DomainError(which + ".s must be an array of up to 3 numbers");
    if (s.size() > 0) v.expr.s1 = double_from_json(s[0], which + ".s[0]");
    if (s.size() > 1) v.expr.s2 = double_from_json(s[1], which + ".s[1]");
    if (s.size() > 2) v.expr.s3 = double_from_json(s[2], which + ".s[2]");
  }
  if (jv.contains("n_min")) {
    if (!jv["n_min"].is_number_integer())
      throw DomainError(which + ".n_min must be an integer");
    v.expr.n_min = jv["n_min"].get<long>();
  }
  if (jv.contains("overrides")) {
    const json& ov = jv["overrides"];
    if (!ov.is_object())
      throw DomainError(which + ".overrides must be an object");
    for (auto it = ov.begin(); it != ov.end(); ++it) {
      size_t pos = 0;
      long n = 0;
      try {
        n = std::stol(it.key(), &pos);
      } catch (const std::exception&) {
        pos = std::string::npos;
      }
      if (pos != it.key().size() || n < 0)
        throw DomainError(which + ".overrides keys must be branch indices");
      v.expr.overrides[n] =
          double_from_json(it.value(), which + ".overrides." + it.key());
    }
  }
  v.expr.validate();
  return v;
}

}  // namespace

FlowSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("spec JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("spec JSON: top level must be an object");
  check_keys(j, {"model", "matrix", "roof", "potential", "cusp_value", "hint"},
             "spec");

  MarkovModel base;
  std::string model = j.value("model", std::string("renewal"));
  if (model == "renewal") {
    base = build_renewal_model();
  } else if (model == "full") {
    base = build_full_shift_model();
  } else if (model == "finite") {
    if (!j.contains("matrix") || !j["matrix"].is_array())
      throw DomainError("finite model needs a 0/1 transition matrix");
    std::vector<std::vector<int>> m;
    for (const json& row : j["matrix"]) {
      if (!row.is_array()) throw DomainError("matrix rows must be arrays");
      std::vector<int> r;
      for (const json& e : row) {
        if (!e.is_number_integer() ||
            (e.get<long>() != 0 && e.get<long>() != 1))
          throw DomainError("matrix entries must be 0 or 1");
        r.push_back((int)e.get<long>());
      }
      m.push_back(r);
    }
    base = build_finite_sft(m);
  } else {
    throw DomainError("model must be renewal, full, or finite");
  }
  if (model != "finite" && j.contains("matrix"))
    throw DomainError("matrix only applies to the finite model");

  if (!j.contains("roof")) throw DomainError("spec JSON: roof is required");
  BranchValues roof = values_from_json(j["roof"], "roof");
  BranchValues pot;
  if (j.contains("potential"))
    pot = values_from_json(j["potential"], "potential");

  std::optional<double> cusp;
  if (j.contains("cusp_value") && !j["cusp_value"].is_null()) {
    if (!j["cusp_value"].is_number())
      throw DomainError("cusp_value must be a number or null");
    cusp = j["cusp_value"].get<double>();
  }

  std::optional<NormalizationHint> hint;
  if (j.contains("hint")) {
    const json& h = j["hint"];
    if (!h.is_object() || !h.contains("t0") || !h.contains("s0"))
      throw DomainError("hint must be an object with t0 and s0");
    check_keys(h, {"t0", "s0"}, "hint");
    hint = NormalizationHint{exact_from_json(h["t0"], "hint.t0"),
                             exact_from_json(h["s0"], "hint.s0")};
  }

  return make_flow_spec(base, roof, pot, cusp, hint);
}

namespace {

// ---- shared verb input: a flow spec from --scenario or --spec ----

struct SpecSource {
  FlowSpec spec;
  std::optional<Scenario> scenario;
  std::string label_key;    // "scenario" or "spec"
  std::string label_value;  // catalog name or file path
};

SpecSource load_source(const std::string& scenario_name,
                       const std::string& spec_path, const char* verb) {
  if (scenario_name.empty() == spec_path.empty())
    throw DomainError(std::string(verb) +
                      " needs exactly one of --scenario or --spec");
  SpecSource src;
  if (!scenario_name.empty()) {
    src.scenario = build_scenario(scenario_name);
    src.spec = src.scenario->spec;
    src.label_key = "scenario";
    src.label_value = scenario_name;
  } else {
    src.spec = spec_from_json(read_file(spec_path));
    src.label_key = "spec";
    src.label_value = spec_path;
  }
  return src;
}

std::optional<Rational> unit_pin(const SpecSource& src, const Rational& t) {
  if (!src.scenario) return std::nullopt;
  auto it = src.scenario->base_unit_sums.find(t);
  if (it == src.scenario->base_unit_sums.end()) return std::nullopt;
  return it->second;
}

void require_branch_model(const SpecSource& src, const char* verb) {
  if (src.spec.base.kind == ModelKind::FiniteSFT)
    throw DomainError(std::string(verb) +
                      " needs a renewal or full model; the finite model only "
                      "supports the pressure verb");
}

// ---- verbs ----

CliResult verb_pressure(const std::string& model_opt,
                        const std::string& const_pot,
                        const std::string& scenario_name,
                        const std::string& spec_path,
                        const std::string& t_text) {
  CliResult res;
  JsonObject obj;
  SeriesOptions opt;

  int sources = (!const_pot.empty()) + (!scenario_name.empty()) +
                (!spec_path.empty());
  if (sources != 1)
    throw DomainError(
        "pressure needs exactly one of --const-potential, --scenario, --spec");

  if (!const_pot.empty()) {
    if (model_opt != "renewal")
      throw DomainError("constant potentials are wired for --model renewal");
    double c = parse_const_potential(const_pot);
    TermFamily ret;
    ret.lin_f = c;
    ret.n_start = 1;
    BaseClassification bc = classify_base(ret, std::nullopt, opt);
    obj.str("model", "renewal");
    obj.num("potential", c);
    if (bc.pressure.status == PressureValue::Finite) {
      obj.num("pressure", bc.pressure.value);
      obj.num("err", bc.pressure.err);
    } else {
      obj.null("pressure");
      obj.num("err", 0.0);
    }
    obj.str("status", pressure_status_name(bc.pressure.status));
    obj.str("class", class_name(bc.cls));
    if (bc.mean_return.status == ExtReal::Finite)
      obj.num("mean_return", bc.mean_return.value);
    else
      obj.str("mean_return", ext_name(bc.mean_return.status));
    obj.str("note", bc.pressure.note);
    res.out = obj.done() + "\n";
    res.exit_code = (bc.pressure.status == PressureValue::Indeterminate ||
                     bc.cls == RecurrenceClass::Indeterminate)
                        ? 1
                        : 0;
    return res;
  }

  SpecSource src = load_source(scenario_name, spec_path, "pressure");
  Rational t = parse_param(t_text);
  obj.str("model", model_name(src.spec.base.kind));
  obj.str(src.label_key, src.label_value);
  obj.str("t", rational_str(t));

  if (src.spec.base.kind == ModelKind::FiniteSFT) {
    long m = src.spec.base.alphabet_size();
    std::vector<std::vector<double>> w(m, std::vector<double>(m, 0.0));
    for (long i = 0; i < m; ++i)
      for (long k = 0; k < m; ++k)
        if (src.spec.base.matrix[i][k])
          w[i][k] = std::exp(rat_d(t) * src.spec.potential.value(i));
    PerronResult pr = truncated_perron(w);
    obj.num("pressure", pr.log_lo);
    obj.num("err", pr.log_hi - pr.log_lo);
    obj.str("status", "finite");
    obj.str("class", class_name(RecurrenceClass::PositiveRecurrent));
    obj.str("note", "leading eigenvalue of the weighted transition matrix");
    res.out = obj.done() + "\n";
    res.exit_code = 0;
    return res;
  }

  BaseClassification bc = classify_base(scale_values(t, src.spec.potential),
                                        unit_pin(src, t), opt);
  if (bc.pressure.status == PressureValue::Finite) {
    obj.num("pressure", bc.pressure.value);
    obj.num("err", bc.pressure.err);
  } else {
    obj.null("pressure");
    obj.num("err", 0.0);
  }
  obj.str("status", pressure_status_name(bc.pressure.status));
  obj.str("class", class_name(bc.cls));
  if (bc.mean_return.status == ExtReal::Finite)
    obj.num("mean_return", bc.mean_return.value);
  else
    obj.str("mean_return", ext_name(bc.mean_return.status));
  obj.str("note", bc.pressure.note);
  res.out = obj.done() + "\n";
  res.exit_code = (bc.pressure.status == PressureValue::Indeterminate ||
                   bc.cls == RecurrenceClass::Indeterminate)
                      ? 1
                      : 0;
  return res;
}

void put_flow_pressure(JsonObject& obj, const FlowPressure& fp,
                       const char* value_key) {
  obj.str("status", flow_status_name(fp.status));
  if (fp.status == FlowPressure::Finite) {
    obj.num(value_key, fp.value);
    obj.num("err", fp.err);
  } else {
    obj.null(value_key);
    obj.num("err", 0.0);
  }
  if (fp.exact)
    obj.str("exact", rational_str(*fp.exact));
  else
    obj.null("exact");
}

CliResult verb_flow_pressure(const std::string& scenario_name,
                             const std::string& spec_path,
                             const std::string& t_text) {
  CliResult res;
  SpecSource src = load_source(scenario_name, spec_path, "flow-pressure");
  require_branch_model(src, "flow-pressure");
  Rational t = parse_param(t_text);
  FlowPressure fp = flow_pressure(src.spec, t);
  JsonObject obj;
  obj.str(src.label_key, src.label_value);
  obj.str("t", rational_str(t));
  put_flow_pressure(obj, fp, "pressure");
  obj.boolean("sticks", fp.sticks);
  obj.str("note", fp.note);
  res.out = obj.done() + "\n";
  res.exit_code = fp.status == FlowPressure::Indeterminate ? 1 : 0;
  return res;
}

CliResult verb_entropy(const std::string& scenario_name,
                       const std::string& spec_path) {
  CliResult res;
  SpecSource src = load_source(scenario_name, spec_path, "entropy");
  require_branch_model(src, "entropy");
  FlowPressure fp = flow_pressure(src.spec, rat_of(0));
  JsonObject obj;
  obj.str(src.label_key, src.label_value);
  obj.str("s_infinity", rational_or(s_infinity(src.spec), "+infinity"));
  put_flow_pressure(obj, fp, "h_flow");
  obj.str("note", fp.note);
  res.out = obj.done() + "\n";
  res.exit_code = fp.status == FlowPressure::Indeterminate ? 1 : 0;
  return res;
}

CliResult verb_classify(const std::string& scenario_name,
                        const std::string& spec_path,
                        const std::string& t_text) {
  CliResult res;
  SeriesOptions opt;
  SpecSource src = load_source(scenario_name, spec_path, "classify");
  require_branch_model(src, "classify");
  Rational t = parse_param(t_text);
  ClassificationReport rep = equilibrium_decision(src.spec, t, opt);
  if (auto pin = unit_pin(src, t)) {
    BaseClassification bc =
        classify_base(scale_values(t, src.spec.potential), pin, opt);
    rep.base_class = bc.cls;
    rep.base_pressure = bc.pressure;
  }
  JsonObject obj;
  obj.str(src.label_key, src.label_value);
  obj.str("t", rational_str(t));
  obj.str("s_infinity", rational_or(rep.s_infinity, "+infinity"));
  obj.str("alpha", rational_or(rep.alpha, "none"));
  obj.str("base_class", class_name(rep.base_class));
  obj.str("flow_class", class_name(rep.flow_class));
  obj.str("equilibrium", existence_name(rep.equilibrium));
  obj.str("mme", existence_name(rep.mme));
  obj.str("case", rep.theorem_case);
  if (rep.flow_pressure.status == FlowPressure::Finite) {
    obj.num("flow_pressure", rep.flow_pressure.value);
    obj.num("flow_pressure_err", rep.flow_pressure.err);
  } else {
    obj.null("flow_pressure");
    obj.num("flow_pressure_err", 0.0);
  }
  if (rep.flow_pressure.exact)
    obj.str("flow_pressure_exact", rational_str(*rep.flow_pressure.exact));
  else
    obj.null("flow_pressure_exact");
  obj.str("flow_pressure_status", flow_status_name(rep.flow_pressure.status));
  if (rep.base_pressure.status == PressureValue::Finite) {
    obj.num("base_pressure", rep.base_pressure.value);
    obj.num("base_pressure_err", rep.base_pressure.err);
  } else {
    obj.null("base_pressure");
    obj.num("base_pressure_err", 0.0);
  }
  if (rep.stats.integral_r.status == ExtReal::Finite)
    obj.num("mean_return", rep.stats.integral_r.value);
  else
    obj.str("mean_return", ext_name(rep.stats.integral_r.status));
  obj.boolean("cusp_dominates", rep.cusp_dominates);
  obj.str("note", rep.note);
  res.out = obj.done() + "\n";
  res.exit_code = (rep.flow_class == RecurrenceClass::Indeterminate ||
                   rep.equilibrium == EqExistence::Indeterminate ||
                   rep.flow_pressure.status == FlowPressure::Indeterminate)
                      ? 1
                      : 0;
  return res;
}

void put_bound(JsonObject& obj, const char* prefix, const PhaseBound& b,
               bool present) {
  std::string key = prefix;
  if (present)
    obj.raw(key, bracket_str(b.lo, b.hi));
  else
    obj.null(key);
  if (present && b.exact)
    obj.str(key + "_exact", rational_str(*b.exact));
  else
    obj.null(key + "_exact");
  obj.boolean(key + "_closed", present && b.closed);
}

CliResult verb_phase_scan(const std::string& scenario_name,
                          const std::string& spec_path,
                          const std::string& ts_text, bool csv) {
  CliResult res;
  SeriesOptions opt;
  SpecSource src = load_source(scenario_name, spec_path, "phase-scan");
  require_branch_model(src, "phase-scan");
  std::vector<Rational> grid;
  if (!ts_text.empty()) {
    grid = parse_grid(ts_text);
  } else if (src.scenario) {
    grid = src.scenario->sample_ts;
  } else {
    grid = {rat_of(-2), rat_of(-1), rat_of(0), rat_of(1), rat_of(2)};
  }
  PhaseReport rep = phase_scan(src.spec, grid, opt);
  int code = rep.interval.kind == PhaseInterval::Indeterminate ? 1 : 0;
  if (csv) {
    res.out = scan_csv(rep);
    res.exit_code = code;
    return res;
  }
  JsonObject obj;
  obj.str(src.label_key, src.label_value);
  obj.str("s_infinity", rational_str(rep.s_infinity));
  obj.str("alpha", rational_str(rep.alpha));
  JsonObject window;
  window.str("kind", kind_str(rep.interval.kind));
  bool has_lower = rep.interval.kind == PhaseInterval::Bounded ||
                   rep.interval.kind == PhaseInterval::RayAbove;
  bool has_upper = rep.interval.kind == PhaseInterval::Bounded ||
                   rep.interval.kind == PhaseInterval::RayBelow;
  put_bound(window, "lower", rep.interval.lower, has_lower);
  put_bound(window, "upper", rep.interval.upper, has_upper);
  window.str("note", rep.interval.note);
  obj.raw("window", window.done());
  std::string samples;
  for (const PhaseSample& s : rep.samples) {
    JsonObject row;
    row.str("t", rational_str(s.t));
    if (s.pressure.status == FlowPressure::Finite) {
      row.num("pressure", s.pressure.value);
      row.num("err", s.pressure.err);
    } else {
      row.null("pressure");
      row.num("err", 0.0);
    }
    row.str("regime", regime_name(s.regime));
    row.str("flow_class", class_name(s.flow_class));
    if (!samples.empty()) samples += ", ";
    samples += row.done();
  }
  obj.raw("samples", "[" + samples + "]");
  res.out = obj.done() + "\n";
  res.exit_code = code;
  return res;
}

CliResult verb_example(const std::string& name, bool text) {
  CliResult res;
  Verdict v = run_scenario(build_scenario(name));
  res.out = (text ? verdict_text(v) : verdict_json(v) + "\n");
  res.exit_code = v.pass ? 0 : 1;
  return res;
}

CliResult verb_mp(double alpha, long branches, bool csv) {
  CliResult res;
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw DomainError("--alpha must be a positive number");
  MpBranchData data = build_branches(alpha, branches);
  if (csv) {
    std::ostringstream os;
    write_branch_csv(os, data);
    res.out = os.str();
    res.exit_code = 0;
    return res;
  }
  MpBracket sinf = mp_s_infinity(data);
  MpBracket ent = mp_flow_entropy(data);
  MpEquilibriumReport eq = mp_equilibrium(data, AsymptoticExpr{}, 0.0);
  JsonObject obj;
  obj.num("alpha", alpha);
  obj.integer("branches", (long)data.branches.size());
  obj.raw("s_infinity", bracket_str(sinf.lo, sinf.hi));
  obj.raw("entropy", bracket_str(ent.lo, ent.hi));
  obj.raw("pressure", bracket_str(eq.pressure.lo, eq.pressure.hi));
  obj.raw("root", bracket_str(eq.root.lo, eq.root.hi));
  obj.num("cusp", eq.cusp);
  obj.str("side", side_name(eq.side));
  obj.str("mme", existence_name(eq.verdict));
  obj.str("s_infinity_note", sinf.note);
  obj.str("entropy_note", ent.note);
  obj.str("equilibrium_note", eq.note);
  res.out = obj.done() + "\n";
  res.exit_code = eq.verdict == EqExistence::Indeterminate ? 1 : 0;
  return res;
}

CliResult verb_list() {
  CliResult res;
  std::string items;
  for (const std::string& name : scenario_names()) {
    JsonObject row;
    row.str("name", name);
    row.str("summary", scenario_summary(name));
    if (!items.empty()) items += ", ";
    items += row.done();
  }
  JsonObject obj;
  obj.raw("scenarios", "[" + items + "]");
  res.out = obj.done() + "\n";
  res.exit_code = 0;
  return res;
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "thermo: pressure, entropy, and equilibrium classification for "
      "countable Markov shifts and suspension flows"};
  app.require_subcommand(1);

  std::string model = "renewal", const_pot, scenario, spec_path;
  std::string t_text = "1", ts_text, example_name;
  bool csv = false, json_flag = false, text_flag = false;
  double alpha = 1.0;
  long branches = 4000;

  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "catalog scenario name");
    cmd->add_option("--spec", spec_path, "flow specification JSON file");
  };
  auto add_t = [&](CLI::App* cmd) {
    cmd->add_option("-t,--t", t_text,
                    "potential multiplier, rational or decimal");
  };

  CLI::App* c_pressure = app.add_subcommand(
      "pressure", "base pressure and recurrence of a potential");
  c_pressure->add_option("--model", model, "model kind: renewal, full, finite");
  c_pressure->add_option("--const-potential", const_pot,
                         "constant potential: number, rational, log2, -log2");
  add_source(c_pressure);
  add_t(c_pressure);

  CLI::App* c_flow = app.add_subcommand(
      "flow-pressure", "pressure of the time-t potential multiple");
  add_source(c_flow);
  add_t(c_flow);

  CLI::App* c_entropy =
      app.add_subcommand("entropy", "topological entropy of the flow");
  add_source(c_entropy);

  CLI::App* c_classify = app.add_subcommand(
      "classify", "recurrence and equilibrium existence at a parameter");
  add_source(c_classify);
  add_t(c_classify);

  CLI::App* c_scan = app.add_subcommand(
      "phase-scan", "pressure curve and affine window over a grid");
  add_source(c_scan);
  c_scan->add_option("--ts", ts_text, "comma-separated parameter grid");
  c_scan->add_flag("--csv", csv, "CSV rows instead of JSON");
  c_scan->add_flag("--json", json_flag, "JSON output (default)");

  CLI::App* c_example =
      app.add_subcommand("example", "run a catalog scenario's checks");
  c_example->add_option("name", example_name, "scenario name")->required();
  c_example->add_flag("--json", json_flag, "JSON output (default)");
  c_example->add_flag("--text", text_flag, "human-readable rows");

  CLI::App* c_mp = app.add_subcommand(
      "mp", "intermittent interval map via its induced scheme");
  c_mp->add_option("--alpha", alpha, "intermittency exponent")->required();
  c_mp->add_option("--branches", branches, "induced branches to build");
  c_mp->add_flag("--csv", csv, "branch table instead of JSON");
  c_mp->add_flag("--json", json_flag, "JSON output (default)");

  CLI::App* c_list = app.add_subcommand("list", "catalog scenario names");
  c_list->add_flag("--json", json_flag, "JSON output (default)");

  std::vector<std::string> full;
  full.push_back("thermo");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(full.size());
  for (std::string& s : full) argv.push_back(s.data());

  CliResult res;
  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    int code = app.exit(e, out, err);
    res.out = out.str();
    res.err = err.str();
    res.exit_code = code == 0 ? 0 : 2;
    return res;
  }

  try {
    if (*c_pressure)
      return verb_pressure(model, const_pot, scenario, spec_path, t_text);
    if (*c_flow) return verb_flow_pressure(scenario, spec_path, t_text);
    if (*c_entropy) return verb_entropy(scenario, spec_path);
    if (*c_classify) return verb_classify(scenario, spec_path, t_text);
    if (*c_scan) return verb_phase_scan(scenario, spec_path, ts_text, csv);
    if (*c_example) return verb_example(example_name, text_flag);
    if (*c_mp) return verb_mp(alpha, branches, csv);
    if (*c_list) return verb_list();
    res.err = "thermo: no command selected\n";
    res.exit_code = 2;
    return res;
  } catch (const ConvergenceFailure& e) {
    res.err = std::string("thermo: ") + e.what() + "\n";
    res.exit_code = 1;
    return res;
  } catch (const std::exception& e) {
    res.err = std::string("thermo: ") + e.what() + "\n";
    res.exit_code = 2;
    return res;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
  CliResult res = run_cli(args);
  if (!res.out.empty()) std::fputs(res.out.c_str(), stdout);
  if (!res.err.empty()) std::fputs(res.err.c_str(), stderr);
  return res.exit_code;
}

}  // namespace thermo
