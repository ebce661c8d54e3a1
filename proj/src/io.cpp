#include "csk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "csk/errors.hpp"

namespace csk::io {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const json& require(const json& j, const char* field, const std::string& what) {
  if (!j.is_object() || !j.contains(field)) throw InputError(what + ": missing field \"" + field + "\"");
  return j.at(field);
}

std::vector<double> double_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_double(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

json number_array(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

json bool_array(const std::vector<bool>& xs) {
  json a = json::array();
  for (bool b : xs) a.push_back(b);
  return a;
}

std::size_t to_count(const json& j, const std::string& field) {
  const double v = to_double(j, field);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw InputError(field + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
  }
  return out;
}

double parse_decimal(const std::string& s, const std::string& where) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": not a number: \"" + s + "\"");
  }
  if (used != s.size()) throw InputError(where + ": not a number: \"" + s + "\"");
  return v;
}

TailModel::Kind tail_kind(const std::string& s) {
  if (s == "none") return TailModel::Kind::none;
  if (s == "log") return TailModel::Kind::log;
  if (s == "power") return TailModel::Kind::power;
  throw InputError("sampled function: unknown tail kind \"" + s + "\"");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(where + ": malformed JSON (" + e.what() + ")");
  }
}

json load_json(const std::string& path) { return parse_json(read_file(path), path); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double to_double(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_decimal(j.get<std::string>(), field);
  throw InputError(field + ": expected a number");
}

std::string format_csv(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json complex_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

// ---- sequences ----

SequenceSpec sequence_spec_from_json(const json& j) {
  const std::string what = "sequence spec";
  if (!j.is_object()) throw InputError(what + ": expected an object");
  const json& kind = require(j, "kind", what);
  if (!kind.is_string()) throw InputError(what + ": \"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "explicit") return SequenceSpec::explicit_list(double_array(require(j, "points", what), "points"));
  if (k == "power") {
    const double alpha = to_double(require(j, "alpha", what), "alpha");
    const bool two = j.value("two_sided", false);
    const bool zero = j.value("include_zero", false);
    return SequenceSpec::power(alpha, two, to_count(require(j, "count", what), "count"), zero);
  }
  if (k == "even_mirror") {
    return SequenceSpec::even_mirror(double_array(require(j, "positive_points", what), "positive_points"));
  }
  if (k == "geometric") {
    return SequenceSpec::geometric(to_double(require(j, "ratio", what), "ratio"),
                                   to_count(require(j, "count", what), "count"));
  }
  throw InputError(what + ": unknown kind \"" + k + "\"");
}

json to_json(const SequenceSpec& spec) {
  json j;
  auto strings = [](const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(g17(x));
    return a;
  };
  switch (spec.kind) {
    case GeneratorKind::explicit_points:
      j["kind"] = "explicit";
      j["points"] = strings(spec.points);
      break;
    case GeneratorKind::power:
      j["kind"] = "power";
      j["alpha"] = spec.alpha;
      j["two_sided"] = spec.two_sided;
      j["include_zero"] = spec.include_zero;
      j["count"] = spec.count;
      break;
    case GeneratorKind::even_mirror:
      j["kind"] = "even_mirror";
      j["positive_points"] = strings(spec.points);
      break;
    case GeneratorKind::geometric:
      j["kind"] = "geometric";
      j["ratio"] = spec.ratio;
      j["count"] = spec.count;
      break;
  }
  return j;
}

json to_json(const DiscreteSequence& seq) {
  json pts = json::array();
  for (double x : seq.points()) pts.push_back(g17(x));
  json j{{"kind", "explicit"}, {"points", pts}};
  j["first_index"] = seq.first_index();
  j["last_index"] = seq.last_index();
  if (seq.generator()) j["generator"] = to_json(*seq.generator());
  return j;
}

// ---- weights ----

WeightSpec weight_from_json(const json& j) {
  const std::string what = "weight spec";
  if (!j.is_object()) throw InputError(what + ": expected an object");
  const json& kind = require(j, "kind", what);
  if (!kind.is_string()) throw InputError(what + ": \"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "exp_power") {
    return WeightSpec::exp_power(to_double(require(j, "c", what), "c"), to_double(require(j, "alpha", what), "alpha"));
  }
  if (k == "poly_log") {
    return WeightSpec::poly_log(to_double(require(j, "c", what), "c"), to_double(require(j, "beta", what), "beta"));
  }
  if (k == "exp_power_log") {
    return WeightSpec::exp_power_log(to_double(require(j, "c", what), "c"),
                                     to_double(require(j, "alpha", what), "alpha"),
                                     to_double(require(j, "beta", what), "beta"));
  }
  if (k == "tabulated") {
    const json& e = require(j, "entries", what);
    if (!e.is_array()) throw InputError(what + ": \"entries\" must be an array");
    std::vector<std::pair<double, double>> entries;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string f = "entries[" + std::to_string(i) + "]";
      if (!e[i].is_array() || e[i].size() != 2) throw InputError(what + ": " + f + " must be a pair [x, w]");
      entries.emplace_back(to_double(e[i][0], f), to_double(e[i][1], f));
    }
    return WeightSpec::tabulated(std::move(entries));
  }
  if (k == "discrete") {
    DiscreteSequence seq = materialize(sequence_spec_from_json(require(j, "sequence", what)));
    std::vector<double> logs;
    if (j.contains("log_values")) {
      logs = double_array(j.at("log_values"), "log_values");
    } else {
      for (double w : double_array(require(j, "values", what), "values")) {
        if (!(w >= 1.0)) throw InputError(what + ": discrete values must be >= 1");
        logs.push_back(std::log(w));
      }
    }
    return WeightSpec::discrete_log(std::move(seq), std::move(logs));
  }
  throw InputError(what + ": unknown kind \"" + k + "\"");
}

json to_json(const WeightSpec& w) {
  json j;
  j["kind"] = to_string(w.kind());
  switch (w.kind()) {
    case WeightKind::exp_power:
      j["c"] = w.c();
      j["alpha"] = w.alpha();
      break;
    case WeightKind::poly_log:
      j["c"] = w.c();
      j["beta"] = w.beta();
      break;
    case WeightKind::exp_power_log:
      j["c"] = w.c();
      j["alpha"] = w.alpha();
      j["beta"] = w.beta();
      break;
    case WeightKind::tabulated: {
      json e = json::array();
      for (const auto& [x, lw] : w.table()) e.push_back(json::array({number(x), number(std::exp(lw))}));
      j["entries"] = e;
      break;
    }
    case WeightKind::discrete: {
      json pts = json::array();
      for (double x : w.support().points()) pts.push_back(g17(x));
      j["sequence"] = json{{"kind", "explicit"}, {"points", pts}};
      j["log_values"] = number_array(w.log_values());
      break;
    }
    case WeightKind::custom:
      j["name"] = w.name();
      j["degenerate"] = w.degenerate();
      break;
  }
  return j;
}

// ---- measures ----

DiscreteMeasure measure_from_json(const json& j) {
  const std::string what = "measure";
  const json& atoms = require(j, "atoms", what);
  if (!atoms.is_array()) throw InputError(what + ": \"atoms\" must be an array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string f = "atoms[" + std::to_string(i) + "]";
    const json& a = atoms[i];
    Atom at;
    at.t = to_double(require(a, "t", f), f + ".t");
    at.sign = static_cast<int>(to_double(require(a, "sign", f), f + ".sign"));
    at.log_mag = to_double(require(a, "logmass", f), f + ".logmass");
    out.push_back(at);
  }
  DiscreteMeasure mu(std::move(out));
  return j.value("normalized", false) ? mu.normalize() : mu;
}

DiscreteMeasure measure_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Atom> out;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_line(line);
    if (!header_seen) {
      header_seen = true;
      if (cells.size() == 3 && cells[0] == "t" && cells[1] == "sign" && cells[2] == "logmass") continue;
      throw InputError("measure CSV: expected header t,sign,logmass");
    }
    const std::string where = "measure CSV line " + std::to_string(lineno);
    if (cells.size() != 3) throw InputError(where + ": expected 3 columns");
    Atom a;
    a.t = parse_decimal(cells[0], where);
    a.sign = static_cast<int>(parse_decimal(cells[1], where));
    a.log_mag = parse_decimal(cells[2], where);
    out.push_back(a);
  }
  return DiscreteMeasure(std::move(out));
}

DiscreteMeasure load_measure(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return measure_from_csv(text);
  return measure_from_json(parse_json(text, path));
}

json to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back(json{{"t", g17(a.t)}, {"sign", a.sign}, {"logmass", number(a.log_mag)}});
  return json{{"atoms", atoms}, {"normalized", mu.normalized()}};
}

std::string to_csv(const DiscreteMeasure& mu) {
  std::string out = "t,sign,logmass\n";
  for (const Atom& a : mu.atoms()) out += format_csv(a.t) + "," + std::to_string(a.sign) + "," + format_csv(a.log_mag) + "\n";
  return out;
}

// ---- sampled functions ----

SampledFunction sampled_function_from_json(const json& j) {
  const std::string what = "sampled function";
  SampledFunction f;
  f.grid = double_array(require(j, "grid", what), "grid");
  f.values = double_array(require(j, "values", what), "values");
  if (j.contains("tail")) {
    const json& t = j.at("tail");
    const json& kind = require(t, "kind", what + " tail");
    if (!kind.is_string()) throw InputError(what + ": tail kind must be a string");
    f.tail.kind = tail_kind(kind.get<std::string>());
    if (f.tail.kind != TailModel::Kind::none) {
      const auto p = double_array(require(t, "params", what + " tail"), "tail.params");
      if (p.size() == 2) {
        f.tail.left = f.tail.right = {p[0], p[1]};
      } else if (p.size() == 4) {
        f.tail.left = {p[0], p[1]};
        f.tail.right = {p[2], p[3]};
      } else {
        throw InputError(what + ": tail params must hold 2 (both sides) or 4 (left, right) numbers");
      }
    }
  }
  if (j.contains("clamp")) f.clamp = to_double(j.at("clamp"), "clamp");
  f.validate();
  return f;
}

json to_json(const SampledFunction& f) {
  json j;
  j["grid"] = number_array(f.grid);
  j["values"] = number_array(f.values);
  json t{{"kind", to_string(f.tail.kind)}};
  if (f.tail.kind != TailModel::Kind::none) {
    t["params"] = number_array({f.tail.left.a, f.tail.left.b, f.tail.right.a, f.tail.right.b});
  }
  j["tail"] = t;
  if (f.clamp) j["clamp"] = number(*f.clamp);
  return j;
}

// ---- characteristic sequences ----

json to_json(const CharEntry& e) {
  return json{{"index", e.index},
              {"lambda", g17(e.lambda)},
              {"p", number(e.p)},
              {"err", number(e.error)},
              {"N", e.truncation},
              {"method", to_string(e.method)},
              {"near_collision", e.near_collision}};
}

json to_json(const CharacteristicSequence& P) {
  json entries = json::array();
  for (const CharEntry& e : P.entries()) entries.push_back(to_json(e));
  return json{{"entries", entries}, {"source_size", P.source_size()}};
}

CharacteristicSequence charseq_from_json(const json& j, const DiscreteSequence& seq) {
  const std::string what = "characteristic sequence";
  const json& entries = require(j, "entries", what);
  if (!entries.is_array()) throw InputError(what + ": \"entries\" must be an array");
  std::vector<std::int64_t> idx;
  std::vector<double> vals;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string f = "entries[" + std::to_string(i) + "]";
    const double n = to_double(require(entries[i], "index", f), f + ".index");
    if (n != std::floor(n)) throw InputError(f + ".index: expected an integer");
    if (!seq.has_index(static_cast<std::int64_t>(n))) throw InputError(f + ".index: not a materialized index");
    idx.push_back(static_cast<std::int64_t>(n));
    vals.push_back(to_double(require(entries[i], "p", f), f + ".p"));
  }
  return CharacteristicSequence::from_values(seq, idx, vals);
}

std::string to_csv(const CharacteristicSequence& P) {
  std::string out = "index,lambda,p,err,N,method\n";
  for (const CharEntry& e : P.entries()) {
    out += std::to_string(e.index) + "," + format_csv(e.lambda) + "," + format_csv(e.p) + "," + format_csv(e.error) +
           "," + std::to_string(e.truncation) + "," + to_string(e.method) + "\n";
  }
  return out;
}

// ---- verdicts and reports ----

json to_json(const SeriesAssessment& s) {
  return json{{"converged", s.converged},
              {"infinite_term", s.infinite_term},
              {"log_sum", number(s.log_sum)},
              {"log_tail", number(s.log_tail)},
              {"block_logs", number_array(s.block_logs)},
              {"doubling_counts", s.doubling_counts},
              {"doubling_log_sums", number_array(s.doubling_log_sums)},
              {"reason", s.reason}};
}

json to_json(const Verdict& v) {
  json evidence = json::object();
  for (const auto& [k, xs] : v.evidence) evidence[k] = number_array(xs);
  json figures = json::object();
  for (const auto& [k, x] : v.figures) figures[k] = number(x);
  json checks = json::object();
  for (const auto& [k, b] : v.checks) checks[k] = b;
  return json{{"criterion", v.criterion},
              {"outcome", to_string(v.outcome)},
              {"truncation", v.truncation},
              {"tolerance", number(v.tolerance)},
              {"checks", checks},
              {"figures", figures},
              {"evidence", evidence},
              {"notes", v.notes}};
}

json to_json(const DensityReport& r) {
  return json{{"radii", number_array(r.radii)},
              {"counts", r.counts},
              {"ratios", number_array(r.ratios)},
              {"saturated", bool_array(r.saturated)},
              {"tail_sup", number(r.tail_sup)},
              {"threshold", number(r.threshold)},
              {"zero_density_consistent", r.zero_density_consistent}};
}

json to_json(const BalanceReport& r) {
  return json{{"windows", r.windows},
              {"partial_sums", number_array(r.partial_sums)},
              {"doubled_sums", number_array(r.doubled_sums)},
              {"gaps", number_array(r.gaps)},
              {"saturated", bool_array(r.saturated)},
              {"tolerance", number(r.tolerance)},
              {"balanced_consistent", r.balanced_consistent}};
}

json to_json(const MomentValue& m) {
  return json{{"value", number(m.value)}, {"bound", number(m.bound)}, {"relative", number(m.relative)}};
}

json to_json(const AnnihilationReport& r) {
  json rows = json::array();
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    json row = to_json(r.rows[k]);
    row["k"] = k;
    rows.push_back(row);
  }
  return json{{"rows", rows}, {"tolerance", number(r.tolerance)}, {"annihilation_consistent", r.annihilation_consistent}};
}

json to_json(const DecayProfile& d) {
  json rows = json::array();
  for (const DecayRow& r : d.rows) {
    rows.push_back(json{{"y", number(r.y)},
                        {"log_abs_K", number(r.log_abs_K)},
                        {"scaled", number_array(r.scaled)},
                        {"trusted", r.trusted}});
  }
  return json{{"rows", rows},
              {"nmax", d.nmax},
              {"untrusted_from", d.untrusted_from ? number(*d.untrusted_from) : json(nullptr)},
              {"order_decreasing", bool_array(d.order_decreasing)},
              {"order_monotone_all", bool_array(d.order_monotone_all)},
              {"max_decaying_order", d.max_decaying_order},
              {"sup_polynomial_decay_consistent", d.sup_polynomial_decay_consistent}};
}

json to_json(const ExtremeReport& r) {
  return json{{"min_abs_K", number(r.min_abs_K)},
              {"argmin", complex_json(r.argmin)},
              {"grid_size", r.grid_size},
              {"signs_alternate", r.signs_alternate},
              {"first_alternation_break",
               r.first_alternation_break ? json(*r.first_alternation_break) : json(nullptr)},
              {"annihilation", to_json(r.annihilation)},
              {"decay", to_json(r.decay)},
              {"outerness_note", r.outerness_note}};
}

json to_json(const ScaledComplex& s) {
  return json{{"log_abs", number(s.log_abs())}, {"arg", number(s.arg())}, {"value", complex_json(s.value())}};
}

json to_json(const ProductEvaluation& p) {
  return json{{"log_abs", number(p.log_abs)}, {"phase", number(p.phase)}, {"sign", p.sign},
              {"truncation", p.truncation}, {"lo", p.lo},         {"hi", p.hi}};
}

json to_json(const IdentityReport& r) {
  json pts = json::array();
  for (cplx z : r.points) pts.push_back(complex_json(z));
  return json{{"points", pts},
              {"log_abs_ratio", number_array(r.log_abs_ratio)},
              {"phase_ratio", number_array(r.phase_ratio)},
              {"usable", bool_array(r.usable)},
              {"constant_log_abs", number(r.constant_log_abs)},
              {"constant_phase", number(r.constant_phase)},
              {"max_deviation", number(r.max_deviation)},
              {"tolerance", number(r.tolerance)},
              {"identity_consistent", r.identity_consistent},
              {"notes", r.notes}};
}

json to_json(const ZeroSetClass& z) {
  return json{{"classification", to_string(z.classification)},
              {"hamburger_consistent", z.hamburger_consistent},
              {"krein_consistent", z.krein_consistent},
              {"p_negative_on_tail", z.p_negative_on_tail},
              {"head_sup", number(z.head_sup)},
              {"tail_sup", number(z.tail_sup)},
              {"indices", z.indices},
              {"ratios", number_array(z.ratios)},
              {"krein_series", to_json(z.krein_series)}};
}

json to_json(const QuadResult& q) { return json{{"value", number(q.value)}, {"error", number(q.error)}}; }

json to_json(const AIntegralReport& r) {
  json vals = json::array();
  for (cplx z : r.values) vals.push_back(complex_json(z));
  return json{{"schedule", number_array(r.schedule)},
              {"values", vals},
              {"limit", r.limit ? complex_json(*r.limit) : json(nullptr)},
              {"limit_error", number(r.limit_error)},
              {"converged", r.converged}};
}

json to_json(const ResidualTable& t) {
  return json{{"schedule", number_array(t.schedule)},
              {"values", number_array(t.values)},
              {"residuals", number_array(t.residuals)},
              {"final_residual", number(t.final_residual)},
              {"nonincreasing_tail", t.nonincreasing_tail}};
}

json to_json(const UlyanovReport& r) {
  json pts = json::array();
  for (cplx z : r.points) pts.push_back(complex_json(z));
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(to_json(t));
  return json{{"points", pts}, {"tables", tables}, {"max_final_residual", number(r.max_final_residual)}};
}

json to_json(const CountingConjugate& c) {
  return json{{"m", c.m},
              {"N", c.N},
              {"sum", number(c.sum)},
              {"p_m", number(c.p_m)},
              {"relation_residual", number(c.relation_residual)}};
}

json to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back(json{{"n", row.n},
                        {"lambda", number(row.lambda)},
                        {"p", number(row.p)},
                        {"conj", number(row.conj)},
                        {"residual_plus", number(row.residual_plus)},
                        {"residual_minus", number(row.residual_minus)},
                        {"ratio", number(row.ratio)},
                        {"logfit", number(row.logfit)}});
  }
  return json{{"model", json{{"two_sided", r.model.two_sided}, {"alpha", r.model.alpha}}},
              {"count", r.count},
              {"N", r.N},
              {"accelerate", r.accelerate},
              {"include_zero", r.include_zero},
              {"rows", rows},
              {"sign", r.sign},
              {"sign_stable", r.sign_stable},
              {"ratio_min", number(r.ratio_min)},
              {"ratio_max", number(r.ratio_max)},
              {"logfit_min", number(r.logfit_min)},
              {"logfit_max", number(r.logfit_max)},
              {"log_coefficient", number(r.log_coefficient)},
              {"log_intercept", number(r.log_intercept)},
              {"fit_exponent", number(r.fit_exponent)},
              {"warnings", r.warnings}};
}

std::string to_csv(const ComparisonReport& r) {
  std::string out = "n,lambda,p,conj,residual_plus,residual_minus,logfit\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.n) + "," + format_csv(row.lambda) + "," + format_csv(row.p) + "," +
           format_csv(row.conj) + "," + format_csv(row.residual_plus) + "," + format_csv(row.residual_minus) + "," +
           format_csv(row.logfit) + "\n";
  }
  return out;
}

json to_json(const PowerDemoReport& r) {
  return json{{"alpha", number(r.alpha)},
              {"c", number(r.c)},
              {"verdict", to_json(r.verdict)},
              {"closed_form", number(r.closed_form)},
              {"c_star", number(r.c_star)},
              {"relative_gap", number(r.relative_gap)},
              {"flip_found", r.flip_found},
              {"small_c_verdict", to_json(r.small_c_verdict)},
              {"hall_verdict", to_json(r.hall_verdict)}};
}

}  // namespace csk::io
