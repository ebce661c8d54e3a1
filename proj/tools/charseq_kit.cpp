// charseq_kit: command-line front end.
//
// Exit codes: 0 ran (whatever the verdict), 2 input error, 3 numeric failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csk/aintegral.hpp"
#include "csk/asymptotics.hpp"
#include "csk/charseq.hpp"
#include "csk/criteria.hpp"
#include "csk/entire.hpp"
#include "csk/errors.hpp"
#include "csk/io.hpp"
#include "csk/measures.hpp"
#include "csk/parallel.hpp"
#include "csk/sequences.hpp"

using namespace csk;
using io::json;

namespace {

struct Global {
  unsigned threads = 0;
  bool no_timestamp = false;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out = "-";
};

struct Options {
  std::string sequence, weight, measure, charseq, subseq, h_file, conj_file;
  std::string range, fit, tail;
  std::int64_t N = 0;
  bool accelerate = false;
  double collision_ratio = 1e-3;
  std::vector<std::int64_t> windows;
  std::vector<double> radii;
  double balance_tolerance = 1e-8;
  double density_threshold = 0.05;
  double p = 2.0;
  std::vector<std::string> z;
  bool modified = false;
  int kmax = 4;
  double moment_tolerance = 1e-3;
  std::vector<double> ys;
  int nmax = 4;
  double omitted = 0.0;
  double identity_tolerance = 1e-6;
  std::string pair = "step";
  double lambda = 1.0;
  std::string a_schedule;
  double alpha = 1.0 / 3.0;
  bool one_sided = false;
  bool two_sided = false;
  std::int64_t count = 100000;
  bool no_accelerate = false;
  bool no_zero = false;
  double c = std::numbers::pi;
  std::int64_t index_range = 4000;
  double hall_fraction = 0.01;
  std::string box = "-3,3,0.5,3";
  int nx = 13;
  int ny = 6;
};

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s, const std::string& what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InputError(what + ": expected lo:hi, got \"" + s + "\"");
  try {
    std::size_t a = 0, b = 0;
    const std::string ls = s.substr(0, colon), hs = s.substr(colon + 1);
    const long long lo = std::stoll(ls, &a);
    const long long hi = std::stoll(hs, &b);
    if (a != ls.size() || b != hs.size()) throw std::invalid_argument("trailing");
    if (hi < lo) throw InputError(what + ": empty range " + s);
    return {lo, hi};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError(what + ": expected integers lo:hi, got \"" + s + "\"");
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(io::to_double(json(cell), what));
  if (out.empty()) throw InputError(what + ": empty list");
  return out;
}

cplx parse_complex(const std::string& s) {
  const auto v = parse_list(s, "--z");
  if (v.size() != 2) throw InputError("--z: expected re,im, got \"" + s + "\"");
  return {v[0], v[1]};
}

std::vector<cplx> points_or(const std::vector<std::string>& zs, std::vector<cplx> fallback) {
  if (zs.empty()) return fallback;
  std::vector<cplx> out;
  for (const auto& s : zs) out.push_back(parse_complex(s));
  return out;
}

json points_json(const std::vector<cplx>& zs) {
  json a = json::array();
  for (cplx z : zs) a.push_back(io::complex_json(z));
  return a;
}

DiscreteSequence load_sequence(const std::string& path) {
  if (path.empty()) throw InputError("--sequence is required");
  return materialize(io::sequence_spec_from_json(io::load_json(path)));
}

std::pair<std::int64_t, std::int64_t> resolve_range(const DiscreteSequence& seq, const std::string& range) {
  if (range.empty()) return {seq.first_index(), seq.last_index()};
  const auto [lo, hi] = parse_range(range, "--range");
  if (!seq.has_index(lo) || !seq.has_index(hi)) {
    std::ostringstream os;
    os << "--range " << range << " lies outside the materialized indices [" << seq.first_index() << ", "
       << seq.last_index() << "]";
    throw InputError(os.str());
  }
  return {lo, hi};
}

CharOptions char_options(const Options& o) {
  CharOptions co;
  co.N = o.N;
  co.accelerate = o.accelerate;
  co.collision_ratio = o.collision_ratio;
  return co;
}

CharacteristicSequence obtain_charseq(const DiscreteSequence& seq, const Options& o, const Global& g,
                                      json& cfg) {
  if (!o.charseq.empty()) {
    cfg["charseq"] = o.charseq;
    return io::charseq_from_json(io::load_json(o.charseq), seq);
  }
  const auto [lo, hi] = resolve_range(seq, o.range);
  cfg["range"] = {lo, hi};
  cfg["N"] = o.N;
  cfg["accelerate"] = o.accelerate;
  cfg["collision_ratio"] = o.collision_ratio;
  return char_sequence(seq, lo, hi, char_options(o), g.threads);
}

CriterionOptions criterion_options(const Options& o, json& cfg) {
  CriterionOptions c;
  c.density_threshold = o.density_threshold;
  c.balance_tolerance = o.balance_tolerance;
  c.density_radii = o.radii;
  c.balance_windows = o.windows;
  cfg["density_threshold"] = o.density_threshold;
  cfg["balance_tolerance"] = o.balance_tolerance;
  cfg["density_radii"] = o.radii.empty() ? json("default") : json(o.radii);
  cfg["balance_windows"] = o.windows.empty() ? json("default") : json(o.windows);
  cfg["series_rule"] = {{"decay_factor", c.rule.decay_factor},
                        {"tail_relative", c.rule.tail_relative},
                        {"min_terms", c.rule.min_terms}};
  return c;
}

std::vector<std::int64_t> load_subseq(const std::string& path) {
  if (path.empty()) return {};
  const json j = io::load_json(path);
  if (!j.is_array()) throw InputError(path + ": expected a JSON array of natural indices");
  std::vector<std::int64_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InputError(path + ": indices must be integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

// The measure under study: an explicit file, or the masses built from a
// sequence through its characteristic values.
DiscreteMeasure obtain_measure(const Options& o, const Global& g, json& cfg) {
  if (!o.measure.empty()) {
    cfg["measure"] = o.measure;
    return io::load_measure(o.measure);
  }
  if (o.sequence.empty()) throw InputError("either --measure or --sequence is required");
  cfg["sequence"] = o.sequence;
  const DiscreteSequence seq = load_sequence(o.sequence);
  const auto P = obtain_charseq(seq, o, g, cfg);
  return masses_from_charseq(seq, P);
}

std::vector<double> default_decay_ys() {
  std::vector<double> ys;
  for (int k = 0; k < 16; ++k) ys.push_back(32.0 * std::ldexp(1.0, k));
  return ys;
}

std::vector<double> a_schedule(const Options& o) {
  return o.a_schedule.empty() ? default_a_schedule() : parse_list(o.a_schedule, "--A-schedule");
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const Global& g, const std::string& command, json cfg, const json& result,
          const std::optional<std::string>& csv = std::nullopt) {
  if (g.format == "csv") {
    if (!csv) throw InputError("--format csv is not available for " + command);
    io::write_text(g.out, *csv);
    return;
  }
  cfg["threads"] = g.threads;
  cfg["seed"] = g.seed;
  cfg["format"] = g.format;
  json report{{"command", command}, {"config", cfg}, {"result", result}};
  if (!g.no_timestamp) report["timestamp"] = timestamp();
  io::write_text(g.out, report.dump(2) + "\n");
}

// ---- commands ----

void cmd_charseq(const Options& o, const Global& g) {
  json cfg{{"sequence", o.sequence}};
  const DiscreteSequence seq = load_sequence(o.sequence);
  const auto [lo, hi] = resolve_range(seq, o.range);
  cfg["range"] = {lo, hi};
  cfg["N"] = o.N;
  cfg["accelerate"] = o.accelerate;
  cfg["collision_ratio"] = o.collision_ratio;
  const auto P = char_sequence(seq, lo, hi, char_options(o), g.threads);
  emit(g, "charseq", cfg, io::to_json(P), io::to_csv(P));
}

void cmd_balance(const Options& o, const Global& g) {
  json cfg{{"sequence", o.sequence}};
  const DiscreteSequence seq = load_sequence(o.sequence);
  const auto windows = o.windows.empty() ? default_balance_schedule(seq) : o.windows;
  const auto radii = o.radii.empty() ? default_density_schedule(seq) : o.radii;
  cfg["windows"] = windows;
  cfg["radii"] = radii;
  cfg["balance_tolerance"] = o.balance_tolerance;
  cfg["density_threshold"] = o.density_threshold;
  json res{{"balance", io::to_json(balance_partial_sums(seq, windows, o.balance_tolerance))},
           {"density", io::to_json(upper_density(seq, radii, o.density_threshold))}};
  emit(g, "balance", cfg, res);
}

void cmd_density(const std::string& sub, const Options& o, const Global& g) {
  json cfg;
  Verdict v;
  if (sub == "main" || sub == "simplified") {
    if (o.weight.empty()) throw InputError("--weight is required");
    cfg["weight"] = o.weight;
    cfg["sequence"] = o.sequence;
    const WeightSpec W = io::weight_from_json(io::load_json(o.weight));
    const DiscreteSequence seq = load_sequence(o.sequence);
    const auto P = obtain_charseq(seq, o, g, cfg);
    const CriterionOptions copt = criterion_options(o, cfg);
    if (sub == "main") {
      v = main_criterion(W, seq, P, copt);
    } else {
      std::int64_t lo = P.entries().front().index, hi = P.entries().back().index;
      if (!o.fit.empty()) std::tie(lo, hi) = parse_range(o.fit, "--fit");
      cfg["fit"] = {lo, hi};
      v = nondegenerate_simplified(W, seq, P, lo, hi, copt);
    }
  } else if (sub == "lp" || sub == "l1" || sub == "cw") {
    if (o.measure.empty()) throw InputError("--measure is required");
    cfg["measure"] = o.measure;
    cfg["subseq"] = o.subseq;
    const DiscreteMeasure mu = io::load_measure(o.measure);
    const auto idx = load_subseq(o.subseq);
    const SubMeasure sm = restrict_measure(mu, idx);
    const auto P = obtain_charseq(sm.gamma, o, g, cfg);
    const CriterionOptions copt = criterion_options(o, cfg);
    if (sub == "lp") {
      cfg["p"] = o.p;
      v = lp_criterion(mu, o.p, idx, P, copt);
    } else if (sub == "l1") {
      v = l1_criterion(mu, idx, P, copt);
    } else {
      v = cw_discrete_criterion(mu, idx, P, copt);
    }
  } else {
    if (o.weight.empty()) throw InputError("--weight is required");
    cfg["weight"] = o.weight;
    const WeightSpec W = io::weight_from_json(io::load_json(o.weight));
    HallOptions h;
    cfg["hall"] = {{"max_doublings", h.max_doublings},
                   {"ratio_limit", h.ratio_limit},
                   {"tail_relative", h.tail_relative}};
    if (sub == "hall") {
      v = hall_criterion(W, h);
    } else {
      CarlesonOptions c;
      c.hall = h;
      cfg["convexity_grid"] = "default";
      cfg["evenness_tolerance"] = c.evenness_tolerance;
      v = carleson_verdict(W, c);
    }
  }
  emit(g, "density " + sub, cfg, io::to_json(v));
}

void cmd_measure(const std::string& sub, const Options& o, const Global& g) {
  json cfg;
  if (sub == "build") {
    cfg["sequence"] = o.sequence;
    const DiscreteSequence seq = load_sequence(o.sequence);
    const auto P = obtain_charseq(seq, o, g, cfg);
    const DiscreteMeasure mu = masses_from_charseq(seq, P);
    emit(g, "measure build", cfg, io::to_json(mu), io::to_csv(mu));
    return;
  }
  const DiscreteMeasure mu = obtain_measure(o, g, cfg);
  if (sub == "cauchy") {
    const auto zs = points_or(o.z, {cplx(0.0, 1.0)});
    cfg["z"] = points_json(zs);
    cfg["modified"] = o.modified;
    json rows = json::array();
    for (cplx z : zs) {
      const ScaledComplex s = o.modified ? modified_cauchy_transform_scaled(mu, z) : cauchy_transform_scaled(mu, z);
      json r = io::to_json(s);
      r["z"] = io::complex_json(z);
      rows.push_back(r);
    }
    emit(g, "measure cauchy", cfg, rows);
  } else {
    cfg["kmax"] = o.kmax;
    cfg["tolerance"] = o.moment_tolerance;
    emit(g, "measure moments", cfg, io::to_json(annihilation_report(mu, o.kmax, o.moment_tolerance)));
  }
}

void cmd_entire(const std::string& sub, const Options& o, const Global& g) {
  json cfg{{"sequence", o.sequence}};
  const DiscreteSequence seq = load_sequence(o.sequence);
  if (sub == "eval") {
    const auto zs = points_or(o.z, {cplx(0.0, 1.0)});
    cfg["z"] = points_json(zs);
    cfg["N"] = o.N;
    json rows = json::array();
    std::string csv = "z_re,z_im,log_abs,phase_or_sign,N\n";
    for (cplx z : zs) {
      const ProductEvaluation p = product_eval(seq, o.N, z);
      json r = io::to_json(p);
      r["z"] = io::complex_json(z);
      rows.push_back(r);
      const double ps = z.imag() == 0.0 ? static_cast<double>(p.sign) : p.phase;
      csv += io::format_csv(z.real()) + "," + io::format_csv(z.imag()) + "," + io::format_csv(p.log_abs) + "," +
             io::format_csv(ps) + "," + std::to_string(p.truncation) + "\n";
    }
    emit(g, "entire eval", cfg, rows, csv);
  } else if (sub == "residues") {
    const auto [lo, hi] = resolve_range(seq, o.range);
    cfg["range"] = {lo, hi};
    cfg["N"] = o.N;
    json rows = json::array();
    for (std::int64_t n = lo; n <= hi; ++n) {
      const ResidueLog r = residue_log(seq, o.N, n);
      rows.push_back(json{{"index", n}, {"lambda", io::number(seq.at(n))}, {"log_abs", io::number(r.log_abs)},
                          {"sign", r.sign}});
    }
    emit(g, "entire residues", cfg, rows);
  } else if (sub == "identity") {
    std::vector<cplx> def;
    for (int k = 0; k < 5; ++k) def.push_back(std::polar(2.0, std::numbers::pi * (0.1 + 0.2 * k)));
    const auto zs = points_or(o.z, def);
    cfg["z"] = points_json(zs);
    cfg["tolerance"] = o.identity_tolerance;
    const auto P = obtain_charseq(seq, o, g, cfg);
    emit(g, "entire identity", cfg, io::to_json(identity_F_equals_cK(seq, P, zs, o.identity_tolerance)));
  } else {
    const auto P = obtain_charseq(seq, o, g, cfg);
    std::int64_t lo = P.entries().front().index, hi = P.entries().back().index;
    if (!o.tail.empty()) std::tie(lo, hi) = parse_range(o.tail, "--tail");
    cfg["tail"] = {lo, hi};
    emit(g, "entire classify", cfg, io::to_json(classify_zero_set(seq, P, lo, hi)));
  }
}

void cmd_verify(const std::string& sub, const Options& o, const Global& g) {
  json cfg;
  if (sub == "annihilation") {
    const DiscreteMeasure mu = obtain_measure(o, g, cfg);
    cfg["kmax"] = o.kmax;
    cfg["tolerance"] = o.moment_tolerance;
    json res = io::to_json(annihilation_report(mu, o.kmax, o.moment_tolerance));
    json shifts = json::array();
    for (int k = 1; k <= o.kmax; ++k) {
      const ShiftIdentity s = moment_shift_identity(mu, k, cplx(0.0, 2.0));
      shifts.push_back(json{{"k", k}, {"relative", io::number(s.relative)}});
    }
    res["shift_identity_at_2i"] = shifts;
    emit(g, "verify annihilation", cfg, res);
  } else if (sub == "decay") {
    const DiscreteMeasure mu = obtain_measure(o, g, cfg);
    const auto ys = o.ys.empty() ? default_decay_ys() : o.ys;
    cfg["ys"] = ys;
    cfg["nmax"] = o.nmax;
    cfg["omitted_mass_bound"] = o.omitted;
    DecayOptions d;
    d.omitted_mass_bound = o.omitted;
    d.threads = g.threads;
    emit(g, "verify decay", cfg, io::to_json(decay_profile(mu, ys, o.nmax, d)));
  } else if (sub == "extreme") {
    const DiscreteMeasure mu = obtain_measure(o, g, cfg);
    const auto box = parse_list(o.box, "--box");
    if (box.size() != 4) throw InputError("--box: expected re_lo,re_hi,im_lo,im_hi");
    const auto ys = o.ys.empty() ? default_decay_ys() : o.ys;
    cfg["box"] = box;
    cfg["nx"] = o.nx;
    cfg["ny"] = o.ny;
    cfg["kmax"] = o.kmax;
    cfg["ys"] = ys;
    cfg["nmax"] = o.nmax;
    const auto grid = rectangular_grid(box[0], box[1], box[2], box[3], o.nx, o.ny);
    emit(g, "verify extreme", cfg, io::to_json(extreme_property_check(mu, grid, o.kmax, ys, o.nmax, g.threads)));
  } else if (sub == "aintegral") {
    const auto sched = a_schedule(o);
    const auto zs = points_or(o.z, {cplx(0, 1), cplx(1, 1), cplx(0, 2)});
    cfg["A_schedule"] = sched;
    cfg["z"] = points_json(zs);
    FunctionPair fp;
    if (!o.h_file.empty() || !o.conj_file.empty()) {
      if (o.h_file.empty() || o.conj_file.empty()) throw InputError("--function and --conjugate must be given together");
      cfg["h"] = o.h_file;
      cfg["conj"] = o.conj_file;
      fp.h = io::sampled_function_from_json(io::load_json(o.h_file));
      fp.conj = io::sampled_function_from_json(io::load_json(o.conj_file));
    } else if (o.pair == "step" || o.pair == "mismatched") {
      cfg["pair"] = o.pair;
      cfg["lambda"] = o.lambda;
      fp = o.pair == "step" ? step_conjugate_pair(o.lambda) : mismatched_pair(o.lambda);
    } else {
      throw InputError("--pair: expected step or mismatched");
    }
    json res{{"titchmarsh", io::to_json(titchmarsh_check(fp.h, fp.conj, sched))},
             {"ulyanov", io::to_json(ulyanov_check(fp.h, fp.conj, zs, sched))}};
    json a = json::array();
    for (cplx z : zs) {
      json r = io::to_json(cauchy_A_integral(fp.conj, z, sched));
      r["z"] = io::complex_json(z);
      a.push_back(r);
    }
    res["conjugate_A_integrals"] = a;
    emit(g, "verify aintegral", cfg, res);
  } else {
    if (o.one_sided && o.two_sided) throw InputError("--one-sided and --two-sided are exclusive");
    ConjugateModel m{!o.one_sided, o.alpha};
    ComparisonOptions c;
    if (!o.range.empty()) std::tie(c.n_lo, c.n_hi) = parse_range(o.range, "--range");
    c.count = o.count;
    c.N = o.N > 0 ? o.N : o.count;
    c.accelerate = !o.no_accelerate;
    c.include_zero = !o.no_zero;
    c.threads = g.threads;
    cfg = {{"alpha", o.alpha},     {"two_sided", m.two_sided}, {"range", {c.n_lo, c.n_hi}}, {"count", c.count},
           {"N", c.N},             {"accelerate", c.accelerate}, {"include_zero", c.include_zero}};
    const ComparisonReport r = compare_p_vs_conjugate(m, c);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    emit(g, "verify asymptotics", cfg, io::to_json(r), io::to_csv(r));
  }
}

void cmd_demo(const Options& o, const Global& g) {
  PowerDemoOptions p;
  p.count = o.count;
  p.index_range = o.index_range;
  p.N = o.N;
  p.hall_c = o.hall_fraction;
  p.threads = g.threads;
  json cfg{{"c", o.c},          {"alpha", o.alpha},       {"count", p.count},
           {"index_range", p.index_range}, {"N", p.N}, {"hall_fraction", p.hall_c},
           {"bisection_steps", p.bisection_steps}};
  criterion_options(o, cfg);
  p.criterion.density_threshold = o.density_threshold;
  p.criterion.balance_tolerance = o.balance_tolerance;
  emit(g, "demo power-weight", cfg, io::to_json(power_weight_demo(o.c, o.alpha, p)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic sequences, weights and density criteria"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  Options o;

  app.add_option("--threads", g.threads, "Worker threads (0: CHARSEQ_KIT_THREADS or hardware)");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the timestamp field from reports");
  app.add_option("--seed", g.seed, "Reserved; all computations are deterministic");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Output path (- for stdout)");

  auto seq_opts = [&](CLI::App* c) {
    c->add_option("--sequence", o.sequence, "Sequence spec JSON");
    c->add_option("--range", o.range, "Natural index range lo:hi");
    c->add_option("--N", o.N, "Truncation window (0: full)");
    c->add_flag("--accelerate", o.accelerate, "Aitken acceleration over window doublings");
    c->add_option("--collision-ratio", o.collision_ratio, "Near-collision flag threshold");
  };
  auto crit_opts = [&](CLI::App* c) {
    c->add_option("--charseq", o.charseq, "Characteristic sequence JSON (skips computation)");
    c->add_option("--windows", o.windows, "Balance windows")->delimiter(',');
    c->add_option("--radii", o.radii, "Density radii")->delimiter(',');
    c->add_option("--balance-tolerance", o.balance_tolerance);
    c->add_option("--density-threshold", o.density_threshold);
  };
  auto measure_opts = [&](CLI::App* c) {
    c->add_option("--measure", o.measure, "Measure JSON or CSV");
    seq_opts(c);
  };

  auto* charseq = app.add_subcommand("charseq", "Characteristic values");
  seq_opts(charseq);

  auto* balance = app.add_subcommand("balance", "Balance and zero-density checks");
  balance->add_option("--sequence", o.sequence, "Sequence spec JSON");
  balance->add_option("--windows", o.windows, "Balance windows")->delimiter(',');
  balance->add_option("--radii", o.radii, "Density radii")->delimiter(',');
  balance->add_option("--balance-tolerance", o.balance_tolerance);
  balance->add_option("--density-threshold", o.density_threshold);

  auto* density = app.add_subcommand("density", "Density criteria");
  density->require_subcommand(1);
  std::string density_sub;
  for (const char* name : {"main", "simplified", "lp", "l1", "cw", "hall", "carleson"}) {
    auto* s = density->add_subcommand(name);
    const std::string n = name;
    if (n == "main" || n == "simplified") {
      s->add_option("--weight", o.weight, "Weight spec JSON");
      seq_opts(s);
      crit_opts(s);
      if (n == "simplified") s->add_option("--fit", o.fit, "Fit index range lo:hi");
    } else if (n == "lp" || n == "l1" || n == "cw") {
      s->add_option("--measure", o.measure, "Positive measure JSON or CSV");
      s->add_option("--subseq", o.subseq, "JSON array of natural indices");
      s->add_option("--range", o.range, "Index range of the subsequence for characteristic values");
      s->add_option("--N", o.N, "Truncation window (0: full)");
      s->add_flag("--accelerate", o.accelerate);
      crit_opts(s);
      if (n == "lp") s->add_option("--p", o.p, "Exponent p >= 1");
    } else {
      s->add_option("--weight", o.weight, "Weight spec JSON");
    }
    s->callback([&density_sub, n] { density_sub = n; });
  }

  auto* measure = app.add_subcommand("measure", "Discrete measures");
  measure->require_subcommand(1);
  std::string measure_sub;
  {
    auto* b = measure->add_subcommand("build", "Masses from characteristic values");
    seq_opts(b);
    b->add_option("--charseq", o.charseq);
    b->callback([&] { measure_sub = "build"; });
    auto* c = measure->add_subcommand("cauchy", "Cauchy transforms");
    measure_opts(c);
    c->add_option("--z", o.z, "Evaluation point re,im (repeatable)");
    c->add_flag("--modified", o.modified, "Modified kernel");
    c->callback([&] { measure_sub = "cauchy"; });
    auto* m = measure->add_subcommand("moments", "Moment residuals");
    measure_opts(m);
    m->add_option("--kmax", o.kmax);
    m->add_option("--tolerance", o.moment_tolerance);
    m->callback([&] { measure_sub = "moments"; });
  }

  auto* entire = app.add_subcommand("entire", "Canonical products");
  entire->require_subcommand(1);
  std::string entire_sub;
  for (const char* name : {"eval", "residues", "identity", "classify"}) {
    auto* s = entire->add_subcommand(name);
    const std::string n = name;
    seq_opts(s);
    if (n == "eval" || n == "identity") s->add_option("--z", o.z, "Evaluation point re,im (repeatable)");
    if (n == "identity") s->add_option("--tolerance", o.identity_tolerance);
    if (n == "identity" || n == "classify") s->add_option("--charseq", o.charseq);
    if (n == "classify") s->add_option("--tail", o.tail, "Tail index range lo:hi");
    s->callback([&entire_sub, n] { entire_sub = n; });
  }

  auto* verify = app.add_subcommand("verify", "Verification suites");
  verify->require_subcommand(1);
  std::string verify_sub;
  {
    auto* a = verify->add_subcommand("annihilation");
    measure_opts(a);
    a->add_option("--kmax", o.kmax);
    a->add_option("--tolerance", o.moment_tolerance);
    a->callback([&] { verify_sub = "annihilation"; });
    auto* d = verify->add_subcommand("decay");
    measure_opts(d);
    d->add_option("--ys", o.ys, "Heights y")->delimiter(',');
    d->add_option("--nmax", o.nmax);
    d->add_option("--omitted", o.omitted, "Bound on omitted total variation");
    d->callback([&] { verify_sub = "decay"; });
    auto* e = verify->add_subcommand("extreme");
    measure_opts(e);
    e->add_option("--kmax", o.kmax);
    e->add_option("--ys", o.ys, "Heights y")->delimiter(',');
    e->add_option("--nmax", o.nmax);
    e->add_option("--box", o.box, "Grid box re_lo,re_hi,im_lo,im_hi");
    e->add_option("--nx", o.nx);
    e->add_option("--ny", o.ny);
    e->callback([&] { verify_sub = "extreme"; });
    auto* ai = verify->add_subcommand("aintegral");
    ai->add_option("--pair", o.pair, "Built-in pair: step or mismatched");
    ai->add_option("--lambda", o.lambda, "Step location");
    ai->add_option("--function", o.h_file, "Sampled function JSON");
    ai->add_option("--conjugate", o.conj_file, "Sampled conjugate JSON");
    ai->add_option("--A-schedule", o.a_schedule, "Truncation levels, comma separated");
    ai->add_option("--z", o.z, "Evaluation point re,im (repeatable)");
    ai->callback([&] { verify_sub = "aintegral"; });
    auto* as = verify->add_subcommand("asymptotics");
    as->add_option("--alpha", o.alpha);
    as->add_flag("--one-sided", o.one_sided);
    as->add_flag("--two-sided", o.two_sided);
    as->add_option("--range", o.range, "Generator base range lo:hi");
    as->add_option("--count", o.count);
    as->add_option("--N", o.N, "Truncation window (0: count)");
    as->add_flag("--no-accelerate", o.no_accelerate);
    as->add_flag("--no-zero", o.no_zero, "Do not materialize the point 0");
    as->callback([&] { verify_sub = "asymptotics"; });
  }

  auto* demo = app.add_subcommand("demo", "Demonstrations");
  demo->require_subcommand(1);
  auto* pw = demo->add_subcommand("power-weight", "exp(c|x|^alpha) on the two-sided power sequence");
  pw->add_option("--c", o.c);
  pw->add_option("--alpha", o.alpha);
  pw->add_option("--count", o.count);
  pw->add_option("--index-range", o.index_range);
  pw->add_option("--N", o.N);
  pw->add_option("--hall-fraction", o.hall_fraction);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*charseq) {
      cmd_charseq(o, g);
    } else if (*balance) {
      cmd_balance(o, g);
    } else if (*density) {
      cmd_density(density_sub, o, g);
    } else if (*measure) {
      cmd_measure(measure_sub, o, g);
    } else if (*entire) {
      cmd_entire(entire_sub, o, g);
    } else if (*verify) {
      cmd_verify(verify_sub, o, g);
    } else if (*demo) {
      cmd_demo(o, g);
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
