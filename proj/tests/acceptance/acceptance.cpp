// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "csk/aintegral.hpp"
#include "csk/asymptotics.hpp"
#include "csk/charseq.hpp"
#include "csk/criteria.hpp"
#include "csk/entire.hpp"
#include "csk/measures.hpp"
#include "csk/sequences.hpp"
#include "csk/weights.hpp"

using namespace csk;

namespace {

constexpr double pi = std::numbers::pi;

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::max(std::fabs(a), std::fabs(b))); }

std::vector<double> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> pts;
  while (pts.size() < n) {
    const double x = u(rng);
    bool ok = true;
    for (double y : pts) ok = ok && std::fabs(x - y) > 1e-3;
    if (ok) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

// Σ_{k≠n} ½ log((1+λk²)/(λk-λn)²) + ½ log(1+λn²), far terms first, Kahan in long double
double brute_p(std::span<const double> pts, std::size_t pos) {
  const long double x = pts[pos];
  long double s = 0.0L, c = 0.0L;
  auto add = [&](long double v) {
    const long double y = v - c;
    const long double t = s + y;
    c = (t - s) - y;
    s = t;
  };
  for (std::size_t i = pts.size(); i-- > 0;) {
    if (i == pos) continue;
    const long double t = pts[i];
    add(0.5L * std::log((1.0L + t * t) / ((t - x) * (t - x))));
  }
  add(0.5L * std::log(1.0L + x * x));
  return static_cast<double>(s);
}

Result a1() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> len(3, 40);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = random_points(rng, static_cast<std::size_t>(len(rng)));
    const auto s = materialize(SequenceSpec::explicit_list(pts));
    for (std::int64_t n = s.first_index(); n <= s.last_index(); ++n) {
      const double p = char_value(s, n, CharOptions{}).p;
      worst = std::max(worst, rel_err(p, brute_p(s.points(), s.position(n))));
    }
  }
  return {worst <= 1e-12, fmt("max relative deviation %.3g (tol 1e-12)", worst)};
}

Result a2() {
  std::mt19937_64 rng(77);
  double res_dev = 0.0, ins_dev = 0.0;
  bool alternate = true, mirror = true;
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = random_points(rng, 30);
    const auto s = materialize(SequenceSpec::explicit_list(pts));
    for (std::int64_t N : {2, 5, 9, 0}) {
      const auto ev = product_eval(s, N, cplx(0.0, 1.0));
      // matched window: the same points as a sequence of their own, full window
      std::vector<double> win;
      for (std::int64_t k = ev.lo; k <= ev.hi; ++k) win.push_back(s.at(k));
      const DiscreteSequence sub(win);
      for (std::int64_t n = ev.lo; n <= ev.hi; ++n) {
        const auto r = residue_log(s, N, n);
        res_dev = std::max(res_dev, rel_err(r.log_abs, char_value(sub, n, CharOptions{}).p));
        if (n > ev.lo && r.sign != -residue_log(s, N, n - 1).sign) alternate = false;
      }
    }
    std::uniform_real_distribution<double> u(-60.0, 60.0);
    for (int k = 0; k < 5; ++k) {
      const double a = u(rng);
      bool clear = true;
      for (double x : pts) clear = clear && std::fabs(x - a) > 1e-3;
      if (!clear) continue;
      auto more = pts;
      more.push_back(a);
      std::sort(more.begin(), more.end());
      const auto t = materialize(SequenceSpec::explicit_list(more));
      for (std::int64_t n = s.first_index(); n <= s.last_index(); ++n) {
        const double x = s.at(n);
        const auto m = *t.find(x);
        const double direct = char_value(t, m, CharOptions{}).p - char_value(s, n, CharOptions{}).p;
        ins_dev = std::max(ins_dev, rel_err(insertion_delta(s, n, a), direct));
      }
    }
    std::vector<double> pos;
    for (double x : pts) {
      if (x > 0.5) pos.push_back(x);
    }
    const auto e = materialize(SequenceSpec::even_mirror(pos));
    for (std::int64_t n = 0; n <= e.last_index(); ++n) {
      if (char_value(e, n, CharOptions{}).p != char_value(e, -n - 1, CharOptions{}).p) mirror = false;
    }
  }
  const bool pass = res_dev <= 1e-12 && alternate && ins_dev <= 1e-12 && mirror;
  return {pass, fmt("residue %.3g, signs %s, insertion %.3g, mirror %s", res_dev, alternate ? "alternate" : "BROKEN",
                    ins_dev, mirror ? "exact" : "BROKEN")};
}

Result a3() {
  const auto rep = compare_p_vs_conjugate(ConjugateModel{false, 1.0 / 3.0}, ComparisonOptions{});
  bool inside = true;
  std::int64_t first_in = -1;
  for (const auto& r : rep.rows) {
    const bool ok = r.ratio >= 0.9 && r.ratio <= 1.1;
    inside = inside && ok;
    if (ok && first_in < 0) first_in = r.n;
  }
  return {inside && rep.sign_stable,
          fmt("ratio |p|/(pi n/sqrt3) in [%.4f, %.4f] (target [0.9, 1.1]); sign %+d %s; first n inside %lld; "
              "fit exponent %.3f",
              rep.ratio_min, rep.ratio_max, rep.sign, rep.sign_stable ? "stable" : "unstable",
              static_cast<long long>(first_in), rep.fit_exponent)};
}

Result a4() {
  const auto s = materialize(SequenceSpec::power(1.0 / 3.0, true, 1000));
  const auto P = char_sequence(s, s.first_index(), s.last_index(), CharOptions{});
  std::vector<cplx> zs;
  for (int k = 0; k < 5; ++k) zs.push_back(std::polar(2.0, pi * (0.1 + 0.2 * k)));
  const auto big = identity_F_equals_cK(s, P, zs, 1e-6);

  const auto toy = materialize(SequenceSpec::explicit_list({0.0, 1.0}));
  const auto Pt = char_sequence(toy, 0, 1, CharOptions{});
  const auto small = identity_F_equals_cK(toy, Pt, zs, 1e-12);
  return {big.identity_consistent && small.identity_consistent,
          fmt("2000 atoms: deviation %.3g (tol 1e-6); two atoms: %.3g (tol 1e-12)", big.max_deviation,
              small.max_deviation)};
}

DiscreteMeasure extreme_measure(std::size_t per_side) {
  const auto s = materialize(SequenceSpec::power(1.0 / 3.0, true, per_side));
  const auto P = char_sequence(s, s.first_index(), s.last_index(), CharOptions{});
  return masses_from_charseq(s, P);
}

Result a5() {
  const auto mu = extreme_measure(1000);
  const auto mu2 = extreme_measure(2000);
  const auto ann = annihilation_report(mu, 4, 1e-3);
  const auto ann2 = annihilation_report(mu2, 4, 1e-3);
  double worst = 0.0, worst2 = 0.0;
  for (const auto& r : ann.rows) worst = std::max(worst, r.relative);
  for (const auto& r : ann2.rows) worst2 = std::max(worst2, r.relative);

  std::vector<double> ys;
  for (int k = 0; k < 16; ++k) ys.push_back(32.0 * std::ldexp(1.0, k));
  const auto d = decay_profile(mu, ys, 4);
  std::size_t trusted = 0;
  for (const auto& r : d.rows) trusted += r.trusted ? 1 : 0;
  bool monotone = trusted >= 3;
  for (bool b : d.order_monotone_all) monotone = monotone && b;
  const bool pass = ann.annihilation_consistent && worst2 < worst && monotone;
  return {pass, fmt("moment residual max %.3g (2000 atoms) -> %.3g (4000 atoms), %s (machine eps %.3g); %zu trusted "
                    "rows, y^n|K| non-increasing for n<=4: %s",
                    worst, worst2, worst2 < worst ? "decreasing" : "not decreasing",
                    std::numeric_limits<double>::epsilon(), trusted, monotone ? "yes" : "no")};
}

Result a6() {
  const auto Wh = WeightSpec::exp_power(1.0, 0.5);
  const auto hall = hall_criterion(Wh);
  const double est = hall.figures.at("estimate");
  const double exact = pi * std::sqrt(2.0);
  const auto& radii = hall.evidence.at("shell_radii");
  const auto& inc = hall.evidence.at("shell_increments");
  const double R = radii.back() / 2.0;
  const double model = 4.0 * (1.0 / std::sqrt(R) - 1.0 / std::sqrt(2.0 * R));
  const double shell_dev = std::fabs(inc.back() - model) / model;
  const auto car = carleson_verdict(Wh);

  const auto Wl = WeightSpec::exp_power(1.0, 1.0);
  const auto hall_l = hall_criterion(Wl);
  const auto car_l = carleson_verdict(Wl);
  const bool pass = hall.outcome == Outcome::witnessed && std::fabs(est - exact) / exact <= 0.01 && shell_dev <= 0.01 &&
                    car.outcome == Outcome::witnessed && hall_l.checks.at("divergence_flagged") &&
                    car_l.outcome == Outcome::witnessed_dense;
  return {pass, fmt("sqrt weight: integral %.6f vs pi*sqrt2 %.6f, last shell off the x^-3/2 model by %.2g, carleson %s; "
                    "linear weight: divergence %s, carleson %s",
                    est, exact, shell_dev, to_string(car.outcome).c_str(),
                    hall_l.checks.at("divergence_flagged") ? "flagged" : "not flagged",
                    to_string(car_l.outcome).c_str())};
}

Result a7() {
  PowerDemoOptions opt;
  const auto data = power_demo_data(0.5, opt);
  const auto at09 = power_weight_demo(0.9 * pi, 0.5, data, opt);
  const auto v15 = main_criterion(WeightSpec::exp_power(1.5 * pi, 0.5), data.seq, data.P, opt.criterion);
  const bool pass = at09.flip_found && at09.relative_gap <= 0.15 && at09.verdict.outcome == Outcome::witnessed &&
                    v15.outcome == Outcome::not_witnessed && at09.small_c_verdict.outcome == Outcome::witnessed &&
                    at09.hall_verdict.outcome == at09.small_c_verdict.outcome;
  return {pass, fmt("c* = %.5f vs pi (gap %.2f%%); 0.9pi %s; 1.5pi %s; small c %s, hall %s", at09.c_star,
                    100.0 * at09.relative_gap, to_string(at09.verdict.outcome).c_str(),
                    to_string(v15.outcome).c_str(), to_string(at09.small_c_verdict.outcome).c_str(),
                    to_string(at09.hall_verdict.outcome).c_str())};
}

Result a8() {
  const auto schedule = default_a_schedule();
  const auto pair = step_conjugate_pair(1.0);
  const auto t = titchmarsh_check(pair.h, pair.conj, schedule);
  const std::vector<cplx> zs{cplx(0, 1), cplx(1, 1), cplx(0, 2)};
  const auto u = ulyanov_check(pair.h, pair.conj, zs, schedule);
  bool u_trend = true;
  for (const auto& tab : u.tables) u_trend = u_trend && tab.nonincreasing_tail;

  const auto bad = mismatched_pair(1.0);
  const auto tb = titchmarsh_check(bad.h, bad.conj, schedule);
  const auto ub = ulyanov_check(bad.h, bad.conj, zs, schedule);
  bool plateau = true;
  for (std::size_t i = tb.residuals.size() - 3; i < tb.residuals.size(); ++i) plateau = plateau && tb.residuals[i] > 0.1;
  const bool pass = t.final_residual < 1e-3 && t.nonincreasing_tail && u.max_final_residual < 1e-3 && plateau &&
                    ub.max_final_residual > 0.1;
  return {pass, fmt("titchmarsh %.3g (%s), ulyanov max %.3g (trend %s); control: titchmarsh %.3g, ulyanov %.3g",
                    t.final_residual, t.nonincreasing_tail ? "non-increasing" : "INCREASING", u.max_final_residual,
                    u_trend ? "non-increasing" : "mixed", tb.final_residual, ub.max_final_residual)};
}

Result a9() {
  const auto s = materialize(SequenceSpec::power(0.5, true, 400, true));
  const auto P = char_sequence(s, s.first_index(), s.last_index(), CharOptions{});
  std::vector<std::function<double(const CharEntry&)>> lms{
      [](const CharEntry& e) { return e.p; },
      [](const CharEntry& e) { return e.p - std::log(1.0 + std::fabs(e.lambda)); },
      [](const CharEntry& e) { return -std::log(1.0 + e.lambda * e.lambda); },
      [](const CharEntry& e) { return 0.5 * e.p; }};
  std::vector<std::int64_t> sub;
  for (std::int64_t n = -200; n <= 200; n += 2) sub.push_back(n);
  bool scaling = true, agree = true;
  int runs = 0;
  for (const auto& lm : lms) {
    std::vector<Atom> atoms;
    for (const CharEntry& e : P.entries()) atoms.push_back(Atom{e.lambda, 1, lm(e)});
    const DiscreteMeasure mu = DiscreteMeasure(std::move(atoms)).normalize();
    const DiscreteMeasure sc = mu.scaled(7.3);
    const auto sm = restrict_measure(mu, sub);
    const auto Pg = char_sequence(sm.gamma, sm.gamma.first_index(), sm.gamma.last_index(), CharOptions{});
    const std::vector<std::int64_t>* gammas[] = {&sub, nullptr};
    for (const std::vector<std::int64_t>* g : gammas) {
      const std::span<const std::int64_t> gs = g ? std::span<const std::int64_t>(*g) : std::span<const std::int64_t>();
      const auto& PP = g ? Pg : P;
      scaling = scaling && lp_criterion(mu, 2.0, gs, PP).outcome == lp_criterion(sc, 2.0, gs, PP).outcome;
      scaling = scaling && lp_criterion(mu, 3.5, gs, PP).outcome == lp_criterion(sc, 3.5, gs, PP).outcome;
      scaling = scaling && l1_criterion(mu, gs, PP).outcome == l1_criterion(sc, gs, PP).outcome;
      scaling = scaling && cw_discrete_criterion(mu, gs, PP).outcome == cw_discrete_criterion(sc, gs, PP).outcome;
      runs += 4;
    }
    std::vector<double> lw;
    for (const Atom& a : mu.atoms()) lw.push_back(-a.log_mag);
    const auto m = main_criterion(WeightSpec::discrete_log(s, lw), s, P);
    const auto c = cw_discrete_criterion(mu, {}, P);
    agree = agree && m.outcome == c.outcome && m.figures.at("log_sum") == c.figures.at("log_sum");
  }
  return {scaling && agree, fmt("%d scaled corollary verdicts %s; main with W = 1/mu vs cw: %s", runs,
                                scaling ? "unchanged" : "CHANGED", agree ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Result()>>> all{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only A1..A9]\n");
      return 2;
    }
  }
  int failures = 0;
  bool ran = false;
  for (const auto& [name, fn] : all) {
    if (!only.empty() && only != name) continue;
    ran = true;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s  %s  [%.2f s]\n", name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str(), secs);
    std::fflush(stdout);
    failures += r.pass ? 0 : 1;
  }
  if (!ran) {
    std::fprintf(stderr, "unknown criterion: %s\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
