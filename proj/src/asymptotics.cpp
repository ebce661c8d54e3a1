#include "csk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>

#include "csk/errors.hpp"
#include "csk/weights.hpp"

namespace csk {

namespace {

constexpr double pi = std::numbers::pi;

void check_n(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) throw InputError("conjugate: n must be >= 1");
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  if (x.size() < 2) return {};
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return {0.0, my};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

double conjugate_one_sided(double alpha, double n) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw InputError("conjugate_one_sided: alpha must lie in (0, 1/2]");
  check_n(n);
  if (alpha == 0.5) return 0.0;
  return -pi * n * std::tan(alpha * pi - pi / 2);
}

double conjugate_two_sided(double alpha, double n) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("conjugate_two_sided: alpha must lie in (0, 1]");
  check_n(n);
  if (alpha == 1.0) return 0.0;
  return -pi * n * std::tan(alpha * pi / 2 - pi / 2);
}

double ConjugateModel::conjugate(double n) const {
  return two_sided ? conjugate_two_sided(alpha, n) : conjugate_one_sided(alpha, n);
}

double ConjugateModel::slope() const { return std::fabs(conjugate(1.0)); }

ComparisonReport compare_p_vs_conjugate(const ConjugateModel& model, const ComparisonOptions& opt) {
  model.conjugate(1.0);  // validates alpha
  if (opt.n_lo < 1 || opt.n_hi < opt.n_lo) throw InputError("compare_p_vs_conjugate: need 1 <= n_lo <= n_hi");
  if (opt.count < 2) throw InputError("compare_p_vs_conjugate: count must be >= 2");
  if (opt.n_hi > opt.count) throw InputError("compare_p_vs_conjugate: n range exceeds the materialized count");

  ComparisonReport rep;
  rep.model = model;
  rep.count = opt.count;
  rep.N = opt.N;
  rep.accelerate = opt.accelerate;
  rep.include_zero = opt.include_zero;
  if (opt.n_hi * 10 > opt.count) {
    std::ostringstream os;
    os << "n_max = " << opt.n_hi << " exceeds count/10 = " << opt.count / 10
       << "; values near the truncation edge are biased";
    rep.warnings.push_back(os.str());
  }

  const DiscreteSequence seq =
      materialize(SequenceSpec::power(model.alpha, model.two_sided, static_cast<std::size_t>(opt.count),
                                      opt.include_zero));
  // natural index of the generator base k
  const std::int64_t shift = opt.include_zero ? 0 : -1;
  std::vector<std::int64_t> indices;
  for (std::int64_t k = opt.n_lo; k <= opt.n_hi; ++k) indices.push_back(k + shift);
  CharOptions co;
  co.N = opt.N;
  co.accelerate = opt.accelerate;
  const CharacteristicSequence P = char_sequence(seq, indices, co, opt.threads);

  double plus = 0.0, minus = 0.0;
  for (std::int64_t k = opt.n_lo; k <= opt.n_hi; ++k) {
    const CharEntry* e = P.find(k + shift);
    ComparisonRow r;
    r.n = k;
    r.lambda = e->lambda;
    r.p = e->p;
    r.conj = model.conjugate(static_cast<double>(k));
    r.residual_plus = r.p - r.conj;
    r.residual_minus = r.p + r.conj;
    r.ratio = r.conj == 0.0 ? std::numeric_limits<double>::infinity() : std::fabs(r.p) / std::fabs(r.conj);
    plus += std::fabs(r.residual_plus);
    minus += std::fabs(r.residual_minus);
    rep.rows.push_back(r);
  }
  rep.sign = plus <= minus ? 1 : -1;
  rep.sign_stable = std::all_of(rep.rows.begin(), rep.rows.end(), [&](const ComparisonRow& r) {
    const double own = std::fabs(r.p - rep.sign * r.conj);
    const double other = std::fabs(r.p + rep.sign * r.conj);
    return own <= other;
  });

  std::vector<double> logl, res, logres_x, logres_y;
  rep.ratio_min = rep.logfit_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = rep.logfit_max = -std::numeric_limits<double>::infinity();
  for (auto& r : rep.rows) {
    const double d = r.p - rep.sign * r.conj;
    const double ll = std::log(r.lambda);
    r.logfit = ll > 0.0 ? std::fabs(d) / ll : std::numeric_limits<double>::infinity();
    rep.ratio_min = std::min(rep.ratio_min, r.ratio);
    rep.ratio_max = std::max(rep.ratio_max, r.ratio);
    rep.logfit_min = std::min(rep.logfit_min, r.logfit);
    rep.logfit_max = std::max(rep.logfit_max, r.logfit);
    logl.push_back(ll);
    res.push_back(d);
    if (d != 0.0 && ll > 0.0) {
      logres_x.push_back(ll);
      logres_y.push_back(std::log(std::fabs(d)));
    }
  }
  const LineFit lf = least_squares(logl, res);
  rep.log_coefficient = lf.slope;
  rep.log_intercept = lf.intercept;
  rep.fit_exponent = least_squares(logres_x, logres_y).slope;
  return rep;
}

PowerDemoData power_demo_data(double alpha, const PowerDemoOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("power_weight_demo: alpha must lie in (0, 1]");
  if (opt.count < 8) throw InputError("power_weight_demo: count must be >= 8");
  if (opt.index_range < 4) throw InputError("power_weight_demo: index_range must be >= 4");
  PowerDemoData d;
  d.seq = materialize(SequenceSpec::power(alpha, true, static_cast<std::size_t>(opt.count)));
  const std::int64_t lo = std::max(d.seq.first_index(), -opt.index_range);
  const std::int64_t hi = std::min(d.seq.last_index(), opt.index_range);
  CharOptions co;
  co.N = opt.N;
  co.accelerate = false;
  d.P = char_sequence(d.seq, lo, hi, co, opt.threads);
  return d;
}

PowerDemoReport power_weight_demo(double c, double alpha, const PowerDemoOptions& opt) {
  return power_weight_demo(c, alpha, power_demo_data(alpha, opt), opt);
}

PowerDemoReport power_weight_demo(double c, double alpha, const PowerDemoData& data, const PowerDemoOptions& opt) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("power_weight_demo: c must be finite and > 0");
  PowerDemoReport rep;
  rep.alpha = alpha;
  rep.c = c;
  rep.closed_form = std::fabs(conjugate_two_sided(alpha, 1.0));

  auto verdict_at = [&](double cc) { return main_criterion(WeightSpec::exp_power(cc, alpha), data.seq, data.P, opt.criterion); };
  auto witnessed = [&](double cc) { return verdict_at(cc).outcome == Outcome::witnessed; };

  rep.verdict = verdict_at(c);

  double lo = 1e-3 * std::max(1.0, rep.closed_form);
  double hi = std::max(1.0, 2.0 * rep.closed_form);
  if (witnessed(lo)) {
    int grow = 0;
    while (witnessed(hi) && grow < 20) {
      lo = hi;
      hi *= 2.0;
      ++grow;
    }
    if (!witnessed(hi)) {
      for (int i = 0; i < opt.bisection_steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        (witnessed(mid) ? lo : hi) = mid;
      }
      rep.flip_found = true;
      rep.c_star = 0.5 * (lo + hi);
    }
  }
  if (rep.flip_found && rep.closed_form > 0.0)
    rep.relative_gap = std::fabs(rep.c_star - rep.closed_form) / rep.closed_form;
  else if (rep.flip_found)
    rep.relative_gap = std::fabs(rep.c_star);

  const double small = opt.hall_c * (rep.closed_form > 0.0 ? rep.closed_form : 1.0);
  rep.small_c_verdict = verdict_at(small);
  rep.hall_verdict = hall_criterion(WeightSpec::exp_power(small, alpha));
  return rep;
}

}  // namespace csk
