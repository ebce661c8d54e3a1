#include "csk/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "csk/errors.hpp"
#include "csk/summation.hpp"

namespace csk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SequenceChecks {
  DensityReport density;
  BalanceReport balance;
};

SequenceChecks run_sequence_checks(const DiscreteSequence& seq, const CriterionOptions& opt) {
  SequenceChecks c;
  const std::vector<double> radii = opt.density_radii.empty() ? default_density_schedule(seq) : opt.density_radii;
  const std::vector<std::int64_t> windows =
      opt.balance_windows.empty() ? default_balance_schedule(seq) : opt.balance_windows;
  c.density = upper_density(seq, radii, opt.density_threshold);
  c.balance = balance_partial_sums(seq, windows, opt.balance_tolerance);
  return c;
}

void attach_sequence_checks(Verdict& v, const SequenceChecks& c) {
  v.evidence["density_radii"] = c.density.radii;
  v.evidence["density_ratios"] = c.density.ratios;
  std::vector<double> w(c.balance.windows.begin(), c.balance.windows.end());
  v.evidence["balance_windows"] = w;
  v.evidence["balance_gaps"] = c.balance.gaps;
  v.figures["density_tail_sup"] = c.density.tail_sup;
  v.figures["density_threshold"] = c.density.threshold;
  v.figures["balance_tolerance"] = c.balance.tolerance;
  v.checks["zero_density_consistent"] = c.density.zero_density_consistent;
  v.checks["balanced_consistent"] = c.balance.balanced_consistent;
}

bool sequence_ok(const SequenceChecks& c) {
  return c.density.zero_density_consistent && c.balance.balanced_consistent;
}

// Entries of P ordered by increasing |λ| (stable in the index).
std::vector<const CharEntry*> by_modulus(const CharacteristicSequence& P) {
  std::vector<const CharEntry*> v;
  v.reserve(P.size());
  for (const CharEntry& e : P.entries()) v.push_back(&e);
  std::stable_sort(v.begin(), v.end(), [](const CharEntry* a, const CharEntry* b) {
    return std::fabs(a->lambda) < std::fabs(b->lambda);
  });
  return v;
}

void check_cover(const DiscreteSequence& seq, const CharacteristicSequence& P, Verdict& v) {
  if (P.empty()) throw InputError("criterion: empty characteristic sequence");
  for (const CharEntry& e : P.entries()) {
    if (!seq.has_index(e.index) || seq.at(e.index) != e.lambda) {
      std::ostringstream os;
      os << "criterion: characteristic sequence entry " << e.index << " does not match the sequence";
      throw InputError(os.str());
    }
  }
  if (P.size() < seq.size()) {
    std::ostringstream os;
    os << "sum restricted to the " << P.size() << " indices covered by the characteristic sequence (of "
       << seq.size() << " materialized)";
    v.notes.push_back(os.str());
  }
}

double half_sup(std::span<const double> v, bool tail) {
  const std::size_t h = v.size() / 2;
  double s = -kInf;
  for (std::size_t i = tail ? h : 0; i < (tail ? v.size() : h); ++i) s = std::max(s, v[i]);
  return s;
}

}  // namespace

SupNorm weighted_sup_norm(std::span<const double> xs, std::span<const double> fs, const WeightSpec& W) {
  if (xs.size() != fs.size()) throw InputError("sup norm: sample sizes differ");
  SupNorm out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lw = W.log_value(xs[i]);
    if (std::isinf(lw)) continue;
    const double v = std::fabs(fs[i]) * std::exp(-lw);
    if (v > out.value) {
      out.value = v;
      out.argmax = xs[i];
    }
  }
  return out;
}

Verdict main_criterion(const WeightSpec& W, const DiscreteSequence& seq, const CharacteristicSequence& P,
                       const CriterionOptions& opt) {
  Verdict v;
  v.criterion = "main";
  v.tolerance = opt.rule.tail_relative;
  check_cover(seq, P, v);
  const auto order = by_modulus(P);
  v.truncation = static_cast<std::int64_t>(order.size());
  std::vector<double> terms;
  terms.reserve(order.size());
  for (const CharEntry* e : order) {
    const double lw = W.log_value(e->lambda);
    if (std::isinf(lw) && lw > 0) {
      std::ostringstream os;
      os << "W(λ) = +inf at index " << e->index << " (λ = " << e->lambda << "); this sequence meets {W = +inf}";
      v.notes.push_back(os.str());
      v.checks["infinite_term"] = true;
      v.outcome = Outcome::not_witnessed;
      return v;
    }
    terms.push_back(lw + e->p);
  }
  const SeriesAssessment s = assess_series(terms, opt.rule);
  attach_series(v, s, opt.rule);
  const SequenceChecks c = run_sequence_checks(seq, opt);
  attach_sequence_checks(v, c);
  v.outcome = (s.converged && sequence_ok(c)) ? Outcome::witnessed : Outcome::not_witnessed;
  return v;
}

Verdict nondegenerate_simplified(const WeightSpec& W, const DiscreteSequence& seq,
                                 const CharacteristicSequence& P, std::int64_t lo, std::int64_t hi,
                                 const CriterionOptions& opt) {
  if (W.degenerate()) throw InputError("simplified criterion: weight is degenerate; use the main criterion");
  Verdict v;
  v.criterion = "simplified";
  check_cover(seq, P, v);
  std::vector<const CharEntry*> sel;
  for (const CharEntry* e : by_modulus(P)) {
    if (e->index >= lo && e->index <= hi && std::fabs(e->lambda) >= 1.0) sel.push_back(e);
  }
  if (sel.size() < 4) throw InputError("simplified criterion: fewer than 4 entries with |λ| >= 1 in the fit range");
  std::vector<double> ratios;
  std::vector<double> lambdas;
  for (const CharEntry* e : sel) {
    const double lw = W.log_value(e->lambda);
    if (std::isinf(lw)) {
      v.notes.push_back("W = +inf on the fit range");
      v.outcome = Outcome::not_witnessed;
      return v;
    }
    ratios.push_back((lw + e->p) / (1.0 + std::log(std::fabs(e->lambda))));
    lambdas.push_back(e->lambda);
  }
  const double head = half_sup(ratios, false);
  const double tail = half_sup(ratios, true);
  const double C = std::max(0.0, *std::max_element(ratios.begin(), ratios.end()));
  const bool bounded = tail <= 1.1 * head + 0.1;
  v.evidence["lambda"] = lambdas;
  v.evidence["fit_ratio"] = ratios;
  v.figures["C"] = C;
  v.figures["head_sup"] = head;
  v.figures["tail_sup"] = tail;
  v.checks["bounded_fit"] = bounded;
  v.truncation = static_cast<std::int64_t>(sel.size());
  v.tolerance = 0.1;
  v.notes.push_back("bounded: tail-half sup <= 1.1 * head-half sup + 0.1");
  const SequenceChecks c = run_sequence_checks(seq, opt);
  attach_sequence_checks(v, c);
  v.outcome = (bounded && sequence_ok(c)) ? Outcome::witnessed : Outcome::not_witnessed;
  return v;
}

SubMeasure restrict_measure(const DiscreteMeasure& mu, std::span<const std::int64_t> subseq) {
  std::vector<std::size_t> pos;
  if (subseq.empty()) {
    pos.resize(mu.size());
    std::iota(pos.begin(), pos.end(), 0);
  } else {
    for (std::int64_t n : subseq) {
      const auto p = mu.position_of_index(n);
      if (!p) {
        std::ostringstream os;
        os << "subsequence index " << n << " is not an atom of the measure";
        throw InputError(os.str());
      }
      pos.push_back(*p);
    }
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
      throw InputError("subsequence indices repeat");
    }
  }
  std::vector<double> pts;
  SubMeasure out;
  for (std::size_t p : pos) {
    pts.push_back(mu.atoms()[p].t);
    out.log_mass.push_back(mu.atoms()[p].log_mag);
  }
  out.gamma = DiscreteSequence(std::move(pts));
  return out;
}

namespace {

void require_positive(const DiscreteMeasure& mu) {
  for (const Atom& a : mu.atoms()) {
    if (a.sign < 0) throw InputError("corollary criteria require a positive measure");
  }
}

// Builds log terms f(log μₙ, pₙ) over the entries of P in |λ| order.
template <class F>
std::vector<double> corollary_terms(const SubMeasure& sm, const CharacteristicSequence& P, Verdict& v, F f,
                                    std::vector<double>* lambdas = nullptr) {
  check_cover(sm.gamma, P, v);
  std::vector<double> terms;
  for (const CharEntry* e : by_modulus(P)) {
    const double lm = sm.log_mass[sm.gamma.position(e->index)];
    terms.push_back(f(lm, e->p));
    if (lambdas) lambdas->push_back(e->lambda);
  }
  return terms;
}

Verdict series_corollary(const std::string& name, const DiscreteMeasure& mu, std::span<const std::int64_t> subseq,
                         const CharacteristicSequence& P, const CriterionOptions& opt,
                         const std::function<double(double, double)>& f) {
  require_positive(mu);
  const SubMeasure sm = restrict_measure(mu, subseq);
  Verdict v;
  v.criterion = name;
  v.tolerance = opt.rule.tail_relative;
  const std::vector<double> terms = corollary_terms(sm, P, v, f);
  v.truncation = static_cast<std::int64_t>(terms.size());
  const SeriesAssessment s = assess_series(terms, opt.rule);
  attach_series(v, s, opt.rule);
  const SequenceChecks c = run_sequence_checks(sm.gamma, opt);
  attach_sequence_checks(v, c);
  v.outcome = (s.converged && sequence_ok(c)) ? Outcome::witnessed : Outcome::not_witnessed;
  return v;
}

}  // namespace

Verdict lp_criterion(const DiscreteMeasure& mu, double p, std::span<const std::int64_t> subseq,
                     const CharacteristicSequence& P, const CriterionOptions& opt) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("lp criterion: p must lie in (1, inf)");
  const double q = p / (p - 1.0);
  Verdict v = series_corollary("lp", mu, subseq, P, opt,
                               [q](double lm, double pn) { return (1.0 - q) * lm + q * pn; });
  v.figures["p"] = p;
  v.figures["q"] = q;
  return v;
}

Verdict cw_discrete_criterion(const DiscreteMeasure& mu, std::span<const std::int64_t> subseq,
                              const CharacteristicSequence& P, const CriterionOptions& opt) {
  return series_corollary("cw", mu, subseq, P, opt, [](double lm, double pn) { return pn - lm; });
}

Verdict l1_criterion(const DiscreteMeasure& mu, std::span<const std::int64_t> subseq,
                     const CharacteristicSequence& P, const CriterionOptions& opt) {
  require_positive(mu);
  const SubMeasure sm = restrict_measure(mu, subseq);
  Verdict v;
  v.criterion = "l1";
  std::vector<double> lambdas;
  const std::vector<double> terms =
      corollary_terms(sm, P, v, [](double lm, double pn) { return pn - lm; }, &lambdas);
  if (terms.size() < 4) throw InputError("l1 criterion: fewer than 4 entries");
  const double head = half_sup(terms, false);
  const double tail = half_sup(terms, true);
  const bool bounded = tail <= head + std::log(1.5);
  v.evidence["lambda"] = lambdas;
  v.evidence["log_ratio"] = terms;
  v.figures["head_log_sup"] = head;
  v.figures["tail_log_sup"] = tail;
  v.checks["bounded"] = bounded;
  v.truncation = static_cast<std::int64_t>(terms.size());
  v.tolerance = std::log(1.5);
  v.notes.push_back("bounded: tail-half sup of log(exp(p)/mu) <= head-half sup + log 1.5");
  const SequenceChecks c = run_sequence_checks(sm.gamma, opt);
  attach_sequence_checks(v, c);
  v.outcome = (bounded && sequence_ok(c)) ? Outcome::witnessed : Outcome::not_witnessed;
  return v;
}

namespace {

// ∫_a^b (α + βx)/(1+x²) dx for a linear piece
double linear_over_poisson(double a, double b, double fa, double fb) {
  const double beta = (fb - fa) / (b - a);
  const double alpha = fa - beta * a;
  const double datan = std::atan2(b - a, 1.0 + a * b);
  const double dlog = std::log1p((b - a) * (b + a) / (1.0 + a * a));
  return alpha * datan + 0.5 * beta * dlog;
}

double tabulated_integral(const WeightSpec& W, double a, double b) {
  const auto& tab = W.table();
  double sum = 0.0;
  double x0 = a;
  double f0 = W.log_value(a);
  for (const auto& [x, lw] : tab) {
    if (x <= a) continue;
    if (x >= b) break;
    sum += linear_over_poisson(x0, x, f0, lw);
    x0 = x;
    f0 = lw;
  }
  sum += linear_over_poisson(x0, b, f0, W.log_value(b));
  return sum;
}

}  // namespace

Verdict hall_criterion(const WeightSpec& W, const HallOptions& opt) {
  Verdict v;
  v.criterion = "hall";
  v.tolerance = opt.tail_relative;
  if (W.degenerate()) throw InputError("hall criterion: weight is degenerate (finite only on a discrete set)");

  double extent = kInf;
  if (W.kind() == WeightKind::tabulated) {
    const auto& tab = W.table();
    extent = std::min(-tab.front().first, tab.back().first);
    if (!(extent >= 1.0)) throw InputError("hall criterion: tabulated weight must cover [-1, 1]");
    for (std::size_t i = 1; i < tab.size(); ++i) {
      if ((tab[i].first - tab[i - 1].first) / (1.0 + std::fabs(tab[i - 1].first)) > opt.max_relative_gap) {
        std::ostringstream os;
        os << "hall criterion: tabulated gap at x=" << tab[i - 1].first << " too wide for quadrature";
        throw InputError(os.str());
      }
      if (std::isinf(tab[i].second) || std::isinf(tab[i - 1].second)) {
        v.notes.push_back("log W is +inf on part of the line; the Poisson integral diverges");
        v.checks["divergence_flagged"] = true;
        v.outcome = Outcome::not_witnessed;
        return v;
      }
    }
  }

  auto f = [&](double x) { return W.log_value(x) / (1.0 + x * x); };
  auto integrate = [&](double a, double b) {
    if (W.kind() == WeightKind::tabulated) return tabulated_integral(W, a, b);
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13, &err);
  };

  std::vector<double> radii;
  std::vector<double> increments;
  std::vector<double> cumulative;
  CompensatedSum total;
  const double core = integrate(-1.0, 1.0);
  if (!std::isfinite(core)) throw NumericError("hall criterion: non-finite core integral");
  total.add(core);
  bool converged = false;
  bool saturated = false;
  double tail_estimate = kInf;
  double R = 1.0;
  for (int j = 0; j < opt.max_doublings; ++j, R *= 2.0) {
    if (2.0 * R > extent) {
      saturated = true;
      break;
    }
    const double inc = integrate(R, 2.0 * R) + integrate(-2.0 * R, -R);
    if (!std::isfinite(inc)) {
      v.notes.push_back("non-finite shell increment");
      break;
    }
    total.add(inc);
    radii.push_back(2.0 * R);
    increments.push_back(inc);
    cumulative.push_back(total.value());
    const std::size_t m = increments.size();
    if (m >= 4) {
      bool decaying = true;
      for (std::size_t i = m - 3; i < m; ++i) {
        if (!(increments[i] <= opt.ratio_limit * increments[i - 1])) decaying = false;
      }
      const double r = increments[m - 1] / increments[m - 2];
      tail_estimate = (r >= 0.0 && r < 1.0) ? increments[m - 1] * r / (1.0 - r) : kInf;
      if (decaying && tail_estimate <= opt.tail_relative * std::fabs(total.value())) {
        converged = true;
        break;
      }
    }
  }
  const std::size_t m = increments.size();
  bool divergent = false;
  if (!converged && m >= 2) divergent = increments[m - 1] >= opt.ratio_limit * increments[m - 2];

  v.evidence["shell_radii"] = radii;
  v.evidence["shell_increments"] = increments;
  v.evidence["cumulative"] = cumulative;
  v.figures["integral"] = total.value();
  v.figures["tail_estimate"] = tail_estimate;
  v.figures["estimate"] = total.value() + (std::isfinite(tail_estimate) ? tail_estimate : 0.0);
  v.figures["max_radius"] = radii.empty() ? 1.0 : radii.back();
  v.checks["converged"] = converged;
  v.checks["divergence_flagged"] = divergent;
  v.checks["saturated"] = saturated;
  v.truncation = static_cast<std::int64_t>(m);
  if (W.kind() == WeightKind::exp_power) {
    const bool closed = W.alpha() < 1.0;
    v.checks["closed_form_convergent"] = closed;
    v.checks["closed_form_agrees"] = closed == converged;
  }
  if (converged) {
    v.outcome = Outcome::witnessed;
    v.notes.push_back("Poisson integral of log W converged: polynomials not dense (at truncation)");
  } else if (divergent) {
    v.notes.push_back("shell increments do not decay: divergence flagged at truncation");
  } else {
    v.notes.push_back("inconclusive at truncation");
  }
  return v;
}

std::vector<double> default_convexity_grid() {
  std::vector<double> xs;
  for (int i = 0; i <= 300; ++i) xs.push_back(std::pow(10.0, -3.0 + 15.0 * i / 300.0));
  return xs;
}

ConvexityReport log_convexity_check(const WeightSpec& W, std::span<const double> xs, double tolerance) {
  if (xs.size() < 3) throw InputError("convexity: grid needs at least 3 points");
  ConvexityReport rep;
  rep.points = xs.size();
  rep.tolerance = tolerance;
  std::vector<double> t;
  std::vector<double> g;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) throw InputError("convexity: grid must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw InputError("convexity: grid must be increasing");
    const double lw = W.log_value(xs[i]);
    if (!std::isfinite(lw)) throw InputError("convexity: log W not finite on the grid");
    t.push_back(std::log(xs[i]));
    g.push_back(lw);
  }
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double s0 = (g[i] - g[i - 1]) / (t[i] - t[i - 1]);
    const double s1 = (g[i + 1] - g[i]) / (t[i + 1] - t[i]);
    const double scale = std::fabs(s0) + std::fabs(s1);
    const double viol = scale > 0.0 ? std::max(0.0, s0 - s1) / scale : 0.0;
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.at_x = xs[i];
    }
  }
  rep.log_convex = rep.max_violation <= tolerance;
  return rep;
}

Verdict carleson_verdict(const WeightSpec& W, const CarlesonOptions& opt) {
  const std::vector<double> grid = opt.grid.empty() ? default_convexity_grid() : opt.grid;
  for (double x : grid) {
    const double a = W.log_value(x);
    const double b = W.log_value(-x);
    if (std::isinf(a) != std::isinf(b) || (std::isfinite(a) && std::fabs(a - b) > opt.evenness_tolerance * (1.0 + std::fabs(a)))) {
      std::ostringstream os;
      os << "carleson: weight is not even (x = " << x << ")";
      throw InputError(os.str());
    }
  }
  const ConvexityReport cr = log_convexity_check(W, grid);
  if (!cr.log_convex) {
    std::ostringstream os;
    os << "carleson: log W(e^t) is not convex (relative violation " << cr.max_violation << " at x = " << cr.at_x
       << ")";
    throw InputError(os.str());
  }
  Verdict v = hall_criterion(W, opt.hall);
  v.criterion = "carleson";
  v.figures["convexity_max_violation"] = cr.max_violation;
  v.checks["even"] = true;
  v.checks["log_convex"] = true;
  if (v.checks["converged"]) {
    v.outcome = Outcome::witnessed;
    v.notes.push_back("log W in L1(Poisson): not dense");
  } else if (v.checks["divergence_flagged"]) {
    v.outcome = Outcome::witnessed_dense;
    v.notes.push_back("log W not Poisson summable at truncation: dense");
  } else {
    v.outcome = Outcome::not_witnessed;
  }
  return v;
}

}  // namespace csk
