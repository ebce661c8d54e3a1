#include "csk/entire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "csk/errors.hpp"
#include "csk/summation.hpp"

namespace csk {

namespace {

constexpr double kPi = std::numbers::pi;

// log(√(1+t²)/|z - t|)
double factor_log(double t, cplx z) {
  const double d = t - z.real();
  const double y = z.imag();
  const double den = d * d + y * y;
  const double q = (1.0 - std::norm(z) + 2.0 * z.real() * t) / den;
  if (std::fabs(q) < 0.5) return 0.5 * std::log1p(q);
  return half_log1p_sq(t) - 0.5 * std::log(den);
}

double wrap_phase(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

std::pair<std::int64_t, std::int64_t> product_window(const DiscreteSequence& seq, std::int64_t N) {
  const std::int64_t full = std::max(-seq.first_index(), seq.last_index());
  if (N <= 0 || N > full) N = full;
  return {std::max(seq.first_index(), -N), std::min(seq.last_index(), N)};
}

}  // namespace

ProductEvaluation product_eval(const DiscreteSequence& seq, std::int64_t N, cplx z, double exclusion) {
  if (seq.empty()) throw InputError("product: empty sequence");
  const auto [lo, hi] = product_window(seq, N);
  const auto pts = seq.points();
  const std::int64_t first = seq.first_index();
  const bool real_arg = z.imag() == 0.0;

  for (std::int64_t k = lo; k <= hi; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - first);
    double gap = std::numeric_limits<double>::infinity();
    if (i > 0) gap = std::min(gap, pts[i] - pts[i - 1]);
    if (i + 1 < pts.size()) gap = std::min(gap, pts[i + 1] - pts[i]);
    if (!std::isfinite(gap)) gap = std::max(1.0, std::fabs(pts[i]));
    if (std::abs(z - pts[i]) <= exclusion * gap) {
      std::ostringstream os;
      os << "product: z = (" << z.real() << ", " << z.imag() << ") lies on the sequence point " << pts[i];
      throw InputError(os.str());
    }
  }

  CompensatedSum log_abs;
  CompensatedSum small_phase;
  std::int64_t above = 0;
  auto visit = [&](std::int64_t k) {
    const double t = pts[static_cast<std::size_t>(k - first)];
    log_abs.add(factor_log(t, z));
    if (t > z.real()) {
      ++above;
      if (!real_arg) small_phase.add(std::atan2(z.imag(), t - z.real()));
    } else if (!real_arg) {
      small_phase.add(-std::atan2(z.imag(), z.real() - t));
    }
  };
  // index-symmetric order: 0, -1, 1, -2, 2, ...
  const std::int64_t reach = std::max(-lo, hi);
  if (lo <= 0 && 0 <= hi) visit(0);
  for (std::int64_t j = 1; j <= reach; ++j) {
    if (-j >= lo) visit(-j);
    if (j <= hi) visit(j);
  }

  ProductEvaluation ev;
  ev.log_abs = log_abs.value();
  ev.lo = lo;
  ev.hi = hi;
  ev.truncation = std::max(-lo, hi);
  const std::int64_t half_turns = ((hi - above) % 2 + 2) % 2;
  if (real_arg) {
    ev.sign = half_turns == 0 ? 1 : -1;
    ev.phase = half_turns == 0 ? 0.0 : kPi;
  } else {
    ev.phase = wrap_phase(kPi * static_cast<double>(half_turns) + small_phase.value());
  }
  return ev;
}

ResidueLog residue_log(const DiscreteSequence& seq, std::int64_t N, std::int64_t n) {
  const auto [lo, hi] = product_window(seq, N);
  if (n < lo || n > hi) {
    std::ostringstream os;
    os << "residue: index " << n << " outside the window [" << lo << ", " << hi << "]";
    throw InputError(os.str());
  }
  const auto pts = seq.points();
  const std::int64_t first = seq.first_index();
  const double x = pts[static_cast<std::size_t>(n - first)];
  CompensatedSum s;
  const std::int64_t reach = std::max(n - lo, hi - n);
  for (std::int64_t j = 1; j <= reach; ++j) {
    if (n - j >= lo) s.add(char_term(pts[static_cast<std::size_t>(n - j - first)], x));
    if (n + j <= hi) s.add(char_term(pts[static_cast<std::size_t>(n + j - first)], x));
  }
  ResidueLog r;
  r.log_abs = half_log1p_sq(x) + 0.5 * s.value();
  r.sign = (n % 2 == 0) ? 1 : -1;
  return r;
}

double log_abs_vS(const DiscreteSequence& seq, double x, std::int64_t N) {
  return -product_eval(seq, N, cplx(x, 0.0)).log_abs;
}

IdentityReport identity_F_equals_cK(const DiscreteSequence& seq, const CharacteristicSequence& P,
                                    std::span<const cplx> points, double tolerance) {
  IdentityReport rep;
  rep.tolerance = tolerance;
  const DiscreteMeasure mu = masses_from_charseq(seq, P);
  for (const cplx& z : points) {
    const ProductEvaluation F = product_eval(seq, 0, z);
    const ScaledComplex K = cauchy_transform_scaled(mu, z);
    rep.points.push_back(z);
    if (std::abs(K.mantissa) == 0.0) {
      std::ostringstream os;
      os << "Cauchy transform vanishes at (" << z.real() << ", " << z.imag() << ")";
      rep.notes.push_back(os.str());
      rep.log_abs_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.phase_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.usable.push_back(false);
      continue;
    }
    rep.log_abs_ratio.push_back(F.log_abs - K.log_abs());
    rep.phase_ratio.push_back(wrap_phase(F.phase - K.arg()));
    rep.usable.push_back(true);
  }
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < rep.usable.size(); ++i) {
    if (rep.usable[i]) ok.push_back(i);
  }
  if (ok.empty()) {
    rep.notes.push_back("no usable points");
    return rep;
  }
  rep.constant_log_abs = rep.log_abs_ratio[ok[0]];
  rep.constant_phase = rep.phase_ratio[ok[0]];
  for (std::size_t a = 0; a < ok.size(); ++a) {
    for (std::size_t b = a + 1; b < ok.size(); ++b) {
      const double dl = rep.log_abs_ratio[ok[a]] - rep.log_abs_ratio[ok[b]];
      const double dp = wrap_phase(rep.phase_ratio[ok[a]] - rep.phase_ratio[ok[b]]);
      const double s = std::sin(0.5 * dp);
      const double re = std::expm1(dl) * std::cos(dp) - 2.0 * s * s;
      const double dev = std::hypot(re, std::exp(dl) * std::sin(dp));
      rep.max_deviation = std::max(rep.max_deviation, dev);
    }
  }
  rep.identity_consistent = ok.size() >= 2 && rep.max_deviation < tolerance;
  if (ok.size() < 2) rep.notes.push_back("fewer than two usable points");
  return rep;
}

std::string to_string(ZeroClass c) {
  switch (c) {
    case ZeroClass::hamburger: return "hamburger";
    case ZeroClass::krein: return "krein";
    case ZeroClass::neither: return "neither";
  }
  return "unknown";
}

ZeroSetClass classify_zero_set(const DiscreteSequence& seq, const CharacteristicSequence& P, std::int64_t lo,
                               std::int64_t hi, const SeriesRule& rule) {
  (void)seq;
  ZeroSetClass out;
  std::vector<const CharEntry*> tail;
  for (const CharEntry& e : P.entries()) {
    if (e.index >= lo && e.index <= hi && std::fabs(e.lambda) > 1.0) tail.push_back(&e);
  }
  if (tail.size() < 8) {
    throw InputError("classify: tail range holds fewer than 8 usable entries (|λ| > 1)");
  }
  std::stable_sort(tail.begin(), tail.end(), [](const CharEntry* a, const CharEntry* b) {
    return std::fabs(a->lambda) < std::fabs(b->lambda);
  });
  out.p_negative_on_tail = true;
  for (const CharEntry* e : tail) {
    out.indices.push_back(e->index);
    out.ratios.push_back(std::log(std::fabs(e->lambda)) / e->p);
    if (!(e->p < 0.0)) out.p_negative_on_tail = false;
  }
  const std::size_t half = out.ratios.size() / 2;
  for (std::size_t i = 0; i < out.ratios.size(); ++i) {
    const double a = std::fabs(out.ratios[i]);
    if (i < half) {
      out.head_sup = std::max(out.head_sup, a);
    } else {
      out.tail_sup = std::max(out.tail_sup, a);
    }
  }
  out.hamburger_consistent =
      out.p_negative_on_tail && out.tail_sup <= 0.9 * out.head_sup && out.tail_sup <= 0.25;

  std::vector<const CharEntry*> all;
  for (const CharEntry& e : P.entries()) all.push_back(&e);
  std::stable_sort(all.begin(), all.end(), [](const CharEntry* a, const CharEntry* b) {
    return std::fabs(a->lambda) < std::fabs(b->lambda);
  });
  std::vector<double> terms;
  terms.reserve(all.size());
  for (const CharEntry* e : all) terms.push_back(e->p);
  out.krein_series = assess_series(terms, rule);
  out.krein_consistent = out.krein_series.converged;

  if (out.hamburger_consistent && out.krein_consistent) {
    out.classification = ZeroClass::hamburger;
  } else if (out.krein_consistent) {
    out.classification = ZeroClass::krein;
  }
  return out;
}

ScaledComplex hamburger_eval(const DiscreteMeasure& mu, cplx z) {
  const ScaledComplex K = cauchy_transform_scaled(mu, z);
  if (!(std::abs(K.mantissa) > 0.0) || !std::isfinite(K.log_abs())) {
    throw NumericError("hamburger: Cauchy transform underflows at the evaluation point");
  }
  return ScaledComplex{1.0 / K.mantissa, -K.log_scale};
}

ScaledComplex hamburger_eval(const DiscreteSequence& seq, const CharacteristicSequence& P, cplx z) {
  return hamburger_eval(masses_from_charseq(seq, P), z);
}

}  // namespace csk
