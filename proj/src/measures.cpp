#include "csk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "csk/errors.hpp"
#include "csk/parallel.hpp"
#include "csk/summation.hpp"

namespace csk {

namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, bool normalized)
    : atoms_(std::move(atoms)), normalized_(normalized) {
  if (atoms_.empty()) throw InputError("measure: no atoms");
  max_log_ = -kInf;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.t)) throw InputError("measure: atom location is not finite");
    if (a.sign != 1 && a.sign != -1) throw InputError("measure: atom sign must be +1 or -1");
    if (!std::isfinite(a.log_mag)) throw InputError("measure: atom log magnitude is not finite");
    if (i > 0 && !(a.t > atoms_[i - 1].t)) {
      std::ostringstream os;
      os << "measure: atom locations must be strictly increasing (position " << i << ")";
      throw InputError(os.str());
    }
    max_log_ = std::max(max_log_, a.log_mag);
  }
  negatives_ = static_cast<std::size_t>(std::count_if(atoms_.begin(), atoms_.end(),
                                                      [](const Atom& a) { return a.t < 0.0; }));
}

double DiscreteMeasure::log_total_variation() const {
  LogSumExp s;
  for (const Atom& a : atoms_) s.add(a.log_mag);
  return s.value();
}

std::int64_t DiscreteMeasure::natural_index(std::size_t i) const {
  return static_cast<std::int64_t>(i) - static_cast<std::int64_t>(negatives_);
}

std::optional<std::size_t> DiscreteMeasure::position_of_index(std::int64_t n) const {
  const std::int64_t pos = n + static_cast<std::int64_t>(negatives_);
  if (pos < 0 || pos >= static_cast<std::int64_t>(atoms_.size())) return std::nullopt;
  return static_cast<std::size_t>(pos);
}

DiscreteSequence DiscreteMeasure::support() const {
  std::vector<double> pts;
  pts.reserve(atoms_.size());
  for (const Atom& a : atoms_) pts.push_back(a.t);
  return DiscreteSequence(std::move(pts));
}

DiscreteMeasure DiscreteMeasure::normalize() const {
  const double tv = log_total_variation();
  std::vector<Atom> out = atoms_;
  for (Atom& a : out) a.log_mag -= tv;
  return DiscreteMeasure(std::move(out), true);
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("measure: scale factor must be positive");
  const double lf = std::log(factor);
  std::vector<Atom> out = atoms_;
  for (Atom& a : out) a.log_mag += lf;
  return DiscreteMeasure(std::move(out), false);
}

DiscreteMeasure masses_from_charseq(const DiscreteSequence& seq, const CharacteristicSequence& P) {
  std::vector<Atom> atoms;
  atoms.reserve(seq.size());
  for (std::int64_t n = seq.first_index(); n <= seq.last_index(); ++n) {
    const CharEntry* e = P.find(n);
    if (!e) {
      std::ostringstream os;
      os << "measure: characteristic sequence does not cover index " << n;
      throw InputError(os.str());
    }
    atoms.push_back(Atom{seq.at(n), (n % 2 == 0) ? 1 : -1, e->p});
  }
  return DiscreteMeasure(std::move(atoms)).normalize();
}

namespace {

void check_collision(const DiscreteMeasure& mu, cplx z, double exclusion) {
  const auto& atoms = mu.atoms();
  auto it = std::lower_bound(atoms.begin(), atoms.end(), z.real(),
                             [](const Atom& a, double v) { return a.t < v; });
  const std::size_t n = atoms.size();
  auto local_gap = [&](std::size_t i) {
    double g = kInf;
    if (i > 0) g = std::min(g, atoms[i].t - atoms[i - 1].t);
    if (i + 1 < n) g = std::min(g, atoms[i + 1].t - atoms[i].t);
    if (!std::isfinite(g)) g = std::max(1.0, std::fabs(atoms[i].t));
    return g;
  };
  const std::size_t pos = static_cast<std::size_t>(it - atoms.begin());
  for (std::size_t i : {pos, pos - 1}) {
    if (i >= n) continue;
    if (std::abs(cplx(atoms[i].t, 0.0) - z) <= exclusion * local_gap(i)) {
      std::ostringstream os;
      os << "cauchy transform: z = (" << z.real() << ", " << z.imag() << ") collides with the atom at "
         << atoms[i].t;
      throw InputError(os.str());
    }
  }
}

inline cplx inv_diff(double t, cplx z) {
  const double d = t - z.real();
  const double y = z.imag();
  const double den = d * d + y * y;
  return cplx(d / den, y / den);
}

ScaledComplex transform_impl(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt, bool modified) {
  check_collision(mu, z, opt.exclusion);
  const double L = mu.max_log_mag();
  CompensatedComplexSum s;
  for (const Atom& a : mu.atoms()) {
    const double m = a.sign * std::exp(a.log_mag - L);
    cplx k = inv_diff(a.t, z);
    if (modified) k -= a.t / (1.0 + a.t * a.t);
    s.add(m * k);
  }
  return ScaledComplex{s.value() * kInvPi, L};
}

}  // namespace

ScaledComplex cauchy_transform_scaled(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt) {
  return transform_impl(mu, z, opt, false);
}

cplx cauchy_transform(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt) {
  return cauchy_transform_scaled(mu, z, opt).value();
}

ScaledComplex modified_cauchy_transform_scaled(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt) {
  return transform_impl(mu, z, opt, true);
}

cplx modified_cauchy_transform(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt) {
  return modified_cauchy_transform_scaled(mu, z, opt).value();
}

MomentValue moment(const DiscreteMeasure& mu, int k) {
  if (k < 0) throw InputError("moment: order must be non-negative");
  // log|m t^k| for each atom, then a common scale
  std::vector<double> logs;
  logs.reserve(mu.size());
  for (const Atom& a : mu.atoms()) {
    if (k == 0) {
      logs.push_back(a.log_mag);
    } else if (a.t == 0.0) {
      logs.push_back(-kInf);
    } else {
      logs.push_back(a.log_mag + k * std::log(std::fabs(a.t)));
    }
  }
  const double L = *std::max_element(logs.begin(), logs.end());
  MomentValue out;
  if (!std::isfinite(L)) return out;
  CompensatedSum val;
  CompensatedSum bnd;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (logs[i] == -kInf) continue;
    const Atom& a = mu.atoms()[i];
    const int s = a.sign * ((k % 2 == 1 && a.t < 0.0) ? -1 : 1);
    const double mag = std::exp(logs[i] - L);
    val.add(s * mag);
    bnd.add(mag);
  }
  const double scale = std::exp(L);
  out.value = val.value() * scale;
  out.bound = bnd.value() * scale;
  out.relative = std::fabs(val.value()) / bnd.value();
  return out;
}

AnnihilationReport annihilation_report(const DiscreteMeasure& mu, int kmax, double tolerance) {
  if (kmax < 0) throw InputError("annihilation: kmax must be non-negative");
  AnnihilationReport rep;
  rep.tolerance = tolerance;
  rep.annihilation_consistent = true;
  for (int k = 0; k <= kmax; ++k) {
    rep.rows.push_back(moment(mu, k));
    if (!(rep.rows.back().relative <= tolerance)) rep.annihilation_consistent = false;
  }
  return rep;
}

DecayProfile decay_profile(const DiscreteMeasure& mu, std::span<const double> ys, int nmax,
                           const DecayOptions& opt) {
  if (nmax < 1) throw InputError("decay profile: nmax must be at least 1");
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!(ys[i] > 0.0)) throw InputError("decay profile: y values must be positive");
    if (i > 0 && !(ys[i] > ys[i - 1])) throw InputError("decay profile: y schedule must be increasing");
  }
  DecayProfile prof;
  prof.nmax = nmax;
  prof.rows.resize(ys.size());
  std::vector<double> log_noise(ys.size());
  const double L = mu.max_log_mag();
  const double eps = std::numeric_limits<double>::epsilon();
  parallel_for(
      ys.size(),
      [&](std::size_t i) {
        const double y = ys[i];
        const ScaledComplex K = cauchy_transform_scaled(mu, cplx(0.0, y));
        CompensatedSum abs_sum;
        for (const Atom& a : mu.atoms()) abs_sum.add(std::exp(a.log_mag - L) / std::hypot(a.t, y));
        log_noise[i] = std::log(static_cast<double>(mu.size()) * eps * abs_sum.value() * kInvPi) + L;
        DecayRow& row = prof.rows[i];
        row.y = y;
        row.log_abs_K = K.log_abs();
        for (int n = 1; n <= nmax; ++n) row.scaled.push_back(std::exp(n * std::log(y) + row.log_abs_K));
      },
      opt.threads);

  bool trusted = true;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    DecayRow& row = prof.rows[i];
    if (trusted) {
      if (!(row.log_abs_K > log_noise[i])) trusted = false;
      if (opt.omitted_mass_bound > 0.0 &&
          !(row.log_abs_K > std::log(opt.omitted_mass_bound * kInvPi / row.y))) {
        trusted = false;
      }
      if (!trusted) prof.untrusted_from = row.y;
    }
    row.trusted = trusted;
  }

  std::vector<std::size_t> tr;
  for (std::size_t i = 0; i < prof.rows.size(); ++i) {
    if (prof.rows[i].trusted) tr.push_back(i);
  }
  prof.sup_polynomial_decay_consistent = tr.size() >= 3;
  for (int n = 1; n <= nmax; ++n) {
    auto nonincreasing = [&](std::size_t from) {
      if (tr.size() < from + 2) return false;
      for (std::size_t j = from + 1; j < tr.size(); ++j) {
        if (prof.rows[tr[j]].scaled[n - 1] > prof.rows[tr[j - 1]].scaled[n - 1]) return false;
      }
      return true;
    };
    const bool tail = nonincreasing(tr.size() / 2);
    prof.order_decreasing.push_back(tail);
    prof.order_monotone_all.push_back(nonincreasing(0));
    if (!tail) prof.sup_polynomial_decay_consistent = false;
    if (tail && prof.max_decaying_order == n - 1) prof.max_decaying_order = n;
  }
  return prof;
}

ShiftIdentity moment_shift_identity(const DiscreteMeasure& mu, int k, cplx z) {
  if (k < 0) throw InputError("moment shift identity: k must be non-negative");
  check_collision(mu, z, CauchyOptions{}.exclusion);
  const double L = mu.max_log_mag();
  CompensatedComplexSum A;
  CompensatedComplexSum B;
  CompensatedSum A_abs;
  CompensatedSum B_abs;
  std::vector<CompensatedSum> mom(static_cast<std::size_t>(std::max(k, 1)));
  std::vector<CompensatedSum> mom_abs(mom.size());
  for (const Atom& a : mu.atoms()) {
    const double m = a.sign * std::exp(a.log_mag - L);
    const cplx inv = inv_diff(a.t, z);
    const double tk = std::pow(a.t, k);
    A.add(m * tk * inv);
    A_abs.add(std::fabs(m * tk) * std::abs(inv));
    B.add(m * inv);
    B_abs.add(std::fabs(m) * std::abs(inv));
    double tj = 1.0;
    for (int j = 0; j < k; ++j) {
      mom[j].add(m * tj);
      mom_abs[j].add(std::fabs(m * tj));
      tj *= a.t;
    }
  }
  const cplx zk = std::pow(z, k);
  cplx C(0.0, 0.0);
  double C_abs = 0.0;
  cplx zj(1.0, 0.0);
  for (int j = 0; j < k; ++j) {
    C += zj * mom[k - 1 - j].value();
    C_abs += std::abs(zj) * mom_abs[k - 1 - j].value();
    zj *= z;
  }
  const cplx res = kInvPi * (A.value() - zk * B.value() - C);
  const double scale = kInvPi * (A_abs.value() + std::abs(zk) * B_abs.value() + C_abs);
  const double e = std::exp(L);
  ShiftIdentity out;
  out.residual = res * e;
  out.scale = scale * e;
  out.relative = scale > 0.0 ? std::abs(res) / scale : 0.0;
  return out;
}

Verdict w_finiteness(const DiscreteMeasure& mu, const WeightSpec& W, const SeriesRule& rule) {
  Verdict v;
  v.criterion = "w_finiteness";
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(mu.atoms()[a].t) < std::fabs(mu.atoms()[b].t);
  });
  std::vector<double> terms;
  terms.reserve(order.size());
  for (std::size_t i : order) {
    const Atom& a = mu.atoms()[i];
    const double lw = W.log_value(a.t);
    if (std::isinf(lw) && lw > 0) {
      std::ostringstream os;
      os << "weight is +inf at the atom t=" << a.t;
      v.notes.push_back(os.str());
      v.outcome = Outcome::not_witnessed;
      v.checks["infinite_term"] = true;
      v.truncation = static_cast<std::int64_t>(mu.size());
      return v;
    }
    terms.push_back(lw + a.log_mag);
  }
  const SeriesAssessment s = assess_series(terms, rule);
  attach_series(v, s, rule);
  v.truncation = static_cast<std::int64_t>(mu.size());
  v.tolerance = rule.tail_relative;
  v.figures["sum"] = std::exp(s.log_sum);
  v.outcome = s.converged ? Outcome::witnessed : Outcome::not_witnessed;
  return v;
}

std::vector<cplx> rectangular_grid(double re_lo, double re_hi, double im_lo, double im_hi, int nx, int ny) {
  if (nx < 1 || ny < 1) throw InputError("grid: sizes must be positive");
  std::vector<cplx> g;
  g.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    const double im = ny == 1 ? im_lo : im_lo + (im_hi - im_lo) * j / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double re = nx == 1 ? re_lo : re_lo + (re_hi - re_lo) * i / (nx - 1);
      g.emplace_back(re, im);
    }
  }
  return g;
}

ExtremeReport extreme_property_check(const DiscreteMeasure& mu, std::span<const cplx> grid, int kmax,
                                     std::span<const double> ys, int nmax, unsigned threads) {
  ExtremeReport rep;
  rep.grid_size = grid.size();
  std::vector<double> logs(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { logs[i] = cauchy_transform_scaled(mu, grid[i]).log_abs(); },
               threads);
  rep.min_abs_K = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = std::exp(logs[i]);
    if (v < rep.min_abs_K) {
      rep.min_abs_K = v;
      rep.argmin = grid[i];
    }
  }
  rep.signs_alternate = true;
  for (std::size_t i = 1; i < mu.size(); ++i) {
    if (mu.atoms()[i].sign == mu.atoms()[i - 1].sign) {
      rep.signs_alternate = false;
      rep.first_alternation_break = i;
      break;
    }
  }
  rep.annihilation = annihilation_report(mu, kmax);
  if (!ys.empty()) rep.decay = decay_profile(mu, ys, nmax, DecayOptions{0.0, threads});
  rep.outerness_note =
      "outerness of the Cauchy transform is not decided; grid zero-freeness and decay are evidence only";
  return rep;
}

}  // namespace csk
