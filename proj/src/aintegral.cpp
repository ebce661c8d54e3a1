#include "csk/aintegral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "csk/charseq.hpp"
#include "csk/errors.hpp"
#include "csk/summation.hpp"

namespace csk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvPi = 1.0 / std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double model_at(TailModel::Kind kind, const TailModel::Params& p, double r) {
  switch (kind) {
    case TailModel::Kind::none: return 0.0;
    case TailModel::Kind::log: return p.a + p.b * std::log(r);
    case TailModel::Kind::power: return p.a * std::pow(r, p.b);
  }
  return 0.0;
}

double clamp_to(double v, const std::optional<double>& A) {
  if (!A) return v;
  return std::clamp(v, -*A, *A);
}

}  // namespace

std::string to_string(TailModel::Kind k) {
  switch (k) {
    case TailModel::Kind::none: return "none";
    case TailModel::Kind::log: return "log";
    case TailModel::Kind::power: return "power";
  }
  return "unknown";
}

double TailModel::eval(double t) const { return model_at(kind, t < 0.0 ? left : right, std::fabs(t)); }

void SampledFunction::validate(double tail_tolerance) const {
  if (grid.size() < 2) throw InputError("sampled function: at least two grid points required");
  if (grid.size() != values.size()) throw InputError("sampled function: grid and values differ in length");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
      throw InputError("sampled function: non-finite grid point or value at position " + std::to_string(i));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InputError("sampled function: grid must be strictly increasing (position " + std::to_string(i) + ")");
    }
  }
  if (clamp && !(*clamp > 0.0)) throw InputError("sampled function: truncation level must be positive");
  if (tail.kind == TailModel::Kind::none) {
    if (values.front() != 0.0 || values.back() != 0.0) {
      throw InputError("sampled function: tail model missing while the end samples do not vanish");
    }
    return;
  }
  if (!(grid.front() < 0.0 && grid.back() > 0.0)) {
    throw InputError("sampled function: a tail model needs a grid containing 0 in its interior");
  }
  if (tail.kind == TailModel::Kind::power && (tail.left.b >= 1.0 || tail.right.b >= 1.0)) {
    throw InputError("sampled function: power tails must have exponent below 1 (Poisson summability)");
  }
  const double lv = clamp_to(tail.eval(grid.front()), clamp);
  const double rv = clamp_to(tail.eval(grid.back()), clamp);
  if (std::fabs(lv - values.front()) > tail_tolerance * (1.0 + std::fabs(values.front())) ||
      std::fabs(rv - values.back()) > tail_tolerance * (1.0 + std::fabs(values.back()))) {
    throw InputError("sampled function: tail model inconsistent with the end samples");
  }
}

SampledFunction truncate_level(const SampledFunction& h, double A) {
  if (!(A > 0.0)) throw InputError("truncate_level: A must be positive");
  SampledFunction out = h;
  for (double& v : out.values) v = std::clamp(v, -A, A);
  out.clamp = h.clamp ? std::min(*h.clamp, A) : A;
  return out;
}

namespace {

struct PQ {
  double P = 0.0;
  double Q = 0.0;
};

// ∫_T^∞ f(t) t^{-e} dt = T^{1-e} φ(e) for the model f on [T, ∞)
struct Phi {
  TailModel::Kind kind;
  TailModel::Params p;
  bool constant = false;
  double c = 0.0;
  double logT = 0.0;
  double T = 0.0;

  double operator()(int e) const {
    const double k = e - 1.0;
    if (constant) return c / k;
    if (kind == TailModel::Kind::log) return p.a / k + p.b * (logT / k + 1.0 / (k * k));
    return p.a * std::pow(T, p.b) / (k - p.b);
  }
};

// Kernel integrals over [T, ∞) by expansion in 1/t; needs T >= 2 max(|z|, 1).
PQ tail_series(const Phi& phi, double x, double y) {
  const double T = phi.T;
  const double u = 1.0 / T;
  const double zz = x * x + y * y;
  double w_prev = 1.0;        // w_0
  double w = 2.0 * x * u;     // w_1
  CompensatedSum P;
  CompensatedSum Q;
  P.add(phi(2));
  double upow = u;  // u^m
  for (int m = 1; m < 2000; ++m) {
    const double e_m = (m % 2 == 0) ? ((m / 2) % 2 == 0 ? 1.0 : -1.0) : 0.0;
    const double c_hat = w - x * u * w_prev - e_m * upow;
    const double tp = w * phi(m + 2);
    const double tq = c_hat * phi(m + 1);
    P.add(tp);
    Q.add(tq);
    if (m > 4 && std::fabs(w) + upow < 1e-18) break;
    const double w_next = 2.0 * x * u * w - zz * u * u * w_prev;
    w_prev = w;
    w = w_next;
    upow *= u;
  }
  return PQ{y * kInvPi * u * P.value(), kInvPi * Q.value()};
}

// Right tail [T, ∞) of the clamped model, evaluated at (x, y).
PQ right_tail(TailModel::Kind kind, const TailModel::Params& p, const std::optional<double>& A, double T, double x,
              double y) {
  if (kind == TailModel::Kind::none) return {};
  const double need = 2.0 * std::max(std::hypot(x, y), 1.0);
  if (T < need) {
    std::ostringstream os;
    os << "A-integral: grid must extend beyond |t| = " << need << " for the tail expansion";
    throw InputError(os.str());
  }
  std::vector<double> cuts{T};
  if (A) {
    for (double L : {*A, -*A}) {
      double t = kInf;
      if (kind == TailModel::Kind::log && p.b != 0.0) {
        t = std::exp((L - p.a) / p.b);
      } else if (kind == TailModel::Kind::power && p.b != 0.0 && L / p.a > 0.0) {
        t = std::pow(L / p.a, 1.0 / p.b);
      }
      if (std::isfinite(t) && t > T) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(kInf);
  PQ total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s = cuts[i];
    const double e = cuts[i + 1];
    const double rep = std::isfinite(e) ? std::sqrt(s * e) : 2.0 * s;
    const double f = model_at(kind, p, rep);
    Phi phi{kind, p};
    if (A && std::fabs(f) >= *A) {
      phi.constant = true;
      phi.c = f > 0 ? *A : -*A;
    }
    auto at = [&](double T0) {
      Phi q = phi;
      q.T = T0;
      q.logT = std::log(T0);
      return tail_series(q, x, y);
    };
    const PQ a = at(s);
    total.P += a.P;
    total.Q += a.Q;
    if (std::isfinite(e)) {
      const PQ b = at(e);
      total.P -= b.P;
      total.Q -= b.Q;
    }
  }
  return total;
}

// Exact integrals of the piecewise-linear interpolant on grid points
// 0, stride, 2*stride, ..., last.
PQ grid_integral(const SampledFunction& h, double x, double y, std::size_t stride, bool want_P, bool want_Q) {
  const auto& g = h.grid;
  const auto& v = h.values;
  CompensatedSum P;
  CompensatedSum Q;
  std::size_t i = 0;
  while (i + 1 < g.size()) {
    const std::size_t j = std::min(i + stride, g.size() - 1);
    const double t0 = g[i];
    const double t1 = g[j];
    const double h0 = v[i];
    const double beta = (v[j] - h0) / (t1 - t0);
    const double s0 = t0 - x;
    const double s1 = t1 - x;
    const double dt = t1 - t0;
    const double L2 = 0.5 * std::log1p(dt * (t1 + t0) / (1.0 + t0 * t0));
    const double A2 = std::atan2(dt, 1.0 + t0 * t1);
    if (y > 0.0) {
      const double L1 = 0.5 * std::log1p(dt * (s1 + s0) / (s0 * s0 + y * y));
      const double A1 = std::atan2(y * dt, y * y + s0 * s1);
      if (want_P) P.add((h0 + beta * (x - t0)) * A1 + beta * y * L1);
      if (want_Q) Q.add(h0 * (L1 - L2) + beta * ((x - t0) * L1 + t0 * L2 - y * A1 + A2));
    } else if (want_Q) {
      if (s0 <= 0.0 && s1 >= 0.0) {
        if (h0 != 0.0 || v[j] != 0.0) {
          throw InputError("A-integral: real evaluation point lies on the support of the function");
        }
      } else {
        const double L1 = std::log(std::fabs(s1 / s0));
        Q.add(h0 * (L1 - L2) + beta * ((x - t0) * L1 + t0 * L2 + A2));
      }
    }
    i = j;
  }
  return PQ{kInvPi * P.value(), kInvPi * Q.value()};
}

PQ full_integral(const SampledFunction& h, cplx z, std::size_t stride, bool want_P, bool want_Q) {
  const double x = z.real();
  const double y = z.imag();
  PQ r = grid_integral(h, x, y, stride, want_P, want_Q);
  if (h.tail.kind != TailModel::Kind::none) {
    const PQ right = right_tail(h.tail.kind, h.tail.right, h.clamp, h.grid.back(), x, y);
    // t = -r reflects the left tail onto (x, y) -> (-x, y); the conjugate kernel is odd under it
    const PQ left = right_tail(h.tail.kind, h.tail.left, h.clamp, -h.grid.front(), -x, y);
    r.P += right.P + left.P;
    r.Q += right.Q - left.Q;
  }
  if (y == 0.0) r.P = 0.0;
  return r;
}

}  // namespace

QuadResult poisson_integral(const SampledFunction& h, cplx z) {
  if (!(z.imag() > 0.0)) throw InputError("poisson integral: z must lie in the upper half plane");
  h.validate();
  const PQ fine = full_integral(h, z, 1, true, false);
  const PQ coarse = full_integral(h, z, 2, true, false);
  return QuadResult{fine.P, std::fabs(fine.P - coarse.P) / 3.0};
}

QuadResult conjugate_poisson_integral(const SampledFunction& h, cplx z) {
  if (z.imag() < 0.0) throw InputError("conjugate poisson integral: z must satisfy Im z >= 0");
  h.validate();
  const PQ fine = full_integral(h, z, 1, false, true);
  const PQ coarse = full_integral(h, z, 2, false, true);
  return QuadResult{fine.Q, std::fabs(fine.Q - coarse.Q) / 3.0};
}

cplx modified_cauchy_integral(const SampledFunction& h, cplx z) {
  if (z.imag() < 0.0) throw InputError("A-integral: z must satisfy Im z >= 0");
  h.validate();
  const PQ r = full_integral(h, z, 1, true, true);
  return cplx(r.Q, r.P);
}

std::vector<double> default_a_schedule() { return {10.0, 100.0, 1000.0, 1250.0, 2500.0, 5000.0, 10000.0}; }

namespace {

void check_schedule(std::span<const double> schedule) {
  if (schedule.empty()) throw InputError("A-schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0)) throw InputError("A-schedule values must be positive");
    if (i > 0 && !(schedule[i] > schedule[i - 1])) throw InputError("A-schedule must be increasing");
  }
}

bool nonincreasing_last_steps(const std::vector<double>& r, std::size_t steps) {
  if (r.size() < 2) return false;
  const std::size_t from = r.size() > steps ? r.size() - steps - 1 : 0;
  for (std::size_t i = from + 1; i < r.size(); ++i) {
    if (r[i] > r[i - 1]) return false;
  }
  return true;
}

}  // namespace

AIntegralReport cauchy_A_integral(const SampledFunction& h, cplx z, std::span<const double> schedule) {
  check_schedule(schedule);
  AIntegralReport rep;
  rep.schedule.assign(schedule.begin(), schedule.end());
  for (double A : schedule) rep.values.push_back(modified_cauchy_integral(truncate_level(h, A), z));
  const std::size_t n = rep.values.size();
  if (n < 3) {
    rep.converged = n == 2 && rep.values[1] == rep.values[0];
    if (rep.converged) rep.limit = rep.values.back();
    return rep;
  }
  const cplx v0 = rep.values[n - 3];
  const cplx v1 = rep.values[n - 2];
  const cplx v2 = rep.values[n - 1];
  const double d_last = std::abs(v2 - v1);
  const double d_prev = std::abs(v1 - v0);
  rep.converged = d_last <= d_prev;
  if (!rep.converged) return rep;
  auto aitken = [](double a, double b, double c) {
    const double den = (c - b) - (b - a);
    if (den == 0.0 || !std::isfinite(den)) return c;
    const double corr = (c - b) * (c - b) / den;
    return std::isfinite(corr) ? c - corr : c;
  };
  const cplx lim(aitken(v0.real(), v1.real(), v2.real()), aitken(v0.imag(), v1.imag(), v2.imag()));
  rep.limit = lim;
  rep.limit_error = std::abs(lim - v2);
  return rep;
}

ResidualTable titchmarsh_check(const SampledFunction& h, const SampledFunction& h_conj,
                               std::span<const double> schedule) {
  check_schedule(schedule);
  h.validate();
  ResidualTable t;
  t.schedule.assign(schedule.begin(), schedule.end());
  for (double A : schedule) {
    const double v = poisson_integral(truncate_level(h_conj, A), cplx(0.0, 1.0)).value;
    t.values.push_back(v);
    t.residuals.push_back(std::fabs(v));
  }
  t.final_residual = t.residuals.back();
  t.nonincreasing_tail = nonincreasing_last_steps(t.residuals, 3);
  return t;
}

UlyanovReport ulyanov_check(const SampledFunction& h, const SampledFunction& h_conj, std::span<const cplx> points,
                            std::span<const double> schedule) {
  check_schedule(schedule);
  UlyanovReport rep;
  const double Ph_i = poisson_integral(h, cplx(0.0, 1.0)).value;
  for (const cplx& z : points) {
    if (!(z.imag() > 0.0)) throw InputError("ulyanov: points must lie in the upper half plane");
    const double Ph_z = poisson_integral(h, z).value;
    ResidualTable t;
    t.schedule.assign(schedule.begin(), schedule.end());
    for (double A : schedule) {
      const double q = conjugate_poisson_integral(truncate_level(h_conj, A), z).value;
      t.values.push_back(q);
      t.residuals.push_back(std::fabs(q + Ph_z - Ph_i));
    }
    t.final_residual = t.residuals.back();
    t.nonincreasing_tail = nonincreasing_last_steps(t.residuals, 3);
    rep.max_final_residual = std::max(rep.max_final_residual, t.final_residual);
    rep.points.push_back(z);
    rep.tables.push_back(std::move(t));
  }
  return rep;
}

namespace {

std::vector<double> pair_offsets(const PairGridOptions& opt) {
  if (!(opt.ratio > 1.0) || !(opt.min_offset > 0.0) || !(opt.max_offset > opt.min_offset)) {
    throw InputError("pair grid: need ratio > 1 and 0 < min_offset < max_offset");
  }
  std::vector<double> d;
  for (double o = opt.min_offset; o < opt.max_offset; o *= opt.ratio) d.push_back(o);
  d.push_back(opt.max_offset);
  return d;
}

FunctionPair make_pair(double lambda_m, const PairGridOptions& opt, bool mismatched) {
  const std::vector<double> d = pair_offsets(opt);
  FunctionPair pair;
  SampledFunction& h = pair.h;
  SampledFunction& c = pair.conj;
  const double norm = 0.5 * std::log1p(lambda_m * lambda_m);
  auto conj_value = [&](double t) {
    const double lg = std::log(std::fabs(lambda_m - t));
    return mismatched ? lg : -lg + norm;
  };
  // offsets below the spacing of doubles near λ_m collapse; keep distinct points only
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    const double t = lambda_m - *it;
    if (!(t < lambda_m) || (!c.grid.empty() && !(t > c.grid.back()))) continue;
    h.grid.push_back(t);
    h.values.push_back(0.0);
    c.grid.push_back(t);
    c.values.push_back(conj_value(t));
  }
  h.grid.push_back(lambda_m);
  h.values.push_back(0.5 * kPi);
  for (double o : d) {
    const double t = lambda_m + o;
    if (!(t > h.grid.back())) continue;
    h.grid.push_back(t);
    h.values.push_back(kPi);
    c.grid.push_back(t);
    c.values.push_back(conj_value(t));
  }
  h.tail.kind = TailModel::Kind::power;
  h.tail.left = {0.0, 0.0};
  h.tail.right = {kPi, 0.0};
  c.tail.kind = TailModel::Kind::log;
  if (mismatched) {
    c.tail.left = {0.0, 1.0};
    c.tail.right = {0.0, 1.0};
  } else {
    c.tail.left = {norm, -1.0};
    c.tail.right = {norm, -1.0};
  }
  if (!(h.grid.front() < 0.0 && h.grid.back() > 0.0)) {
    throw InputError("pair grid: max_offset must exceed |λ_m| so that the grid straddles 0");
  }
  return pair;
}

}  // namespace

FunctionPair step_conjugate_pair(double lambda_m, const PairGridOptions& opt) {
  return make_pair(lambda_m, opt, false);
}

FunctionPair mismatched_pair(double lambda_m, const PairGridOptions& opt) { return make_pair(lambda_m, opt, true); }

CountingConjugate counting_conjugate(const DiscreteSequence& seq, std::int64_t m, std::int64_t N) {
  if (N < 1) throw InputError("counting conjugate: N must be at least 1");
  const double x = seq.at(m);
  const std::int64_t full = full_window(seq, m);
  if (full < 2) throw InputError("counting conjugate: window is empty");
  N = std::min(N, full - 1);
  CompensatedSum s;
  for (std::int64_t j = 1; j <= N; ++j) {
    if (seq.has_index(m - j)) s.add(char_term(seq.at(m - j), x));
    if (seq.has_index(m + j)) s.add(char_term(seq.at(m + j), x));
  }
  CountingConjugate out;
  out.m = m;
  out.N = N;
  out.sum = -0.5 * s.value();
  CharOptions opt;
  opt.N = N + 1;
  out.p_m = char_value(seq, m, opt).p;
  out.relation_residual = out.sum + (out.p_m - half_log1p_sq(x));
  return out;
}

}  // namespace csk
