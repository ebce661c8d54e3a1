#include "csk/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csk/errors.hpp"
#include "csk/summation.hpp"

namespace csk {

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::explicit_points: return "explicit";
    case GeneratorKind::power: return "power";
    case GeneratorKind::even_mirror: return "even_mirror";
    case GeneratorKind::geometric: return "geometric";
  }
  return "unknown";
}

SequenceSpec SequenceSpec::explicit_list(std::vector<double> pts) {
  SequenceSpec s;
  s.kind = GeneratorKind::explicit_points;
  s.points = std::move(pts);
  s.count = s.points.size();
  return s;
}

SequenceSpec SequenceSpec::power(double alpha, bool two_sided, std::size_t count, bool include_zero) {
  SequenceSpec s;
  s.kind = GeneratorKind::power;
  s.alpha = alpha;
  s.two_sided = two_sided;
  s.count = count;
  s.include_zero = include_zero;
  return s;
}

SequenceSpec SequenceSpec::even_mirror(std::vector<double> positive_points) {
  SequenceSpec s;
  s.kind = GeneratorKind::even_mirror;
  s.points = std::move(positive_points);
  s.count = 2 * s.points.size();
  return s;
}

SequenceSpec SequenceSpec::geometric(double ratio, std::size_t count) {
  SequenceSpec s;
  s.kind = GeneratorKind::geometric;
  s.ratio = ratio;
  s.count = count;
  return s;
}

DiscreteSequence::DiscreteSequence(std::vector<double> points, std::optional<SequenceSpec> generator)
    : points_(std::move(points)), generator_(std::move(generator)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw InputError("sequence: point " + std::to_string(i) + " is not finite");
    }
    if (i > 0) {
      if (points_[i] == points_[i - 1]) {
        std::ostringstream os;
        os << "sequence: duplicate point " << points_[i] << " at positions " << i - 1 << " and " << i;
        throw InputError(os.str());
      }
      if (points_[i] < points_[i - 1]) {
        std::ostringstream os;
        os << "sequence: points must be strictly increasing (position " << i << ": " << points_[i]
           << " after " << points_[i - 1] << ")";
        throw InputError(os.str());
      }
    }
  }
  negatives_ = static_cast<std::size_t>(
      std::lower_bound(points_.begin(), points_.end(), 0.0) - points_.begin());
}

std::size_t DiscreteSequence::position(std::int64_t n) const {
  if (!has_index(n)) {
    std::ostringstream os;
    os << "sequence: index " << n << " outside materialized range [" << first_index() << ", "
       << last_index() << "]";
    throw InputError(os.str());
  }
  return static_cast<std::size_t>(n + static_cast<std::int64_t>(negatives_));
}

std::optional<std::int64_t> DiscreteSequence::find(double x, double tolerance) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x - tolerance);
  if (it != points_.end() && std::fabs(*it - x) <= tolerance) {
    return index_at(static_cast<std::size_t>(it - points_.begin()));
  }
  return std::nullopt;
}

bool DiscreteSequence::truncated_above() const {
  const bool has_nonneg = negatives_ < points_.size();
  if (!generator_) return has_nonneg;
  switch (generator_->kind) {
    case GeneratorKind::power:
    case GeneratorKind::even_mirror:
    case GeneratorKind::geometric: return true;
    case GeneratorKind::explicit_points: return has_nonneg;
  }
  return has_nonneg;
}

bool DiscreteSequence::truncated_below() const {
  const bool has_neg = negatives_ > 0;
  if (!generator_) return has_neg;
  switch (generator_->kind) {
    case GeneratorKind::power: return generator_->two_sided;
    case GeneratorKind::even_mirror: return true;
    case GeneratorKind::geometric: return false;
    case GeneratorKind::explicit_points: return has_neg;
  }
  return has_neg;
}

DiscreteSequence materialize(const SequenceSpec& spec) {
  std::vector<double> pts;
  switch (spec.kind) {
    case GeneratorKind::explicit_points:
      pts = spec.points;
      break;
    case GeneratorKind::power: {
      if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) {
        throw InputError("sequence: power generator requires alpha > 0");
      }
      if (spec.count < 1) throw InputError("sequence: power generator requires count >= 1");
      const double exponent = 1.0 / spec.alpha;
      std::vector<double> pos;
      pos.reserve(spec.count);
      for (std::size_t n = 1; n <= spec.count; ++n) {
        pos.push_back(std::pow(static_cast<double>(n), exponent));
      }
      if (spec.two_sided) {
        pts.reserve(2 * spec.count + 1);
        for (auto it = pos.rbegin(); it != pos.rend(); ++it) pts.push_back(-*it);
      }
      if (spec.include_zero) pts.push_back(0.0);
      pts.insert(pts.end(), pos.begin(), pos.end());
      break;
    }
    case GeneratorKind::even_mirror: {
      for (std::size_t i = 0; i < spec.points.size(); ++i) {
        if (!(spec.points[i] > 0.0)) {
          throw InputError("sequence: even_mirror requires strictly positive points");
        }
      }
      pts.reserve(2 * spec.points.size());
      for (auto it = spec.points.rbegin(); it != spec.points.rend(); ++it) pts.push_back(-*it);
      pts.insert(pts.end(), spec.points.begin(), spec.points.end());
      break;
    }
    case GeneratorKind::geometric: {
      if (!(spec.ratio > 1.0) || !std::isfinite(spec.ratio)) {
        throw InputError("sequence: geometric generator requires ratio > 1");
      }
      pts.reserve(spec.count);
      double v = 1.0;
      for (std::size_t n = 0; n < spec.count; ++n) {
        if (!std::isfinite(v)) throw InputError("sequence: geometric generator overflows");
        pts.push_back(v);
        v *= spec.ratio;
      }
      break;
    }
  }
  if (pts.size() < 2) throw InputError("sequence: at least two points are required");
  return DiscreteSequence(std::move(pts), spec);
}

DiscreteSequence subsequence(const DiscreteSequence& seq, std::span<const std::int64_t> indices) {
  std::vector<double> pts;
  pts.reserve(indices.size());
  for (std::int64_t n : indices) pts.push_back(seq.at(n));
  std::sort(pts.begin(), pts.end());
  return DiscreteSequence(std::move(pts));
}

namespace {

double trusted_radius(const DiscreteSequence& seq) {
  double r = std::numeric_limits<double>::infinity();
  const auto pts = seq.points();
  if (seq.truncated_above() && !pts.empty()) r = std::min(r, std::max(pts.back(), 0.0));
  if (seq.truncated_below() && !pts.empty()) r = std::min(r, std::max(-pts.front(), 0.0));
  return r;
}

}  // namespace

DensityReport upper_density(const DiscreteSequence& seq, std::span<const double> radii, double threshold) {
  if (radii.empty()) throw InputError("upper_density: empty radius schedule");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InputError("upper_density: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw InputError("upper_density: radii must be increasing");
    }
  }
  DensityReport rep;
  rep.threshold = threshold;
  const double r_max = trusted_radius(seq);
  const auto pts = seq.points();
  std::vector<double> tail;
  for (double a : radii) {
    // open window (-a, a)
    const auto lo = std::upper_bound(pts.begin(), pts.end(), -a);
    const auto hi = std::lower_bound(pts.begin(), pts.end(), a);
    const std::size_t count = hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
    rep.radii.push_back(a);
    rep.counts.push_back(count);
    rep.ratios.push_back(static_cast<double>(count) / (2.0 * a));
    rep.saturated.push_back(a > r_max);
  }
  std::vector<double> trusted;
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    if (!rep.saturated[i]) trusted.push_back(rep.ratios[i]);
  }
  if (!trusted.empty()) {
    const std::size_t start = trusted.size() / 2;
    rep.tail_sup = *std::max_element(trusted.begin() + static_cast<std::ptrdiff_t>(start), trusted.end());
  }
  if (trusted.size() >= 3) {
    const std::size_t m = trusted.size();
    rep.zero_density_consistent =
        trusted[m - 1] <= trusted[m - 2] && trusted[m - 2] <= trusted[m - 3] && trusted[m - 1] < threshold;
  }
  return rep;
}

std::vector<double> default_density_schedule(const DiscreteSequence& seq) {
  double r_max = trusted_radius(seq);
  if (!std::isfinite(r_max)) {
    const auto pts = seq.points();
    r_max = std::max(std::fabs(pts.front()), std::fabs(pts.back()));
  }
  std::vector<double> radii;
  if (!(r_max > 0.0)) return {1.0};
  double a = r_max >= 2.0 ? 1.0 : r_max / 16.0;
  while (a <= r_max) {
    radii.push_back(a);
    a *= 2.0;
  }
  if (radii.empty()) radii.push_back(r_max);
  return radii;
}

double balance_partial_sum(const DiscreteSequence& seq, std::int64_t window) {
  CompensatedSum s;
  const std::int64_t lo = std::max(seq.first_index(), -window + 1);
  const std::int64_t hi = std::min(seq.last_index(), window - 1);
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double x = seq.at(n);
    s.add(x / (1.0 + x * x));
  }
  return s.value();
}

BalanceReport balance_partial_sums(const DiscreteSequence& seq, std::span<const std::int64_t> windows,
                                   double tolerance) {
  BalanceReport rep;
  rep.tolerance = tolerance;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i] < 1) throw InputError("balance: windows must be >= 1");
    if (i > 0 && windows[i] <= windows[i - 1]) throw InputError("balance: windows must be increasing");
  }
  std::optional<double> last_gap;
  for (std::int64_t n : windows) {
    const double s1 = balance_partial_sum(seq, n);
    const double s2 = balance_partial_sum(seq, 2 * n);
    const std::int64_t reach = 2 * n - 1;
    const bool sat = (seq.truncated_above() && reach > seq.last_index()) ||
                     (seq.truncated_below() && -reach < seq.first_index());
    rep.windows.push_back(n);
    rep.partial_sums.push_back(s1);
    rep.doubled_sums.push_back(s2);
    rep.gaps.push_back(std::fabs(s2 - s1));
    rep.saturated.push_back(sat);
    if (!sat) last_gap = std::fabs(s2 - s1);
  }
  rep.balanced_consistent = last_gap.has_value() && *last_gap < tolerance;
  return rep;
}

std::vector<std::int64_t> default_balance_schedule(const DiscreteSequence& seq) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1;; n *= 2) {
    const std::int64_t reach = 2 * n - 1;
    const bool sat = (seq.truncated_above() && reach > seq.last_index()) ||
                     (seq.truncated_below() && -reach < seq.first_index());
    if (sat) break;
    out.push_back(n);
    if (n > (std::int64_t{1} << 40)) break;
  }
  if (out.empty()) out.push_back(1);
  return out;
}

}  // namespace csk
