#include "csk/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csk/errors.hpp"

namespace csk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::exp_power: return "exp_power";
    case WeightKind::poly_log: return "poly_log";
    case WeightKind::exp_power_log: return "exp_power_log";
    case WeightKind::tabulated: return "tabulated";
    case WeightKind::discrete: return "discrete";
    case WeightKind::custom: return "custom";
  }
  return "unknown";
}

WeightSpec WeightSpec::exp_power(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 0.0) || !std::isfinite(c) || !std::isfinite(alpha)) {
    throw InputError("weight: exp_power requires c > 0 and alpha > 0");
  }
  WeightSpec w;
  w.kind_ = WeightKind::exp_power;
  w.c_ = c;
  w.alpha_ = alpha;
  return w;
}

WeightSpec WeightSpec::poly_log(double c, double beta) {
  if (!(c > 0.0) || !(beta > 1.0) || !std::isfinite(c) || !std::isfinite(beta)) {
    throw InputError("weight: poly_log requires c > 0 and beta > 1");
  }
  WeightSpec w;
  w.kind_ = WeightKind::poly_log;
  w.c_ = c;
  w.beta_ = beta;
  return w;
}

WeightSpec WeightSpec::exp_power_log(double c, double alpha, double beta) {
  if (!(c > 0.0) || !(alpha > 0.0) || !(beta >= 0.0) || !std::isfinite(c) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    throw InputError("weight: exp_power_log requires c > 0, alpha > 0, beta >= 0");
  }
  WeightSpec w;
  w.kind_ = WeightKind::exp_power_log;
  w.c_ = c;
  w.alpha_ = alpha;
  w.beta_ = beta;
  return w;
}

WeightSpec WeightSpec::tabulated(std::vector<std::pair<double, double>> entries) {
  if (entries.size() < 2) throw InputError("weight: tabulated weight needs at least two entries");
  WeightSpec w;
  w.kind_ = WeightKind::tabulated;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto [x, v] = entries[i];
    if (!std::isfinite(x)) throw InputError("weight: tabulated locations must be finite");
    if (i > 0 && !(x > entries[i - 1].first)) {
      throw InputError("weight: tabulated locations must be strictly increasing");
    }
    if (std::isnan(v) || v < 1.0) {
      std::ostringstream os;
      os << "weight: tabulated value at x=" << x << " is below 1";
      throw InputError(os.str());
    }
    w.table_.emplace_back(x, std::isinf(v) ? kInf : std::log(v));
  }
  return w;
}

WeightSpec WeightSpec::discrete_log(DiscreteSequence seq, std::vector<double> log_values) {
  if (log_values.size() != seq.size()) {
    throw InputError("weight: discrete weight needs one value per sequence point");
  }
  for (double v : log_values) {
    // tolerate rounding just below zero (W = 1 up to the last ulp)
    if (std::isnan(v) || v < -1e-12) throw InputError("weight: discrete values must be >= 1");
    if (std::isinf(v)) throw InputError("weight: discrete values must be finite on the support");
  }
  WeightSpec w;
  w.kind_ = WeightKind::discrete;
  w.support_ = std::make_shared<const DiscreteSequence>(std::move(seq));
  w.log_values_ = std::move(log_values);
  w.degenerate_ = true;
  return w;
}

WeightSpec WeightSpec::custom(std::string name, std::function<double(double)> log_w, bool degenerate) {
  if (!log_w) throw InputError("weight: custom weight without a function");
  WeightSpec w;
  w.kind_ = WeightKind::custom;
  w.name_ = std::move(name);
  w.custom_ = std::move(log_w);
  w.degenerate_ = degenerate;
  return w;
}

double WeightSpec::log_value(double x) const {
  switch (kind_) {
    case WeightKind::exp_power:
      return c_ * std::pow(std::fabs(x), alpha_);
    case WeightKind::poly_log:
      return c_ * std::pow(std::log(std::exp(1.0) + std::fabs(x)), beta_);
    case WeightKind::exp_power_log:
      return c_ * std::pow(std::fabs(x), alpha_) / std::pow(std::log(std::exp(1.0) + std::fabs(x)), beta_);
    case WeightKind::tabulated: {
      if (x < table_.front().first || x > table_.back().first) {
        std::ostringstream os;
        os << "weight: x=" << x << " outside the tabulated range [" << table_.front().first << ", "
           << table_.back().first << "]";
        throw InputError(os.str());
      }
      auto it = std::lower_bound(table_.begin(), table_.end(), x,
                                 [](const auto& e, double v) { return e.first < v; });
      if (it->first == x) return it->second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      if (std::isinf(lo.second) || std::isinf(hi.second)) return kInf;
      const double f = (x - lo.first) / (hi.first - lo.first);
      return lo.second + f * (hi.second - lo.second);
    }
    case WeightKind::discrete: {
      const auto n = support_->find(x);
      if (!n) return kInf;
      return log_values_[support_->position(*n)];
    }
    case WeightKind::custom: {
      const double v = custom_(x);
      if (std::isnan(v)) throw InputError("weight: custom weight returned NaN");
      return v;
    }
  }
  return kInf;
}

double WeightSpec::value(double x) const { return std::exp(log_value(x)); }

bool WeightSpec::finite_on_line() const {
  switch (kind_) {
    case WeightKind::exp_power:
    case WeightKind::poly_log:
    case WeightKind::exp_power_log: return true;
    case WeightKind::tabulated:
      return std::none_of(table_.begin(), table_.end(), [](const auto& e) { return std::isinf(e.second); });
    case WeightKind::discrete: return false;
    case WeightKind::custom: return !degenerate_;
  }
  return false;
}

}  // namespace csk
