#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "csk/sequences.hpp"

namespace csk {

enum class WeightKind { exp_power, poly_log, exp_power_log, tabulated, discrete, custom };

std::string to_string(WeightKind kind);

// A weight W >= 1, handled through log W (which may be +inf).
//   exp_power      log W = c |x|^alpha
//   poly_log       log W = c log(e + |x|)^beta          (beta > 1)
//   exp_power_log  log W = c |x|^alpha / log(e + |x|)^beta
//   tabulated      log W interpolated linearly between entries, +inf admitted
//   discrete       finite on the points of a sequence only
//   custom         caller supplied log W
class WeightSpec {
 public:
  static WeightSpec exp_power(double c, double alpha);
  static WeightSpec poly_log(double c, double beta);
  static WeightSpec exp_power_log(double c, double alpha, double beta);
  // entries (x, W(x)) with W >= 1 or +inf; x strictly increasing
  static WeightSpec tabulated(std::vector<std::pair<double, double>> entries);
  // log W at the points of seq, +inf elsewhere
  static WeightSpec discrete_log(DiscreteSequence seq, std::vector<double> log_values);
  static WeightSpec custom(std::string name, std::function<double(double)> log_w, bool degenerate = false);

  WeightKind kind() const { return kind_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }  // (x, log W)
  const DiscreteSequence& support() const { return *support_; }
  const std::vector<double>& log_values() const { return log_values_; }
  const std::string& name() const { return name_; }

  double log_value(double x) const;
  double value(double x) const;

  // Finite only on a discrete set.
  bool degenerate() const { return degenerate_; }
  // Whether log W is defined on all of R (finite everywhere).
  bool finite_on_line() const;

 private:
  WeightKind kind_ = WeightKind::exp_power;
  double c_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<std::pair<double, double>> table_;
  std::shared_ptr<const DiscreteSequence> support_;
  std::vector<double> log_values_;
  std::function<double(double)> custom_;
  std::string name_;
  bool degenerate_ = false;
};

}  // namespace csk
