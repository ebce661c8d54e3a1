#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csk/charseq.hpp"
#include "csk/criteria.hpp"
#include "csk/sequences.hpp"
#include "csk/verdict.hpp"

namespace csk {

// ũ(n^{1/α}) = -π n tan(απ - π/2), 0 < α <= ½, n >= 1
double conjugate_one_sided(double alpha, double n);
// ũ(±n^{1/α}) = -π n tan(απ/2 - π/2), 0 < α <= 1, n >= 1
double conjugate_two_sided(double alpha, double n);

struct ConjugateModel {
  bool two_sided = false;
  double alpha = 0.0;

  double conjugate(double n) const;
  // |tan(...)|·π, the slope of |ũ| in n
  double slope() const;
};

struct ComparisonRow {
  std::int64_t n = 0;  // generator base: λ = n^{1/α}
  double lambda = 0.0;
  double p = 0.0;
  double conj = 0.0;
  double residual_plus = 0.0;   // p - ũ
  double residual_minus = 0.0;  // p + ũ
  double ratio = 0.0;           // |p| / |ũ|
  double logfit = 0.0;          // |p - s ũ| / log λ
};

struct ComparisonReport {
  ConjugateModel model;
  std::int64_t count = 0;
  std::int64_t N = 0;
  bool accelerate = true;
  bool include_zero = true;
  std::vector<ComparisonRow> rows;
  int sign = 0;  // s minimizing Σ|p - s ũ|
  bool sign_stable = false;  // every row prefers the same s
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double logfit_min = 0.0;
  double logfit_max = 0.0;
  double log_coefficient = 0.0;  // least squares slope of p - s ũ against log λ
  double log_intercept = 0.0;
  double fit_exponent = 0.0;     // slope of log|p - s ũ| against log λ
  std::vector<std::string> warnings;
};

struct ComparisonOptions {
  std::int64_t n_lo = 10;
  std::int64_t n_hi = 50;
  std::int64_t count = 100000;
  std::int64_t N = 100000;
  bool accelerate = true;
  // Materialize λ₀ = 0 for one-sided presets so that the natural index of
  // n^{1/α} is n.
  bool include_zero = true;
  unsigned threads = 0;
};

ComparisonReport compare_p_vs_conjugate(const ConjugateModel& model, const ComparisonOptions& opt);

struct PowerDemoOptions {
  std::int64_t count = 100000;     // points per side
  std::int64_t index_range = 4000; // characteristic values for |n| <= index_range
  std::int64_t N = 0;              // 0: full window
  double hall_c = 0.01;            // small constant for the Hall cross-check, as a fraction of c_crit
  int bisection_steps = 40;
  unsigned threads = 0;
  CriterionOptions criterion;
};

struct PowerDemoReport {
  double alpha = 0.0;
  double c = 0.0;
  Verdict verdict;                 // main criterion at c
  double closed_form = 0.0;        // π |tan(απ/2 - π/2)|
  double c_star = 0.0;             // empirical flip point
  double relative_gap = 0.0;       // |c* - closed form| / closed form
  bool flip_found = false;
  Verdict small_c_verdict;         // main criterion at hall_c * closed form
  Verdict hall_verdict;            // hall criterion on the same small-c weight
};

// Reusable pieces so several constants can share one characteristic sequence.
struct PowerDemoData {
  DiscreteSequence seq;
  CharacteristicSequence P;
};
PowerDemoData power_demo_data(double alpha, const PowerDemoOptions& opt);

PowerDemoReport power_weight_demo(double c, double alpha, const PowerDemoOptions& opt = {});
PowerDemoReport power_weight_demo(double c, double alpha, const PowerDemoData& data, const PowerDemoOptions& opt);

}  // namespace csk
