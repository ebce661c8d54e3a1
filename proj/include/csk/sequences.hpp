#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csk {

enum class GeneratorKind { explicit_points, power, even_mirror, geometric };

std::string to_string(GeneratorKind kind);

// Rule used to materialize a finite truncation of a discrete sequence.
//   explicit_points: `points` as given (must be strictly increasing)
//   power:           n^(1/alpha) for n = 1..count, mirrored to -n^(1/alpha)
//                    when two_sided; include_zero adds the point 0
//   even_mirror:     `points` (positive, increasing) together with their negatives
//   geometric:       ratio^n for n = 0..count-1
struct SequenceSpec {
  GeneratorKind kind = GeneratorKind::explicit_points;
  std::vector<double> points;
  double alpha = 0.0;
  bool two_sided = false;
  bool include_zero = false;
  double ratio = 0.0;
  std::size_t count = 0;

  static SequenceSpec explicit_list(std::vector<double> pts);
  static SequenceSpec power(double alpha, bool two_sided, std::size_t count,
                            bool include_zero = false);
  static SequenceSpec even_mirror(std::vector<double> positive_points);
  static SequenceSpec geometric(double ratio, std::size_t count);
};

// A strictly increasing finite list of reals with natural-order indexing:
// index 0 is the smallest non-negative point and index -1 the largest
// negative one. The list is a truncation of a conceptually infinite sequence.
class DiscreteSequence {
 public:
  DiscreteSequence() = default;

  // Validates strict monotonicity; throws InputError on duplicates or
  // non-increasing input.
  explicit DiscreteSequence(std::vector<double> points,
                            std::optional<SequenceSpec> generator = std::nullopt);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  std::int64_t first_index() const { return -static_cast<std::int64_t>(negatives_); }
  std::int64_t last_index() const {
    return static_cast<std::int64_t>(points_.size()) - static_cast<std::int64_t>(negatives_) - 1;
  }
  bool has_index(std::int64_t n) const { return n >= first_index() && n <= last_index(); }

  std::size_t position(std::int64_t n) const;  // throws InputError when absent
  std::int64_t index_at(std::size_t position) const {
    return static_cast<std::int64_t>(position) - static_cast<std::int64_t>(negatives_);
  }
  double at(std::int64_t n) const { return points_[position(n)]; }

  // Natural index of the point equal to x (within `tolerance`), if any.
  std::optional<std::int64_t> find(double x, double tolerance = 0.0) const;

  std::size_t negative_count() const { return negatives_; }
  const std::optional<SequenceSpec>& generator() const { return generator_; }

  // Whether truncation (rather than the definition) bounds the given side.
  // Bounded sides of one-sided generators are not truncated.
  bool truncated_above() const;
  bool truncated_below() const;

 private:
  std::vector<double> points_;
  std::size_t negatives_ = 0;
  std::optional<SequenceSpec> generator_;
};

DiscreteSequence materialize(const SequenceSpec& spec);

// The points at the given natural indices, re-enumerated in their own natural
// order.
DiscreteSequence subsequence(const DiscreteSequence& seq, std::span<const std::int64_t> indices);

struct DensityReport {
  std::vector<double> radii;
  std::vector<std::size_t> counts;   // #[seq ∩ (-A, A)]
  std::vector<double> ratios;        // count / (2A)
  std::vector<bool> saturated;       // radius beyond the materialized extent
  double tail_sup = 0.0;             // sup of ratios over the unsaturated tail half
  double threshold = 0.0;
  bool zero_density_consistent = false;
};

// Counting density over a schedule of window radii. Verdict: the last three
// unsaturated ratios are non-increasing and the last one is below threshold.
DensityReport upper_density(const DiscreteSequence& seq, std::span<const double> radii,
                            double threshold = 0.05);
std::vector<double> default_density_schedule(const DiscreteSequence& seq);

struct BalanceReport {
  std::vector<std::int64_t> windows;  // N
  std::vector<double> partial_sums;   // S_N = sum_{|n|<N} λ/(1+λ²)
  std::vector<double> doubled_sums;   // S_2N
  std::vector<double> gaps;           // |S_2N - S_N|
  std::vector<bool> saturated;        // S_2N window exceeds a truncated side
  double tolerance = 0.0;
  bool balanced_consistent = false;
};

double balance_partial_sum(const DiscreteSequence& seq, std::int64_t window);

// Verdict: at least one unsaturated gap exists and the last one is below tolerance.
BalanceReport balance_partial_sums(const DiscreteSequence& seq, std::span<const std::int64_t> windows,
                                   double tolerance = 1e-8);
std::vector<std::int64_t> default_balance_schedule(const DiscreteSequence& seq);

}  // namespace csk
