#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csk/sequences.hpp"

namespace csk {

enum class AccelMethod { raw, aitken, aitken_fallback };

std::string to_string(AccelMethod m);

struct CharEntry {
  std::int64_t index = 0;
  double lambda = 0.0;
  double p = 0.0;
  double error = 0.0;      // |p(N) - p(N/2)| raw, |accelerated - raw| for Aitken
  std::int64_t truncation = 0;  // effective N
  AccelMethod method = AccelMethod::raw;
  bool near_collision = false;
};

class CharacteristicSequence {
 public:
  CharacteristicSequence() = default;
  CharacteristicSequence(std::vector<CharEntry> entries, std::size_t source_size)
      : entries_(std::move(entries)), source_size_(source_size) {}

  // Synthetic sequences (tests, user supplied values). Errors are zero and the
  // truncation is recorded as 0.
  static CharacteristicSequence from_values(const DiscreteSequence& seq,
                                            std::span<const std::int64_t> indices,
                                            std::span<const double> values);

  const std::vector<CharEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t source_size() const { return source_size_; }

  const CharEntry* find(std::int64_t n) const;
  // Covers every index in [lo, hi].
  bool covers(std::int64_t lo, std::int64_t hi) const;

 private:
  std::vector<CharEntry> entries_;  // sorted by index
  std::size_t source_size_ = 0;
};

// Smallest N for which 0 < |n-k| < N reaches every materialized index.
std::int64_t full_window(const DiscreteSequence& seq, std::int64_t n);

// ½ log(1 + x²) without overflow for large |x|.
double half_log1p_sq(double x);

// log((1 + t²) / (t - x)²), accurate when the ratio is close to 1.
double char_term(double t, double x);

struct CharOptions {
  std::int64_t N = 0;  // 0 or anything beyond the data means the full window
  bool accelerate = false;
  double collision_ratio = 1e-3;
};

CharEntry char_value(const DiscreteSequence& seq, std::int64_t n, const CharOptions& opt);

CharacteristicSequence char_sequence(const DiscreteSequence& seq, std::int64_t lo, std::int64_t hi,
                                     const CharOptions& opt, unsigned threads = 0);
CharacteristicSequence char_sequence(const DiscreteSequence& seq, std::span<const std::int64_t> indices,
                                     const CharOptions& opt, unsigned threads = 0);

// Exact change of p_n caused by inserting the point a. Throws InputError when
// a is a point of seq or |λₙ - a| < min_gap.
double insertion_delta(const DiscreteSequence& seq, std::int64_t n, double a, double min_gap = 1e-12);

}  // namespace csk
