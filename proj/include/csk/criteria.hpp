#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csk/charseq.hpp"
#include "csk/measures.hpp"
#include "csk/sequences.hpp"
#include "csk/verdict.hpp"
#include "csk/weights.hpp"

namespace csk {

struct SupNorm {
  double value = 0.0;  // grid lower bound of sup |f|/W
  double argmax = 0.0;
};

SupNorm weighted_sup_norm(std::span<const double> xs, std::span<const double> fs, const WeightSpec& W);

struct CriterionOptions {
  SeriesRule rule;
  double density_threshold = 0.05;
  double balance_tolerance = 1e-8;
  std::vector<double> density_radii;         // empty: default schedule
  std::vector<std::int64_t> balance_windows;  // empty: default schedule
};

// Σ W(λₙ) exp(pₙ) over the entries of P in increasing |λ| order, together
// with the zero-density and balance checks on seq.
Verdict main_criterion(const WeightSpec& W, const DiscreteSequence& seq, const CharacteristicSequence& P,
                       const CriterionOptions& opt = {});

// Smallest C >= 0 with log W(λₙ) + pₙ <= C (1 + log|λₙ|) over entries with
// index in [lo, hi] and |λₙ| >= 1; witnessed when the fitted ratios stay
// bounded over the tail half.
Verdict nondegenerate_simplified(const WeightSpec& W, const DiscreteSequence& seq,
                                 const CharacteristicSequence& P, std::int64_t lo, std::int64_t hi,
                                 const CriterionOptions& opt = {});

// Corollary criteria for a positive measure μ and a subsequence Γ of its
// support given by natural indices of μ (empty: the whole support). P is the
// characteristic sequence of Γ in Γ's own natural indexing.
Verdict lp_criterion(const DiscreteMeasure& mu, double p, std::span<const std::int64_t> subseq,
                     const CharacteristicSequence& P, const CriterionOptions& opt = {});
Verdict l1_criterion(const DiscreteMeasure& mu, std::span<const std::int64_t> subseq,
                     const CharacteristicSequence& P, const CriterionOptions& opt = {});
Verdict cw_discrete_criterion(const DiscreteMeasure& mu, std::span<const std::int64_t> subseq,
                              const CharacteristicSequence& P, const CriterionOptions& opt = {});

// The subsequence Γ as a sequence (re-enumerated) and the masses on it.
struct SubMeasure {
  DiscreteSequence gamma;
  std::vector<double> log_mass;  // by position in gamma
};
SubMeasure restrict_measure(const DiscreteMeasure& mu, std::span<const std::int64_t> subseq);

struct HallOptions {
  int max_doublings = 60;     // shells up to R = 2^max_doublings
  double ratio_limit = 0.9;   // increments must shrink by this factor
  double tail_relative = 1e-6;
  double max_relative_gap = 1.0;  // tabulated weights: (x_{i+1}-x_i)/(1+|x_i|)
};

// ∫ log W(x)/(1+x²) dx over [-1, 1] and the shells ±[R, 2R].
Verdict hall_criterion(const WeightSpec& W, const HallOptions& opt = {});

struct ConvexityReport {
  std::size_t points = 0;
  double max_violation = 0.0;  // relative slope decrease
  double at_x = 0.0;
  double tolerance = 1e-9;
  bool log_convex = false;
};

// Convexity of t ↦ log W(eᵗ) on the grid t = log x (x > 0).
ConvexityReport log_convexity_check(const WeightSpec& W, std::span<const double> xs, double tolerance = 1e-9);
std::vector<double> default_convexity_grid();

struct CarlesonOptions {
  std::vector<double> grid;  // empty: default_convexity_grid()
  double evenness_tolerance = 1e-12;
  HallOptions hall;
};

// Throws InputError when W is not even or not log-convex on the grid.
Verdict carleson_verdict(const WeightSpec& W, const CarlesonOptions& opt = {});

}  // namespace csk
