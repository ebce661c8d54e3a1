#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csk/charseq.hpp"
#include "csk/measures.hpp"
#include "csk/sequences.hpp"
#include "csk/verdict.hpp"

namespace csk {

// F_N(z) = (-1)^hi Π_{lo <= k <= hi} √(1+λ_k²)/(z - λ_k) over the window
// |k| <= N intersected with the materialized indices; hi is the largest index
// in the window. With this prefactor the residue at λₙ has sign (-1)ⁿ.
struct ProductEvaluation {
  double log_abs = 0.0;
  double phase = 0.0;  // in (-π, π]
  int sign = 0;        // ±1 on the real axis, 0 off it
  std::int64_t truncation = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

// N <= 0 selects the full window.
ProductEvaluation product_eval(const DiscreteSequence& seq, std::int64_t N, cplx z, double exclusion = 1e-12);

struct ResidueLog {
  double log_abs = 0.0;
  int sign = 1;
};

ResidueLog residue_log(const DiscreteSequence& seq, std::int64_t N, std::int64_t n);

// v_S(x) = ½ Σ log((s - x)²/(1 + s²)) over the product window; identical to
// -product_eval(seq, N, x).log_abs by construction.
double log_abs_vS(const DiscreteSequence& seq, double x, std::int64_t N);

struct IdentityReport {
  std::vector<cplx> points;
  std::vector<double> log_abs_ratio;  // log|F/Kμ|
  std::vector<double> phase_ratio;
  std::vector<bool> usable;           // false where Kμ vanished
  double constant_log_abs = 0.0;      // realized constant F/Kμ at the first usable point
  double constant_phase = 0.0;
  double max_deviation = 0.0;         // max pairwise |r_i/r_j - 1|
  double tolerance = 0.0;
  bool identity_consistent = false;
  std::vector<std::string> notes;
};

IdentityReport identity_F_equals_cK(const DiscreteSequence& seq, const CharacteristicSequence& P,
                                    std::span<const cplx> points, double tolerance = 1e-6);

enum class ZeroClass { hamburger, krein, neither };
std::string to_string(ZeroClass c);

struct ZeroSetClass {
  ZeroClass classification = ZeroClass::neither;
  bool hamburger_consistent = false;
  bool krein_consistent = false;
  bool p_negative_on_tail = false;
  double head_sup = 0.0;  // sup |log|λₙ|/pₙ| over the first half of the tail
  double tail_sup = 0.0;  // same over the second half
  std::vector<std::int64_t> indices;
  std::vector<double> ratios;  // log|λₙ|/pₙ
  SeriesAssessment krein_series;
};

// Tail range [lo, hi] of natural indices, at least 8 usable entries (|λ| > 1).
ZeroSetClass classify_zero_set(const DiscreteSequence& seq, const CharacteristicSequence& P, std::int64_t lo,
                               std::int64_t hi, const SeriesRule& rule = {});

// F = 1/Kμ with μ = masses_from_charseq(seq, P), in log/phase form.
ScaledComplex hamburger_eval(const DiscreteSequence& seq, const CharacteristicSequence& P, cplx z);
ScaledComplex hamburger_eval(const DiscreteMeasure& mu, cplx z);

}  // namespace csk
