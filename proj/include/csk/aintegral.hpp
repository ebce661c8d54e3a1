#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csk/sequences.hpp"

namespace csk {

using cplx = std::complex<double>;

// Behaviour of a sampled function beyond its grid, in terms of |t|:
//   log:   a + b log|t|
//   power: a |t|^b   (b < 1)
//   none:  zero outside the grid (end samples must vanish)
struct TailModel {
  enum class Kind { none, log, power };
  struct Params {
    double a = 0.0;
    double b = 0.0;
  };
  Kind kind = Kind::none;
  Params left;
  Params right;

  double eval(double t) const;  // for t outside the grid
};

std::string to_string(TailModel::Kind k);

struct SampledFunction {
  std::vector<double> grid;
  std::vector<double> values;
  TailModel tail;
  std::optional<double> clamp;  // level A of a truncation, applied to the tail too

  // Grid strictly increasing, values finite, tail model matching the end
  // samples to `tail_tolerance` (relative to 1 + |value|).
  void validate(double tail_tolerance = 1e-3) const;
};

// h^A = max(-A, min(A, h)).
SampledFunction truncate_level(const SampledFunction& h, double A);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // difference against the half-resolution grid, / 3
};

// 𝒫h(z) = (1/π) ∫ y/((t-x)²+y²) h(t) dt, y > 0.
QuadResult poisson_integral(const SampledFunction& h, cplx z);

// Re 𝒦h(z) = (1/π) ∫ [(t-x)/((t-x)²+y²) - t/(1+t²)] h(t) dt, y >= 0.
QuadResult conjugate_poisson_integral(const SampledFunction& h, cplx z);

// 𝒦h(z) = Re 𝒦h(z) + i 𝒫h(z)
cplx modified_cauchy_integral(const SampledFunction& h, cplx z);

std::vector<double> default_a_schedule();

struct AIntegralReport {
  std::vector<double> schedule;
  std::vector<cplx> values;
  std::optional<cplx> limit;  // Aitken over the last three rows when the schedule converges
  double limit_error = 0.0;
  bool converged = false;
};

AIntegralReport cauchy_A_integral(const SampledFunction& h, cplx z, std::span<const double> schedule);

struct ResidualTable {
  std::vector<double> schedule;
  std::vector<double> values;
  std::vector<double> residuals;
  double final_residual = 0.0;
  bool nonincreasing_tail = false;  // over the last three steps of the schedule
};

// Residuals |𝒫(h̃^A)(i)|.
ResidualTable titchmarsh_check(const SampledFunction& h, const SampledFunction& h_conj,
                               std::span<const double> schedule);

struct UlyanovReport {
  std::vector<cplx> points;
  std::vector<ResidualTable> tables;  // per point, residual |Re 𝒦(h̃^A)(z) + 𝒫h(z) - 𝒫h(i)|
  double max_final_residual = 0.0;
};

UlyanovReport ulyanov_check(const SampledFunction& h, const SampledFunction& h_conj, std::span<const cplx> points,
                            std::span<const double> schedule);

struct PairGridOptions {
  double ratio = 1.01;
  double min_offset = 1e-14;
  double max_offset = 1e6;
};

struct FunctionPair {
  SampledFunction h;
  SampledFunction conj;
};

// π·1_{t > λ} and -½ log((λ - t)²/(1 + λ²)).
FunctionPair step_conjugate_pair(double lambda_m, const PairGridOptions& opt = {});
// Same step with the sign-flipped, unnormalized +½ log((λ - t)²).
FunctionPair mismatched_pair(double lambda_m, const PairGridOptions& opt = {});

struct CountingConjugate {
  std::int64_t m = 0;
  std::int64_t N = 0;
  double sum = 0.0;            // Σ_{1<=|m-k|<=N} ½ log((λ_m - λ_k)²/(1 + λ_k²))
  double p_m = 0.0;            // characteristic value at the matching window
  double relation_residual = 0.0;  // sum + (p_m - ½ log(1 + λ_m²))
};

CountingConjugate counting_conjugate(const DiscreteSequence& seq, std::int64_t m, std::int64_t N);

}  // namespace csk
