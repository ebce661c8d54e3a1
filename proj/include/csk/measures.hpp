#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csk/charseq.hpp"
#include "csk/sequences.hpp"
#include "csk/verdict.hpp"
#include "csk/weights.hpp"

namespace csk {

using cplx = std::complex<double>;

struct Atom {
  double t = 0.0;
  int sign = 1;
  double log_mag = 0.0;
};

// Signed discrete measure with masses sign * exp(log_mag).
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  // Locations strictly increasing, signs +-1, finite log magnitudes.
  explicit DiscreteMeasure(std::vector<Atom> atoms, bool normalized = false);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool normalized() const { return normalized_; }

  double max_log_mag() const { return max_log_; }
  double log_total_variation() const;
  double mass(std::size_t i) const { return atoms_[i].sign * std::exp(atoms_[i].log_mag); }

  // Natural index of the i-th atom (0 at the first non-negative location).
  std::int64_t natural_index(std::size_t i) const;
  std::optional<std::size_t> position_of_index(std::int64_t n) const;
  DiscreteSequence support() const;

  DiscreteMeasure normalize() const;          // unit total variation
  DiscreteMeasure scaled(double factor) const;  // factor > 0, drops the normalized tag

 private:
  std::vector<Atom> atoms_;
  bool normalized_ = false;
  double max_log_ = 0.0;
  std::size_t negatives_ = 0;
};

// Atom at λₙ with sign (-1)^n and log magnitude pₙ, normalized.
DiscreteMeasure masses_from_charseq(const DiscreteSequence& seq, const CharacteristicSequence& P);

// mantissa * exp(log_scale)
struct ScaledComplex {
  cplx mantissa{0.0, 0.0};
  double log_scale = 0.0;

  cplx value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
  double arg() const { return std::arg(mantissa); }
};

struct CauchyOptions {
  double exclusion = 1e-12;  // relative to the local inter-atom gap
};

// Kμ(z) = (1/π) Σ m/(t - z). Throws InputError when z collides with an atom.
ScaledComplex cauchy_transform_scaled(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt = {});
cplx cauchy_transform(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt = {});

// 𝒦μ(z) = (1/π) Σ m [1/(t - z) - t/(1 + t²)]
ScaledComplex modified_cauchy_transform_scaled(const DiscreteMeasure& mu, cplx z,
                                               const CauchyOptions& opt = {});
cplx modified_cauchy_transform(const DiscreteMeasure& mu, cplx z, const CauchyOptions& opt = {});

struct MomentValue {
  double value = 0.0;     // Σ m t^k
  double bound = 0.0;     // Σ |m| |t|^k
  double relative = 0.0;  // |value| / bound, computed at a common scale
};

MomentValue moment(const DiscreteMeasure& mu, int k);

struct AnnihilationReport {
  std::vector<MomentValue> rows;  // k = 0..kmax
  double tolerance = 0.0;
  bool annihilation_consistent = false;
};

AnnihilationReport annihilation_report(const DiscreteMeasure& mu, int kmax, double tolerance = 1e-3);

struct DecayOptions {
  // Bound on the total variation of atoms omitted by the truncation. Rows with
  // |Kμ(iy)| below bound/(πy) are untrusted.
  double omitted_mass_bound = 0.0;
  unsigned threads = 0;
};

struct DecayRow {
  double y = 0.0;
  double log_abs_K = 0.0;
  std::vector<double> scaled;  // y^n |Kμ(iy)| for n = 1..nmax
  bool trusted = true;
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  int nmax = 0;
  std::optional<double> untrusted_from;  // first y flagged untrusted
  std::vector<bool> order_decreasing;      // per n, over the trusted tail half
  std::vector<bool> order_monotone_all;    // per n, over all trusted rows
  int max_decaying_order = 0;
  bool sup_polynomial_decay_consistent = false;
};

DecayProfile decay_profile(const DiscreteMeasure& mu, std::span<const double> ys, int nmax,
                           const DecayOptions& opt = {});

struct ShiftIdentity {
  cplx residual;
  double scale = 0.0;  // sum of the magnitudes of the three parts
  double relative = 0.0;
};

// K(tᵏμ)(z) - zᵏ Kμ(z) - (1/π) Σ_{j<k} zʲ moment(μ, k-1-j)
ShiftIdentity moment_shift_identity(const DiscreteMeasure& mu, int k, cplx z);

// Σ W(t)|m| over atoms in increasing |t| order.
Verdict w_finiteness(const DiscreteMeasure& mu, const WeightSpec& W, const SeriesRule& rule = {});

struct ExtremeReport {
  double min_abs_K = 0.0;
  cplx argmin{0.0, 0.0};
  std::size_t grid_size = 0;
  bool signs_alternate = false;
  std::optional<std::size_t> first_alternation_break;  // atom position
  AnnihilationReport annihilation;
  DecayProfile decay;
  std::string outerness_note;
};

std::vector<cplx> rectangular_grid(double re_lo, double re_hi, double im_lo, double im_hi, int nx, int ny);

ExtremeReport extreme_property_check(const DiscreteMeasure& mu, std::span<const cplx> grid, int kmax,
                                     std::span<const double> ys, int nmax = 4, unsigned threads = 0);

}  // namespace csk
