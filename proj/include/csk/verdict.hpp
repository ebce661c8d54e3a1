#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace csk {

enum class Outcome { witnessed, not_witnessed, witnessed_dense };

// "witnessed", "not-witnessed-at-truncation", "witnessed-dense"
std::string to_string(Outcome o);

// Outcome of a criterion with its numeric evidence. Witnessed always means
// consistent at the recorded truncation, never a proof.
struct Verdict {
  std::string criterion;
  Outcome outcome = Outcome::not_witnessed;
  std::map<std::string, std::vector<double>> evidence;
  std::map<std::string, double> figures;
  std::map<std::string, bool> checks;
  std::int64_t truncation = 0;
  double tolerance = 0.0;
  std::vector<std::string> notes;
};

// Convergence rule for series of positive terms given by their logs, in
// summation order. Blocks are the terms with positions in [M/8, M/4),
// [M/4, M/2) and [M/2, M) for M terms; each block must be at least
// `decay_factor` times smaller than the previous one and the geometric
// extrapolation of the remainder must stay below `tail_relative` of the sum.
struct SeriesRule {
  double decay_factor = 1.5;
  double tail_relative = 1e-6;
  std::size_t min_terms = 8;
};

struct SeriesAssessment {
  bool converged = false;
  bool infinite_term = false;
  double log_sum = 0.0;
  double log_tail = 0.0;          // log of the extrapolated remainder
  std::vector<double> block_logs;  // three block sums, in log
  std::vector<double> doubling_counts;
  std::vector<double> doubling_log_sums;  // log partial sums after 1, 2, 4, ... terms and after M
  std::string reason;
};

SeriesAssessment assess_series(std::span<const double> log_terms, const SeriesRule& rule = {});

// Writes the assessment into a verdict's evidence and figures.
void attach_series(Verdict& v, const SeriesAssessment& s, const SeriesRule& rule);

}  // namespace csk
