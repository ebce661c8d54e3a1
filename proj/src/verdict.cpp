#include "csk/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csk/summation.hpp"

namespace csk {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::witnessed: return "witnessed";
    case Outcome::not_witnessed: return "not-witnessed-at-truncation";
    case Outcome::witnessed_dense: return "witnessed-dense";
  }
  return "unknown";
}

SeriesAssessment assess_series(std::span<const double> log_terms, const SeriesRule& rule) {
  SeriesAssessment s;
  const std::size_t M = log_terms.size();
  LogSumExp total;
  std::size_t next = 1;
  for (std::size_t i = 0; i < M; ++i) {
    if (std::isinf(log_terms[i]) && log_terms[i] > 0) {
      s.infinite_term = true;
      s.log_sum = std::numeric_limits<double>::infinity();
      s.reason = "infinite term at position " + std::to_string(i);
      return s;
    }
    total.add(log_terms[i]);
    if (i + 1 == next || i + 1 == M) {
      s.doubling_counts.push_back(static_cast<double>(i + 1));
      s.doubling_log_sums.push_back(total.value());
      if (i + 1 == next) next *= 2;
    }
  }
  s.log_sum = total.value();
  if (M < std::max<std::size_t>(rule.min_terms, 8)) {
    s.reason = "too few terms";
    return s;
  }
  const std::size_t cuts[4] = {M / 8, M / 4, M / 2, M};
  for (int b = 0; b < 3; ++b) {
    s.block_logs.push_back(log_sum_exp(log_terms.subspan(cuts[b], cuts[b + 1] - cuts[b])));
  }
  const double step = std::log(rule.decay_factor);
  const bool decays = s.block_logs[1] <= s.block_logs[0] - step && s.block_logs[2] <= s.block_logs[1] - step;
  if (s.block_logs[2] == kNegInf) {
    s.log_tail = kNegInf;
  } else {
    const double r = std::exp(s.block_logs[2] - s.block_logs[1]);
    s.log_tail = r < 1.0 ? s.block_logs[2] + std::log(r / (1.0 - r)) : std::numeric_limits<double>::infinity();
  }
  const bool small_tail = s.log_tail < std::log(rule.tail_relative) + s.log_sum;
  s.converged = decays && small_tail;
  if (!decays) {
    s.reason = "block sums over the last three doublings do not decay by the required factor";
  } else if (!small_tail) {
    s.reason = "extrapolated remainder exceeds the relative tail tolerance";
  } else {
    s.reason = "converged";
  }
  return s;
}

void attach_series(Verdict& v, const SeriesAssessment& s, const SeriesRule& rule) {
  v.evidence["partial_log_sums"] = s.doubling_log_sums;
  v.evidence["partial_counts"] = s.doubling_counts;
  v.evidence["block_log_sums"] = s.block_logs;
  v.figures["log_sum"] = s.log_sum;
  v.figures["log_tail_estimate"] = s.log_tail;
  v.figures["decay_factor"] = rule.decay_factor;
  v.figures["tail_relative"] = rule.tail_relative;
  v.checks["series_converged"] = s.converged;
  v.checks["infinite_term"] = s.infinite_term;
  v.notes.push_back("series: " + s.reason);
}

}  // namespace csk
