#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>

namespace csk {

// Neumaier's variant of Kahan summation. Order of add() calls is preserved,
// which matters for the conditionally convergent principal-value sums.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Streaming log(sum_i exp(x_i)) for non-negative terms given by their logs.
// Terms equal to -inf are zero and ignored; a +inf term makes the sum infinite.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (std::isinf(log_term)) {
      max_ = log_term;
      return;
    }
    if (std::isinf(max_) && max_ > 0) return;
    if (log_term <= max_) {
      scaled_.add(std::exp(log_term - max_));
    } else {
      const double rescale = std::isinf(max_) ? 0.0 : std::exp(max_ - log_term);
      CompensatedSum next;
      next.add(scaled_.value() * rescale);
      next.add(1.0);
      scaled_ = next;
      max_ = log_term;
    }
  }

  double value() const {
    if (std::isinf(max_)) return max_;
    return max_ + std::log(scaled_.value());
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  CompensatedSum scaled_;
};

inline double log_sum_exp(std::span<const double> log_terms) {
  LogSumExp acc;
  for (double x : log_terms) acc.add(x);
  return acc.value();
}

}  // namespace csk
