#include "csk/charseq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csk/errors.hpp"
#include "csk/parallel.hpp"
#include "csk/summation.hpp"

namespace csk {

std::string to_string(AccelMethod m) {
  switch (m) {
    case AccelMethod::raw: return "raw";
    case AccelMethod::aitken: return "aitken";
    case AccelMethod::aitken_fallback: return "aitken-fallback";
  }
  return "unknown";
}

CharacteristicSequence CharacteristicSequence::from_values(const DiscreteSequence& seq,
                                                           std::span<const std::int64_t> indices,
                                                           std::span<const double> values) {
  if (indices.size() != values.size()) {
    throw InputError("characteristic sequence: index and value counts differ");
  }
  std::vector<CharEntry> out;
  out.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    CharEntry e;
    e.index = indices[i];
    e.lambda = seq.at(indices[i]);
    e.p = values[i];
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const CharEntry& a, const CharEntry& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].index == out[i - 1].index) throw InputError("characteristic sequence: repeated index");
  }
  return CharacteristicSequence(std::move(out), seq.size());
}

const CharEntry* CharacteristicSequence::find(std::int64_t n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const CharEntry& e, std::int64_t v) { return e.index < v; });
  if (it == entries_.end() || it->index != n) return nullptr;
  return &*it;
}

bool CharacteristicSequence::covers(std::int64_t lo, std::int64_t hi) const {
  for (std::int64_t n = lo; n <= hi; ++n) {
    if (!find(n)) return false;
  }
  return true;
}

std::int64_t full_window(const DiscreteSequence& seq, std::int64_t n) {
  return std::max(n - seq.first_index(), seq.last_index() - n) + 1;
}

double half_log1p_sq(double x) {
  const double a = std::fabs(x);
  if (a > 1e150) return std::log(a) + 0.5 * std::log1p(1.0 / (a * a));
  return 0.5 * std::log1p(a * a);
}

namespace {

// Same as char_term with ½log(1+t²) supplied.
inline double term_with(double t, double lh_t, double x) {
  const double d = t - x;
  const double r = x / d;
  const double q = 1.0 / (d * d) + r * ((2.0 * t - x) / d);
  if (std::fabs(q) < 0.5) return std::log1p(q);
  return 2.0 * (lh_t - std::log(std::fabs(d)));
}

bool near_collision_at(std::span<const double> pts, std::size_t pos, double ratio) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  const std::size_t lo = pos >= 8 ? pos - 8 : 0;
  const std::size_t hi = std::min(n - 1, pos + 8);
  std::vector<double> gaps;
  for (std::size_t i = lo; i < hi; ++i) gaps.push_back(pts[i + 1] - pts[i]);
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
  const double median = gaps[gaps.size() / 2];
  double nearest = std::numeric_limits<double>::infinity();
  if (pos > 0) nearest = std::min(nearest, pts[pos] - pts[pos - 1]);
  if (pos + 1 < n) nearest = std::min(nearest, pts[pos + 1] - pts[pos]);
  return nearest < ratio * median;
}

CharEntry char_value_impl(const DiscreteSequence& seq, std::int64_t n, const CharOptions& opt,
                          const std::vector<double>* lh);

}  // namespace

double char_term(double t, double x) { return term_with(t, half_log1p_sq(t), x); }

CharEntry char_value(const DiscreteSequence& seq, std::int64_t n, const CharOptions& opt) {
  return char_value_impl(seq, n, opt, nullptr);
}

namespace {

CharEntry char_value_impl(const DiscreteSequence& seq, std::int64_t n, const CharOptions& opt,
                          const std::vector<double>* lh) {
  if (!seq.has_index(n)) {
    std::ostringstream os;
    os << "charseq: index " << n << " is not materialized";
    throw InputError(os.str());
  }
  if (seq.size() < 2) throw InputError("charseq: window is empty (sequence has a single point)");
  const std::int64_t full = full_window(seq, n);
  std::int64_t N = opt.N <= 0 ? full : std::min(opt.N, full);
  if (N < 2) throw InputError("charseq: truncation order must be at least 2 for a non-empty window");

  const auto pts = seq.points();
  const std::size_t pos = seq.position(n);
  const double x = pts[pos];
  const std::int64_t first = seq.first_index();
  const std::int64_t last = seq.last_index();

  // partial sums recorded after |n-k| < N/4, N/2, N
  const std::int64_t marks[3] = {N / 4, N / 2, N};
  double partial[3] = {0.0, 0.0, 0.0};
  CompensatedSum s;
  int next_mark = 0;
  while (next_mark < 3 && marks[next_mark] <= 1) partial[next_mark++] = 0.0;
  for (std::int64_t j = 1; j < N; ++j) {
    const std::int64_t kl = n - j;
    const std::int64_t kr = n + j;
    if (kl >= first) {
      const auto i = static_cast<std::size_t>(kl - first);
      s.add(term_with(pts[i], lh ? (*lh)[i] : half_log1p_sq(pts[i]), x));
    }
    if (kr <= last) {
      const auto i = static_cast<std::size_t>(kr - first);
      s.add(term_with(pts[i], lh ? (*lh)[i] : half_log1p_sq(pts[i]), x));
    }
    while (next_mark < 3 && marks[next_mark] == j + 1) partial[next_mark++] = s.value();
  }
  const double base = half_log1p_sq(x);
  double p[3];
  for (int i = 0; i < 3; ++i) p[i] = base + 0.5 * partial[i];

  CharEntry e;
  e.index = n;
  e.lambda = x;
  e.truncation = N;
  e.near_collision = near_collision_at(pts, pos, opt.collision_ratio);
  e.p = p[2];
  e.error = std::fabs(p[2] - p[1]);
  e.method = AccelMethod::raw;
  if (opt.accelerate) {
    const double d1 = p[2] - p[1];
    const double d0 = p[1] - p[0];
    const double denom = d1 - d0;
    bool ok = N >= 8 && denom != 0.0 && std::isfinite(denom);
    double acc = 0.0;
    if (ok) {
      acc = p[2] - d1 * d1 / denom;
      ok = std::isfinite(acc) && std::fabs(d1 * d1 / denom) <= 1e3 * (std::fabs(d1) + std::fabs(d0));
    }
    if (ok) {
      e.p = acc;
      e.error = std::fabs(acc - p[2]);
      e.method = AccelMethod::aitken;
    } else {
      e.method = AccelMethod::aitken_fallback;
    }
  }
  if (!std::isfinite(e.p)) throw NumericError("charseq: non-finite value at index " + std::to_string(n));
  return e;
}

}  // namespace

CharacteristicSequence char_sequence(const DiscreteSequence& seq, std::span<const std::int64_t> indices,
                                     const CharOptions& opt, unsigned threads) {
  std::vector<std::int64_t> idx(indices.begin(), indices.end());
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (std::int64_t n : idx) {
    if (!seq.has_index(n)) {
      std::ostringstream os;
      os << "charseq: index " << n << " outside materialized range [" << seq.first_index() << ", "
         << seq.last_index() << "]";
      throw InputError(os.str());
    }
  }
  std::vector<double> lh(seq.size());
  for (std::size_t i = 0; i < lh.size(); ++i) lh[i] = half_log1p_sq(seq.points()[i]);
  std::vector<CharEntry> out(idx.size());
  parallel_for(idx.size(), [&](std::size_t i) { out[i] = char_value_impl(seq, idx[i], opt, &lh); }, threads);
  return CharacteristicSequence(std::move(out), seq.size());
}

CharacteristicSequence char_sequence(const DiscreteSequence& seq, std::int64_t lo, std::int64_t hi,
                                     const CharOptions& opt, unsigned threads) {
  std::vector<std::int64_t> idx;
  for (std::int64_t n = lo; n <= hi; ++n) idx.push_back(n);
  return char_sequence(seq, idx, opt, threads);
}

double insertion_delta(const DiscreteSequence& seq, std::int64_t n, double a, double min_gap) {
  const double x = seq.at(n);
  if (seq.find(a).has_value()) {
    std::ostringstream os;
    os << "insertion_delta: " << a << " is already a point of the sequence";
    throw InputError(os.str());
  }
  if (std::fabs(x - a) < min_gap) {
    throw InputError("insertion_delta: inserted point within the exclusion gap of the evaluation point");
  }
  return 0.5 * char_term(a, x);
}

}  // namespace csk
