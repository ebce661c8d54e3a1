#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "csk/charseq.hpp"
#include "csk/errors.hpp"
#include "csk/sequences.hpp"
#include "support.hpp"

using namespace csk;
using test_support::rel_close;

namespace {

// Direct evaluation in position order with long double Kahan summation.
double brute_p(const std::vector<double>& pts, std::size_t pos) {
  const long double x = pts[pos];
  long double sum = 0.0L, comp = 0.0L;
  auto add = [&](long double v) {
    const long double y = v - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  add(std::log(1.0L + x * x));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k == pos) continue;
    const long double t = pts[k];
    add(std::log((1.0L + t * t) / ((t - x) * (t - x))));
  }
  return static_cast<double>(0.5L * sum);
}

CharOptions full() { return CharOptions{}; }

}  // namespace

TEST_CASE("two-point sequence") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1}));
  const double half_ln2 = 0.5 * std::log(2.0);
  CHECK(char_value(s, 0, full()).p == doctest::Approx(half_ln2).epsilon(1e-15));
  CHECK(char_value(s, 1, full()).p == doctest::Approx(half_ln2).epsilon(1e-15));
  const auto P = char_sequence(s, 0, 1, full());
  REQUIRE(P.size() == 2);
  CHECK(P.entries()[0].p == doctest::Approx(half_ln2));
  CHECK(P.entries()[1].p == doctest::Approx(half_ln2));
  CHECK(P.covers(0, 1));
}

TEST_CASE("empty index list gives an empty sequence") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1, 2}));
  const std::vector<std::int64_t> none;
  CHECK(char_sequence(s, none, full()).empty());
}

TEST_CASE("full window matches a brute-force sum on random sequences") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> len(3, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = test_support::random_points(rng, std::size_t(len(rng)));
    const auto s = materialize(SequenceSpec::explicit_list(pts));
    for (std::size_t pos = 0; pos < pts.size(); ++pos) {
      const auto e = char_value(s, s.index_at(pos), full());
      CHECK(rel_close(e.p, brute_p(pts, pos), 1e-12));
    }
  }
}

TEST_CASE("even symmetry is exact") {
  const auto s = materialize(SequenceSpec::power(1.0 / 3.0, true, 300));
  for (std::int64_t n : {0, 3, 17, 120}) {
    CharOptions o;
    o.N = 150;
    CHECK(char_value(s, n, o).p == char_value(s, -n - 1, o).p);
  }
  const auto m = materialize(SequenceSpec::even_mirror({0.25, 1.0, 2.5, 3.0, 8.0}));
  for (std::int64_t n = 0; n <= m.last_index(); ++n) CHECK(char_value(m, n, full()).p == char_value(m, -n - 1, full()).p);
}

TEST_CASE("insertion delta") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1}));
  CHECK(insertion_delta(s, 0, 3.0) == doctest::Approx(0.5 * std::log(10.0 / 9.0)).epsilon(1e-14));
  CHECK(insertion_delta(s, 0, 3.0) == doctest::Approx(0.052680).epsilon(1e-5));
  CHECK_THROWS_AS(insertion_delta(s, 0, 1.0), InputError);
  CHECK_THROWS_AS(insertion_delta(s, 0, 1e-14), InputError);
  const double far = insertion_delta(s, 1, 1e8);
  CHECK(far > 0.0);
  CHECK(far < 1e-7);
}

TEST_CASE("insertion consistency on random sequences") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (int trial = 0; trial < 30; ++trial) {
    auto pts = test_support::random_points(rng, 12);
    const auto s = materialize(SequenceSpec::explicit_list(pts));
    double a = u(rng);
    bool clear = true;
    for (double x : pts) clear = clear && std::fabs(x - a) > 1e-3;
    if (!clear) continue;
    auto with = pts;
    with.push_back(a);
    std::sort(with.begin(), with.end());
    const auto s2 = materialize(SequenceSpec::explicit_list(with));
    for (std::int64_t n = s.first_index(); n <= s.last_index(); ++n) {
      const double x = s.at(n);
      const auto n2 = *s2.find(x);
      const double delta = char_value(s2, n2, full()).p - char_value(s, n, full()).p;
      CHECK(rel_close(delta, insertion_delta(s, n, a), 1e-12));
    }
  }
}

TEST_CASE("parallel evaluation is bit-identical to sequential") {
  const auto s = materialize(SequenceSpec::power(0.5, true, 2000));
  CharOptions o;
  o.N = 1500;
  o.accelerate = true;
  const auto a = char_sequence(s, -100, 100, o, 1);
  const auto b = char_sequence(s, -100, 100, o, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries()[i].p == b.entries()[i].p);
    CHECK(a.entries()[i].error == b.entries()[i].error);
    CHECK(a.entries()[i].p == char_value(s, a.entries()[i].index, o).p);
  }
}

TEST_CASE("raw error estimates shrink along doubling windows") {
  const auto pw = materialize(SequenceSpec::power(0.5, true, 40000));
  const auto geo = materialize(SequenceSpec::geometric(1.5, 60));
  for (const auto* s : {&pw, &geo}) {
    double prev = INFINITY;
    for (std::int64_t N = 16; N <= std::min<std::int64_t>(16384, std::int64_t(s->size()) / 2); N *= 2) {
      CharOptions o;
      o.N = N;
      const double err = char_value(*s, 3, o).error;
      CHECK(err <= prev);
      prev = err;
    }
  }
}

TEST_CASE("acceleration tags and improvement") {
  const auto s = materialize(SequenceSpec::power(0.5, true, 200000));
  CharOptions raw;
  raw.N = 2000;
  CharOptions acc = raw;
  acc.accelerate = true;
  CharOptions ref;
  ref.N = 200000;
  const double target = char_value(s, 5, ref).p;
  const auto a = char_value(s, 5, acc);
  CHECK(a.method == AccelMethod::aitken);
  CHECK(std::fabs(a.p - target) < std::fabs(char_value(s, 5, raw).p - target));

  const auto tiny = materialize(SequenceSpec::explicit_list({0, 1, 2}));
  CHECK(char_value(tiny, 0, acc).method == AccelMethod::aitken_fallback);
  CHECK(to_string(AccelMethod::raw) == "raw");
}

TEST_CASE("near collisions are flagged") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1, 1 + 1e-6, 2, 3}));
  CHECK(char_value(s, 1, full()).near_collision);
  CHECK_FALSE(char_value(s, 3, full()).near_collision);
}

TEST_CASE("characteristic terms") {
  CHECK(char_term(0.0, 1.0) == doctest::Approx(0.0));
  CHECK(char_term(3.0, 0.0) == doctest::Approx(std::log(10.0 / 9.0)).epsilon(1e-14));
  CHECK(half_log1p_sq(1e200) == doctest::Approx(std::log(1e200)));
  CHECK(full_window(materialize(SequenceSpec::explicit_list({0, 1, 2, 3})), 0) == 4);
}
