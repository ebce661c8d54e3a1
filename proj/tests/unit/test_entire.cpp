#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "csk/charseq.hpp"
#include "csk/entire.hpp"
#include "csk/errors.hpp"
#include "support.hpp"

using namespace csk;
using test_support::rel_close;

namespace {

CharacteristicSequence synthetic(const DiscreteSequence& s, double (*p)(double)) {
  std::vector<std::int64_t> idx;
  std::vector<double> vals;
  for (std::int64_t n = s.first_index(); n <= s.last_index(); ++n) {
    idx.push_back(n);
    vals.push_back(p(s.at(n)));
  }
  return CharacteristicSequence::from_values(s, idx, vals);
}

DiscreteSequence integers(int hi) {
  std::vector<double> pts;
  for (int n = 0; n <= hi; ++n) pts.push_back(n);
  return materialize(SequenceSpec::explicit_list(pts));
}

}  // namespace

TEST_CASE("single factor product") {
  const DiscreteSequence one(std::vector<double>{1.0});
  const auto ev = product_eval(one, 0, cplx(0, 0));
  CHECK(ev.log_abs == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(ev.sign == -1);
  CHECK_THROWS_AS(product_eval(one, 0, cplx(1, 0)), InputError);
}

TEST_CASE("product matches direct multiplication on a small sequence") {
  const std::vector<double> pts{-2.5, -1, 0.25, 1.5, 4};
  const auto s = materialize(SequenceSpec::explicit_list(pts));
  for (cplx z : {cplx(0.7, 0.3), cplx(-3, 2), cplx(0.5, 0)}) {
    cplx F = (s.last_index() % 2 == 0) ? 1.0 : -1.0;
    for (double t : pts) F *= std::sqrt(1 + t * t) / (z - t);
    const auto ev = product_eval(s, 0, z);
    CHECK(ev.log_abs == doctest::Approx(std::log(std::abs(F))).epsilon(1e-13));
    if (z.imag() == 0.0) {
      CHECK(ev.sign == (F.real() > 0 ? 1 : -1));
    } else {
      CHECK(std::abs(std::remainder(ev.phase - std::arg(F), 2 * std::numbers::pi)) < 1e-12);
    }
  }
}

TEST_CASE("real-axis sign: constant between points, flips across each point") {
  const auto s = materialize(SequenceSpec::explicit_list({-3, -1.5, 0.2, 1, 2.5, 6}));
  for (std::int64_t N : {1, 2, 0}) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double a = s.points()[i], b = s.points()[i + 1];
      const int s1 = product_eval(s, N, cplx(a + 0.1 * (b - a), 0)).sign;
      const int s2 = product_eval(s, N, cplx(a + 0.5 * (b - a), 0)).sign;
      const int s3 = product_eval(s, N, cplx(a + 0.9 * (b - a), 0)).sign;
      CHECK(s1 == s2);
      CHECK(s2 == s3);
    }
  }
  const auto full = s.points();
  for (std::size_t i = 1; i + 1 < full.size(); ++i) {
    const int left = product_eval(s, 0, cplx(full[i] - 1e-3, 0)).sign;
    const int right = product_eval(s, 0, cplx(full[i] + 1e-3, 0)).sign;
    CHECK(left == -right);
  }
}

TEST_CASE("even sequence gives even modulus") {
  const auto s = materialize(SequenceSpec::even_mirror({0.5, 1.7, 3.0, 5.5}));
  for (double x : {0.1, 1.0, 2.2, 7.0}) {
    CHECK(product_eval(s, 0, cplx(x, 0)).log_abs == doctest::Approx(product_eval(s, 0, cplx(-x, 0)).log_abs).epsilon(1e-14));
  }
}

TEST_CASE("residues") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1}));
  const auto r0 = residue_log(s, 0, 0);
  const auto r1 = residue_log(s, 0, 1);
  CHECK(r0.log_abs == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(r0.sign == 1);
  CHECK(r1.log_abs == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(r1.sign == -1);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = test_support::random_points(rng, 25);
    const auto q = materialize(SequenceSpec::explicit_list(pts));
    for (std::int64_t n = q.first_index(); n <= q.last_index(); ++n) {
      CHECK(rel_close(residue_log(q, 0, n).log_abs, char_value(q, n, CharOptions{}).p, 1e-12));
    }
    for (std::int64_t N : {2, 5, 0}) {
      for (std::int64_t n = std::max(q.first_index(), -N) + 1; n <= std::min(q.last_index(), N == 0 ? q.last_index() : N); ++n) {
        CHECK(residue_log(q, N, n).sign == -residue_log(q, N, n - 1).sign);
      }
    }
  }
  CHECK_THROWS_AS(residue_log(s, 0, 5), InputError);
}

TEST_CASE("v_S") {
  const auto s = materialize(SequenceSpec::explicit_list({-1, 1}));
  CHECK(log_abs_vS(s, 0.0, 0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
  const auto q = materialize(SequenceSpec::power(0.5, true, 50));
  for (double x : {0.3, 12.5, -40.0}) {
    CHECK(log_abs_vS(q, x, 20) == -product_eval(q, 20, cplx(x, 0)).log_abs);
  }
  CHECK(log_abs_vS(s, 1e6, 0) > log_abs_vS(s, 1e3, 0));
}

TEST_CASE("F equals const times K on exact toys") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1}));
  const auto P = char_sequence(s, 0, 1, CharOptions{});
  const std::vector<cplx> zs{cplx(0, 1), cplx(1, 2)};
  const auto rep = identity_F_equals_cK(s, P, zs, 1e-12);
  CHECK(rep.identity_consistent);
  CHECK(rep.max_deviation < 1e-12);

  const DiscreteSequence one(std::vector<double>{2.0});
  const auto P1 = CharacteristicSequence::from_values(one, std::vector<std::int64_t>{0}, std::vector<double>{0.3});
  const std::vector<cplx> zs1{cplx(0, 1), cplx(-1, 3), cplx(5, -2)};
  const auto r1 = identity_F_equals_cK(one, P1, zs1, 1e-13);
  CHECK(r1.identity_consistent);
}

TEST_CASE("zero-set classification on synthetic characteristic sequences") {
  const auto s = integers(4000);
  const auto geo = classify_zero_set(s, synthetic(s, [](double x) { return -x; }), 2, 4000);
  CHECK(geo.hamburger_consistent);
  CHECK(geo.krein_consistent);
  CHECK(geo.classification == ZeroClass::hamburger);

  const auto cubic = classify_zero_set(s, synthetic(s, [](double x) { return -3.0 * std::log(std::max(x, 1.0)); }), 2, 4000);
  CHECK(cubic.krein_consistent);
  CHECK_FALSE(cubic.hamburger_consistent);
  CHECK(cubic.classification == ZeroClass::krein);

  const auto slow = classify_zero_set(
      s, synthetic(s, [](double x) { return -std::sqrt(std::log(std::max(x, 2.0))); }), 2, 4000);
  CHECK(slow.classification == ZeroClass::neither);
  CHECK(to_string(ZeroClass::krein) == "krein");

  CHECK_THROWS_AS(classify_zero_set(s, synthetic(s, [](double x) { return -x; }), 0, 5), InputError);
}

TEST_CASE("Hamburger-type function from the measure") {
  const auto s = materialize(SequenceSpec::power(1.0 / 3.0, true, 200));
  const auto P = char_sequence(s, s.first_index(), s.last_index(), CharOptions{});
  for (double x : {0.5, 3.3, -20.0}) {
    const auto F = hamburger_eval(s, P, cplx(x, 0));
    CHECK(std::fabs(std::sin(F.arg())) < 1e-12);
  }
  const double a = s.at(3);
  const auto l = hamburger_eval(s, P, cplx(a - 1e-3, 0));
  const auto r = hamburger_eval(s, P, cplx(a + 1e-3, 0));
  CHECK(std::cos(l.arg()) * std::cos(r.arg()) < 0);
}
