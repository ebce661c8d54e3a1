#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "csk/aintegral.hpp"
#include "csk/errors.hpp"
#include "csk/sequences.hpp"

using namespace csk;

namespace {

constexpr double pi = std::numbers::pi;

SampledFunction constant(double c) {
  SampledFunction h;
  h.grid = {-1000, -10, -1, 0, 1, 10, 1000};
  h.values.assign(7, c);
  h.tail.kind = TailModel::Kind::power;
  h.tail.left = {c, 0.0};
  h.tail.right = {c, 0.0};
  return h;
}

SampledFunction zero_function() {
  SampledFunction h;
  h.grid = {-1, 0, 1};
  h.values = {0, 0, 0};
  return h;
}

SampledFunction lorentzian() {
  SampledFunction h;
  std::vector<double> pos;
  for (int i = 0; i <= 20000; ++i) pos.push_back(i * 1e-3);
  for (double t = 20.0 * 1.001; t < 1e4; t *= 1.001) pos.push_back(t);
  pos.push_back(1e4);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it > 0) h.grid.push_back(-*it);
  }
  for (double t : pos) h.grid.push_back(t);
  for (double t : h.grid) h.values.push_back(1.0 / (1.0 + t * t));
  h.tail.kind = TailModel::Kind::power;
  h.tail.left = {1.0, -2.0};
  h.tail.right = {1.0, -2.0};
  return h;
}

}  // namespace

TEST_CASE("level truncation") {
  const auto five = truncate_level(constant(5.0), 3.0);
  for (double v : five.values) CHECK(v == 3.0);
  REQUIRE(five.clamp);
  CHECK(*five.clamp == 3.0);

  const auto small = truncate_level(constant(0.5), 3.0);
  CHECK(small.values == constant(0.5).values);

  SampledFunction id;
  id.grid = {-3, -1, -0.5, 0, 0.5, 1, 3};
  id.values = id.grid;
  const auto cl = truncate_level(id, 1.0);
  CHECK(cl.values == std::vector<double>{-1, -1, -0.5, 0, 0.5, 1, 1});
  const auto twice = truncate_level(cl, 1.0);
  CHECK(twice.values == cl.values);
  CHECK(*twice.clamp == *cl.clamp);
  CHECK_THROWS_AS(truncate_level(id, 0.0), InputError);
}

TEST_CASE("Poisson integral") {
  const auto one = constant(1.0);
  for (double y : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    for (double x : {-4.0, 0.0, 2.5}) {
      CHECK(std::fabs(poisson_integral(one, cplx(x, y)).value - 1.0) < 1e-8);
    }
  }

  // (π/2) sign(t): Poisson extension arctan(x/y)
  auto sgn = step_conjugate_pair(0.0).h;
  for (double& v : sgn.values) v -= pi / 2;
  sgn.tail.left = {-pi / 2, 0.0};
  sgn.tail.right = {pi / 2, 0.0};
  CHECK(std::fabs(poisson_integral(sgn, cplx(0, 1)).value) < 1e-12);
  CHECK(poisson_integral(sgn, cplx(1, 1)).value == doctest::Approx(pi / 4).epsilon(1e-9));
  CHECK(poisson_integral(sgn, cplx(-2, 0.5)).value == doctest::Approx(std::atan(-4.0)).epsilon(1e-9));

  const auto lor = poisson_integral(lorentzian(), cplx(0, 1));
  CHECK(lor.value == doctest::Approx(0.5).epsilon(1e-4));

  CHECK_THROWS_AS(poisson_integral(one, cplx(0, 0)), InputError);
  auto bad = one;
  bad.tail.kind = TailModel::Kind::none;
  CHECK_THROWS_AS(poisson_integral(bad, cplx(0, 1)), InputError);
  auto steep = one;
  steep.tail.right = {1.0, 1.0};
  CHECK_THROWS_AS(poisson_integral(steep, cplx(0, 1)), InputError);
  auto mismatch = one;
  mismatch.tail.right = {2.0, 0.0};
  CHECK_THROWS_AS(poisson_integral(mismatch, cplx(0, 1)), InputError);
}

TEST_CASE("A-integrals of bounded functions stabilize exactly") {
  const auto pair = step_conjugate_pair(0.5);
  const std::vector<double> schedule{10, 100, 1000};
  const auto rep = cauchy_A_integral(pair.h, cplx(0.3, 1.2), schedule);
  CHECK(rep.values[0] == rep.values[1]);
  CHECK(rep.values[1] == rep.values[2]);
  CHECK(rep.converged);
  REQUIRE(rep.limit);
  CHECK(*rep.limit == rep.values[2]);
  CHECK(rep.values[2] == modified_cauchy_integral(pair.h, cplx(0.3, 1.2)));

  // logarithmic growth: the schedule still settles
  const auto grow = cauchy_A_integral(pair.conj, cplx(0.3, 1.2), default_a_schedule());
  CHECK(grow.converged);

  const std::vector<double> bad{10, 5};
  CHECK_THROWS_AS(cauchy_A_integral(pair.h, cplx(0, 1), bad), InputError);
  CHECK_THROWS_AS(cauchy_A_integral(pair.h, cplx(0, 1), std::vector<double>{}), InputError);
}

TEST_CASE("step and conjugate pair") {
  for (double lm : {0.0, 1.0, -2.5}) {
    const auto pair = step_conjugate_pair(lm);
    pair.h.validate();
    pair.conj.validate();
    for (std::size_t i = 0; i < pair.h.grid.size(); ++i) {
      const double t = pair.h.grid[i];
      const double v = pair.h.values[i];
      if (t < lm) CHECK(v == 0.0);
      if (t > lm) CHECK(v == pi);
    }
    for (std::size_t i = 0; i < pair.conj.grid.size(); ++i) {
      const double t = pair.conj.grid[i];
      const double expected = -0.5 * std::log((lm - t) * (lm - t) / (1.0 + lm * lm));
      CHECK(std::fabs(pair.conj.values[i] - expected) <= 1e-12 * (1.0 + std::fabs(expected)));
    }
  }
  // λ_m = 1 at t = 0: ½ ln 2 through the log tail representation
  const auto one = step_conjugate_pair(1.0);
  CHECK(one.conj.tail.right.a == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(step_conjugate_pair(1e7), InputError);
}

TEST_CASE("Titchmarsh and Ulyanov identities") {
  const auto schedule = default_a_schedule();
  const auto t0 = titchmarsh_check(constant(2.0), zero_function(), schedule);
  CHECK(t0.final_residual == 0.0);

  const std::vector<cplx> zs{cplx(0, 2), cplx(1, 1), cplx(-0.5, 0.5)};
  const auto u0 = ulyanov_check(constant(2.0), zero_function(), zs, schedule);
  CHECK(u0.max_final_residual < 1e-12);

  const auto pair = step_conjugate_pair(0.0);
  const auto t = titchmarsh_check(pair.h, pair.conj, schedule);
  CHECK(t.final_residual < 1e-3);
  CHECK(t.nonincreasing_tail);
  const auto u = ulyanov_check(pair.h, pair.conj, zs, schedule);
  CHECK(u.max_final_residual < 1e-3);

  // at λ_m = 0 the flipped log still has zero Poisson mean at i; λ_m = 1 does not
  const auto bad = mismatched_pair(1.0);
  CHECK(titchmarsh_check(bad.h, bad.conj, schedule).final_residual > 1e-2);
  CHECK_THROWS_AS(ulyanov_check(pair.h, pair.conj, std::vector<cplx>{cplx(1, 0)}, schedule), InputError);
}

TEST_CASE("counting conjugate") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1}));
  const auto c = counting_conjugate(s, 0, 1);
  CHECK(c.sum == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(c.p_m == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(std::fabs(c.relation_residual) < 1e-15);

  const auto e = materialize(SequenceSpec::even_mirror({0.5, 1.25, 3, 4.5, 9}));
  for (std::int64_t n = 0; n < 5; ++n) {
    const auto a = counting_conjugate(e, n, 3);
    const auto b = counting_conjugate(e, -n - 1, 3);
    CHECK(a.sum == doctest::Approx(b.sum).epsilon(1e-14));
    CHECK(std::fabs(a.relation_residual) < 1e-12);
  }
  CHECK_THROWS_AS(counting_conjugate(s, 0, 0), InputError);
}
