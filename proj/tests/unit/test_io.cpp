#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include "csk/errors.hpp"
#include "csk/io.hpp"

using namespace csk;
using io::json;

TEST_CASE("non-finite numbers travel as strings") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(io::number(inf) == json("inf"));
  CHECK(io::number(-inf) == json("-inf"));
  CHECK(io::number(std::nan("")) == json("nan"));
  CHECK(io::number(1.5) == json(1.5));
  CHECK(io::to_double(json("inf"), "x") == inf);
  CHECK(io::to_double(json("-inf"), "x") == -inf);
  CHECK(io::to_double(json("0.1"), "x") == 0.1);
  CHECK(io::to_double(json(3), "x") == 3.0);
  CHECK_THROWS_AS(io::to_double(json("abc"), "x"), InputError);
  CHECK_THROWS_AS(io::to_double(json::array(), "x"), InputError);
  CHECK(io::format_csv(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_csv(inf) == "inf");
}

TEST_CASE("sequence specs round trip") {
  const SequenceSpec specs[] = {SequenceSpec::explicit_list({-2.5, 0.1, 1.0 / 3.0, 7}),
                                SequenceSpec::power(1.0 / 3.0, true, 40, true),
                                SequenceSpec::even_mirror({0.5, 2.0 / 3.0, 9}), SequenceSpec::geometric(1.5, 12)};
  for (const auto& spec : specs) {
    const auto a = materialize(spec);
    const auto b = materialize(io::sequence_spec_from_json(json::parse(io::to_json(spec).dump())));
    const auto c = materialize(io::sequence_spec_from_json(json::parse(io::to_json(a).dump())));
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.points()[i] == b.points()[i]);
      CHECK(a.points()[i] == c.points()[i]);
    }
    CHECK(a.first_index() == c.first_index());
  }
  CHECK_THROWS_AS(io::sequence_spec_from_json(json{{"kind", "spiral"}}), InputError);
  CHECK_THROWS_AS(io::sequence_spec_from_json(json{{"kind", "power"}}), InputError);
  CHECK_THROWS_AS(io::sequence_spec_from_json(json::array()), InputError);
}

TEST_CASE("weights round trip") {
  const double inf = std::numeric_limits<double>::infinity();
  const WeightSpec ws[] = {WeightSpec::exp_power(2.5, 0.5), WeightSpec::poly_log(1, 2), WeightSpec::exp_power_log(1, 1, 2),
                           WeightSpec::tabulated({{-1, 1}, {0, 2}, {1, inf}})};
  for (const auto& w : ws) {
    const auto back = io::weight_from_json(json::parse(io::to_json(w).dump()));
    CHECK(back.kind() == w.kind());
    for (double x : {-0.75, 0.0, 0.3, 1.0}) {
      if (std::isinf(w.log_value(x))) {
        CHECK(back.log_value(x) == w.log_value(x));
      } else {
        CHECK(back.log_value(x) == doctest::Approx(w.log_value(x)).epsilon(1e-14));
      }
    }
  }
  const auto tab = io::weight_from_json(json::parse(R"({"kind":"tabulated","entries":[[-1,1],[1,"inf"]]})"));
  CHECK(std::isinf(tab.log_value(1.0)));

  const auto disc = io::weight_from_json(
      json::parse(R"({"kind":"discrete","sequence":{"kind":"explicit","points":[0,1,2]},"values":[1,2,4]})"));
  CHECK(disc.degenerate());
  CHECK(disc.log_value(2.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(std::isinf(disc.log_value(0.5)));
  const auto disc2 = io::weight_from_json(json::parse(io::to_json(disc).dump()));
  CHECK(disc2.log_value(1.0) == disc.log_value(1.0));

  CHECK_THROWS_AS(io::weight_from_json(json::parse(R"({"kind":"exp_power","c":-1,"alpha":1})")), InputError);
  CHECK_THROWS_AS(
      io::weight_from_json(json::parse(
          R"({"kind":"discrete","sequence":{"kind":"explicit","points":[0,1]},"values":[1,0.5]})")),
      InputError);
}

TEST_CASE("measures in JSON and CSV") {
  const DiscreteMeasure mu(std::vector<Atom>{{-1.5, 1, -0.25}, {0.1, -1, 0.0}, {2.0 / 3.0, 1, -3.5}});
  const auto back = io::measure_from_json(json::parse(io::to_json(mu).dump()));
  REQUIRE(back.size() == mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(back.atoms()[i].t == mu.atoms()[i].t);
    CHECK(back.atoms()[i].sign == mu.atoms()[i].sign);
    CHECK(back.atoms()[i].log_mag == mu.atoms()[i].log_mag);
  }
  const std::string csv = io::to_csv(mu);
  CHECK(csv.rfind("t,sign,logmass\n", 0) == 0);
  const auto fromcsv = io::measure_from_csv(csv);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(fromcsv.atoms()[i].t == doctest::Approx(mu.atoms()[i].t).epsilon(1e-11));
  }
  const auto norm = io::measure_from_json(json::parse(R"({"atoms":[{"t":0,"sign":1,"logmass":0},{"t":1,"sign":1,"logmass":0}],"normalized":true})"));
  CHECK(norm.normalized());
  CHECK(norm.mass(0) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(io::measure_from_csv("x,y\n1,2\n"), InputError);
  CHECK_THROWS_AS(io::measure_from_csv("t,sign,logmass\n1,1\n"), InputError);
  CHECK_THROWS_AS(io::measure_from_json(json::parse(R"({"atoms":[{"t":0,"sign":1}]})")), InputError);
}

TEST_CASE("sampled functions") {
  const auto f = io::sampled_function_from_json(
      json::parse(R"({"grid":[-2,0,2],"values":[1,0,1],"tail":{"kind":"power","params":[1,0]}})"));
  CHECK(f.tail.kind == TailModel::Kind::power);
  CHECK(f.tail.right.a == 1.0);
  const auto g = io::sampled_function_from_json(json::parse(io::to_json(f).dump()));
  CHECK(g.values == f.values);
  CHECK(g.tail.left.b == f.tail.left.b);
  CHECK_THROWS_AS(io::sampled_function_from_json(json::parse(R"({"grid":[0,1],"values":[1,1]})")), InputError);
  CHECK_THROWS_AS(io::sampled_function_from_json(
                      json::parse(R"({"grid":[-1,0,1],"values":[1,0,1],"tail":{"kind":"log","params":[1,2,3]}})")),
                  InputError);
}

TEST_CASE("characteristic sequences") {
  const auto s = materialize(SequenceSpec::explicit_list({0, 1, 3}));
  const auto P = char_sequence(s, 0, 2, CharOptions{});
  const auto j = io::to_json(P);
  CHECK(j["entries"].size() == 3);
  const auto Q = io::charseq_from_json(json::parse(j.dump()), s);
  for (std::size_t i = 0; i < 3; ++i) CHECK(Q.entries()[i].p == P.entries()[i].p);
  CHECK(io::to_csv(P).rfind("index,lambda,p,err,N,method\n", 0) == 0);
  CHECK_THROWS_AS(io::charseq_from_json(json::parse(R"({"entries":[{"index":7,"p":0}]})"), s), InputError);
  CHECK_THROWS_AS(io::charseq_from_json(json::parse(R"({"entries":[{"index":0.5,"p":0}]})"), s), InputError);
}

TEST_CASE("files") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/none.json"), InputError);
  CHECK_THROWS_AS(io::parse_json("{\"a\": ", "inline"), InputError);
  const auto path = std::filesystem::temp_directory_path() / "csk_io_test.json";
  io::write_text(path.string(), "{\"kind\":\"geometric\",\"ratio\":2,\"count\":5}");
  const auto s = materialize(io::sequence_spec_from_json(io::load_json(path.string())));
  CHECK(s.size() == 5);
  CHECK(s.at(4) == 16.0);
  std::filesystem::remove(path);
}

TEST_CASE("report serializers") {
  ComparisonReport rep;
  rep.rows.push_back(ComparisonRow{10, 1000, -14.6, 18.1, -32.7, 3.5, 0.8, 0.5});
  CHECK(io::to_csv(rep).rfind("n,lambda,p,conj,residual_plus,residual_minus,logfit\n", 0) == 0);
  Verdict v;
  v.criterion = "main";
  v.figures["x"] = std::numeric_limits<double>::infinity();
  const auto j = io::to_json(v);
  CHECK(j.dump().find("\"inf\"") != std::string::npos);
  CHECK(j.contains("outcome"));
}
