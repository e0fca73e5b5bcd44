#include <doctest.h>

#include <cmath>
#include <numbers>

#include <bakerlab/classical.hpp>
#include <bakerlab/errors.hpp>
#include <bakerlab/observable.hpp>

#include "support.hpp"

using namespace bakerlab;

namespace {

bool close(PhasePoint a, PhasePoint b, double tol) {
  return std::abs(a.q - b.q) < tol && std::abs(a.p - b.p) < tol;
}

}  // namespace

TEST_CASE("baker step") {
  CHECK(close(baker_step({0.25, 0.5}, Direction::forward), {0.5, 0.25}, 0.0 + 1e-300));
  CHECK(close(baker_step({0.0, 0.0}, Direction::forward), {0.0, 0.0}, 1e-300));
  CHECK(close(baker_step({0.5, 0.25}, Direction::inverse), {0.25, 0.5}, 1e-300));
  CHECK(close(baker_step({0.75, 0.5}, Direction::forward), {0.5, 0.75}, 1e-300));
  CHECK(close(baker_step({0.5, 0.75}, Direction::inverse), {0.75, 0.5}, 1e-300));

  CHECK_THROWS_AS(baker_step({0.5, 0.3}, Direction::forward, true), DiscontinuityError);
  CHECK_THROWS_AS(baker_step({0.0, 0.3}, Direction::forward, true), DiscontinuityError);
  CHECK_THROWS_AS(baker_step({0.3, 0.0}, Direction::forward, true), DiscontinuityError);
  CHECK_THROWS_AS(baker_step({0.3, 0.5}, Direction::inverse, true), DiscontinuityError);
  CHECK_NOTHROW(baker_step({0.3, 0.4}, Direction::forward, true));
}

TEST_CASE("baker iterate") {
  CHECK(close(baker_iterate({0.2, 0.2}, 2), {0.8, 0.05}, 1e-15));
  const PhasePoint x{0.37, 0.81};
  CHECK(close(baker_iterate(x, 0), x, 0.0 + 1e-300));
  CHECK(close(baker_iterate(baker_iterate(x, 3), -3), x, 1e-12));

  // Step index of a strict failure: (0.25, 0.3) reaches q = 1/2 after one step.
  try {
    baker_iterate({0.25, 0.3}, 3, true);
    FAIL("expected a discontinuity");
  } catch (const DiscontinuityError& e) {
    CHECK(e.step() == 1);
  }
}

TEST_CASE("bijectivity on random points") {
  for (int i = 0; i < 10000; ++i) {
    const PhasePoint x{testing::uniform(), testing::uniform()};
    const PhasePoint y = baker_step(baker_step(x, Direction::forward), Direction::inverse);
    const PhasePoint z = baker_step(baker_step(x, Direction::inverse), Direction::forward);
    REQUIRE(close(x, y, 1e-12));
    REQUIRE(close(x, z, 1e-12));
  }
}

TEST_CASE("symbolic coding") {
  const auto half = symbol_encode({0.5, 0.0}, 4, 4);
  CHECK(half.future == std::vector<std::uint8_t>{1, 0, 0, 0});
  CHECK(half.past == std::vector<std::uint8_t>{0, 0, 0, 0});
  CHECK(symbol_encode({0.25, 0.0}, 0, 4).future == std::vector<std::uint8_t>{0, 1, 0, 0});

  const PhasePoint x{0.5, 0.25};
  const PhasePoint bx = baker_step(x, Direction::forward);
  CHECK(close(bx, {0.0, 0.625}, 1e-15));
  const auto shifted = symbol_encode(x, 6, 6).shifted();
  const auto direct = symbol_encode(bx, 7, 5);
  CHECK(shifted.future == direct.future);
  CHECK(shifted.past == direct.past);

  for (int i = 0; i < 1000; ++i) {
    const PhasePoint y{testing::uniform(), testing::uniform()};
    const auto s = symbol_encode(y, 20, 21).shifted();
    const auto d = symbol_encode(baker_step(y, Direction::forward), 21, 20);
    REQUIRE(s.future == d.future);
    REQUIRE(s.past == d.past);
  }
}

TEST_CASE("domains") {
  const RegionSpec d1{1, 0.1, 0.2};
  CHECK(in_domain({0.3, 0.5}, d1));
  CHECK_FALSE(in_domain({0.5, 0.5}, d1));
  CHECK_FALSE(in_domain({0.3, 0.1}, d1));
  CHECK_FALSE(in_domain({0.05, 0.5}, d1));
  CHECK(in_domain({0.7, 0.5}, d1));

  CHECK_THROWS_AS(validate({2, 0.2, 0.2}), ValidationError);
  CHECK_THROWS_AS(validate({1, 0.1, 0.6}), ValidationError);
  CHECK_NOTHROW(validate({2, 0.1, 0.2}));

  // Negative times exchange q and p.
  const RegionSpec dm{-1, 0.1, 0.2};
  CHECK(in_domain({0.5, 0.3}, dm));
  CHECK_FALSE(in_domain({0.5, 0.5}, dm));

  // x in D_{n,delta,gamma} implies B^j x in D_{n-j, 2^j delta, gamma/2^j}.
  for (int n : {2, 3, 4}) {
    const double delta = std::ldexp(0.3, -n - 1);
    const RegionSpec r{n, delta, 0.2};
    int hits = 0;
    for (int i = 0; i < 4000; ++i) {
      const PhasePoint x{testing::uniform(), testing::uniform()};
      if (!in_domain(x, r)) continue;
      ++hits;
      for (int j = 1; j < n; ++j) {
        const RegionSpec rj{n - j, std::ldexp(delta, j), std::ldexp(0.2, -j)};
        REQUIRE(in_domain(baker_iterate(x, j), rj));
      }
    }
    CHECK(hits > 100);
  }
}

TEST_CASE("cutoffs") {
  CHECK(cutoff_value({0.5, 0.5}, 0.05, 0) == 1.0);
  CHECK(cutoff_value({0.0, 0.5}, 0.05, 0) == 0.0);
  const double mid = cutoff_value({0.075, 0.5}, 0.05, 0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK_THROWS_AS(cutoff_value({0.5, 0.5}, 0.3, 0), ValidationError);
  CHECK_THROWS_AS(cutoff_value({0.5, 0.5}, 0.0, 0), ValidationError);

  for (Bump bump : {Bump::exp, Bump::poly}) {
    CHECK(smooth_step(-0.1, bump) == 0.0);
    CHECK(smooth_step(1.2, bump) == 1.0);
    CHECK(smooth_step(0.5, bump) == doctest::Approx(0.5));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double s = smooth_step(i / 100.0, bump);
      CHECK(s >= prev);
      prev = s;
    }
  }
  // n < 0 swaps the roles of q and p.
  CHECK(cutoff_value({0.3, 0.7}, 0.05, 2) == cutoff_value({0.7, 0.3}, 0.05, -2));

  // a_n = a chi_{delta,n} is supported on D_{n, delta/2^n, delta}.
  for (int n : {1, 2, 3}) {
    const double delta = 0.05;
    const RegionSpec support{n, std::ldexp(delta, -n), delta};
    for (int i = 0; i < 5000; ++i) {
      const PhasePoint x{testing::uniform(), testing::uniform()};
      if (!in_domain(x, support)) REQUIRE(cutoff_value(x, delta, n) == 0.0);
    }
  }
}

TEST_CASE("observable evaluation") {
  const ObservableSpec c = ObservableSpec::cos_q();
  CHECK(std::abs(observable_eval(c, {0.25, 0.9})) < 1e-15);
  ObservableSpec one = ObservableSpec::constant(1.0);
  for (int n : {0, 1, -2, 5}) {
    one.time_shift = n;
    CHECK(observable_eval(one, {0.3, 0.7}) == doctest::Approx(1.0));
  }
  ObservableSpec shifted = c;
  shifted.time_shift = 1;
  CHECK(observable_eval(shifted, {0.1, 0.3}) == doctest::Approx(std::cos(2 * std::numbers::pi * 0.05)));
  CHECK(observable_eval(shifted, {0.1, 0.3}) == doctest::Approx(0.95106).epsilon(1e-5));

  // Standard observable against its closed form; modes follow e_k = e^{2 pi i (q k2 - p k1)}.
  const ObservableSpec s = ObservableSpec::standard();
  for (int i = 0; i < 50; ++i) {
    const PhasePoint x{testing::uniform(), testing::uniform()};
    CHECK(observable_eval(s, x) ==
          doctest::Approx(std::cos(2 * std::numbers::pi * x.q) * std::cos(2 * std::numbers::pi * x.p)));
  }
  const ObservableSpec sin_p = ObservableSpec::mode({1, 0}, Complex(0, 0.5));
  ObservableSpec sp = sin_p;
  sp.modes[{-1, 0}] = Complex(0, -0.5);
  // e_{(1,0)} = e^{-2 pi i p}: (i/2) e^{-2 pi i p} - (i/2) e^{2 pi i p} = sin(2 pi p).
  CHECK(observable_eval(sp, {0.2, 0.1}) == doctest::Approx(std::sin(2 * std::numbers::pi * 0.1)));

  ObservableSpec bad;
  bad.modes[{1, 0}] = 1.0;
  CHECK_THROWS_AS(validate_observable(bad), ValidationError);
  CHECK_NOTHROW(validate_structure(bad));
}

TEST_CASE("observable json round trip") {
  ObservableSpec s = testing::real_spec({{{1, 2}, Complex(0.25, -0.5)}, {{0, 3}, 0.1}}, 0.7);
  s.cutoff = CutoffSpec{0.07, 2, Bump::poly};
  s.time_shift = -1;
  const ObservableSpec back = observable_from_json(observable_to_json(s));
  CHECK(back.modes == s.modes);
  REQUIRE(back.cutoff);
  CHECK(back.cutoff->delta == 0.07);
  CHECK(back.cutoff->time == 2);
  CHECK(back.cutoff->bump == Bump::poly);
  CHECK(back.time_shift == -1);

  const ObservableSpec plain = observable_from_json(
      R"({"modes":[{"k":[0,1],"re":0.5,"im":0},{"k":[0,-1],"re":0.5,"im":0}],"cutoff":null,"time_shift":0})");
  CHECK(plain.is_finite_series());
  CHECK(observable_eval(plain, {0.0, 0.3}) == doctest::Approx(1.0));

  CHECK_THROWS_AS(observable_from_json(R"({"modes":[{"k":[0,1],"re":1,"im":0}]})"), ValidationError);
  CHECK_THROWS_AS(observable_from_json("not json"), ValidationError);
  CHECK_THROWS_AS(observable_from_json(R"({"modes":[],"cutoff":{"delta":0.4,"time":0,"bump":"exp"}})"),
                  ValidationError);
}

TEST_CASE("series product") {
  const CoefficientTable c = ObservableSpec::cos_q().modes;
  const CoefficientTable sq = multiply(c, c);
  // cos^2 = 1/2 + cos(4 pi q)/2.
  CHECK(std::abs(sq.at({0, 0}) - 0.5) < 1e-15);
  CHECK(std::abs(sq.at({0, 2}) - 0.25) < 1e-15);
  CHECK(std::abs(sq.at({0, -2}) - 0.25) < 1e-15);
}
