#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include <bakerlab/ergodicity.hpp>
#include <bakerlab/errors.hpp>
#include <bakerlab/propagator.hpp>
#include <bakerlab/quantisation.hpp>

#include "support.hpp"

using namespace bakerlab;
using testing::max_abs;

TEST_CASE("eigensystem") {
  const auto es2 = eigensystem(planck_data(2));
  CHECK(std::abs(es2->values[0] - 1.0) < 1e-12);
  CHECK(std::abs(es2->values[1] + 1.0) < 1e-12);

  for (int N : {16, 64}) {
    const auto es = eigensystem(planck_data(N));
    CHECK(es->values.squaredNorm() == doctest::Approx(N).epsilon(1e-6));
    CHECK(max_abs(es->vectors.adjoint() * es->vectors - OperatorMatrix::Identity(N, N)) < 1e-8);
    CHECK(eigensystem(planck_data(N)).get() == es.get());
  }
  set_eigensystem_cap(32);
  CHECK_THROWS_AS(eigensystem(planck_data(64 + 2)), ValidationError);
  set_eigensystem_cap(1024);
  CHECK_THROWS_AS(eigensystem(planck_data(2048)), ValidationError);
}

TEST_CASE("eigensystem disk cache") {
  const auto dir = std::filesystem::temp_directory_path() / "bakerlab_eig_cache_test";
  std::filesystem::remove_all(dir);
  ::setenv("BAKERLAB_CACHE_DIR", dir.c_str(), 1);
  clear_eigensystem_cache();
  const auto first = eigensystem(planck_data(24));
  CHECK(std::filesystem::exists(dir / "baker_eigensystem_24.bin"));
  clear_eigensystem_cache();
  const auto second = eigensystem(planck_data(24));
  CHECK(first.get() != second.get());
  CHECK(max_abs(first->vectors - second->vectors) == 0.0);
  ::unsetenv("BAKERLAB_CACHE_DIR");
  clear_eigensystem_cache();
  std::filesystem::remove_all(dir);
}

TEST_CASE("diagonal elements") {
  const int N = 32;
  const auto pd = planck_data(N);
  const auto ones = diagonal_elements(pd, OperatorMatrix::Identity(N, N));
  for (int j = 0; j < N; ++j) CHECK(std::abs(ones[j] - 1.0) < 1e-12);
  const OperatorMatrix H = testing::random_hermitian(N);
  const auto d = diagonal_elements(pd, H);
  CHECK(std::abs(d.sum() - H.trace()) < 1e-8);
  CHECK(d.imag().cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(diagonal_elements(pd, OperatorMatrix::Identity(4, 4)), ValidationError);
}

TEST_CASE("quantum variance") {
  const auto pd = planck_data(16);
  CHECK(quantum_variance(pd, ObservableSpec::constant(0.0)) == 0.0);
  CHECK(quantum_variance(pd, ObservableSpec::constant(2.5)) < 1e-28);
  // N = 2: B_2 is the Hadamard matrix and Op^W(cos 2 pi q) = diag(1, -1), so
  // the diagonal elements are +-1/sqrt 2.
  CHECK(quantum_variance(planck_data(2), ObservableSpec::cos_q()) == doctest::Approx(0.5));
  CHECK(quantum_variance(planck_data(64), ObservableSpec::standard()) >= 0.0);
}

TEST_CASE("fejer weights") {
  const auto w4 = fejer_weights(4.0);
  CHECK(w4.size() == 5);
  CHECK(w4[0] == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(w4[2] == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(w4[4] == 0.0);
  const auto w1 = fejer_weights(1.0);
  CHECK(w1.size() == 2);
  CHECK(w1[0] == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(w1[1] == 0.0);
  CHECK(fejer_weights(2.5).size() == 3);
  CHECK_THROWS_AS(fejer_weights(0.5), ValidationError);
}

TEST_CASE("variance trace bound") {
  for (int N : {8, 32, 64}) {
    const auto pd = planck_data(N);
    CHECK(variance_trace_bound(pd, ObservableSpec::cos_q(), 1.0) == doctest::Approx(std::numbers::pi));
    CHECK(variance_trace_bound(pd, ObservableSpec::constant(0.0), 3.0) == 0.0);
  }
  // The mean is removed: adding a constant changes nothing.
  ObservableSpec shifted = ObservableSpec::standard();
  shifted.modes[{0, 0}] = 3.0;
  const auto pd = planck_data(32);
  CHECK(variance_trace_bound(pd, shifted, 4.0) ==
        doctest::Approx(variance_trace_bound(pd, ObservableSpec::standard(), 4.0)).epsilon(1e-12));

  const ObservableSpec other = testing::real_spec({{{1, 2}, Complex(0.3, 0.2)}, {{0, 1}, 0.4}}, 0.2);
  for (int N : {16, 32, 64})
    for (double T : {1.0, 2.0, 3.5, 8.0})
      for (const ObservableSpec& a : {ObservableSpec::standard(), other}) {
        const auto p = planck_data(N);
        CHECK(quantum_variance(p, a) <= variance_trace_bound(p, a, T) + 1e-10);
      }
}

TEST_CASE("chebyshev fraction") {
  const auto pd = planck_data(64);
  const ObservableSpec a = ObservableSpec::cos_q();
  CHECK(chebyshev_fraction(pd, a, 1e6) == 0.0);
  CHECK(chebyshev_fraction(pd, ObservableSpec::constant(0.0), 0.01) == 0.0);
  const double s2 = quantum_variance(pd, a);
  for (double alpha : {0.1, 0.2, 0.5}) CHECK(chebyshev_fraction(pd, a, alpha) <= s2 / (alpha * alpha) + 1e-12);
  CHECK_THROWS_AS(chebyshev_fraction(pd, a, 0.0), ValidationError);
}

TEST_CASE("variance reports") {
  const auto pd = planck_data(64);
  CHECK(default_fejer_width(pd) == 1.0);
  CHECK(default_fejer_width(planck_data(1 << 22)) == doctest::Approx(2.0));
  CHECK(default_variance_delta(pd) == doctest::Approx(1.0 / std::log(64.0)));
  CHECK(default_variance_delta(planck_data(16)) == doctest::Approx(0.245));

  VarianceSchedule sched;
  sched.T = 3.0;
  sched.decompose = true;
  const auto r = variance_report(pd, ObservableSpec::standard(), sched);
  CHECK(r.s2 >= 0.0);
  CHECK(r.s2 <= r.trace_bound + 1e-10);
  CHECK(r.s2 == doctest::Approx(quantum_variance(pd, ObservableSpec::standard())));
  CHECK(r.diagonal_elements.size() == 64);
  REQUIRE(r.decomposition.size() == 4);
  double total = r.decomposition[0].weight * r.decomposition[0].trace;
  for (std::size_t n = 1; n < r.decomposition.size(); ++n)
    total += 2.0 * r.decomposition[n].weight * r.decomposition[n].trace;
  CHECK(total == doctest::Approx(r.trace_bound));
  // At n = 0 the Egorov term is Tr(A Op^W(a chi)), close to the classical integral.
  CHECK(r.decomposition[0].egorov_trace == doctest::Approx(r.decomposition[0].classical).epsilon(1e-6));
  CHECK(r.decomposition[0].trace == doctest::Approx(0.25));
}

TEST_CASE("variance sweep") {
  const auto sweep = variance_sweep({32, 64, 128}, ObservableSpec::standard());
  REQUIRE(sweep.reports.size() == 3);
  for (const auto& r : sweep.reports) {
    CHECK(r.s2 <= r.trace_bound + 1e-10);
    CHECK(r.T == 1.0);
  }
  CHECK(sweep.fits.log_constant > 0.0);
  CHECK(std::isfinite(sweep.fits.power_exponent));
  CHECK_THROWS_AS(variance_sweep({31}, ObservableSpec::standard()), ValidationError);
  CHECK_THROWS_AS(variance_sweep({}, ObservableSpec::standard()), ValidationError);
}
