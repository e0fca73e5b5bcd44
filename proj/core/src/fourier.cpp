#include "bakerlab/fourier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bakerlab/dft.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int m) { return m > 0 && std::has_single_bit(static_cast<unsigned>(m)); }

// Row-major samples: row b is p_b, column a is q_a.
std::vector<double> sample_grid(const PhaseFunction& f, int M) {
  std::vector<double> values(static_cast<std::size_t>(M) * M);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t b) {
    const double p = (static_cast<double>(b) + 0.5) / M;
    for (int a = 0; a < M; ++a) {
      const double q = (a + 0.5) / M;
      values[b * M + a] = f({q, p});
    }
  });
  return values;
}

double mean_of(const std::vector<double>& values, int M) {
  std::vector<double> rows(M);
  for (int b = 0; b < M; ++b)
    rows[b] = pairwise_sum({values.data() + static_cast<std::size_t>(b) * M,
                            static_cast<std::size_t>(M)});
  return pairwise_sum(rows) / (static_cast<double>(M) * M);
}

long mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

double required_grid_for_cutoff(double delta, int n) {
  return 8.0 * std::ldexp(1.0, std::abs(n)) / delta;
}

CoefficientTable sample_coefficients(const PhaseFunction& f, int K_max, int M) {
  require(K_max >= 0, "fourier: K_max must be non-negative");
  if (!is_power_of_two(M)) throw ResolutionError("fourier: grid size M must be a power of two");
  if (M < 4 * K_max)
    throw ResolutionError("fourier: grid size M = " + std::to_string(M) +
                          " cannot resolve K_max = " + std::to_string(K_max) +
                          " (need M >= 4 K_max)");
  const std::vector<double> samples = sample_grid(f, M);
  std::vector<Complex> grid(samples.begin(), samples.end());

  // Along q (contiguous rows): e^{-2 pi i k2 a/M}.
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t b) {
    fft::transform({grid.data() + b * M, static_cast<std::size_t>(M)}, Direction::forward);
  });
  // Along p (strided columns): e^{+2 pi i k1 b/M}.
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t a) {
    fft::transform_strided(grid.data() + a, M, M, Direction::inverse);
  });

  const double norm = 1.0 / (static_cast<double>(M) * M);
  auto raw = [&](long k1, long k2) {
    const Complex g = grid[static_cast<std::size_t>(mod(k1, M)) * M + mod(k2, M)];
    const double angle = -kPi * static_cast<double>(k2 - k1) / M;
    return norm * g * Complex(std::cos(angle), std::sin(angle));
  };

  CoefficientTable out;
  for (long k1 = -K_max; k1 <= K_max; ++k1)
    for (long k2 = -K_max; k2 <= K_max; ++k2)
      out[{k1, k2}] = 0.5 * (raw(k1, k2) + std::conj(raw(-k1, -k2)));
  return out;
}

CoefficientTable fourier_coefficients(const ObservableSpec& spec, int K_max, int M) {
  validate_observable(spec);
  if (spec.cutoff) {
    const double need = required_grid_for_cutoff(spec.cutoff->delta, spec.cutoff->time);
    if (M < need)
      throw ResolutionError("fourier: grid size M = " + std::to_string(M) +
                            " cannot resolve the cutoff (need M >= " +
                            std::to_string(static_cast<long>(std::ceil(need))) + ")");
  }
  return sample_coefficients(as_function(spec), K_max, M);
}

CoefficientTable coefficients_of(const ObservableSpec& spec, int K_max, int M) {
  if (spec.is_finite_series()) {
    validate_structure(spec);
    return spec.modes;
  }
  return fourier_coefficients(spec, K_max, M);
}

double tail_mass_estimate(const CoefficientTable& coeffs, int K_max) {
  if (K_max < 4) return std::numeric_limits<double>::infinity();
  std::vector<double> shell(K_max + 1, 0.0);
  for (const auto& [k, c] : coeffs) {
    const long r = std::max(std::abs(k.k1), std::abs(k.k2));
    if (r <= K_max) shell[r] += std::abs(c);
  }
  // Least squares for log S_r = alpha + beta r over the upper half.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int r = K_max / 2 + 1; r <= K_max; ++r) {
    if (shell[r] <= 0.0) continue;
    const double y = std::log(shell[r]);
    sx += r;
    sy += y;
    sxx += static_cast<double>(r) * r;
    sxy += r * y;
    ++count;
  }
  if (count < 2) return count == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  const double beta = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double alpha = (sy - beta * sx) / count;
  if (!(beta < 0.0)) return std::numeric_limits<double>::infinity();
  return std::exp(alpha + beta * (K_max + 1)) / (1.0 - std::exp(beta));
}

double grid_mean(const PhaseFunction& f, int M) {
  require(M >= 1, "grid_mean: M must be positive");
  return mean_of(sample_grid(f, M), M);
}

namespace {

double correlation_on_grid(const ObservableSpec& a, const ObservableSpec& b, int n, int M,
                           bool strict) {
  const PhaseFunction fa = as_function(a);
  const PhaseFunction fb = as_function(b);
  const PhaseFunction product = [&](const PhasePoint& x) {
    return fa(x) * fb(baker_iterate(x, -static_cast<long>(n), strict));
  };
  return grid_mean(product, M) - grid_mean(fa, M) * grid_mean(fb, M);
}

}  // namespace

CorrelationResult correlation(const ObservableSpec& a, const ObservableSpec& b, int n, int M,
                              bool strict) {
  validate_observable(a);
  validate_observable(b);
  if (!is_power_of_two(M)) throw ResolutionError("correlation: grid size M must be a power of two");
  for (const auto* s : {&a, &b})
    if (s->cutoff && M < required_grid_for_cutoff(s->cutoff->delta, s->cutoff->time))
      throw ResolutionError("correlation: grid cannot resolve the cutoff");
  CorrelationResult r;
  r.value = correlation_on_grid(a, b, n, M, strict);
  r.quadrature_error = std::abs(r.value - correlation_on_grid(a, b, n, 2 * M, strict));
  return r;
}

namespace {

// Fourth-order periodic central difference along one axis.
std::vector<double> differentiate(const std::vector<double>& g, int M, bool along_q) {
  std::vector<double> out(g.size());
  const double inv12h = M / 12.0;
  for (int b = 0; b < M; ++b) {
    for (int a = 0; a < M; ++a) {
      auto at = [&](int shift) {
        if (along_q) return g[static_cast<std::size_t>(b) * M + mod(a + shift, M)];
        return g[static_cast<std::size_t>(mod(b + shift, M)) * M + a];
      };
      out[static_cast<std::size_t>(b) * M + a] =
          inv12h * (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2));
    }
  }
  return out;
}

double sup_abs(const std::vector<double>& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

CjNorm cj_norm(const ObservableSpec& spec, int j, int M) {
  require(j >= 0 && j <= 5, "cj_norm: order must lie in [0, 5]");
  validate_structure(spec);
  if (!is_power_of_two(M) || M < 16) throw ResolutionError("cj_norm: M must be a power of two >= 16");
  if (spec.cutoff && M < required_grid_for_cutoff(spec.cutoff->delta, spec.cutoff->time))
    throw ResolutionError("cj_norm: grid cannot resolve the cutoff");

  CjNorm result;
  // derivatives[g1] holds d_q^{g1} f; p-derivatives are taken from there.
  std::vector<double> dq = sample_grid(as_function(spec), M);
  for (int g1 = 0; g1 <= j; ++g1) {
    std::vector<double> d = dq;
    for (int g2 = 0; g1 + g2 <= j; ++g2) {
      result.finite_difference += sup_abs(d);
      if (g1 + g2 < j) d = differentiate(d, M, false);
    }
    if (g1 < j) dq = differentiate(dq, M, true);
  }

  if (spec.is_finite_series()) {
    double bound = 0.0;
    for (const auto& [k, c] : spec.modes) {
      const double wq = 2.0 * kPi * std::abs(static_cast<double>(k.k2));
      const double wp = 2.0 * kPi * std::abs(static_cast<double>(k.k1));
      for (int g1 = 0; g1 <= j; ++g1)
        for (int g2 = 0; g1 + g2 <= j; ++g2)
          bound += std::abs(c) * std::pow(wq, g1) * std::pow(wp, g2);
    }
    result.mode_sum_bound = bound;
  }
  return result;
}

}  // namespace bakerlab
