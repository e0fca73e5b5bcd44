#include "bakerlab/propagator.hpp"

#include <cmath>
#include <numbers>

#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"
#include "bakerlab/quantisation.hpp"

namespace bakerlab {

namespace {

void step_forward(std::span<Complex> v) {
  const std::size_t half = v.size() / 2;
  fft::transform(v.first(half), Direction::forward);
  fft::transform(v.subspan(half), Direction::forward);
  fft::transform(v, Direction::inverse);
  // (1/sqrt(N/2)) from each half block, 1/sqrt(N) from the inverse.
  const double scale = 1.0 / (std::sqrt(static_cast<double>(half)) * std::sqrt(static_cast<double>(v.size())));
  for (auto& c : v) c *= scale;
}

void step_inverse(std::span<Complex> v) {
  const std::size_t half = v.size() / 2;
  fft::transform(v, Direction::forward);
  fft::transform(v.first(half), Direction::inverse);
  fft::transform(v.subspan(half), Direction::inverse);
  const double scale = 1.0 / (std::sqrt(static_cast<double>(half)) * std::sqrt(static_cast<double>(v.size())));
  for (auto& c : v) c *= scale;
}

void evolve_in_place(std::span<Complex> v, long power) {
  if (power >= 0)
    for (long s = 0; s < power; ++s) step_forward(v);
  else
    for (long s = 0; s < -power; ++s) step_inverse(v);
}

void evolve_columns(OperatorMatrix& X, long power) {
  const auto n = static_cast<std::size_t>(X.rows());
  parallel_for(static_cast<std::size_t>(X.cols()), [&](std::size_t c) {
    evolve_in_place({X.col(static_cast<Eigen::Index>(c)).data(), n}, power);
  });
}

}  // namespace

OperatorMatrix build_propagator(const PlanckData& pd) {
  const int N = pd.N;
  require(N >= 2 && N % 2 == 0, "build_propagator: N must be even");
  const int half = N / 2;
  // Column k is F_N^{-1} applied to column k of diag(F_{N/2}, F_{N/2}).
  const OperatorMatrix F_half = dft_matrix(half);
  OperatorMatrix B = OperatorMatrix::Zero(N, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  B.topLeftCorner(half, half) = scale * F_half;
  B.bottomRightCorner(half, half) = scale * F_half;
  fft::transform_batch(B.data(), N, N, Direction::inverse);
  return B;
}

StateVector apply_propagator(const PlanckData& pd, const StateVector& state, long power) {
  require(pd.N % 2 == 0 && pd.N >= 2, "apply_propagator: N must be even");
  require(state.size() == pd.N, "apply_propagator: dimension mismatch");
  StateVector out = state;
  evolve_in_place({out.data(), static_cast<std::size_t>(out.size())}, power);
  return out;
}

OperatorMatrix heisenberg_evolve(const PlanckData& pd, const OperatorMatrix& A, long n) {
  require(A.rows() == pd.N && A.cols() == pd.N, "heisenberg_evolve: dimension mismatch");
  if (n == 0) return A;
  // A B^{-n} = (B^n A^dagger)^dagger, then B^n on the left.
  OperatorMatrix X = A.adjoint();
  evolve_columns(X, n);
  OperatorMatrix Y = X.adjoint();
  evolve_columns(Y, n);
  return Y;
}

EgorovReport egorov_residual(const PlanckData& pd, const ObservableSpec& spec, int n,
                             double delta, int K_max, int M, Bump bump) {
  require(spec.is_finite_series(),
          "egorov_residual: pass the raw observable; the cutoff and pullback are built here");
  validate_observable(spec);
  require(delta > 0.0 && delta < 0.25, "egorov_residual: delta must lie in (0, 1/4)");
  const double need = required_grid_for_cutoff(delta, n);
  if (M < need)
    throw ResolutionError("egorov_residual: grid size M = " + std::to_string(M) +
                          " cannot resolve 2^|n|/delta oscillations (need M >= " +
                          std::to_string(static_cast<long>(std::ceil(need))) + ")");

  ObservableSpec good = spec;
  good.cutoff = CutoffSpec{delta, n, bump};
  ObservableSpec evolved = good;
  evolved.time_shift = n;

  const CoefficientTable good_coeffs = fourier_coefficients(good, K_max, M);
  const CoefficientTable evolved_coeffs = fourier_coefficients(evolved, K_max, M);

  const OperatorMatrix lhs = heisenberg_evolve(pd, weyl_quantise(pd, good_coeffs), n);
  const OperatorMatrix rhs = weyl_quantise(pd, evolved_coeffs);

  EgorovReport r;
  r.N = pd.N;
  r.n = n;
  r.delta = delta;
  r.sigma = std::ldexp(1.0, std::abs(n));
  r.residual = operator_norm(lhs - rhs);

  const int grid = std::max(M, 64);
  const double c0 = cj_norm(spec, 0, grid).best();
  const double c5 = cj_norm(spec, 5, grid).best();
  const double m = std::abs(n);
  r.bound_exponential = c0 * std::pow(static_cast<double>(pd.N), 1.25) * std::pow(2.0, m / 4.0) *
                        std::exp(-std::numbers::pi * pd.N * delta * delta / std::ldexp(1.0, m));
  r.bound_polynomial = std::pow(2.0, 6.0 * m) * c5 / (pd.N * std::pow(delta, 5.0));
  r.tail_mass = tail_mass_estimate(good_coeffs, K_max) + tail_mass_estimate(evolved_coeffs, K_max);
  return r;
}

double hbar_alpha(int N, double sigma, double alpha1, double alpha2) {
  const double n = N;
  return std::max({std::pow(n, 2.0 * alpha1 - 1.0) / sigma, std::pow(n, alpha1 + alpha2 - 1.0),
                   sigma * std::pow(n, 2.0 * alpha2 - 1.0)});
}

EgorovSchedule egorov_schedule(const PlanckData& pd, double eps, int n) {
  require(eps > 0.0 && eps < 1.0, "egorov_schedule: eps must lie in (0, 1)");
  EgorovSchedule s;
  s.delta = std::min(std::pow(static_cast<double>(pd.N), -eps / 4.0), 0.1);
  s.sigma = std::ldexp(1.0, std::abs(n));
  s.max_time = (1.0 - eps) * pd.ehrenfest_time;
  s.admissible = std::abs(n) <= s.max_time + 1e-12;
  const double t = std::abs(n) / pd.ehrenfest_time;
  s.alpha1 = t + eps / 4.0;
  s.alpha2 = eps / 4.0;
  s.small_parameter = hbar_alpha(pd.N, s.sigma, s.alpha1, s.alpha2);
  return s;
}

std::string to_string(ScheduleKind kind) {
  return kind == ScheduleKind::finite ? "finite" : "optimal";
}

}  // namespace bakerlab
