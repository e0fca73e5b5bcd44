#include "bakerlab/quantisation.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bakerlab/coherent.hpp"
#include "bakerlab/dft.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

namespace {

constexpr double kPi = std::numbers::pi;

long floor_div(long a, long n) {
  long q = a / n;
  if ((a % n != 0) && ((a < 0) != (n < 0))) --q;
  return q;
}

Complex half_root_of_unity(long long m, int N) {
  const long long two_n = 2LL * N;
  long long r = m % two_n;
  if (r < 0) r += two_n;
  const double angle = kPi * static_cast<double>(r) / N;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

Complex FoldedCoefficients::at(const LatticeVector& k) const {
  return table(k.k1 + N / 2, k.k2 + N / 2);
}

FoldedCoefficients fold(const PlanckData& pd, const CoefficientTable& coeffs) {
  const int N = pd.N;
  FoldedCoefficients out;
  out.N = N;
  out.table = Eigen::MatrixXcd::Zero(N, N);
  const long half = N / 2;
  for (const auto& [k, c] : coeffs) {
    // k = r + N m with r in Z_N^2.
    const LatticeVector m{floor_div(k.k1 + half, N), floor_div(k.k2 + half, N)};
    const LatticeVector r{k.k1 - N * m.k1, k.k2 - N * m.k2};
    const double sign = (wedge(r, m) % 2 == 0) ? 1.0 : -1.0;
    out.table(r.k1 + half, r.k2 + half) += sign * c;
  }
  return out;
}

OperatorMatrix assemble(const FoldedCoefficients& folded) {
  const int N = folded.N;
  OperatorMatrix A = OperatorMatrix::Zero(N, N);
  const long half = N / 2;
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t row) {
    const long k1 = static_cast<long>(row) - half;
    // d_j = sum_{k2} c(k1,k2) e^{i pi k1 k2/N} e^{2 pi i k2 j/N}
    std::vector<Complex> w(N, Complex{});
    bool any = false;
    for (long k2 = -half; k2 < half; ++k2) {
      const Complex c = folded.table(row, k2 + half);
      if (c == Complex{}) continue;
      any = true;
      w[((k2 % N) + N) % N] += c * half_root_of_unity(static_cast<long long>(k1) * k2, N);
    }
    if (!any) return;
    fft::transform(w, Direction::inverse);
    const long shift = ((k1 % N) + N) % N;
    // Distinct k1 write disjoint (wrapped) diagonals.
    for (int j = 0; j < N; ++j) A((j + shift) % N, j) = w[j];
  });
  return A;
}

OperatorMatrix weyl_quantise(const PlanckData& pd, const CoefficientTable& coeffs) {
  return assemble(fold(pd, coeffs));
}

double antiwick_damping(const PlanckData& pd, const LatticeVector& k, double sigma) {
  const double k1 = static_cast<double>(k.k1);
  const double k2 = static_cast<double>(k.k2);
  const double Q = sigma * k1 * k1 + k2 * k2 / sigma;
  return std::exp(-kPi * Q / (2.0 * pd.N));
}

OperatorMatrix antiwick_quantise(const PlanckData& pd, const CoefficientTable& coeffs,
                                 double sigma) {
  require(sigma > 0.0, "antiwick_quantise: sigma must be positive");
  CoefficientTable damped;
  for (const auto& [k, c] : coeffs) damped[k] = c * antiwick_damping(pd, k, sigma);
  return weyl_quantise(pd, damped);
}

double required_grid_for_oracle(const PlanckData& pd, double sigma) {
  return 16.0 * std::sqrt(pd.N * std::max(sigma, 1.0 / sigma));
}

OperatorMatrix antiwick_integral_oracle(const PlanckData& pd, const ObservableSpec& spec,
                                        double sigma, int M) {
  require(sigma > 0.0, "antiwick_integral_oracle: sigma must be positive");
  // Plain series may be complex; anything with a cutoff or pullback is evaluated as a real function.
  const bool series = spec.is_finite_series();
  if (series)
    validate_structure(spec);
  else
    validate_observable(spec);
  if (M < required_grid_for_oracle(pd, sigma))
    throw ResolutionError("antiwick_integral_oracle: grid size M = " + std::to_string(M) +
                          " cannot resolve the coherent states (need M >= " +
                          std::to_string(static_cast<long>(std::ceil(required_grid_for_oracle(pd, sigma)))) + ")");
  const int N = pd.N;
  const double weight = static_cast<double>(N) / (static_cast<double>(M) * M);

  // One partial sum per grid row, combined in row order afterwards.
  std::vector<OperatorMatrix> rows(M);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t b) {
    const double p = (static_cast<double>(b) + 0.5) / M;
    Eigen::MatrixXcd states(N, M);
    Eigen::VectorXcd f(M);
    for (int a = 0; a < M; ++a) {
      const PhasePoint x{(a + 0.5) / M, p};
      states.col(a) = torus_coherent(pd, {x, sigma});
      f(a) = series ? evaluate_series(spec.modes, x) : Complex(observable_eval(spec, x));
    }
    rows[b] = (states * f.asDiagonal()) * states.adjoint();
  });
  OperatorMatrix A = OperatorMatrix::Zero(N, N);
  for (const auto& r : rows) A += r;
  return weight * A;
}

Complex mean_trace(const OperatorMatrix& A) {
  require(A.rows() == A.cols() && A.rows() > 0, "mean_trace: matrix must be square");
  return A.trace() / static_cast<double>(A.rows());
}

int default_kmax(const PlanckData& pd) { return pd.N / 2 - 1; }

GapReport quantisation_gap(const PlanckData& pd, const ObservableSpec& spec, double sigma,
                           int K_max, int M) {
  require(sigma > 0.0, "quantisation_gap: sigma must be positive");
  const CoefficientTable coeffs = coefficients_of(spec, K_max, M);
  GapReport r;
  r.gap = operator_norm(weyl_quantise(pd, coeffs) - antiwick_quantise(pd, coeffs, sigma));
  const double c5 = cj_norm(spec, 5, M).best();
  r.bound = c5 * std::max(sigma, 1.0 / sigma) / pd.N;
  r.tail_mass = spec.is_finite_series() ? 0.0 : tail_mass_estimate(coeffs, K_max);
  return r;
}

double product_defect(const PlanckData& pd, const ObservableSpec& a, const ObservableSpec& b) {
  require(a.is_finite_series() && b.is_finite_series(),
          "product_defect: both observables must be finite Fourier series");
  validate_structure(a);
  validate_structure(b);
  const OperatorMatrix lhs = weyl_quantise(pd, a.modes) * weyl_quantise(pd, b.modes);
  const OperatorMatrix rhs = weyl_quantise(pd, multiply(a.modes, b.modes));
  return operator_norm(lhs - rhs);
}

}  // namespace bakerlab
