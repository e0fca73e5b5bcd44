#include "bakerlab/coherent.hpp"

#include <cmath>
#include <numbers>

#include "bakerlab/errors.hpp"
#include "bakerlab/propagator.hpp"

namespace bakerlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLatticeCutoff = 1e-18;

Complex unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Phase of Psi modulo 2 pi: pi (2 N p0 q - N q0 p0), reduced in units of pi.
double plane_phase(const PlanckData& pd, const CoherentParams& cp, double q) {
  const double N = pd.N;
  double half_turns = 2.0 * N * cp.center.p * q - N * cp.center.q * cp.center.p;
  half_turns -= 2.0 * std::floor(half_turns / 2.0);
  return kPi * half_turns;
}

PhasePoint mapped_center(PhasePoint x) { return baker_step(x, Direction::forward); }

}  // namespace

Complex plane_coherent(const PlanckData& pd, const CoherentParams& cp, double q) {
  require(cp.sigma > 0.0, "coherent state: sigma must be positive");
  const double N = pd.N;
  const double d = q - cp.center.q;
  const double amplitude = std::pow(2.0 * N * cp.sigma, 0.25) * std::exp(-kPi * N * cp.sigma * d * d);
  return amplitude * unit(plane_phase(pd, cp, q));
}

Complex cylinder_coherent(const PlanckData& pd, const CoherentParams& cp, double q) {
  require(cp.sigma > 0.0, "coherent state: sigma must be positive");
  // Terms decrease monotonically in |q + nu - q0|: start from the nearest
  // image and walk outwards in both directions.
  const long nu0 = std::lround(cp.center.q - q);
  Complex sum = plane_coherent(pd, cp, q + static_cast<double>(nu0));
  for (int side : {-1, 1}) {
    for (long step = 1;; ++step) {
      const Complex term = plane_coherent(pd, cp, q + static_cast<double>(nu0 + side * step));
      sum += term;
      if (std::abs(term) < kLatticeCutoff) break;
    }
  }
  return sum;
}

StateVector torus_coherent(const PlanckData& pd, const CoherentParams& cp) {
  require(cp.sigma > 0.0, "coherent state: sigma must be positive");
  const int N = pd.N;
  StateVector psi(N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (int j = 0; j < N; ++j) psi(j) = scale * cylinder_coherent(pd, cp, static_cast<double>(j) / N);
  return psi;
}

Complex plane_overlap(PhasePoint x, PhasePoint y, double sigma, const PlanckData& pd) {
  require(sigma > 0.0, "plane_overlap: sigma must be positive");
  const double inv_hbar = 2.0 * kPi * pd.N;
  const double y_wedge_x = y.q * x.p - y.p * x.q;
  const double v1 = x.q - y.q;
  const double v2 = x.p - y.p;
  const double Q = sigma * v1 * v1 + v2 * v2 / sigma;
  return std::exp(-0.25 * Q * inv_hbar) * unit(0.5 * y_wedge_x * inv_hbar);
}

double theta_phase(PhasePoint x, double delta) {
  const double q0 = x.q;
  if (q0 > delta && q0 < 0.5 - delta) return 0.0;
  if (q0 > 0.5 + delta && q0 < 1.0 - delta) return q0 + 0.5 * (x.p + 1.0);
  throw ValidationError("theta_phase: q0 = " + std::to_string(q0) +
                        " lies in an excluded band of width delta = " + std::to_string(delta));
}

double theta_parameter(double delta, double gamma, double sigma) {
  require(delta > 0.0 && gamma > 0.0 && sigma > 0.0, "theta_parameter: arguments must be positive");
  return std::min(sigma * delta * delta, gamma * gamma / sigma);
}

double PropagationReport::bound() const { return bound_prefactor * std::exp(-bound_exponent); }

namespace {

PropagationReport residual_from_image(const PlanckData& pd, const CoherentParams& cp,
                                      double delta, double gamma, const StateVector& image) {
  PropagationReport r;
  r.planck = pd;
  r.params = cp;
  r.delta = delta;
  r.gamma = gamma;
  r.phase = theta_phase(cp.center, delta);
  r.theta = theta_parameter(delta, gamma, cp.sigma);
  r.bound_exponent = kPi * pd.N * r.theta;
  r.bound_prefactor = std::pow(static_cast<double>(pd.N), 0.75) * std::pow(cp.sigma, 0.25);

  const StateVector target =
      torus_coherent(pd, {mapped_center(cp.center), cp.sigma / 4.0});
  // e^{i pi N Theta}, with N Theta reduced modulo 2 before scaling by pi.
  double half_turns = pd.N * r.phase;
  half_turns -= 2.0 * std::floor(half_turns / 2.0);
  r.residual_fixed_phase = (image - unit(kPi * half_turns) * target).norm();

  const Complex overlap = target.dot(image);
  const Complex best_phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
  r.residual_optimal_phase = (image - best_phase * target).norm();

  // The fixed phase is accepted when it meets the bound or agrees with the
  // optimal global phase to rounding.
  if (r.residual_fixed_phase <= 10.0 * r.bound() ||
      r.residual_fixed_phase - r.residual_optimal_phase <= 1e-10) {
    r.residual = r.residual_fixed_phase;
    r.phase_convention = "fixed";
  } else {
    r.residual = r.residual_optimal_phase;
    r.phase_convention = "optimised";
  }
  return r;
}

void check_preconditions(const PlanckData& pd, const CoherentParams& cp, double delta,
                         double gamma) {
  require(delta > 0.0 && delta < 0.25, "propagation: delta must lie in (0, 1/4)");
  require(gamma > 0.0 && gamma < 0.5, "propagation: gamma must lie in (0, 1/2)");
  require(cp.sigma >= 1.0 / pd.N && cp.sigma <= pd.N,
          "propagation: sigma must lie in [1/N, N]");
  const PhasePoint x = cp.center;
  require(x.q >= 0.0 && x.q < 1.0 && x.p >= 0.0 && x.p < 1.0,
          "propagation: centre must be a torus point in [0,1)^2");
  if (!in_domain(x, RegionSpec{1, delta, gamma}))
    throw ValidationError("propagation: centre (" + std::to_string(x.q) + ", " +
                          std::to_string(x.p) + ") is outside D_{1,delta,gamma}");
}

}  // namespace

PropagationReport propagation_residual(const PlanckData& pd, const CoherentParams& cp,
                                       double delta, double gamma,
                                       const OperatorMatrix& propagator) {
  check_preconditions(pd, cp, delta, gamma);
  require(propagator.rows() == pd.N && propagator.cols() == pd.N,
          "propagation: propagator dimension mismatch");
  return residual_from_image(pd, cp, delta, gamma, propagator * torus_coherent(pd, cp));
}

PropagationReport propagation_residual(const PlanckData& pd, const CoherentParams& cp,
                                       double delta, double gamma) {
  check_preconditions(pd, cp, delta, gamma);
  return residual_from_image(pd, cp, delta, gamma,
                             apply_propagator(pd, torus_coherent(pd, cp), 1));
}

}  // namespace bakerlab
