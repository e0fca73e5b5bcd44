#pragma once

#include <string>

#include "bakerlab/classical.hpp"
#include "bakerlab/hilbert.hpp"

namespace bakerlab {

/// Centre (any lift in R^2) and real squeezing sigma > 0.
struct CoherentParams {
  PhasePoint center;
  double sigma = 1.0;
};

/// Plane coherent state
///   Psi_{x,sigma}(q) = (2 N sigma)^{1/4} e^{-i pi N q0 p0 + 2 pi i N p0 q - pi N sigma (q - q0)^2}.
Complex plane_coherent(const PlanckData& pd, const CoherentParams& cp, double q);

/// Cylinder state: sum over nu of Psi_{x,sigma}(q + nu), truncated once the
/// next term falls below 1e-18 in modulus.
Complex cylinder_coherent(const PlanckData& pd, const CoherentParams& cp, double q);

/// Torus coherent state psi_j = N^{-1/2} Psi_C(j/N). Not renormalised: the
/// norm defect is exponentially small and is part of the data.
StateVector torus_coherent(const PlanckData& pd, const CoherentParams& cp);

/// <Psi_y, Psi_x> = e^{i (y ^ x)/(2 hbar)} e^{-Q_sigma(x - y)/(4 hbar)}
/// with Q_sigma(v) = sigma v1^2 + v2^2 / sigma.
Complex plane_overlap(PhasePoint x, PhasePoint y, double sigma, const PlanckData& pd);

/// 0 on the left strip q0 in (delta, 1/2 - delta), q0 + (p0 + 1)/2 on the
/// right strip (1/2 + delta, 1 - delta); throws inside the excluded bands.
double theta_phase(PhasePoint x, double delta);

/// min(sigma delta^2, gamma^2 / sigma).
double theta_parameter(double delta, double gamma, double sigma);

struct PropagationReport {
  /// Residual under the convention that matched (see `phase_convention`).
  double residual = 0.0;
  /// || U psi_{x,sigma} - e^{i pi N Theta(x)} psi_{Bx,sigma/4} ||.
  double residual_fixed_phase = 0.0;
  /// Same, minimised over a global unit scalar.
  double residual_optimal_phase = 0.0;
  /// "fixed" when the e^{i pi N Theta} phase met the bound, else "optimised".
  std::string phase_convention;
  double theta = 0.0;           ///< min(sigma delta^2, gamma^2/sigma)
  double bound_exponent = 0.0;  ///< pi N theta
  double bound_prefactor = 0.0; ///< N^{3/4} sigma^{1/4}
  double phase = 0.0;           ///< Theta(x)
  PlanckData planck;
  CoherentParams params;
  double delta = 0.0;
  double gamma = 0.0;

  /// N^{3/4} sigma^{1/4} e^{-pi N theta}.
  double bound() const;
};

/// Quasi-covariant single-step propagation of a coherent state centred in
/// D_{1,delta,gamma}. `propagator` is the dense matrix of the quantised map.
PropagationReport propagation_residual(const PlanckData& pd, const CoherentParams& cp,
                                       double delta, double gamma,
                                       const OperatorMatrix& propagator);

/// Matrix-free variant; applies the map with FFTs.
PropagationReport propagation_residual(const PlanckData& pd, const CoherentParams& cp,
                                       double delta, double gamma);

}  // namespace bakerlab
