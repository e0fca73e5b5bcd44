#pragma once

#include <optional>

#include "bakerlab/observable.hpp"

namespace bakerlab {

// Grid analysis of observables. All quadratures use the midpoint grid
// ((i + 1/2)/M, (j + 1/2)/M), which never touches a dyadic line and so
// never samples a discontinuity of B^n.

/// Minimum grid size for a cutoff of width delta at time n: 8 * 2^|n| / delta.
double required_grid_for_cutoff(double delta, int n);

/// Coefficients f~(k), |k1|, |k2| <= K_max, of a sampled function.
/// Row frequencies of the 2-D transform along q are k2, column frequencies
/// along p are -k1; the half-cell offset of the midpoint grid is undone by
/// the phase e^{-i pi (k2 - k1)/M}. The result is symmetrised so that
/// f~(-k) = conj f~(k). Requires M a power of two with M >= 4 K_max.
CoefficientTable sample_coefficients(const PhaseFunction& f, int K_max, int M);

/// As above for an ObservableSpec; additionally refuses grids that cannot
/// resolve the cutoff transition (see required_grid_for_cutoff).
CoefficientTable fourier_coefficients(const ObservableSpec& spec, int K_max, int M);

/// The exact table for a finite series, the grid table otherwise.
CoefficientTable coefficients_of(const ObservableSpec& spec, int K_max, int M);

/// Extrapolated sum of |f~(k)| over max(|k1|,|k2|) > K_max, from a
/// log-linear fit of the shell sums on (K_max/2, K_max]. Returns +inf when
/// the shells do not decay.
double tail_mass_estimate(const CoefficientTable& coeffs, int K_max);

/// Midpoint-rule mean of f over the torus.
double grid_mean(const PhaseFunction& f, int M);

struct CorrelationResult {
  double value = 0.0;
  /// |K_M - K_2M|.
  double quadrature_error = 0.0;
};

/// K_ab(n) = int a(x) b(B^{-n} x) dx - int a int b. Midpoint nodes only meet
/// the discontinuity set once 2^|n| >= 2M; strict mode then raises
/// DiscontinuityError instead of applying the half-open branches.
CorrelationResult correlation(const ObservableSpec& a, const ObservableSpec& b, int n, int M,
                              bool strict = false);

struct CjNorm {
  /// sum over |gamma| <= j of max over the grid of |d^gamma f|, with
  /// fourth-order central differences.
  double finite_difference = 0.0;
  /// sum over |gamma| <= j, k of |f~(k)| (2 pi |k2|)^g1 (2 pi |k1|)^g2;
  /// only for finite series.
  std::optional<double> mode_sum_bound;

  /// The mode-sum bound when available, the grid estimate otherwise.
  double best() const { return mode_sum_bound ? *mode_sum_bound : finite_difference; }
};

CjNorm cj_norm(const ObservableSpec& spec, int j, int M);

}  // namespace bakerlab
