#pragma once

#include "bakerlab/fourier.hpp"
#include "bakerlab/hilbert.hpp"
#include "bakerlab/observable.hpp"

namespace bakerlab {

/// Coefficients folded onto Z_N^2 = {-N/2, ..., N/2-1}^2 with the rule
/// T(k + N m) = (-1)^{k^m} T(k). Entry (k1 + N/2, k2 + N/2) holds the
/// total weight of T(k).
struct FoldedCoefficients {
  int N = 0;
  Eigen::MatrixXcd table;

  Complex at(const LatticeVector& k) const;
};

FoldedCoefficients fold(const PlanckData& pd, const CoefficientTable& coeffs);

/// Sum over Z_N^2 of c(k) T(k), assembled row by row of the table with one
/// inverse FFT per k1.
OperatorMatrix assemble(const FoldedCoefficients& folded);

/// Op^W(f) = sum_k f~(k) T(k).
OperatorMatrix weyl_quantise(const PlanckData& pd, const CoefficientTable& coeffs);

/// e^{-(pi/2N) Q_sigma(k)}, Q_sigma(k) = sigma k1^2 + k2^2 / sigma.
double antiwick_damping(const PlanckData& pd, const LatticeVector& k, double sigma);

/// Op^{AW,sigma}(f) = sum_k f~(k) e^{-(pi/2N) Q_sigma(k)} T(k). Damping is
/// applied at the true k in Z^2, folding afterwards.
OperatorMatrix antiwick_quantise(const PlanckData& pd, const CoefficientTable& coeffs,
                                 double sigma);

/// Minimum grid for the integral oracle: 16 sqrt(N max(sigma, 1/sigma)).
double required_grid_for_oracle(const PlanckData& pd, double sigma);

/// N * integral of f(x) |psi_x><psi_x| dx by the M x M midpoint rule. A plain
/// Fourier series may be complex.
/// Independent of the translation-operator convention; it only uses torus
/// coherent states, which makes it the reference for antiwick_quantise.
OperatorMatrix antiwick_integral_oracle(const PlanckData& pd, const ObservableSpec& spec,
                                        double sigma, int M);

/// (1/N) Tr A.
Complex mean_trace(const OperatorMatrix& A);

struct GapReport {
  /// || Op^W(f) - Op^{AW,sigma}(f) ||
  double gap = 0.0;
  /// ||f||_{C^5} max(sigma, 1/sigma) / N with unit constant.
  double bound = 0.0;
  /// Estimated coefficient mass beyond K_max (0 for finite series).
  double tail_mass = 0.0;
};

GapReport quantisation_gap(const PlanckData& pd, const ObservableSpec& spec, double sigma,
                           int K_max, int M);

/// || Op^W(a) Op^W(b) - Op^W(ab) || for finite series, with ab formed by
/// convolving the coefficient tables.
double product_defect(const PlanckData& pd, const ObservableSpec& a, const ObservableSpec& b);

/// Default truncation for grid-derived coefficients: N/2 - 1, so no folding occurs.
int default_kmax(const PlanckData& pd);

}  // namespace bakerlab
