#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "bakerlab/classical.hpp"
#include "bakerlab/hilbert.hpp"

namespace bakerlab {

/// Fourier coefficients f~(k) against the modes e_k(x) = e^{2 pi i (q k2 - p k1)}.
using CoefficientTable = std::map<LatticeVector, Complex>;

struct CutoffSpec {
  double delta = 0.05;  ///< in (0, 1/4)
  int time = 0;         ///< n in chi_{delta,n}
  Bump bump = Bump::exp;
};

/// A real observable on T^2: a finite Fourier series, optionally multiplied
/// by a cutoff chi_{delta,n}, and optionally pulled back by B^{-n}. The
/// value at x is (f * chi)(B^{-time_shift} x).
struct ObservableSpec {
  CoefficientTable modes;
  std::optional<CutoffSpec> cutoff;
  int time_shift = 0;

  /// True when the spec is exactly its finite Fourier series.
  bool is_finite_series() const { return !cutoff && time_shift == 0; }

  static ObservableSpec constant(double value);
  /// amplitude * cos(2 pi q)
  static ObservableSpec cos_q(double amplitude = 1.0);
  /// cos(2 pi q) cos(2 pi p); the default observable of the experiments.
  static ObservableSpec standard();
  /// A single (complex) mode e_k.
  static ObservableSpec mode(LatticeVector k, Complex coefficient = 1.0);
};

/// Finite coefficients and an admissible cutoff; complex series pass.
void validate_structure(const ObservableSpec& spec);

/// validate_structure plus reality: f~(-k) = conj f~(k) within `tolerance`.
void validate_observable(const ObservableSpec& spec, double tolerance = 1e-12);

/// Sum of f~(k) e_k(x) (complex; real for real specs).
Complex evaluate_series(const CoefficientTable& modes, PhasePoint x);

/// Value of the observable at x. Pullbacks use exact classical iteration.
double observable_eval(const ObservableSpec& spec, PhasePoint x, bool strict = false);

/// Pointwise function on the torus, used for sampling.
using PhaseFunction = std::function<double(const PhasePoint&)>;
PhaseFunction as_function(const ObservableSpec& spec);

/// Coefficient-wise product of two finite series (convolution of tables).
CoefficientTable multiply(const CoefficientTable& a, const CoefficientTable& b);

/// JSON encoding:
///   {"modes":[{"k":[k1,k2],"re":r,"im":i},...],
///    "cutoff":{"delta":d,"time":n,"bump":"exp"|"poly"} | null,
///    "time_shift":n}
/// Parsing validates reality.
ObservableSpec observable_from_json(std::string_view text);
std::string observable_to_json(const ObservableSpec& spec);
ObservableSpec load_observable(const std::string& path);

}  // namespace bakerlab
