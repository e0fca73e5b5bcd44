#pragma once

#include <cstdint>
#include <vector>

#include "bakerlab/dft.hpp"

namespace bakerlab {

/// Point x = (q, p). On the torus both coordinates live in [0, 1); the
/// coherent-state code also uses the same type for lifts in R^2.
struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// Reduces both coordinates modulo 1 into [0, 1).
PhasePoint wrap(PhasePoint x);

/// One application of the baker's map B (forward) or B^{-1} (inverse):
///   B(q, p)    = (2q, p/2)          for q <  1/2
///              = (2q - 1, (p+1)/2)  for q >= 1/2
///   B^-1(q, p) = (q/2, 2p)          for p <  1/2
///              = ((q+1)/2, 2p - 1)  for p >= 1/2
/// With strict = true a point on the discontinuity set S_1 (resp. S_-1)
/// raises DiscontinuityError.
PhasePoint baker_step(PhasePoint x, Direction direction, bool strict = false);

/// B^n x for signed n. In strict mode the error carries the failing step.
PhasePoint baker_iterate(PhasePoint x, long n, bool strict = false);

/// Binary coding ... e_{-2} e_{-1} . e_0 e_1 ...: future bits are the
/// digits of q, past bits the digits of p.
struct SymbolSequence {
  std::vector<std::uint8_t> past;    // e_{-1}, e_{-2}, ...
  std::vector<std::uint8_t> future;  // e_0, e_1, ...

  /// Left shift, the symbolic image of B: e_0 moves to the front of the past.
  SymbolSequence shifted() const;
};

SymbolSequence symbol_encode(PhasePoint x, int depth_past, int depth_future);

/// D_{n,delta,gamma}. For n > 0: |q - k/2^n| > delta for every k and
/// p in (gamma, 1-gamma). For n < 0 the roles of q and p are exchanged.
/// n = 0 keeps q away from the integers by delta.
struct RegionSpec {
  int n = 1;
  double delta = 0.1;
  double gamma = 0.2;
};

void validate(const RegionSpec& region);
bool in_domain(PhasePoint x, const RegionSpec& region);

/// Smooth transition used by the cutoff functions.
enum class Bump {
  exp,   ///< s(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}), C-infinity
  poly,  ///< degree-11 smoothstep, C^5
};

/// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t, Bump bump);

/// Z-periodic cutoff: 0 within delta of the integers, 1 at distance >= 2 delta.
double cutoff_profile(double x, double delta, Bump bump);

/// chi_{delta,n}(x) = cutoff(2^n q) cutoff(p) for n >= 0,
///                    cutoff(2^|n| p) cutoff(q) for n < 0.
double cutoff_value(PhasePoint x, double delta, int n, Bump bump = Bump::exp);

}  // namespace bakerlab
