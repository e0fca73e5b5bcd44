#pragma once

#include <string>

#include "bakerlab/fourier.hpp"
#include "bakerlab/hilbert.hpp"
#include "bakerlab/observable.hpp"

namespace bakerlab {

/// B_N = F_N^{-1} diag(F_{N/2}, F_{N/2}) as a dense matrix.
OperatorMatrix build_propagator(const PlanckData& pd);

/// B_N^power applied matrix-free: one step is two half-size forward FFTs
/// and one full-size inverse FFT (reversed for negative powers).
StateVector apply_propagator(const PlanckData& pd, const StateVector& state, long power);

/// B^n A B^{-n}, evolved column by column with repeated single steps.
OperatorMatrix heisenberg_evolve(const PlanckData& pd, const OperatorMatrix& A, long n);

enum class ScheduleKind { finite, optimal };

struct EgorovReport {
  int N = 0;
  int n = 0;
  double delta = 0.0;
  double sigma = 0.0;  ///< 2^|n|, the squeezing that balances the bound
  double residual = 0.0;
  /// ||a||_{C^0} N^{5/4} 2^{|n|/4} e^{-pi N delta^2 / 2^|n|}
  double bound_exponential = 0.0;
  /// 2^{6|n|} ||a||_{C^5} / (N delta^5)
  double bound_polynomial = 0.0;
  /// Coefficient mass beyond K_max for both quantised functions.
  double tail_mass = 0.0;
  ScheduleKind schedule_kind = ScheduleKind::finite;
};

/// || B^n Op^W(a_n) B^{-n} - Op^W(a_n o B^{-n}) || for the good part
/// a_n = a chi_{delta,n} of a raw finite-series observable a. Both sides
/// are quantised from grid coefficients with |k_i| <= K_max.
EgorovReport egorov_residual(const PlanckData& pd, const ObservableSpec& spec, int n,
                             double delta, int K_max, int M, Bump bump = Bump::exp);

/// hbar_alpha(N, sigma) = max(N^{2 a1 - 1}/sigma, N^{a1 + a2 - 1}, sigma N^{2 a2 - 1}).
double hbar_alpha(int N, double sigma, double alpha1, double alpha2);

struct EgorovSchedule {
  double delta = 0.0;  ///< min(N^{-eps/4}, 1/10)
  double sigma = 1.0;  ///< 2^|n|
  bool admissible = false;  ///< |n| <= (1 - eps) T_E
  double max_time = 0.0;    ///< (1 - eps) T_E
  double alpha1 = 0.0;      ///< t + eps/4, t = |n|/T_E
  double alpha2 = 0.0;      ///< eps/4
  double small_parameter = 0.0;  ///< hbar_alpha(N, sigma) at (alpha1, alpha2)
};

EgorovSchedule egorov_schedule(const PlanckData& pd, double eps, int n);

std::string to_string(ScheduleKind kind);

}  // namespace bakerlab
