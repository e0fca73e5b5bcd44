#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bakerlab/hilbert.hpp"
#include "bakerlab/observable.hpp"

namespace bakerlab {

/// Largest N accepted by eigensystem(); default 1024.
void set_eigensystem_cap(int cap);
int eigensystem_cap();

/// Eigenpairs of B_N, computed once per N and shared. When the environment
/// variable BAKERLAB_CACHE_DIR names a directory, results are also stored
/// there and reused across processes.
std::shared_ptr<const UnitaryEigensystem> eigensystem(const PlanckData& pd);
void clear_eigensystem_cache();

/// <phi_j, A phi_j> for the eigenbasis of eigensystem(pd).
Eigen::VectorXcd diagonal_elements(const PlanckData& pd, const OperatorMatrix& A);

/// Weyl matrix of a real observable. K_max < 0 selects default_kmax and
/// M <= 0 the smallest power of two that resolves the spec.
OperatorMatrix observable_matrix(const PlanckData& pd, const ObservableSpec& spec,
                                 int K_max = -1, int M = 0);

/// S_2(a, N) = (1/N) sum_j |<phi_j, Op^W(a) phi_j> - int a|^2.
double quantum_variance(const PlanckData& pd, const ObservableSpec& spec, int K_max = -1,
                        int M = 0);

/// f^_T(k) = (2 pi / T)(1 - |k|/T) for |k| <= T, 0 beyond. Entry k of the
/// result holds f^_T(k) = f^_T(-k) for k = 0, ..., floor(T).
std::vector<double> fejer_weights(double T);

/// sum_{|n| <= T} f^_T(n) (1/N) Tr(Op^W(a) B^n Op^W(a) B^{-n}) with the mean of a removed.
double variance_trace_bound(const PlanckData& pd, const ObservableSpec& spec, double T,
                            int K_max = -1, int M = 0);

/// (1/N) #{ j : |<phi_j, Op^W(a) phi_j> - int a| > alpha }.
double chebyshev_fraction(const PlanckData& pd, const ObservableSpec& spec, double alpha,
                          int K_max = -1, int M = 0);

/// One term of the trace bound split along a = a_n + a_n^bad.
struct TraceTerm {
  int n = 0;
  double weight = 0.0;        ///< f^_T(n)
  double trace = 0.0;         ///< (1/N) Tr(A B^n A B^{-n})
  double egorov_trace = 0.0;  ///< (1/N) Tr(A Op^W(a_n o B^{-n}))
  double classical = 0.0;     ///< int a (a_n o B^{-n})
  /// trace - egorov_trace: the bad part plus the Egorov error.
  double remainder() const { return trace - egorov_trace; }
};

struct VarianceSchedule {
  /// Fejer width; default max(1, T_E / 11).
  std::optional<double> T;
  /// Cutoff width of the trace decomposition; default min(1/log N, 0.245).
  std::optional<double> delta;
  bool decompose = false;
  int K_max = -1;
  int M = 0;
};

struct VarianceReport {
  int N = 0;
  double s2 = 0.0;
  double trace_bound = 0.0;
  double T = 0.0;
  double delta = 0.0;
  double classical_mean = 0.0;
  Eigen::VectorXcd diagonal_elements;
  std::vector<TraceTerm> decomposition;
  double s2_times_log_n() const;
};

double default_fejer_width(const PlanckData& pd);
double default_variance_delta(const PlanckData& pd);

VarianceReport variance_report(const PlanckData& pd, const ObservableSpec& spec,
                               const VarianceSchedule& schedule = {});

/// Least-squares fits of the two candidate decay laws.
struct DecayFits {
  double log_constant = 0.0;   ///< C in s2 ~ C / log N
  double log_rms = 0.0;        ///< rms relative misfit
  double power_exponent = 0.0; ///< beta in s2 ~ A N^{-beta}
  double power_prefactor = 0.0;
  double power_rms = 0.0;
};

struct VarianceSweep {
  std::vector<VarianceReport> reports;
  DecayFits fits;
};

VarianceSweep variance_sweep(const std::vector<int>& N_list, const ObservableSpec& spec,
                             const VarianceSchedule& schedule = {});

}  // namespace bakerlab
