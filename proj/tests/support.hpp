#pragma once

#include <random>

#include <bakerlab/hilbert.hpp>
#include <bakerlab/observable.hpp>

namespace testing {

using namespace bakerlab;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240917);
  return engine;
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline StateVector random_state(int N) {
  std::normal_distribution<double> g;
  StateVector v(N);
  for (int j = 0; j < N; ++j) v[j] = Complex(g(rng()), g(rng()));
  return v / v.norm();
}

inline OperatorMatrix random_hermitian(int N) {
  std::normal_distribution<double> g;
  OperatorMatrix A(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) = Complex(g(rng()), g(rng()));
  return (A + A.adjoint()) / 2.0;
}

inline double max_abs(const OperatorMatrix& A) { return A.cwiseAbs().maxCoeff(); }

// Real observable from a list of (k, c) with c at k and conj(c) at -k.
inline ObservableSpec real_spec(std::initializer_list<std::pair<LatticeVector, Complex>> terms,
                                double mean = 0.0) {
  ObservableSpec s;
  if (mean != 0.0) s.modes[{0, 0}] = mean;
  for (const auto& [k, c] : terms) {
    s.modes[k] += c;
    s.modes[-k] += std::conj(c);
  }
  return s;
}

}  // namespace testing
