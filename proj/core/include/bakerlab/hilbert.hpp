#pragma once

#include <Eigen/Dense>

#include <compare>
#include <complex>

#include "bakerlab/dft.hpp"

namespace bakerlab {

using Complex = std::complex<double>;

/// Coefficients psi_j of a state in the position basis {q_j}.
using StateVector = Eigen::VectorXcd;
/// Operator on H_N written in the position basis.
using OperatorMatrix = Eigen::MatrixXcd;

/// Planck data for the torus Hilbert space: N = 1/(2 pi hbar), N even.
struct PlanckData {
  int N = 0;
  double hbar = 0.0;
  /// log N / log 2.
  double ehrenfest_time = 0.0;
};

/// Validates N (even, >= 2) and fills hbar and the Ehrenfest time.
PlanckData planck_data(int N);

/// Integer lattice vector k = (k1, k2); indexes Fourier modes and translations.
struct LatticeVector {
  long k1 = 0;
  long k2 = 0;

  auto operator<=>(const LatticeVector&) const = default;
  LatticeVector operator+(const LatticeVector& o) const { return {k1 + o.k1, k2 + o.k2}; }
  LatticeVector operator-(const LatticeVector& o) const { return {k1 - o.k1, k2 - o.k2}; }
  LatticeVector operator-() const { return {-k1, -k2}; }
};

/// Symplectic product k ^ m = k1 m2 - k2 m1.
inline long wedge(const LatticeVector& k, const LatticeVector& m) {
  return k.k1 * m.k2 - k.k2 * m.k1;
}

/// (F_N)_{kj} = e^{-2 pi i kj/N} / sqrt(N).
OperatorMatrix dft_matrix(int N);

/// F_N (forward) or F_N^{-1} (inverse) applied in O(N log N).
StateVector apply_dft(const StateVector& state, Direction direction);

/// Matrix of the quantum translation T(k) on H_N:
///   <q_{j'}, T(k) q_j> = [j' = j + k1 mod N] e^{i pi k1 k2/N} e^{2 pi i k2 j/N}.
/// Evaluating at any k in Z^2 reproduces T(k + N m) = (-1)^{k^m} T(k) for even N.
OperatorMatrix translation_operator(const PlanckData& pd, const LatticeVector& k);

/// T(k) applied to a state without forming the matrix.
StateVector apply_translation(const PlanckData& pd, const LatticeVector& k,
                              const StateVector& state);

/// Hilbert-Schmidt product (1/N) Tr(A^dagger B).
Complex hs_inner(const OperatorMatrix& A, const OperatorMatrix& B);

/// Largest singular value. Hermitian input goes through a self-adjoint
/// eigensolve; anything else through the spectrum of A^dagger A.
double operator_norm(const OperatorMatrix& A);

/// max_ij |(U^dagger U - I)_ij|.
double unitarity_defect(const OperatorMatrix& U);

/// max_ij |(A - A^dagger)_ij|.
double hermiticity_defect(const OperatorMatrix& A);

struct UnitaryEigensystem {
  /// Eigenvalues, ordered by eigenphase in [0, 1).
  Eigen::VectorXcd values;
  /// Orthonormal eigenvectors as columns, in the same order.
  OperatorMatrix vectors;

  int size() const { return static_cast<int>(values.size()); }
};

/// Full eigendecomposition of a unitary matrix.
///
/// Uses the complex Schur form: for a normal matrix the triangular factor
/// is diagonal and the Schur vectors are an orthonormal eigenbasis. Columns
/// whose eigenvalues lie within 1e-8 of each other are re-orthonormalised
/// (modified Gram-Schmidt, in eigenphase order), so degenerate clusters get
/// a deterministic basis. Throws ValidationError when U is not unitary to
/// 1e-8 and NumericalError when the output misses its contract.
UnitaryEigensystem eig_unitary(const OperatorMatrix& U);

/// Eigenphase theta in [0, 1) with lambda = e^{2 pi i theta}.
double eigenphase(Complex lambda);

}  // namespace bakerlab
