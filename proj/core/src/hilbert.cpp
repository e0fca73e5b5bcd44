#include "bakerlab/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

constexpr double kPi = std::numbers::pi;

long positive_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

// e^{i pi m / N} with m reduced exactly modulo 2N before touching floats.
Complex half_root_of_unity(long long m, int N) {
  const long long two_n = 2LL * N;
  long long r = m % two_n;
  if (r < 0) r += two_n;
  const double angle = kPi * static_cast<double>(r) / N;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

PlanckData planck_data(int N) {
  require(N >= 2, "N must be at least 2, got " + std::to_string(N));
  require(N % 2 == 0, "N must be even, got " + std::to_string(N));
  PlanckData pd;
  pd.N = N;
  pd.hbar = 1.0 / (2.0 * kPi * N);
  const int log2n = std::countr_zero(static_cast<unsigned>(N));
  pd.ehrenfest_time = (N == (1 << log2n)) ? static_cast<double>(log2n)
                                          : std::log(static_cast<double>(N)) / std::log(2.0);
  return pd;
}

OperatorMatrix dft_matrix(int N) {
  require(N >= 1, "DFT size must be positive");
  OperatorMatrix F(N, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<Complex> roots(static_cast<std::size_t>(N));
  for (int m = 0; m < N; ++m) roots[static_cast<std::size_t>(m)] = scale * half_root_of_unity(-2LL * m, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) F(k, j) = roots[static_cast<std::size_t>((1LL * k * j) % N)];
  return F;
}

StateVector apply_dft(const StateVector& state, Direction direction) {
  require(state.size() >= 1, "apply_dft: empty state");
  StateVector out = state;
  fft::transform({out.data(), static_cast<std::size_t>(out.size())}, direction);
  out /= std::sqrt(static_cast<double>(out.size()));
  return out;
}

OperatorMatrix translation_operator(const PlanckData& pd, const LatticeVector& k) {
  const int N = pd.N;
  OperatorMatrix T = OperatorMatrix::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    const long row = positive_mod(j + k.k1, N);
    T(row, j) = half_root_of_unity(static_cast<long long>(k.k1) * k.k2 + 2LL * k.k2 * j, N);
  }
  return T;
}

StateVector apply_translation(const PlanckData& pd, const LatticeVector& k,
                              const StateVector& state) {
  const int N = pd.N;
  require(state.size() == N, "apply_translation: dimension mismatch");
  StateVector out(N);
  for (int j = 0; j < N; ++j) {
    const long row = positive_mod(j + k.k1, N);
    out(row) = half_root_of_unity(static_cast<long long>(k.k1) * k.k2 + 2LL * k.k2 * j, N) *
               state(j);
  }
  return out;
}

Complex hs_inner(const OperatorMatrix& A, const OperatorMatrix& B) {
  require(A.rows() == A.cols() && B.rows() == B.cols() && A.rows() == B.rows(),
          "hs_inner: dimension mismatch");
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return A.conjugate().cwiseProduct(B).sum() / static_cast<double>(A.rows());
}

double hermiticity_defect(const OperatorMatrix& A) {
  return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const OperatorMatrix& U) {
  const auto n = U.rows();
  // U^dagger U is Hermitian: the lower triangle holds every distinct entry.
  OperatorMatrix G = OperatorMatrix::Zero(n, n);
  G.selfadjointView<Eigen::Lower>().rankUpdate(U.adjoint());
  G.diagonal().array() -= 1.0;
  return G.triangularView<Eigen::Lower>().toDenseMatrix().cwiseAbs().maxCoeff();
}

double operator_norm(const OperatorMatrix& A) {
  require(A.rows() == A.cols(), "operator_norm: matrix must be square");
  if (A.size() == 0) return 0.0;
  if (!A.allFinite()) throw ValidationError("operator_norm: non-finite entries");
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (hermiticity_defect(A) <= 1e-14 * scale) {
    const OperatorMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("operator_norm: eigensolver failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  const OperatorMatrix G = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("operator_norm: eigensolver failed");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double eigenphase(Complex lambda) {
  double theta = std::arg(lambda) / (2.0 * kPi);
  if (theta < 0.0) theta += 1.0;
  if (theta >= 1.0) theta -= 1.0;
  return theta;
}

UnitaryEigensystem eig_unitary(const OperatorMatrix& U) {
  require(U.rows() == U.cols() && U.rows() > 0, "eig_unitary: matrix must be square");
  if (!U.allFinite()) throw ValidationError("eig_unitary: non-finite entries");
  if (unitarity_defect(U) > 1e-8) throw ValidationError("eig_unitary: input is not unitary");
  const int n = static_cast<int>(U.rows());

  Eigen::ComplexSchur<OperatorMatrix> schur(U);
  if (schur.info() != Eigen::Success)
    throw NumericalError("eig_unitary: Schur decomposition did not converge");
  const OperatorMatrix& T = schur.matrixT();
  const OperatorMatrix& Z = schur.matrixU();

  std::vector<int> order(n);
  std::vector<double> phase(n);
  for (int i = 0; i < n; ++i) {
    order[i] = i;
    phase[i] = eigenphase(T(i, i));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return phase[a] < phase[b]; });

  UnitaryEigensystem sys;
  sys.values.resize(n);
  sys.vectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    sys.values(c) = T(order[c], order[c]);
    sys.vectors.col(c) = Z.col(order[c]);
  }

  // Group near-degenerate eigenvalues (circularly: the first and last
  // clusters merge when they straddle phase 0) and re-orthonormalise.
  constexpr double kClusterGap = 1e-8;
  std::vector<int> cluster_start{0};
  for (int c = 1; c < n; ++c)
    if (std::abs(sys.values(c) - sys.values(c - 1)) >= kClusterGap) cluster_start.push_back(c);
  std::vector<std::vector<int>> clusters;
  for (std::size_t s = 0; s < cluster_start.size(); ++s) {
    const int end = s + 1 < cluster_start.size() ? cluster_start[s + 1] : n;
    std::vector<int> members;
    for (int c = cluster_start[s]; c < end; ++c) members.push_back(c);
    clusters.push_back(std::move(members));
  }
  if (clusters.size() > 1 &&
      std::abs(sys.values(n - 1) - sys.values(0)) < kClusterGap) {
    auto& first = clusters.front();
    auto last = clusters.back();
    clusters.pop_back();
    first.insert(first.begin(), last.begin(), last.end());
  }
  for (const auto& members : clusters) {
    if (members.size() < 2) continue;
    for (std::size_t a = 0; a < members.size(); ++a) {
      auto v = sys.vectors.col(members[a]);
      for (std::size_t b = 0; b < a; ++b) {
        auto u = sys.vectors.col(members[b]);
        v -= u * u.dot(v);
      }
      v.normalize();
    }
  }

  const double modulus_defect = (sys.values.cwiseAbs().array() - 1.0).abs().maxCoeff();
  if (modulus_defect > 1e-8)
    throw NumericalError("eig_unitary: eigenvalue off the unit circle by " +
                         std::to_string(modulus_defect));
  const OperatorMatrix residual = U * sys.vectors - sys.vectors * sys.values.asDiagonal();
  for (int c = 0; c < n; ++c)
    if (residual.col(c).norm() > 1e-8)
      throw NumericalError("eig_unitary: eigenpair residual above 1e-8");
  if (unitarity_defect(sys.vectors) > 1e-8)
    throw NumericalError("eig_unitary: eigenbasis is not orthonormal");
  return sys;
}

}  // namespace bakerlab
