#include "bakerlab/ergodicity.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <numbers>

#include "bakerlab/errors.hpp"
#include "bakerlab/fourier.hpp"
#include "bakerlab/parallel.hpp"
#include "bakerlab/propagator.hpp"
#include "bakerlab/quantisation.hpp"

namespace bakerlab {

namespace {

using EigenPtr = std::shared_ptr<const UnitaryEigensystem>;

std::atomic<int> g_cap{1024};
std::mutex g_cache_mutex;
std::map<int, std::shared_future<EigenPtr>> g_cache;

std::optional<std::filesystem::path> cache_file(int N) {
  const char* dir = std::getenv("BAKERLAB_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir) / ("baker_eigensystem_" + std::to_string(N) + ".bin");
}

std::optional<UnitaryEigensystem> read_cached(int N) {
  const auto path = cache_file(N);
  if (!path || !std::filesystem::exists(*path)) return std::nullopt;
  std::ifstream in(*path, std::ios::binary);
  std::int64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof stored);
  if (!in || stored != N) return std::nullopt;
  UnitaryEigensystem es;
  es.values.resize(N);
  es.vectors.resize(N, N);
  in.read(reinterpret_cast<char*>(es.values.data()),
          static_cast<std::streamsize>(sizeof(Complex) * N));
  in.read(reinterpret_cast<char*>(es.vectors.data()),
          static_cast<std::streamsize>(sizeof(Complex) * N * N));
  if (!in) return std::nullopt;
  return es;
}

void write_cached(int N, const UnitaryEigensystem& es) {
  const auto path = cache_file(N);
  if (!path) return;
  std::error_code ec;
  std::filesystem::create_directories(path->parent_path(), ec);
  const auto tmp = path->string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    const std::int64_t stored = N;
    out.write(reinterpret_cast<const char*>(&stored), sizeof stored);
    out.write(reinterpret_cast<const char*>(es.values.data()),
              static_cast<std::streamsize>(sizeof(Complex) * N));
    out.write(reinterpret_cast<const char*>(es.vectors.data()),
              static_cast<std::streamsize>(sizeof(Complex) * N * N));
    if (!out) return;
  }
  std::filesystem::rename(tmp, *path, ec);
}

EigenPtr compute_eigensystem(const PlanckData& pd) {
  if (auto cached = read_cached(pd.N))
    return std::make_shared<const UnitaryEigensystem>(std::move(*cached));
  auto es = std::make_shared<const UnitaryEigensystem>(eig_unitary(build_propagator(pd)));
  write_cached(pd.N, *es);
  return es;
}

int next_power_of_two(double x) {
  int m = 1;
  while (m < x) m *= 2;
  return m;
}

int resolve_kmax(const PlanckData& pd, int K_max) { return K_max < 0 ? default_kmax(pd) : K_max; }

int resolve_grid(const ObservableSpec& spec, int K_max, int M) {
  if (M > 0) return M;
  double need = std::max(64.0, 4.0 * K_max);
  if (spec.cutoff) need = std::max(need, required_grid_for_cutoff(spec.cutoff->delta, spec.cutoff->time));
  return next_power_of_two(need);
}

CoefficientTable real_coefficients(const PlanckData& pd, const ObservableSpec& spec, int K_max,
                                   int M) {
  validate_observable(spec);
  const int K = resolve_kmax(pd, K_max);
  return coefficients_of(spec, K, resolve_grid(spec, K, M));
}

double mean_of(const CoefficientTable& coeffs) {
  const auto it = coeffs.find({0, 0});
  return it == coeffs.end() ? 0.0 : it->second.real();
}

// (1/N) Tr(A B), both square.
Complex mean_trace_product(const OperatorMatrix& A, const OperatorMatrix& B) {
  return A.transpose().cwiseProduct(B).sum() / static_cast<double>(A.rows());
}

double variance_from_elements(const Eigen::VectorXcd& d, double mean) {
  std::vector<double> sq(static_cast<std::size_t>(d.size()));
  for (Eigen::Index j = 0; j < d.size(); ++j) sq[static_cast<std::size_t>(j)] = std::norm(d[j] - mean);
  return pairwise_sum(sq) / static_cast<double>(d.size());
}

}  // namespace

void set_eigensystem_cap(int cap) {
  require(cap >= 2, "set_eigensystem_cap: cap must be at least 2");
  g_cap = cap;
}

int eigensystem_cap() { return g_cap; }

std::shared_ptr<const UnitaryEigensystem> eigensystem(const PlanckData& pd) {
  require(pd.N >= 2 && pd.N % 2 == 0, "eigensystem: N must be even");
  if (pd.N > g_cap)
    throw ValidationError("eigensystem: N = " + std::to_string(pd.N) +
                          " exceeds the dense eigensolve cap " + std::to_string(g_cap.load()));
  std::promise<EigenPtr> promise;
  std::shared_future<EigenPtr> future;
  bool owner = false;
  {
    std::lock_guard lock(g_cache_mutex);
    auto it = g_cache.find(pd.N);
    if (it == g_cache.end()) {
      future = promise.get_future().share();
      g_cache.emplace(pd.N, future);
      owner = true;
    } else {
      future = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(compute_eigensystem(pd));
    } catch (...) {
      {
        std::lock_guard lock(g_cache_mutex);
        g_cache.erase(pd.N);
      }
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

void clear_eigensystem_cache() {
  std::lock_guard lock(g_cache_mutex);
  g_cache.clear();
}

Eigen::VectorXcd diagonal_elements(const PlanckData& pd, const OperatorMatrix& A) {
  require(A.rows() == pd.N && A.cols() == pd.N, "diagonal_elements: dimension mismatch");
  const auto es = eigensystem(pd);
  const OperatorMatrix AV = A * es->vectors;
  return es->vectors.conjugate().cwiseProduct(AV).colwise().sum().transpose();
}

OperatorMatrix observable_matrix(const PlanckData& pd, const ObservableSpec& spec, int K_max,
                                 int M) {
  return weyl_quantise(pd, real_coefficients(pd, spec, K_max, M));
}

double quantum_variance(const PlanckData& pd, const ObservableSpec& spec, int K_max, int M) {
  const CoefficientTable coeffs = real_coefficients(pd, spec, K_max, M);
  const Eigen::VectorXcd d = diagonal_elements(pd, weyl_quantise(pd, coeffs));
  return variance_from_elements(d, mean_of(coeffs));
}

std::vector<double> fejer_weights(double T) {
  require(std::isfinite(T) && T >= 1.0, "fejer_weights: T must be at least 1");
  const auto last = static_cast<long>(std::floor(T));
  std::vector<double> w(static_cast<std::size_t>(last) + 1);
  for (long k = 0; k <= last; ++k)
    w[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi / T * (1.0 - static_cast<double>(k) / T);
  return w;
}

namespace {

// t_n = (1/N) Tr(A B^n A B^{-n}) for n = 0..n_max; t_{-n} = t_n by cyclicity.
std::vector<double> evolved_traces(const PlanckData& pd, const OperatorMatrix& A, long n_max) {
  std::vector<double> t;
  OperatorMatrix An = A;
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) An = heisenberg_evolve(pd, An, 1);
    t.push_back(mean_trace_product(A, An).real());
  }
  return t;
}

double weighted_sum(const std::vector<double>& w, const std::vector<double>& t) {
  double total = w[0] * t[0];
  for (std::size_t n = 1; n < w.size(); ++n) total += 2.0 * w[n] * t[n];
  return total;
}

}  // namespace

double variance_trace_bound(const PlanckData& pd, const ObservableSpec& spec, double T,
                            int K_max, int M) {
  const std::vector<double> w = fejer_weights(T);
  CoefficientTable coeffs = real_coefficients(pd, spec, K_max, M);
  coeffs.erase({0, 0});
  const OperatorMatrix A = weyl_quantise(pd, coeffs);
  return weighted_sum(w, evolved_traces(pd, A, static_cast<long>(w.size()) - 1));
}

double chebyshev_fraction(const PlanckData& pd, const ObservableSpec& spec, double alpha,
                          int K_max, int M) {
  require(alpha > 0.0, "chebyshev_fraction: alpha must be positive");
  const CoefficientTable coeffs = real_coefficients(pd, spec, K_max, M);
  const double mean = mean_of(coeffs);
  const Eigen::VectorXcd d = diagonal_elements(pd, weyl_quantise(pd, coeffs));
  long count = 0;
  for (Eigen::Index j = 0; j < d.size(); ++j)
    if (std::abs(d[j] - mean) > alpha) ++count;
  return static_cast<double>(count) / pd.N;
}

double VarianceReport::s2_times_log_n() const { return s2 * std::log(static_cast<double>(N)); }

double default_fejer_width(const PlanckData& pd) { return std::max(1.0, pd.ehrenfest_time / 11.0); }

double default_variance_delta(const PlanckData& pd) {
  return std::min(1.0 / std::log(static_cast<double>(pd.N)), 0.245);
}

VarianceReport variance_report(const PlanckData& pd, const ObservableSpec& spec,
                               const VarianceSchedule& schedule) {
  VarianceReport r;
  r.N = pd.N;
  r.T = schedule.T.value_or(default_fejer_width(pd));
  r.delta = schedule.delta.value_or(default_variance_delta(pd));
  const std::vector<double> w = fejer_weights(r.T);

  const CoefficientTable coeffs = real_coefficients(pd, spec, schedule.K_max, schedule.M);
  r.classical_mean = mean_of(coeffs);
  r.diagonal_elements = diagonal_elements(pd, weyl_quantise(pd, coeffs));
  r.s2 = variance_from_elements(r.diagonal_elements, r.classical_mean);

  CoefficientTable centred = coeffs;
  centred.erase({0, 0});
  const OperatorMatrix A = weyl_quantise(pd, centred);
  const std::vector<double> t = evolved_traces(pd, A, static_cast<long>(w.size()) - 1);
  r.trace_bound = weighted_sum(w, t);

  if (schedule.decompose) {
    require(spec.is_finite_series(), "variance_report: the decomposition needs a finite series");
    require(r.delta > 0.0 && r.delta < 0.25, "variance_report: delta must lie in (0, 1/4)");
    const int K = resolve_kmax(pd, schedule.K_max);
    ObservableSpec zero_mean;
    zero_mean.modes = centred;
    for (std::size_t n = 0; n < w.size(); ++n) {
      const int time = static_cast<int>(n);
      ObservableSpec evolved = zero_mean;
      evolved.cutoff = CutoffSpec{r.delta, time, Bump::exp};
      evolved.time_shift = time;
      const int grid = std::max(schedule.M, next_power_of_two(std::max(
                                                 {64.0, 4.0 * K, required_grid_for_cutoff(r.delta, time)})));
      const OperatorMatrix E = weyl_quantise(pd, fourier_coefficients(evolved, K, grid));
      TraceTerm term;
      term.n = time;
      term.weight = w[n];
      term.trace = t[n];
      term.egorov_trace = mean_trace_product(A, E).real();
      const PhaseFunction a = as_function(zero_mean);
      const PhaseFunction b = as_function(evolved);
      term.classical = grid_mean([&](const PhasePoint& x) { return a(x) * b(x); }, grid);
      r.decomposition.push_back(term);
    }
  }
  return r;
}

namespace {

DecayFits fit_decay(const std::vector<VarianceReport>& reports) {
  DecayFits f;
  std::vector<double> x, y;
  for (const auto& r : reports) {
    if (r.s2 <= 0.0) continue;
    x.push_back(std::log(static_cast<double>(r.N)));
    y.push_back(r.s2);
  }
  if (x.empty()) return f;
  // Both laws are fitted in log space.
  double mean_log_c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean_log_c += std::log(y[i] * x[i]);
  mean_log_c /= static_cast<double>(x.size());
  f.log_constant = std::exp(mean_log_c);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i] * x[i]) - mean_log_c;
    ss += r * r;
  }
  f.log_rms = std::sqrt(ss / static_cast<double>(x.size()));

  if (x.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (std::log(y[i]) - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.power_exponent = -slope;
    f.power_prefactor = std::exp(my - slope * mx);
    double se = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = std::log(y[i]) - (my + slope * (x[i] - mx));
      se += r * r;
    }
    f.power_rms = std::sqrt(se / static_cast<double>(x.size()));
  }
  return f;
}

}  // namespace

VarianceSweep variance_sweep(const std::vector<int>& N_list, const ObservableSpec& spec,
                             const VarianceSchedule& schedule) {
  require(!N_list.empty(), "variance_sweep: empty N list");
  std::vector<PlanckData> pds;
  for (int N : N_list) {
    pds.push_back(planck_data(N));
    require(N <= eigensystem_cap(), "variance_sweep: N = " + std::to_string(N) +
                                        " exceeds the eigensolve cap");
  }
  validate_observable(spec);
  VarianceSweep sweep;
  sweep.reports.resize(N_list.size());
  parallel_for(N_list.size(), [&](std::size_t i) {
    sweep.reports[i] = variance_report(pds[i], spec, schedule);
  });
  sweep.fits = fit_decay(sweep.reports);
  return sweep;
}

}  // namespace bakerlab
