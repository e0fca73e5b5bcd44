#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include <bakerlab/coherent.hpp>
#include <bakerlab/ergodicity.hpp>
#include <bakerlab/errors.hpp>
#include <bakerlab/fourier.hpp>
#include <bakerlab/parallel.hpp>
#include <bakerlab/propagator.hpp>
#include <bakerlab/quantisation.hpp>

#include "csv.hpp"

namespace bakerlab::cli {

namespace {

struct Output {
  CsvTable table;
  ParameterList params;
  std::vector<std::string> comments;
  int status = ok;
};

int next_power_of_two(double x) {
  int m = 1;
  while (m < x) m *= 2;
  return m;
}

std::string join(const std::vector<int>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ";" : "") + std::to_string(values[i]);
  return s;
}

std::vector<PlanckData> planck_list(const RunConfig& cfg, std::vector<int> fallback) {
  const std::vector<int>& sizes = cfg.sizes.empty() ? fallback : cfg.sizes;
  require(!sizes.empty(), cfg.command + ": give --n or --n-list");
  std::vector<PlanckData> out;
  for (int N : sizes) out.push_back(planck_data(N));
  return out;
}

std::vector<int> sizes_of(const std::vector<PlanckData>& pds) {
  std::vector<int> n;
  for (const auto& pd : pds) n.push_back(pd.N);
  return n;
}

ObservableSpec observable(const RunConfig& cfg) {
  return cfg.observable_path ? load_observable(*cfg.observable_path) : ObservableSpec::standard();
}

std::string observable_label(const RunConfig& cfg) {
  return cfg.observable_path ? *cfg.observable_path : std::string("standard");
}

void common_params(const RunConfig& cfg, ParameterList& params) {
  params.emplace_back("strict", cfg.strict ? "1" : "0");
}

Output cmd_spectrum(const RunConfig& cfg) {
  const auto pds = planck_list(cfg, {});
  require(pds.size() == 1, "spectrum: give a single --n");
  const PlanckData& pd = pds.front();
  const auto es = eigensystem(pd);
  const OperatorMatrix B = build_propagator(pd);

  Output o{CsvTable({"j", "theta", "re", "im", "modulus_defect"}), {}, {}};
  o.params = {{"N", std::to_string(pd.N)}};
  common_params(cfg, o.params);
  double worst_residual = 0.0;
  for (int j = 0; j < es->size(); ++j) {
    const Complex l = es->values[j];
    worst_residual = std::max(worst_residual, (B * es->vectors.col(j) - l * es->vectors.col(j)).norm());
    o.table.row().add(j).add(eigenphase(l)).add(l.real()).add(l.imag()).add(std::abs(l) - 1.0);
  }
  const double ortho = (es->vectors.adjoint() * es->vectors - OperatorMatrix::Identity(pd.N, pd.N))
                           .cwiseAbs()
                           .maxCoeff();
  o.comments = {"unitarity_defect=" + format_real(unitarity_defect(B)),
                "orthonormality_defect=" + format_real(ortho),
                "max_eigen_residual=" + format_real(worst_residual)};
  return o;
}

Output cmd_egorov(const RunConfig& cfg) {
  const auto pds = planck_list(cfg, {});
  const ObservableSpec spec = observable(cfg);
  require(spec.is_finite_series(), "egorov: the observable must be a plain Fourier series");
  const int n = cfg.time.value_or(1);
  if (cfg.eps) require(*cfg.eps > 0.0 && *cfg.eps < 1.0, "egorov: --eps must lie in (0, 1)");
  if (cfg.delta) require(*cfg.delta > 0.0 && *cfg.delta < 0.25, "egorov: --delta must lie in (0, 1/4)");

  struct Plan {
    PlanckData pd;
    double delta;
    int kmax;
    int grid;
    bool admissible;
  };
  std::vector<Plan> plans;
  for (const auto& pd : pds) {
    Plan p{pd, cfg.delta.value_or(0.05), cfg.kmax.value_or(default_kmax(pd)), 0, true};
    if (cfg.eps) {
      const auto s = egorov_schedule(pd, *cfg.eps, n);
      if (!cfg.delta) p.delta = s.delta;
      p.admissible = s.admissible;
      if (!s.admissible && !cfg.force)
        throw ValidationError("egorov: |n| = " + std::to_string(std::abs(n)) +
                              " exceeds (1 - eps) T_E = " + format_real(s.max_time) + " for N = " +
                              std::to_string(pd.N) + " (use --force to run anyway)");
    }
    p.grid = cfg.grid.value_or(
        next_power_of_two(std::max(4.0 * p.kmax, required_grid_for_cutoff(p.delta, n))));
    plans.push_back(p);
  }

  Output o{CsvTable({"N", "n", "delta", "sigma", "residual", "bound_exp_term", "bound_poly_term",
                     "admissible"}),
           {}, {}};
  o.params = {{"N", join(sizes_of(pds))},
              {"obs", observable_label(cfg)},
              {"time", std::to_string(n)},
              {"schedule", cfg.eps ? "optimal" : "finite"}};
  if (cfg.eps) o.params.emplace_back("eps", format_real(*cfg.eps));
  if (cfg.delta) o.params.emplace_back("delta", format_real(*cfg.delta));
  if (cfg.kmax) o.params.emplace_back("kmax", std::to_string(*cfg.kmax));
  if (cfg.grid) o.params.emplace_back("m", std::to_string(*cfg.grid));
  o.params.emplace_back("force", cfg.force ? "1" : "0");
  common_params(cfg, o.params);

  for (const auto& p : plans) {
    const EgorovReport r = egorov_residual(p.pd, spec, n, p.delta, p.kmax, p.grid);
    o.table.row()
        .add(r.N)
        .add(r.n)
        .add(r.delta)
        .add(r.sigma)
        .add(r.residual)
        .add(r.bound_exponential)
        .add(r.bound_polynomial)
        .add(p.admissible);
    o.comments.push_back("N=" + std::to_string(r.N) + " kmax=" + std::to_string(p.kmax) +
                         " m=" + std::to_string(p.grid) + " tail_mass=" + format_real(r.tail_mass));
  }
  return o;
}

Output cmd_variance(const RunConfig& cfg) {
  const auto pds = planck_list(cfg, {});
  const ObservableSpec spec = observable(cfg);
  validate_observable(spec);
  for (const auto& pd : pds)
    require(pd.N <= eigensystem_cap(), "variance: N = " + std::to_string(pd.N) + " exceeds the eigensolve cap");
  if (cfg.fejer_width) require(*cfg.fejer_width >= 1.0, "variance: --T must be at least 1");

  VarianceSchedule schedule;
  schedule.T = cfg.fejer_width;
  schedule.delta = cfg.delta;
  schedule.K_max = cfg.kmax.value_or(-1);
  schedule.M = cfg.grid.value_or(0);
  const VarianceSweep sweep = variance_sweep(sizes_of(pds), spec, schedule);

  Output o{CsvTable({"N", "s2", "trace_bound", "T", "delta", "s2_times_logN"}), {}, {}};
  o.params = {{"N", join(sizes_of(pds))}, {"obs", observable_label(cfg)}};
  o.params.emplace_back("T", cfg.fejer_width ? format_real(*cfg.fejer_width) : "max(1,T_E/11)");
  o.params.emplace_back("delta", cfg.delta ? format_real(*cfg.delta) : "min(1/logN,0.245)");
  if (cfg.kmax) o.params.emplace_back("kmax", std::to_string(*cfg.kmax));
  if (cfg.grid) o.params.emplace_back("m", std::to_string(*cfg.grid));
  common_params(cfg, o.params);
  for (const auto& r : sweep.reports)
    o.table.row().add(r.N).add(r.s2).add(r.trace_bound).add(r.T).add(r.delta).add(r.s2_times_log_n());
  o.comments = {"fit_log: s2 ~ C/logN C=" + format_real(sweep.fits.log_constant) +
                    " rms_log_misfit=" + format_real(sweep.fits.log_rms),
                "fit_power: s2 ~ A N^-beta beta=" + format_real(sweep.fits.power_exponent) +
                    " A=" + format_real(sweep.fits.power_prefactor) +
                    " rms_log_misfit=" + format_real(sweep.fits.power_rms)};

  if (cfg.diagonal_path) {
    CsvTable dump({"N", "j", "theta", "re", "im", "deviation"});
    for (const auto& r : sweep.reports) {
      const auto es = eigensystem(planck_data(r.N));
      for (int j = 0; j < r.N; ++j) {
        const Complex d = r.diagonal_elements[j];
        dump.row().add(r.N).add(j).add(eigenphase(es->values[j])).add(d.real()).add(d.imag())
            .add(std::abs(d - r.classical_mean));
      }
    }
    std::ofstream file(*cfg.diagonal_path, std::ios::binary);
    if (!file) throw ValidationError("variance: cannot write " + *cfg.diagonal_path);
    dump.write(file, "variance-diagonal", o.params);
  }
  return o;
}

Output cmd_coherent(const RunConfig& cfg) {
  const auto pds = planck_list(cfg, {1024});
  const double sigma = cfg.sigma.value_or(1.0);
  const double delta = cfg.delta.value_or(0.1);
  const double gamma = cfg.gamma.value_or(0.2);
  const PhasePoint x{cfg.q, cfg.p};
  require(delta > 0.0 && delta < 0.25, "coherent: --delta must lie in (0, 1/4)");
  require(gamma > 0.0 && gamma < 0.5, "coherent: --gamma must lie in (0, 1/2)");
  const RegionSpec region{1, delta, gamma};
  if (!in_domain(x, region))
    throw ValidationError("coherent: centre (" + format_real(x.q) + ", " + format_real(x.p) +
                          ") is outside D_1: need |q - k/2| > delta = " + format_real(delta) +
                          " and gamma < p < 1 - gamma with gamma = " + format_real(gamma));
  for (const auto& pd : pds)
    require(sigma >= 1.0 / pd.N && sigma <= pd.N, "coherent: --sigma must lie in [1/N, N]");

  Output o{CsvTable({"N", "q", "p", "sigma", "delta", "gamma", "residual", "pi_N_theta"}), {}, {}};
  o.params = {{"N", join(sizes_of(pds))}, {"q", format_real(x.q)},     {"p", format_real(x.p)},
              {"sigma", format_real(sigma)}, {"delta", format_real(delta)}, {"gamma", format_real(gamma)}};
  common_params(cfg, o.params);
  for (const auto& pd : pds) {
    const auto r = propagation_residual(pd, {x, sigma}, delta, gamma);
    o.table.row().add(pd.N).add(x.q).add(x.p).add(sigma).add(delta).add(gamma).add(r.residual)
        .add(r.bound_exponent);
    o.comments.push_back("N=" + std::to_string(pd.N) + " phase_convention=" + r.phase_convention +
                         " bound=" + format_real(r.bound()));
  }
  return o;
}

Output cmd_correlations(const RunConfig& cfg) {
  const ObservableSpec spec = observable(cfg);
  validate_observable(spec);
  require(cfg.tmax >= 0, "correlations: --tmax must be non-negative");
  const int M = cfg.grid.value_or(256);

  Output o{CsvTable({"n", "K_ab", "quadrature_error_estimate"}), {}, {}};
  o.params = {{"obs", observable_label(cfg)}, {"tmax", std::to_string(cfg.tmax)}, {"m", std::to_string(M)}};
  common_params(cfg, o.params);
  for (int n = 0; n <= cfg.tmax; ++n) {
    const auto c = correlation(spec, spec, n, M, cfg.strict);
    o.table.row().add(n).add(c.value).add(c.quadrature_error);
  }
  return o;
}

Output cmd_quantise_check(const RunConfig& cfg) {
  const auto pds = planck_list(cfg, {16});
  const ObservableSpec spec = observable(cfg);
  validate_structure(spec);
  const std::vector<double> sigmas = cfg.sigma ? std::vector<double>{*cfg.sigma} : std::vector<double>{0.5, 1.0, 2.0};
  constexpr double tolerance = 1e-6;

  Output o{CsvTable({"N", "sigma", "M", "max_entry_error", "pass"}), {}, {}};
  o.params = {{"N", join(sizes_of(pds))}, {"obs", observable_label(cfg)}, {"tolerance", format_real(tolerance)}};
  common_params(cfg, o.params);
  for (const auto& pd : pds)
    for (double sigma : sigmas) {
      require(sigma > 0.0, "quantise-check: --sigma must be positive");
      const int M = cfg.grid.value_or(next_power_of_two(required_grid_for_oracle(pd, sigma)));
      const int K = cfg.kmax.value_or(default_kmax(pd));
      const OperatorMatrix closed = antiwick_quantise(pd, coefficients_of(spec, K, std::max(M, 4 * K)), sigma);
      const OperatorMatrix oracle = antiwick_integral_oracle(pd, spec, sigma, M);
      const double err = (closed - oracle).cwiseAbs().maxCoeff();
      const bool pass = err <= tolerance;
      if (!pass) o.status = numerical_failure;
      o.table.row().add(pd.N).add(sigma).add(M).add(err).add(pass);
    }
  return o;
}

void write_manifest(const std::string& path, const RunConfig& cfg, const Output& o) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : o.params) params[k] = v;
  nlohmann::ordered_json manifest = {{"tool", "bakerlab"},
                                     {"version", BAKERLAB_VERSION},
                                     {"command", cfg.command},
                                     {"parameters", params},
                                     {"output", path},
                                     {"columns", o.table.header()},
                                     {"rows", o.table.rows()},
                                     {"exit_code", o.status}};
  std::ofstream file(path + ".manifest.json", std::ios::binary);
  if (!file) throw ValidationError("cannot write manifest " + path + ".manifest.json");
  file << manifest.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Quantised baker's map experiments", "bakerlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(BAKERLAB_VERSION));

  int single_n = 0;
  std::vector<int> n_list;

  auto add_sizes = [&](CLI::App* sub, bool allow_list) {
    auto* n_opt = sub->add_option("--n", single_n, "Hilbert space dimension N (even)");
    if (allow_list) sub->add_option("--n-list", n_list, "Comma-separated list of N")->delimiter(',')->excludes(n_opt);
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.output_path, "Write CSV here instead of stdout");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware default)");
    sub->add_flag("--strict", cfg.strict, "Reject points on discontinuity lines in classical iteration");
  };
  auto add_obs = [&](CLI::App* sub) {
    sub->add_option("--obs", cfg.observable_path, "Observable JSON (default cos 2pi q cos 2pi p)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Eigenphases of B_N");
  add_sizes(spectrum, false);
  add_common(spectrum);

  auto* egorov = app.add_subcommand("egorov", "Egorov residual of the cut-off observable");
  add_sizes(egorov, true);
  add_obs(egorov);
  add_common(egorov);
  egorov->add_option("--time", cfg.time, "Number of steps n (default 1)");
  egorov->add_option("--delta", cfg.delta, "Cutoff width (default 0.05, or the schedule with --eps)");
  egorov->add_option("--eps", cfg.eps, "Use the Ehrenfest-time schedule with this eps");
  egorov->add_option("--kmax", cfg.kmax, "Fourier truncation (default N/2 - 1)");
  egorov->add_option("--m", cfg.grid, "Sampling grid (power of two)");
  egorov->add_flag("--force", cfg.force, "Run inadmissible (n, eps, N)");

  auto* variance = app.add_subcommand("variance", "Quantum variance and its trace bound");
  add_sizes(variance, true);
  add_obs(variance);
  add_common(variance);
  variance->add_option("--T", cfg.fejer_width, "Fejer width (default max(1, T_E/11))");
  variance->add_option("--delta", cfg.delta, "Cutoff width for the decomposition (default 1/log N)");
  variance->add_option("--kmax", cfg.kmax, "Fourier truncation (default N/2 - 1)");
  variance->add_option("--m", cfg.grid, "Sampling grid (power of two)");
  variance->add_option("--dump-diagonal", cfg.diagonal_path, "Write per-eigenstate diagonal elements here");

  auto* coherent = app.add_subcommand("coherent", "Single-step coherent state propagation");
  add_sizes(coherent, true);
  add_common(coherent);
  coherent->add_option("--q", cfg.q, "Centre q (default 0.3)");
  coherent->add_option("--p", cfg.p, "Centre p (default 0.4)");
  coherent->add_option("--sigma", cfg.sigma, "Squeezing (default 1)");
  coherent->add_option("--delta", cfg.delta, "Distance from q = 0, 1/2 (default 0.1)");
  coherent->add_option("--gamma", cfg.gamma, "Distance from p = 0 (default 0.2)");

  auto* correlations = app.add_subcommand("correlations", "Classical autocorrelation K_aa(n)");
  add_obs(correlations);
  add_common(correlations);
  correlations->add_option("--tmax", cfg.tmax, "Largest n (default 12)");
  correlations->add_option("--m", cfg.grid, "Quadrature grid (default 256)");

  auto* check = app.add_subcommand("quantise-check", "Closed-form anti-Wick against the integral oracle");
  add_sizes(check, true);
  add_obs(check);
  add_common(check);
  check->add_option("--sigma", cfg.sigma, "Squeezing (default 0.5, 1 and 2)");
  check->add_option("--kmax", cfg.kmax, "Fourier truncation for non-polynomial observables");
  check->add_option("--m", cfg.grid, "Oracle grid (default 16 sqrt(N max(sigma, 1/sigma)))");

  const std::map<CLI::App*, std::function<Output(const RunConfig&)>> commands = {
      {spectrum, cmd_spectrum},         {egorov, cmd_egorov},         {variance, cmd_variance},
      {coherent, cmd_coherent},         {correlations, cmd_correlations}, {check, cmd_quantise_check}};

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion& e) {
    out << BAKERLAB_VERSION << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "bakerlab: " << e.what() << '\n';
    return validation_failure;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (single_n != 0) cfg.sizes = {single_n};
  if (!n_list.empty()) cfg.sizes = n_list;

  try {
    set_thread_count(cfg.threads);
    Output result = commands.at(chosen)(cfg);
    std::ostringstream buffer;
    result.table.write(buffer, cfg.command, result.params, result.comments);
    if (cfg.output_path) {
      std::ofstream file(*cfg.output_path, std::ios::binary);
      if (!file) throw ValidationError("cannot write " + *cfg.output_path);
      file << buffer.str();
      write_manifest(*cfg.output_path, cfg, result);
    } else {
      out << buffer.str();
    }
    if (result.status != ok) err << "bakerlab " << cfg.command << ": numerical check failed\n";
    return result.status;
  } catch (const ValidationError& e) {
    err << "bakerlab " << cfg.command << ": " << e.what() << '\n';
    return validation_failure;
  } catch (const NumericalError& e) {
    err << "bakerlab " << cfg.command << ": " << e.what() << '\n';
    return numerical_failure;
  } catch (const std::exception& e) {
    err << "bakerlab " << cfg.command << ": " << e.what() << '\n';
    return numerical_failure;
  }
}

}  // namespace bakerlab::cli
