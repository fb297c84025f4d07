// Command-line front end: simulation, density estimation, operator
// construction, spectral analysis and parameter sweeps, with key=value
// config files and deterministic seeding.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "transferop/analysis.hpp"
#include "transferop/io.hpp"
#include "transferop/spectral.hpp"

namespace fs = std::filesystem;
using namespace transferop;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct CommonOpts {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

KernelSpec kernel_from_name(const std::string& name) {
  if (name == "gaussian") return KernelSpec::make(KernelKind::Gaussian);
  if (name == "epanechnikov") return KernelSpec::make(KernelKind::Epanechnikov);
  throw CLI::ValidationError("--kernel", "unknown kernel: " + name);
}

SampleSet load_samples(const std::string& prefix) {
  return io::read_sample_set(prefix + ".csv", prefix + ".json");
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

// UB-optimal defaults from the arcsine constants at x = 0.99.
double default_marginal_bandwidth(std::size_t n, const KernelSpec& kernel) {
  const UbConstants c = UbConstants::at(ReferenceDensity::logistic_arcsine(), 0.99);
  return kde_optimal_bandwidth(n, c.density, c.curvature, kernel, 1).by_argmin;
}

double default_joint_bandwidth(std::size_t n, const KernelSpec& kernel) {
  // 1-D rule constant with the 2-D shrink rate N^(-1/6)
  const double d1 = default_marginal_bandwidth(n, kernel);
  const double nd = static_cast<double>(n);
  return d1 * std::pow(nd, 1.0 / 5.0) * std::pow(nd, -1.0 / 6.0);
}

void emit_gnuplot_script(const fs::path& script, const fs::path& data,
                         const std::string& title) {
  std::ofstream out(script);
  out << "set datafile separator ','\n"
      << "set key off\n"
      << "set title '" << title << "'\n"
      << "plot '" << data.string() << "' skip 1 using 1:2 with lines\n";
}

// --- simulate ---------------------------------------------------------------

struct SimulateOpts {
  std::string map = "logistic";
  double r = 4.0;
  std::string mode = "orbit";
  std::size_t n = 1000;
  std::size_t burn_in = kDefaultBurnIn;
  double x0 = kDefaultOrbitStart;
  double noise_sigma = 0.0;
  std::string out = "samples";
};

void run_simulate(const SimulateOpts& opt, const CommonOpts& common) {
  if (opt.map != "logistic")
    throw CLI::ValidationError("--map", "only the logistic map is available");
  MapSpec spec = opt.noise_sigma > 0.0
                     ? MapSpec::logistic_noisy(opt.r, NoiseSpec{opt.noise_sigma, 0.0, 1.0})
                     : MapSpec::logistic(opt.r);

  SampleSet samples;
  if (opt.mode == "orbit") {
    samples = generate_orbit(spec, opt.x0, opt.n, opt.burn_in, common.seed);
  } else if (opt.mode == "ensemble") {
    samples = generate_ensemble(spec, opt.n, common.seed);
  } else {
    throw CLI::ValidationError("--mode", "expected 'orbit' or 'ensemble'");
  }

  io::write_sample_set(samples, opt.out + ".csv", opt.out + ".json");
  std::cout << "simulate: " << samples.pairs.size() << " pairs, mode=" << opt.mode
            << ", seed=" << common.seed << " -> " << opt.out << ".csv\n";
}

// --- estimate ---------------------------------------------------------------

struct EstimateOpts {
  std::string samples;
  std::string method = "hist";
  std::size_t k = 100;
  double delta = 0.0;  // 0 = UB-optimal default
  std::string kernel = "gaussian";
  std::size_t grid_n = 0;  // 0 = the standard evaluation grid
  double grid_lo = 0.01;
  double grid_hi = 0.99;
  std::string out = "density";
  bool plot_script = false;
};

void run_estimate(const EstimateOpts& opt) {
  const SampleSet samples = load_samples(opt.samples);
  const std::vector<double> xs = samples.inputs();

  std::vector<double> grid;
  if (opt.grid_n == 0) {
    grid = evaluation_grid();
  } else {
    grid.resize(opt.grid_n);
    for (std::size_t i = 0; i < opt.grid_n; ++i)
      grid[i] = opt.grid_lo + (opt.grid_hi - opt.grid_lo) * static_cast<double>(i) /
                                  static_cast<double>(opt.grid_n - 1);
  }

  std::vector<double> values(grid.size());
  if (opt.method == "hist") {
    const HistDensity h = hist_fit(xs, opt.k);
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = h.value(grid[i]);
    io::write_hist_density(h, opt.out + ".json");
  } else if (opt.method == "kde") {
    const KernelSpec kernel = kernel_from_name(opt.kernel);
    const double delta =
        opt.delta > 0.0 ? opt.delta : default_marginal_bandwidth(xs.size(), kernel);
    const KdeDensity kde(xs, delta, kernel);
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = kde.value(grid[i]);
    io::write_kde_meta(kde, opt.samples + ".csv", opt.out + ".json");
  } else {
    throw CLI::ValidationError("--method", "expected 'hist' or 'kde'");
  }

  io::write_density_csv(grid, values, opt.out + ".csv");
  if (opt.plot_script)
    emit_gnuplot_script(opt.out + ".gnuplot", opt.out + ".csv",
                        opt.method + " density estimate");
  std::cout << "estimate: method=" << opt.method << ", " << grid.size()
            << " grid points -> " << opt.out << ".csv\n";
}

// --- operator ---------------------------------------------------------------

struct OperatorOpts {
  std::string samples;
  std::string method = "ulam";
  std::size_t k = 100;
  double r = 4.0;
  double noise_sigma = 0.0;
  std::size_t quad_points = 1024;
  double delta_marginal = 0.0;
  double delta_joint_x = 0.0;
  double delta_joint_y = 0.0;
  std::string kernel = "gaussian";
  double marginal_floor = 1e-12;
  double tol = 1e-12;
  std::size_t max_iter = 100000;
  bool allow_nonconverged = false;
  std::string out = "operator";
};

void run_operator(const OperatorOpts& opt, const CommonOpts& common) {
  StochasticMatrix matrix;
  std::string source = "-";
  std::string bandwidths;

  if (opt.method == "ulam" || opt.method == "kde") {
    const SampleSet samples = load_samples(opt.samples);
    source = opt.samples + ".csv";
    if (opt.method == "ulam") {
      matrix = ulam_matrix_from_pairs(samples, opt.k);
    } else {
      KdeTransferOptions kopt;
      kopt.kernel = kernel_from_name(opt.kernel);
      const std::size_t n = samples.pairs.size();
      kopt.delta_marginal = opt.delta_marginal > 0.0
                                ? opt.delta_marginal
                                : default_marginal_bandwidth(n, kopt.kernel);
      const double dj = default_joint_bandwidth(n, kopt.kernel);
      kopt.delta_joint_x = opt.delta_joint_x > 0.0 ? opt.delta_joint_x : dj;
      kopt.delta_joint_y = opt.delta_joint_y > 0.0 ? opt.delta_joint_y : dj;
      kopt.marginal_floor = opt.marginal_floor;
      kopt.threads = common.threads;
      matrix = kde_transfer_matrix(samples, opt.k, kopt);
      std::ostringstream bw;
      bw << "{\"marginal\": " << io::format_double(kopt.delta_marginal)
         << ", \"joint\": [" << io::format_double(kopt.delta_joint_x) << ", "
         << io::format_double(kopt.delta_joint_y) << "]}";
      bandwidths = bw.str();
    }
  } else if (opt.method == "exact") {
    matrix = ulam_matrix_exact(MapSpec::logistic(opt.r), opt.k, opt.quad_points,
                               common.threads);
  } else if (opt.method == "noisy-exact") {
    if (!(opt.noise_sigma > 0.0))
      throw CLI::ValidationError("--noise-sigma", "noisy-exact needs a positive sigma");
    matrix = noisy_kernel_matrix_exact(
        MapSpec::logistic_noisy(opt.r, NoiseSpec{opt.noise_sigma, 0.0, 1.0}), opt.k,
        common.threads);
  } else {
    throw CLI::ValidationError("--method",
                               "expected 'ulam', 'kde', 'exact' or 'noisy-exact'");
  }

  io::write_matrix_csv(matrix, opt.out + "_matrix.csv");
  io::write_matrix_meta(matrix, source, bandwidths, opt.out + "_matrix.json");

  const StationaryResult stationary =
      leading_left_eigenvector(matrix, opt.tol, opt.max_iter);
  io::write_stationary(stationary, matrix.K, opt.out + "_stationary.csv",
                       opt.out + "_stationary.json");

  std::cout << "operator: method=" << opt.method << ", K=" << matrix.K
            << ", flagged_rows=" << matrix.flagged_rows()
            << ", stationary_residual=" << stationary.residual
            << (stationary.unique ? "" : " (non-unique)") << " -> " << opt.out
            << "_matrix.csv\n";

  if (!stationary.converged) {
    if (!opt.allow_nonconverged)
      throw NumericError("power iteration did not converge (residual " +
                         std::to_string(stationary.residual) + ")");
    std::cout << "operator: warning, eigensolve not converged (residual "
              << stationary.residual << ")\n";
  }
}

// --- sweep ------------------------------------------------------------------

struct SweepOpts {
  std::string method = "hist";
  std::size_t n = 1000000;
  std::string k_list;
  std::string delta_list;
  std::string seeds = "1,2,3,4,5";
  bool regenerate = false;
  std::string kernel = "gaussian";
  std::string out = "sweep";
};

void run_sweep(const SweepOpts& opt) {
  SweepConfig config;
  config.n = opt.n;
  config.seeds = parse_seed_list(opt.seeds);
  config.regenerate_per_parameter = opt.regenerate;
  config.kernel = kernel_from_name(opt.kernel);
  if (config.seeds.empty()) throw CLI::ValidationError("--seeds", "empty seed list");

  ErrorReport report;
  if (opt.method == "hist") {
    std::vector<std::size_t> ks;
    for (double v : parse_double_list(opt.k_list))
      ks.push_back(static_cast<std::size_t>(v));
    if (ks.empty()) throw CLI::ValidationError("--k-list", "empty sweep range");
    report = sweep_histogram(config, ks);
  } else if (opt.method == "kde") {
    const std::vector<double> deltas = parse_double_list(opt.delta_list);
    if (deltas.empty()) throw CLI::ValidationError("--delta-list", "empty sweep range");
    report = sweep_kde(config, deltas);
  } else {
    throw CLI::ValidationError("--method", "expected 'hist' or 'kde'");
  }

  io::write_error_report(report, opt.out + ".csv", opt.out + ".json");
  std::cout << "sweep: method=" << opt.method << ", UB optimum at parameter="
            << report.optimum.first << " (ub=" << report.optimum.second << ") -> "
            << opt.out << ".csv\n";
}

// --- compare ----------------------------------------------------------------

struct CompareOpts {
  std::size_t n = 1000000;
  std::string seeds = "1,2,3,4,5";
  std::string kernel = "gaussian";
  std::string out = "compare";
};

void run_compare(const CompareOpts& opt) {
  const std::vector<std::uint64_t> seeds = parse_seed_list(opt.seeds);
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "empty seed list");

  const ReferenceDensity ref = ReferenceDensity::logistic_arcsine();
  const UbConstants constants = UbConstants::at(ref, 0.99);
  const KernelSpec kernel = kernel_from_name(opt.kernel);
  const std::vector<double> grid = evaluation_grid();

  const std::size_t k_opt =
      hist_optimal_bin_count(opt.n, constants.slope, constants.density).by_argmin;
  const double delta_opt =
      kde_optimal_bandwidth(opt.n, constants.density, constants.curvature, kernel, 1)
          .by_argmin;

  std::vector<double> hist_means, kde_means;
  std::vector<double> hist_pointwise, kde_pointwise;  // first seed
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const SampleSet samples = logistic_orbit_sample(opt.n, seeds[s]);
    const HistDensity h = hist_fit(samples.inputs(), k_opt);
    const KdeDensity kde(samples.inputs(), delta_opt, kernel);
    const ErrorReport hr =
        pointwise_mse([&](double x) { return h.value(x); }, ref, grid);
    const ErrorReport kr =
        pointwise_mse([&](double x) { return kde.value(x); }, ref, grid);
    hist_means.push_back(hr.mse_mean);
    kde_means.push_back(kr.mse_mean);
    if (s == 0) {
      hist_pointwise = hr.mse_pointwise;
      kde_pointwise = kr.mse_pointwise;
    }
  }

  {
    std::ofstream csv(opt.out + ".csv");
    csv << "x,mse_hist,mse_kde\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      csv << io::format_double(grid[i]) << ',' << io::format_double(hist_pointwise[i])
          << ',' << io::format_double(kde_pointwise[i]) << '\n';
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  const double hist_median = median(hist_means);
  const double kde_median = median(kde_means);
  {
    std::ofstream js(opt.out + ".json");
    js << "{\n  \"n\": " << opt.n << ",\n  \"k_opt\": " << k_opt
       << ",\n  \"delta_opt\": " << io::format_double(delta_opt)
       << ",\n  \"hist_mse_median\": " << io::format_double(hist_median)
       << ",\n  \"kde_mse_median\": " << io::format_double(kde_median)
       << ",\n  \"kde_wins\": " << (kde_median < hist_median ? "true" : "false")
       << "\n}\n";
  }

  std::cout << "compare: hist(K=" << k_opt << ") median MSE " << hist_median
            << ", kde(delta=" << delta_opt << ") median MSE " << kde_median << " -> "
            << opt.out << ".csv\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-operator estimation from orbit data: simulation, "
               "histogram/KDE density estimation, Ulam and KDE operator "
               "matrices, stationary densities and error sweeps"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file ([section] per subcommand)");

  CommonOpts common;
  app.add_option("--threads", common.threads, "worker-thread cap")->capture_default_str();

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "generate map samples");
  c_sim->add_option("--map", sim.map, "map name")->capture_default_str();
  c_sim->add_option("--r", sim.r, "logistic multiplier")->capture_default_str();
  c_sim->add_option("--mode", sim.mode, "orbit | ensemble")->capture_default_str();
  c_sim->add_option("--n", sim.n, "number of pairs")->capture_default_str();
  c_sim->add_option("--burn-in", sim.burn_in, "discarded leading iterates")
      ->capture_default_str();
  c_sim->add_option("--x0", sim.x0, "orbit start")->capture_default_str();
  c_sim->add_option("--noise-sigma", sim.noise_sigma,
                    "truncated-normal noise level (0 = none)")
      ->capture_default_str();
  c_sim->add_option("--out", sim.out, "output prefix")->capture_default_str();
  c_sim->add_option("--seed", common.seed, "RNG seed")
      ->envname("TRANSFEROP_SEED")
      ->capture_default_str();

  EstimateOpts est;
  auto* c_est = app.add_subcommand("estimate", "fit a density estimator");
  c_est->add_option("--samples", est.samples, "sample file prefix")->required();
  c_est->add_option("--method", est.method, "hist | kde")->capture_default_str();
  c_est->add_option("--k", est.k, "histogram cell count")->capture_default_str();
  c_est->add_option("--delta", est.delta, "KDE bandwidth (0 = UB-optimal)")
      ->capture_default_str();
  c_est->add_option("--kernel", est.kernel, "gaussian | epanechnikov")
      ->capture_default_str();
  c_est->add_option("--grid-n", est.grid_n, "grid size (0 = standard 100-point grid)")
      ->capture_default_str();
  c_est->add_option("--grid-lo", est.grid_lo, "grid start")->capture_default_str();
  c_est->add_option("--grid-hi", est.grid_hi, "grid end")->capture_default_str();
  c_est->add_option("--out", est.out, "output prefix")->capture_default_str();
  c_est->add_flag("--plot-script", est.plot_script, "emit a gnuplot script");

  OperatorOpts op;
  auto* c_op = app.add_subcommand("operator", "build a transfer-operator matrix "
                                              "and its stationary density");
  c_op->add_option("--samples", op.samples, "sample file prefix (ulam/kde)");
  c_op->add_option("--method", op.method, "ulam | kde | exact | noisy-exact")
      ->capture_default_str();
  c_op->add_option("--k", op.k, "grid cells per axis")->capture_default_str();
  c_op->add_option("--r", op.r, "logistic multiplier (exact modes)")
      ->capture_default_str();
  c_op->add_option("--noise-sigma", op.noise_sigma, "noise level (noisy-exact)")
      ->capture_default_str();
  c_op->add_option("--quad-points", op.quad_points, "midpoint subsamples per cell")
      ->capture_default_str();
  c_op->add_option("--delta-marginal", op.delta_marginal,
                   "marginal KDE bandwidth (0 = UB-optimal)")
      ->capture_default_str();
  c_op->add_option("--delta-joint-x", op.delta_joint_x,
                   "joint KDE x bandwidth (0 = N^(-1/6) rule)")
      ->capture_default_str();
  c_op->add_option("--delta-joint-y", op.delta_joint_y,
                   "joint KDE y bandwidth (0 = N^(-1/6) rule)")
      ->capture_default_str();
  c_op->add_option("--kernel", op.kernel, "gaussian | epanechnikov")
      ->capture_default_str();
  c_op->add_option("--marginal-floor", op.marginal_floor, "row flagging floor")
      ->capture_default_str();
  c_op->add_option("--tol", op.tol, "power-iteration tolerance")->capture_default_str();
  c_op->add_option("--max-iter", op.max_iter, "power-iteration cap")
      ->capture_default_str();
  c_op->add_flag("--allow-nonconverged", op.allow_nonconverged,
                 "exit 0 even if the eigensolve does not converge");
  c_op->add_option("--out", op.out, "output prefix")->capture_default_str();

  SweepOpts sw;
  auto* c_sw = app.add_subcommand("sweep", "parameter sweep with MSE and UB curves");
  c_sw->add_option("--method", sw.method, "hist | kde")->capture_default_str();
  c_sw->add_option("--n", sw.n, "sample size")->capture_default_str();
  c_sw->add_option("--k-list", sw.k_list, "comma-separated cell counts");
  c_sw->add_option("--delta-list", sw.delta_list, "comma-separated bandwidths");
  c_sw->add_option("--seeds", sw.seeds, "comma-separated seeds")->capture_default_str();
  c_sw->add_flag("--regenerate", sw.regenerate, "fresh samples per parameter");
  c_sw->add_option("--kernel", sw.kernel, "gaussian | epanechnikov")
      ->capture_default_str();
  c_sw->add_option("--out", sw.out, "output prefix")->capture_default_str();

  CompareOpts cmp;
  auto* c_cmp = app.add_subcommand("compare", "histogram vs KDE at their optima");
  c_cmp->add_option("--n", cmp.n, "sample size")->capture_default_str();
  c_cmp->add_option("--seeds", cmp.seeds, "comma-separated seeds")
      ->capture_default_str();
  c_cmp->add_option("--kernel", cmp.kernel, "gaussian | epanechnikov")
      ->capture_default_str();
  c_cmp->add_option("--out", cmp.out, "output prefix")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_sim->parsed()) run_simulate(sim, common);
    if (c_est->parsed()) run_estimate(est);
    if (c_op->parsed()) run_operator(op, common);
    if (c_sw->parsed()) run_sweep(sw);
    if (c_cmp->parsed()) run_compare(cmp);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
