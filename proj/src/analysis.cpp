#include "transferop/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "transferop/common.hpp"

namespace transferop {

namespace {
constexpr double kPi = 3.141592653589793;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}
}  // namespace

ReferenceDensity ReferenceDensity::logistic_arcsine() {
  ReferenceDensity r;
  r.kind_ = ReferenceKind::LogisticArcsine;
  return r;
}

ReferenceDensity ReferenceDensity::truncated_normal(double mu, double sigma) {
  NoiseSpec ns{sigma, 0.0, 1.0};
  ns.validate();
  ReferenceDensity r;
  r.kind_ = ReferenceKind::TruncNormal;
  r.mu_ = mu;
  r.sigma_ = sigma;
  return r;
}

ReferenceDensity ReferenceDensity::uniform() { return ReferenceDensity{}; }

std::string ReferenceDensity::name() const {
  switch (kind_) {
    case ReferenceKind::LogisticArcsine: return "logistic_arcsine";
    case ReferenceKind::TruncNormal: return "truncated_normal";
    case ReferenceKind::Uniform: return "uniform";
  }
  return "unknown";
}

double ReferenceDensity::value(double x) const {
  switch (kind_) {
    case ReferenceKind::LogisticArcsine: {
      const double w = x * (1.0 - x);
      if (!(w > 0.0)) throw std::domain_error("arcsine density is singular at 0 and 1");
      return 1.0 / (kPi * std::sqrt(w));
    }
    case ReferenceKind::TruncNormal:
      return truncated_normal_pdf(x, mu_, NoiseSpec{sigma_, 0.0, 1.0});
    case ReferenceKind::Uniform:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
  }
  return 0.0;
}

double ReferenceDensity::first_derivative(double x) const {
  switch (kind_) {
    case ReferenceKind::LogisticArcsine: {
      const double w = x * (1.0 - x);
      if (!(w > 0.0)) throw std::domain_error("arcsine density is singular at 0 and 1");
      return (2.0 * x - 1.0) / (2.0 * kPi * std::pow(w, 1.5));
    }
    case ReferenceKind::TruncNormal: {
      const double z = (x - mu_) / sigma_;
      return -(z / sigma_) * value(x);
    }
    case ReferenceKind::Uniform:
      return 0.0;
  }
  return 0.0;
}

double ReferenceDensity::second_derivative(double x) const {
  switch (kind_) {
    case ReferenceKind::LogisticArcsine: {
      const double w = x * (1.0 - x);
      if (!(w > 0.0)) throw std::domain_error("arcsine density is singular at 0 and 1");
      const double s = 1.0 - 2.0 * x;
      return (0.75 * std::pow(w, -2.5) * s * s + std::pow(w, -1.5)) / kPi;
    }
    case ReferenceKind::TruncNormal: {
      const double z = (x - mu_) / sigma_;
      return ((z * z - 1.0) / (sigma_ * sigma_)) * value(x);
    }
    case ReferenceKind::Uniform:
      return 0.0;
  }
  return 0.0;
}

double ReferenceDensity::cdf(double x) const {
  switch (kind_) {
    case ReferenceKind::LogisticArcsine:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return (2.0 / kPi) * std::asin(std::sqrt(x));
    case ReferenceKind::TruncNormal:
      return truncated_normal_cdf(x, mu_, NoiseSpec{sigma_, 0.0, 1.0});
    case ReferenceKind::Uniform:
      return std::clamp(x, 0.0, 1.0);
  }
  return 0.0;
}

std::vector<double> evaluation_grid() {
  constexpr std::size_t n = 100;
  constexpr double lo = 0.01;
  constexpr double hi = 0.99;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return grid;
}

UbConstants UbConstants::at(const ReferenceDensity& ref, double x) {
  UbConstants c;
  c.x_eval = x;
  c.density = ref.value(x);
  c.slope = std::abs(ref.first_derivative(x));
  c.curvature = std::abs(ref.second_derivative(x));
  return c;
}

SweepConfig::SweepConfig()
    : constants(UbConstants::at(ReferenceDensity::logistic_arcsine(), 0.99)) {}

ErrorReport pointwise_mse(const std::function<double(double)>& estimator,
                          const ReferenceDensity& ref, std::span<const double> grid) {
  const auto start = std::chrono::steady_clock::now();
  ErrorReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.mse_pointwise.resize(grid.size());
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double err = estimator(grid[i]) - ref.value(grid[i]);
    report.mse_pointwise[i] = err * err;
    total += report.mse_pointwise[i];
  }
  report.mse_mean = grid.empty() ? 0.0 : total / static_cast<double>(grid.size());
  report.runtime_seconds = elapsed_seconds(start);
  return report;
}

SampleSet logistic_orbit_sample(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  double x0 = rng.uniform01();
  // the exact pre-periodic points have measure zero but cost nothing to dodge
  if (x0 == 0.0 || x0 == 0.5 || x0 == 1.0) x0 = kDefaultOrbitStart;
  return generate_orbit(MapSpec::logistic(), x0, n, kDefaultBurnIn, seed);
}

namespace {

double grid_mean_sq_error(const std::function<double(double)>& estimator,
                          const ReferenceDensity& ref, std::span<const double> grid) {
  double total = 0.0;
  for (double g : grid) {
    const double err = estimator(g) - ref.value(g);
    total += err * err;
  }
  return total / static_cast<double>(grid.size());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double lsq_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  if (den == 0.0) throw NumericError("degenerate rate fit: need distinct N values");
  return num / den;
}

}  // namespace

ErrorReport sweep_histogram(const SweepConfig& config,
                            std::span<const std::size_t> k_list) {
  if (k_list.empty()) throw std::invalid_argument("empty sweep range");
  const auto start = std::chrono::steady_clock::now();
  const ReferenceDensity ref = ReferenceDensity::logistic_arcsine();

  ErrorReport report;
  report.grid = evaluation_grid();
  report.seeds = config.seeds;

  for (std::uint64_t seed : config.seeds) {
    SampleSet shared;
    if (!config.regenerate_per_parameter) shared = logistic_orbit_sample(config.n, seed);
    for (std::size_t idx = 0; idx < k_list.size(); ++idx) {
      const std::size_t K = k_list[idx];
      const SampleSet& samples =
          config.regenerate_per_parameter
              ? (shared = logistic_orbit_sample(config.n, mix_seed(seed, idx)))
              : shared;
      const HistDensity h = hist_fit(samples.inputs(), K);
      const double mse =
          grid_mean_sq_error([&](double x) { return h.value(x); }, ref, report.grid);
      report.records.push_back({"hist", config.n, static_cast<double>(K), seed, mse,
                                hist_mse_upper_bound(K, config.n, config.constants.slope,
                                                     config.constants.density)});
    }
  }

  const OptimalBinCount opt = hist_optimal_bin_count(config.n, config.constants.slope,
                                                     config.constants.density);
  std::vector<std::size_t> curve_ks(k_list.begin(), k_list.end());
  curve_ks.push_back(opt.by_argmin);
  std::sort(curve_ks.begin(), curve_ks.end());
  curve_ks.erase(std::unique(curve_ks.begin(), curve_ks.end()), curve_ks.end());
  for (std::size_t K : curve_ks)
    report.ub_curve.emplace_back(static_cast<double>(K),
                                 hist_mse_upper_bound(K, config.n, config.constants.slope,
                                                      config.constants.density));
  report.optimum = *std::min_element(
      report.ub_curve.begin(), report.ub_curve.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  report.runtime_seconds = elapsed_seconds(start);
  return report;
}

ErrorReport sweep_kde(const SweepConfig& config, std::span<const double> delta_list) {
  if (delta_list.empty()) throw std::invalid_argument("empty sweep range");
  const auto start = std::chrono::steady_clock::now();
  const ReferenceDensity ref = ReferenceDensity::logistic_arcsine();

  ErrorReport report;
  report.grid = evaluation_grid();
  report.seeds = config.seeds;

  for (std::uint64_t seed : config.seeds) {
    SampleSet shared;
    if (!config.regenerate_per_parameter) shared = logistic_orbit_sample(config.n, seed);
    for (std::size_t idx = 0; idx < delta_list.size(); ++idx) {
      const double delta = delta_list[idx];
      const SampleSet& samples =
          config.regenerate_per_parameter
              ? (shared = logistic_orbit_sample(config.n, mix_seed(seed, idx)))
              : shared;
      const KdeDensity kde(samples.inputs(), delta, config.kernel);
      const double mse =
          grid_mean_sq_error([&](double x) { return kde.value(x); }, ref, report.grid);
      report.records.push_back({"kde", config.n, delta, seed, mse,
                                kde_mse_upper_bound(delta, config.n,
                                                    config.constants.density,
                                                    config.constants.curvature,
                                                    config.kernel)});
    }
  }

  const OptimalBandwidth opt =
      kde_optimal_bandwidth(config.n, config.constants.density,
                            config.constants.curvature, config.kernel, 1);
  std::vector<double> curve(delta_list.begin(), delta_list.end());
  curve.push_back(opt.by_argmin);
  std::sort(curve.begin(), curve.end());
  for (double delta : curve)
    report.ub_curve.emplace_back(
        delta, kde_mse_upper_bound(delta, config.n, config.constants.density,
                                   config.constants.curvature, config.kernel));
  report.optimum = *std::min_element(
      report.ub_curve.begin(), report.ub_curve.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  report.runtime_seconds = elapsed_seconds(start);
  return report;
}

RateFit convergence_rate(EstimatorMethod method, std::span<const std::size_t> n_list,
                         std::span<const std::uint64_t> seeds,
                         const KernelSpec& kernel) {
  if (n_list.size() < 3)
    throw NumericError("degenerate rate fit: need at least three sample sizes");
  const ReferenceDensity ref = ReferenceDensity::logistic_arcsine();
  const UbConstants constants = UbConstants::at(ref, 0.99);
  const std::vector<double> grid = evaluation_grid();

  RateFit fit;
  for (std::uint64_t seed : seeds) {
    std::vector<double> log_n;
    std::vector<double> log_mse;
    for (std::size_t n : n_list) {
      const SampleSet samples = logistic_orbit_sample(n, seed);
      double mse = 0.0;
      if (method == EstimatorMethod::Histogram) {
        const std::size_t K =
            hist_optimal_bin_count(n, constants.slope, constants.density).by_argmin;
        const HistDensity h = hist_fit(samples.inputs(), K);
        mse = grid_mean_sq_error([&](double x) { return h.value(x); }, ref, grid);
      } else {
        const double delta =
            kde_optimal_bandwidth(n, constants.density, constants.curvature, kernel, 1)
                .by_argmin;
        const KdeDensity kde(samples.inputs(), delta, kernel);
        mse = grid_mean_sq_error([&](double x) { return kde.value(x); }, ref, grid);
      }
      log_n.push_back(std::log(static_cast<double>(n)));
      log_mse.push_back(std::log(mse));
    }
    fit.per_seed.push_back(lsq_slope(log_n, log_mse));
  }
  fit.exponent = median_of(fit.per_seed);
  return fit;
}

}  // namespace transferop
