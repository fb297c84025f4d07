#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "transferop/histogram.hpp"
#include "transferop/kde.hpp"

namespace transferop {

enum class ReferenceKind { LogisticArcsine, TruncNormal, Uniform };

/// Analytic reference density with closed-form first and second derivatives.
/// LogisticArcsine is 1/(pi sqrt(x(1-x))), the invariant density of the
/// fully chaotic logistic map.
class ReferenceDensity {
public:
  static ReferenceDensity logistic_arcsine();
  static ReferenceDensity truncated_normal(double mu, double sigma);
  static ReferenceDensity uniform();

  double value(double x) const;
  double first_derivative(double x) const;
  double second_derivative(double x) const;

  ReferenceKind kind() const { return kind_; }
  std::string name() const;

  /// CDF; for LogisticArcsine this is (2/pi) asin(sqrt(x)), used for exact
  /// cell masses.
  double cdf(double x) const;

private:
  ReferenceKind kind_ = ReferenceKind::Uniform;
  double mu_ = 0.0;
  double sigma_ = 1.0;
};

/// 100 equally spaced evaluation points on [0.01, 0.99] inclusive. The
/// endpoints of [0,1] are excluded because the arcsine reference (and its
/// derivatives) blow up there.
std::vector<double> evaluation_grid();

/// Constants for the MSE upper bounds, evaluated from a reference density
/// at a single point (default 0.99, the extreme of the evaluation grid,
/// where density, slope and curvature are all largest).
struct UbConstants {
  double x_eval = 0.99;
  double density = 0.0;     // p(x_eval)
  double slope = 0.0;       // |p'(x_eval)|
  double curvature = 0.0;   // |p''(x_eval)|

  static UbConstants at(const ReferenceDensity& ref, double x = 0.99);
};

/// One sweep observation (long-format CSV row).
struct SweepRecord {
  std::string method;
  std::size_t n = 0;
  double parameter = 0.0;  // cell count K or bandwidth delta
  std::uint64_t seed = 0;
  double mse_mean = 0.0;
  double ub = 0.0;
};

/// Pointwise squared errors, upper-bound curves and the located optimum of
/// an estimation experiment. `mse_mean` and `mse_pointwise` describe a
/// single realization (squared error of one fitted estimator); multi-seed
/// aggregates live in `records`.
struct ErrorReport {
  std::vector<double> grid;
  std::vector<double> mse_pointwise;
  double mse_mean = 0.0;
  std::vector<std::pair<double, double>> ub_curve;  // (parameter, UB)
  std::pair<double, double> optimum{0.0, 0.0};      // global UB minimizer
  std::vector<std::uint64_t> seeds;
  std::vector<SweepRecord> records;
  double runtime_seconds = 0.0;
};

/// Squared error of `estimator` against the reference on the grid.
ErrorReport pointwise_mse(const std::function<double(double)>& estimator,
                          const ReferenceDensity& ref, std::span<const double> grid);

struct SweepConfig {
  std::size_t n = 1000000;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  /// One shared sample set per seed (isolates the parameter effect); set to
  /// true to regenerate samples for every parameter value.
  bool regenerate_per_parameter = false;
  KernelSpec kernel = KernelSpec::make(KernelKind::Gaussian);
  UbConstants constants;  // defaults to arcsine constants at x = 0.99

  SweepConfig();
};

/// Fits histograms for every K in k_list on per-seed logistic-orbit samples
/// and records grid-mean squared errors next to the UB curve. The report's
/// optimum is the global integer UB minimizer.
ErrorReport sweep_histogram(const SweepConfig& config,
                            std::span<const std::size_t> k_list);

/// KDE analogue over a bandwidth list; the optimum is the continuous UB
/// minimizer.
ErrorReport sweep_kde(const SweepConfig& config, std::span<const double> delta_list);

enum class EstimatorMethod { Histogram, Kde };

/// Per-seed least-squares slope of log(grid-mean squared error) against
/// log N, with each N fitted at its own UB-optimal parameter. Requires at
/// least three N values. `exponent` is the median across seeds.
struct RateFit {
  double exponent = 0.0;
  std::vector<double> per_seed;
};

RateFit convergence_rate(EstimatorMethod method, std::span<const std::size_t> n_list,
                         std::span<const std::uint64_t> seeds,
                         const KernelSpec& kernel = KernelSpec::make(KernelKind::Gaussian));

/// Deterministic logistic-map orbit sample for a seed: the starting point is
/// drawn uniformly from the seed's stream, then the default burn-in hides
/// the transient. All analysis-level replication studies use this.
SampleSet logistic_orbit_sample(std::size_t n, std::uint64_t seed);

}  // namespace transferop
