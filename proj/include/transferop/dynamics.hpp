#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transferop/common.hpp"

namespace transferop {

/// Truncated-normal perturbation: a normal profile with standard deviation
/// `sigma`, renormalized to the interval [lower, upper].
struct NoiseSpec {
  double sigma = 0.0;
  double lower = 0.0;
  double upper = 1.0;

  void validate() const;
};

enum class MapKind { Logistic, Custom };

/// A one-dimensional interval map, optionally perturbed by truncated-normal
/// noise. Logistic maps use params[0] as the multiplier r, x -> r x (1-x).
struct MapSpec {
  MapKind kind = MapKind::Logistic;
  std::vector<double> params{4.0};
  std::optional<NoiseSpec> noise;
  std::function<double(double)> custom_fn;  // Custom maps only

  static MapSpec logistic(double r = 4.0);
  static MapSpec logistic_noisy(double r, NoiseSpec ns);
  static MapSpec custom(std::function<double(double)> fn,
                        std::optional<NoiseSpec> ns = std::nullopt);

  std::string name() const;
  double multiplier() const;  // Logistic only
  void validate() const;
};

/// Deterministic image f(x); noise is never applied here.
/// Throws std::domain_error for x outside [0, 1].
double apply_map(const MapSpec& spec, double x);

// --- standard normal helpers -------------------------------------------------

double normal_pdf(double z);
double normal_cdf(double z);

/// Inverse standard normal CDF. Rational initial guess (Abramowitz-Stegun
/// 26.2.23, |err| < 4.5e-4) followed by one Newton refinement against the
/// erfc-based CDF, which brings the error to ~1e-9 absolute over the
/// sampling range.
double normal_quantile(double p);

// --- truncated normal --------------------------------------------------------

/// Density of the normal(mu, sigma) restricted to [ns.lower, ns.upper];
/// zero outside. Throws NumericError when the normalizing mass underflows
/// (mean far outside the interval with tiny sigma).
double truncated_normal_pdf(double x, double mu, const NoiseSpec& ns);

/// CDF of the same distribution (0 below the interval, 1 above).
double truncated_normal_cdf(double x, double mu, const NoiseSpec& ns);

/// One draw by inversion; consumes exactly one uniform from `rng`, so a
/// sample set is reproducible from the seed alone. The result always lies
/// in [ns.lower, ns.upper].
double sample_truncated_normal(double mu, const NoiseSpec& ns, RandomStream& rng);

// --- sample sets -------------------------------------------------------------

enum class SampleMode { Orbit, IidUniform };

struct SamplePair {
  double x;
  double x_next;
};

/// Ordered (x_n, x_{n+1}) pairs with the provenance needed to regenerate
/// them. Immutable after construction.
struct SampleSet {
  std::vector<SamplePair> pairs;
  SampleMode mode = SampleMode::Orbit;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  MapSpec map;

  std::vector<double> inputs() const;
  std::vector<double> outputs() const;
};

inline constexpr std::size_t kDefaultBurnIn = 1000;

/// Default orbit start; an arbitrary irrational-looking interior point that
/// avoids the pre-periodic values 0, 0.5 and 1.
inline constexpr double kDefaultOrbitStart = 0.3141592653;

/// Iterates the map from x0, discarding the first `burn_in` iterates, and
/// records n consecutive pairs. With noise, each step draws the next state
/// from a truncated normal centered at f(x), so the orbit never leaves the
/// domain. Custom maps that escape [0,1] raise NumericError with the
/// offending step index.
SampleSet generate_orbit(const MapSpec& spec, double x0, std::size_t n,
                         std::size_t burn_in, std::uint64_t seed);

/// n i.i.d. pairs (x, f(x) [+ noise]) with x uniform on [0,1].
SampleSet generate_ensemble(const MapSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace transferop
