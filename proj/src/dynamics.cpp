#include "transferop/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace transferop {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

void NoiseSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("noise sigma must be positive and finite");
  if (!(lower < upper))
    throw std::invalid_argument("noise interval must satisfy lower < upper");
}

MapSpec MapSpec::logistic(double r) {
  MapSpec spec;
  spec.kind = MapKind::Logistic;
  spec.params = {r};
  spec.validate();
  return spec;
}

MapSpec MapSpec::logistic_noisy(double r, NoiseSpec ns) {
  MapSpec spec = logistic(r);
  ns.validate();
  spec.noise = ns;
  return spec;
}

MapSpec MapSpec::custom(std::function<double(double)> fn, std::optional<NoiseSpec> ns) {
  MapSpec spec;
  spec.kind = MapKind::Custom;
  spec.params.clear();
  spec.custom_fn = std::move(fn);
  if (ns) {
    ns->validate();
    spec.noise = *ns;
  }
  return spec;
}

std::string MapSpec::name() const {
  return kind == MapKind::Logistic ? "logistic" : "custom";
}

double MapSpec::multiplier() const {
  if (kind != MapKind::Logistic || params.empty())
    throw std::logic_error("multiplier() is only defined for logistic maps");
  return params[0];
}

void MapSpec::validate() const {
  if (kind == MapKind::Logistic) {
    if (params.size() != 1 || !std::isfinite(params[0]))
      throw std::invalid_argument("logistic map takes a single finite parameter");
    if (!(params[0] > 0.0 && params[0] <= 4.0))
      throw std::invalid_argument("logistic multiplier must lie in (0, 4]");
  } else if (!custom_fn) {
    throw std::invalid_argument("custom map requires a function");
  }
  if (noise) noise->validate();
}

double apply_map(const MapSpec& spec, double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("map input outside [0,1]: " + std::to_string(x));
  if (spec.kind == MapKind::Logistic) return spec.params[0] * x * (1.0 - x);
  return spec.custom_fn(x);
}

double normal_pdf(double z) {
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal quantile requires p in (0,1)");
  const bool lower_tail = p < 0.5;
  const double pp = lower_tail ? p : 1.0 - p;
  const double t = std::sqrt(-2.0 * std::log(pp));
  double z = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                     (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
  if (lower_tail) z = -z;
  const double pdf = normal_pdf(z);
  if (pdf > 1e-300) z -= (normal_cdf(z) - p) / pdf;
  return z;
}

namespace {

// Phi(beta) - Phi(alpha), using whichever erfc tail avoids cancellation.
double normal_interval_mass(double alpha, double beta) {
  if (alpha + beta > 0.0)
    return 0.5 * (std::erfc(alpha / kSqrt2) - std::erfc(beta / kSqrt2));
  return 0.5 * (std::erfc(-beta / kSqrt2) - std::erfc(-alpha / kSqrt2));
}

double interval_mass_checked(double mu, const NoiseSpec& ns) {
  const double alpha = (ns.lower - mu) / ns.sigma;
  const double beta = (ns.upper - mu) / ns.sigma;
  const double mass = normal_interval_mass(alpha, beta);
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw NumericError("truncated normal normalization underflows to zero "
                       "(mean far outside the interval)");
  return mass;
}

}  // namespace

double truncated_normal_pdf(double x, double mu, const NoiseSpec& ns) {
  ns.validate();
  const double mass = interval_mass_checked(mu, ns);
  if (x < ns.lower || x > ns.upper) return 0.0;
  return normal_pdf((x - mu) / ns.sigma) / (ns.sigma * mass);
}

double truncated_normal_cdf(double x, double mu, const NoiseSpec& ns) {
  ns.validate();
  const double mass = interval_mass_checked(mu, ns);
  if (x <= ns.lower) return 0.0;
  if (x >= ns.upper) return 1.0;
  return normal_interval_mass((ns.lower - mu) / ns.sigma, (x - mu) / ns.sigma) / mass;
}

double sample_truncated_normal(double mu, const NoiseSpec& ns, RandomStream& rng) {
  ns.validate();
  interval_mass_checked(mu, ns);
  const double pa = normal_cdf((ns.lower - mu) / ns.sigma);
  const double pb = normal_cdf((ns.upper - mu) / ns.sigma);
  const double u = rng.uniform01();
  double p = pa + u * (pb - pa);
  p = std::clamp(p, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
  const double x = mu + ns.sigma * normal_quantile(p);
  return std::clamp(x, ns.lower, ns.upper);
}

std::vector<double> SampleSet::inputs() const {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = pairs[i].x;
  return out;
}

std::vector<double> SampleSet::outputs() const {
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = pairs[i].x_next;
  return out;
}

namespace {

double step(const MapSpec& spec, double x, RandomStream& rng, std::size_t index) {
  double fx = apply_map(spec, x);
  if (spec.noise) return sample_truncated_normal(fx, *spec.noise, rng);
  if (fx < 0.0 || fx > 1.0)
    throw NumericError("orbit escaped [0,1] at step " + std::to_string(index) +
                       " (value " + std::to_string(fx) + ")");
  return fx;
}

}  // namespace

SampleSet generate_orbit(const MapSpec& spec, double x0, std::size_t n,
                         std::size_t burn_in, std::uint64_t seed) {
  spec.validate();
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::domain_error("orbit start outside [0,1]");
  if (n == 0) throw std::invalid_argument("orbit length must be at least 1");

  RandomStream rng(seed);
  double x = x0;
  for (std::size_t k = 0; k < burn_in; ++k) x = step(spec, x, rng, k);

  SampleSet set;
  set.mode = SampleMode::Orbit;
  set.seed = seed;
  set.burn_in = burn_in;
  set.map = spec;
  set.pairs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double next = step(spec, x, rng, burn_in + k);
    set.pairs.push_back({x, next});
    x = next;
  }
  return set;
}

SampleSet generate_ensemble(const MapSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("ensemble size must be at least 1");

  RandomStream rng(seed);
  SampleSet set;
  set.mode = SampleMode::IidUniform;
  set.seed = seed;
  set.burn_in = 0;
  set.map = spec;
  set.pairs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double x = rng.uniform01();
    set.pairs.push_back({x, step(spec, x, rng, k)});
  }
  return set;
}

}  // namespace transferop
