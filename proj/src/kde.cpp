#include "transferop/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "transferop/common.hpp"

namespace transferop {

namespace {
constexpr double kGaussianCut = 40.0;  // kernel < 1e-300 beyond this
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kGaussianRoughness = 0.28209479177387814;  // 1 / (2 sqrt(pi))
}  // namespace

KernelSpec KernelSpec::make(KernelKind kind) {
  KernelSpec k;
  k.kind = kind;
  if (kind == KernelKind::Gaussian) {
    k.second_moment = 1.0;
    k.roughness = kGaussianRoughness;
  } else {
    k.second_moment = 0.2;
    k.roughness = 0.6;
  }
  return k;
}

std::string KernelSpec::name() const {
  return kind == KernelKind::Gaussian ? "gaussian" : "epanechnikov";
}

double kernel_eval(const KernelSpec& kernel, double z) {
  if (kernel.kind == KernelKind::Gaussian)
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
  const double a = std::abs(z);
  return a <= 1.0 ? 0.75 * (1.0 - z * z) : 0.0;
}

KdeDensity::KdeDensity(std::span<const double> samples, double delta, KernelSpec kernel)
    : dim_(1), n_(samples.size()), kernel_(kernel) {
  if (samples.empty()) throw std::invalid_argument("KDE fit needs samples");
  if (!(delta > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  delta_ = {delta, delta};
  xs_.assign(samples.begin(), samples.end());
  std::sort(xs_.begin(), xs_.end());
}

KdeDensity::KdeDensity(std::span<const SamplePair> samples, double delta_x,
                       double delta_y, KernelSpec kernel)
    : dim_(2), n_(samples.size()), kernel_(kernel) {
  if (samples.empty()) throw std::invalid_argument("KDE fit needs samples");
  if (!(delta_x > 0.0) || !(delta_y > 0.0))
    throw std::invalid_argument("bandwidths must be positive");
  delta_ = {delta_x, delta_y};

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return samples[a].x < samples[b].x; });
  xs_.resize(samples.size());
  ys_.resize(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    xs_[k] = samples[order[k]].x;
    ys_[k] = samples[order[k]].x_next;
  }
}

double KdeDensity::window(int axis) const {
  const double d = delta_[static_cast<std::size_t>(axis)];
  return kernel_.kind == KernelKind::Gaussian ? kGaussianCut * d : d;
}

double KdeDensity::value(double x) const {
  if (dim_ != 1) throw std::logic_error("1-D evaluation of a 2-D estimate");
  const double w = window(0);
  auto lo = std::lower_bound(xs_.begin(), xs_.end(), x - w);
  auto hi = std::upper_bound(xs_.begin(), xs_.end(), x + w);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it)
    sum += kernel_eval(kernel_, (*it - x) / delta_[0]);
  return sum / (delta_[0] * static_cast<double>(n_));
}

double KdeDensity::value(double x, double y) const {
  if (dim_ != 2) throw std::logic_error("2-D evaluation of a 1-D estimate");
  const double wx = window(0);
  const double wy = window(1);
  auto lo = std::lower_bound(xs_.begin(), xs_.end(), x - wx);
  auto hi = std::upper_bound(xs_.begin(), xs_.end(), x + wx);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const auto k = static_cast<std::size_t>(it - xs_.begin());
    if (std::abs(ys_[k] - y) > wy) continue;
    sum += kernel_eval(kernel_, (*it - x) / delta_[0]) *
           kernel_eval(kernel_, (ys_[k] - y) / delta_[1]);
  }
  return sum / (delta_[0] * delta_[1] * static_cast<double>(n_));
}

double kde_bias_bound(double delta, double p_second, double c) {
  if (!(delta > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return 0.5 * c * delta * delta * p_second;
}

double kde_mse_upper_bound(double delta, std::size_t N, double p_at, double p_second,
                           const KernelSpec& kernel) {
  if (!(delta > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (N == 0) throw std::invalid_argument("N must be positive");
  const double c = kernel.second_moment;
  const double d = kernel.roughness;
  const double bias = 0.5 * c * delta * delta * p_second;
  return bias * bias + d * p_at / (delta * static_cast<double>(N));
}

OptimalBandwidth kde_optimal_bandwidth(std::size_t N, double p_at, double p_second,
                                       const KernelSpec& kernel, int dim) {
  if (p_second == 0.0)
    throw NumericError("vanishing curvature: the MSE bound has no interior minimum");
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");

  // golden-section search on log(delta); the bound is unimodal there
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(1e-8);
  double b = std::log(1.0);
  auto f = [&](double t) { return kde_mse_upper_bound(std::exp(t), N, p_at, p_second, kernel); };
  double c1 = b - phi * (b - a);
  double c2 = a + phi * (b - a);
  double f1 = f(c1);
  double f2 = f(c2);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - phi * (b - a);
      f1 = f(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + phi * (b - a);
      f2 = f(c2);
    }
  }
  return {std::exp(0.5 * (a + b)), -1.0 / (4.0 + static_cast<double>(dim))};
}

}  // namespace transferop
