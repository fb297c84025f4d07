#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "transferop/dynamics.hpp"

namespace transferop {

enum class KernelKind { Gaussian, Epanechnikov };

/// A symmetric probability kernel together with its second moment
/// c = int z^2 K(z) dz and roughness d = int K(z)^2 dz.
struct KernelSpec {
  KernelKind kind = KernelKind::Gaussian;
  double second_moment = 1.0;
  double roughness = 0.0;

  static KernelSpec make(KernelKind kind);
  std::string name() const;
};

/// Kernel value at z. Gaussian: standard normal density. Epanechnikov:
/// (3/4)(1 - z^2) on [-1, 1], zero outside.
double kernel_eval(const KernelSpec& kernel, double z);

/// Kernel density estimate; retains (sorted) samples and evaluates lazily.
/// dim 2 uses the product kernel with per-axis bandwidths.
class KdeDensity {
public:
  /// 1-D fit. Throws std::invalid_argument for empty samples or
  /// nonpositive bandwidth.
  KdeDensity(std::span<const double> samples, double delta, KernelSpec kernel);

  /// 2-D fit of (x, x_next) pairs with diagonal bandwidth (dx, dy).
  KdeDensity(std::span<const SamplePair> samples, double delta_x, double delta_y,
             KernelSpec kernel);

  double value(double x) const;
  double value(double x, double y) const;

  int dim() const { return dim_; }
  std::size_t size() const { return n_; }
  double bandwidth() const { return delta_[0]; }
  std::array<double, 2> bandwidth_2d() const { return delta_; }
  const KernelSpec& kernel() const { return kernel_; }

  /// Retained samples, sorted by x; ys() is the matching x_next column
  /// (dim 2 only).
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }

  /// Half-width of the window outside which a sample cannot contribute:
  /// delta for Epanechnikov, 40*delta for the Gaussian (beyond 40 sigma the
  /// kernel underflows to < 1e-300).
  double window(int axis) const;

private:
  int dim_;
  std::size_t n_;
  std::array<double, 2> delta_{0.0, 0.0};
  KernelSpec kernel_;
  std::vector<double> xs_;  // sorted
  std::vector<double> ys_;  // co-permuted with xs_ (dim 2)
};

/// Leading-order bias (c/2) delta^2 p'' of the estimate at a point where the
/// true density has second derivative p_second.
double kde_bias_bound(double delta, double p_second, double c);

/// Leading-order MSE bound (c^2/4) delta^4 p_second^2 + d p_at / (delta N).
double kde_mse_upper_bound(double delta, std::size_t N, double p_at,
                           double p_second, const KernelSpec& kernel);

/// argmin of kde_mse_upper_bound over delta (golden-section on log delta)
/// plus the dimension-dependent shrink rate exponent -1/(4+dim) of the
/// optimal bandwidth in N. Throws NumericError when p_second == 0 (the
/// bound has no interior minimizer).
struct OptimalBandwidth {
  double by_argmin;
  double rate_exponent;
};

OptimalBandwidth kde_optimal_bandwidth(std::size_t N, double p_at, double p_second,
                                       const KernelSpec& kernel, int dim = 1);

}  // namespace transferop
