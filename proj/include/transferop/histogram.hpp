#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "transferop/dynamics.hpp"

namespace transferop {

/// 1-based index of the cell of the uniform K-cell partition of [0,1]
/// containing x. Cells are [(i-1)/K, i/K); the last cell is closed so that
/// x = 1 maps to cell K. Throws std::domain_error outside [0,1].
std::size_t bin_index(double x, std::size_t K);

/// Histogram density estimate on [0,1] (dim 1) or the unit square (dim 2,
/// product partition of K x K cells). Cell counts sum to N; the evaluated
/// density integrates to 1 over the domain.
struct HistDensity {
  int dim = 1;
  std::size_t K = 1;
  std::size_t N = 0;
  std::vector<double> counts;  // length K (dim 1) or K*K row-major (dim 2)

  double value(double x) const;
  double value(double x, double y) const;
  double count_at(std::size_t i) const { return counts[i]; }
};

/// Fits a 1-D histogram. Throws std::domain_error listing the offending
/// sample indices if any point is outside [0,1].
HistDensity hist_fit(std::span<const double> samples, std::size_t K);

/// Fits the 2-D joint histogram of (x, x_next) pairs on the K x K grid.
HistDensity hist_fit_2d(std::span<const SamplePair> samples, std::size_t K);

/// Worst-case histogram bias, c1 / K, for a density whose derivative is
/// bounded by c1 on the evaluation region.
double hist_bias_bound(std::size_t K, double c1);

/// Mean-square-error upper bound c1^2/K^2 + p_hat*K/N + p_hat^2/N where
/// p_hat bounds the density on the evaluation region.
double hist_mse_upper_bound(std::size_t K, std::size_t N, double c1, double p_hat);

/// Two readings of the optimal cell count. `by_formula` is the classical
/// (N c1^2 / p)^(1/3); `by_argmin` minimizes hist_mse_upper_bound over
/// integer K and equals the formula scaled by 2^(1/3). They are both
/// reported because the literature prints one while minimizing the other.
struct OptimalBinCount {
  std::size_t by_formula;
  std::size_t by_argmin;
};

OptimalBinCount hist_optimal_bin_count(std::size_t N, double c1, double p_tilde);

}  // namespace transferop
