#include "transferop/histogram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace transferop {

std::size_t bin_index(double x, std::size_t K) {
  if (K == 0) throw std::invalid_argument("bin count must be positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("point outside [0,1]: " + std::to_string(x));
  // half-open cells; the last cell absorbs x == 1
  auto i = static_cast<std::size_t>(x * static_cast<double>(K));
  return std::min(i, K - 1) + 1;
}

namespace {

std::string offending_list(const std::vector<std::size_t>& bad) {
  std::string msg;
  for (std::size_t k = 0; k < bad.size() && k < 8; ++k)
    msg += (k ? ", " : "") + std::to_string(bad[k]);
  if (bad.size() > 8) msg += ", ...";
  return msg;
}

}  // namespace

double HistDensity::value(double x) const {
  if (dim != 1) throw std::logic_error("1-D evaluation of a 2-D histogram");
  const std::size_t i = bin_index(x, K) - 1;
  return counts[i] * static_cast<double>(K) / static_cast<double>(N);
}

double HistDensity::value(double x, double y) const {
  if (dim != 2) throw std::logic_error("2-D evaluation of a 1-D histogram");
  const std::size_t i = bin_index(x, K) - 1;
  const std::size_t j = bin_index(y, K) - 1;
  const double kd = static_cast<double>(K);
  return counts[i * K + j] * kd * kd / static_cast<double>(N);
}

HistDensity hist_fit(std::span<const double> samples, std::size_t K) {
  if (samples.empty()) throw std::invalid_argument("histogram fit needs samples");
  if (K == 0) throw std::invalid_argument("bin count must be positive");

  HistDensity h;
  h.dim = 1;
  h.K = K;
  h.N = samples.size();
  h.counts.assign(K, 0.0);

  std::vector<std::size_t> bad;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double x = samples[n];
    if (!(x >= 0.0 && x <= 1.0)) {
      bad.push_back(n);
      continue;
    }
    h.counts[bin_index(x, K) - 1] += 1.0;
  }
  if (!bad.empty())
    throw std::domain_error("samples outside [0,1] at indices: " + offending_list(bad));
  return h;
}

HistDensity hist_fit_2d(std::span<const SamplePair> samples, std::size_t K) {
  if (samples.empty()) throw std::invalid_argument("histogram fit needs samples");
  if (K == 0) throw std::invalid_argument("bin count must be positive");

  HistDensity h;
  h.dim = 2;
  h.K = K;
  h.N = samples.size();
  h.counts.assign(K * K, 0.0);

  std::vector<std::size_t> bad;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const auto& p = samples[n];
    if (!(p.x >= 0.0 && p.x <= 1.0) || !(p.x_next >= 0.0 && p.x_next <= 1.0)) {
      bad.push_back(n);
      continue;
    }
    const std::size_t i = bin_index(p.x, K) - 1;
    const std::size_t j = bin_index(p.x_next, K) - 1;
    h.counts[i * K + j] += 1.0;
  }
  if (!bad.empty())
    throw std::domain_error("samples outside the unit square at indices: " +
                            offending_list(bad));
  return h;
}

double hist_bias_bound(std::size_t K, double c1) {
  if (c1 < 0.0) throw std::invalid_argument("derivative bound must be nonnegative");
  return c1 / static_cast<double>(K);
}

double hist_mse_upper_bound(std::size_t K, std::size_t N, double c1, double p_hat) {
  if (K == 0 || N == 0) throw std::invalid_argument("K and N must be positive");
  if (c1 < 0.0 || p_hat < 0.0)
    throw std::invalid_argument("upper-bound constants must be nonnegative");
  const double kd = static_cast<double>(K);
  const double nd = static_cast<double>(N);
  return c1 * c1 / (kd * kd) + p_hat * kd / nd + p_hat * p_hat / nd;
}

OptimalBinCount hist_optimal_bin_count(std::size_t N, double c1, double p_tilde) {
  if (!(p_tilde > 0.0)) throw std::invalid_argument("density constant must be positive");
  const double nd = static_cast<double>(N);

  const double k_formula = std::cbrt(nd * c1 * c1 / p_tilde);

  // The continuous minimizer of the UB is 2^(1/3) times k_formula; the
  // integer argmin lies next to it, so a scan of a small neighborhood
  // (always including K = 1 for the zero-bias case) is exhaustive.
  const double k_star = std::cbrt(2.0 * nd * c1 * c1 / p_tilde);
  std::size_t best = 1;
  double best_ub = hist_mse_upper_bound(1, N, c1, p_tilde);
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::floor(k_star) - 2.0));
  const auto hi = static_cast<std::size_t>(std::ceil(k_star) + 2.0);
  for (std::size_t k = lo; k <= hi; ++k) {
    const double ub = hist_mse_upper_bound(k, N, c1, p_tilde);
    if (ub < best_ub) {
      best_ub = ub;
      best = k;
    }
  }
  return {static_cast<std::size_t>(std::llround(k_formula)), best};
}

}  // namespace transferop
