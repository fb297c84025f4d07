#include "transferop/spectral.hpp"

#include <cmath>
#include <numeric>

namespace transferop {

namespace {

std::vector<double> left_multiply(const StochasticMatrix& P, const std::vector<double>& v) {
  std::vector<double> out(P.K, 0.0);
  for (std::size_t i = 0; i < P.K; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto row = P.row(i);
    for (std::size_t j = 0; j < P.K; ++j) out[j] += vi * row[j];
  }
  return out;
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

void normalize(std::vector<double>& v) {
  double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
}

struct IterationOutcome {
  std::vector<double> vector;
  double residual;
  std::size_t iterations;
  bool converged;
};

IterationOutcome iterate_from(const StochasticMatrix& P, std::vector<double> v,
                              double tol, std::size_t max_iter) {
  normalize(v);
  double change = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::vector<double> w = left_multiply(P, v);
    normalize(w);
    change = l1_diff(w, v);
    v = std::move(w);
    if (change < tol) return {std::move(v), change, it, true};
  }
  return {std::move(v), change, max_iter, false};
}

}  // namespace

StationaryResult leading_left_eigenvector(const StochasticMatrix& P, double tol,
                                          std::size_t max_iter) {
  if (P.K == 0) throw std::invalid_argument("empty matrix");

  std::vector<double> uniform(P.K, 1.0 / static_cast<double>(P.K));
  IterationOutcome main = iterate_from(P, uniform, tol, max_iter);

  StationaryResult result;
  result.vector = main.vector;
  result.residual = l1_diff(left_multiply(P, main.vector), main.vector);
  result.iterations = main.iterations;
  result.converged = main.converged;

  // Uniqueness probe: a reducible chain (identity block structure) has many
  // stationary vectors, so a second, skewed start will settle elsewhere.
  if (main.converged) {
    std::vector<double> skewed(P.K);
    for (std::size_t i = 0; i < P.K; ++i) skewed[i] = static_cast<double>(i + 1);
    IterationOutcome probe = iterate_from(P, std::move(skewed), tol, max_iter);
    if (probe.converged && l1_diff(probe.vector, main.vector) > 1e-6)
      result.unique = false;
  }
  return result;
}

std::vector<double> stationary_to_density(std::span<const double> v, std::size_t K) {
  if (v.size() != K) throw std::invalid_argument("vector length does not match K");
  std::vector<double> density(K);
  for (std::size_t i = 0; i < K; ++i) density[i] = v[i] * static_cast<double>(K);
  return density;
}

}  // namespace transferop
