#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "transferop/operators.hpp"

namespace transferop {

/// Stationary distribution of a row-stochastic matrix found by left power
/// iteration.
struct StationaryResult {
  std::vector<double> vector;  // on the simplex
  double residual = 0.0;       // ||v^T P - v^T||_1 at termination
  std::size_t iterations = 0;
  bool converged = false;
  /// False when a second start converges to a different fixed point
  /// (reducible chain, e.g. the identity matrix); the returned vector is
  /// then only one of several stationary distributions.
  bool unique = true;
};

/// Power iteration from the uniform start vector; stops when the L1 change
/// drops below tol or after max_iter sweeps. Uniqueness is probed with a
/// second, non-uniform start.
StationaryResult leading_left_eigenvector(const StochasticMatrix& P,
                                          double tol = 1e-12,
                                          std::size_t max_iter = 100000);

/// Piecewise-constant density with value v_i * K on cell i; integrates to 1.
std::vector<double> stationary_to_density(std::span<const double> v, std::size_t K);

}  // namespace transferop
