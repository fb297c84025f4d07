#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "support/stats.hpp"
#include "transferop/analysis.hpp"
#include "transferop/spectral.hpp"

using namespace transferop;

namespace {

StochasticMatrix from_rows(std::vector<std::vector<double>> rows) {
  StochasticMatrix m;
  m.K = rows.size();
  m.flags.assign(m.K, 0);
  for (const auto& r : rows) m.entries.insert(m.entries.end(), r.begin(), r.end());
  return m;
}

}  // namespace

TEST_CASE("identity matrix: every vector is stationary, flagged non-unique") {
  const StochasticMatrix id = from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const StationaryResult r = leading_left_eigenvector(id);
  CHECK(r.converged);
  CHECK(r.residual == 0.0);
  CHECK_FALSE(r.unique);
  for (double v : r.vector) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("rank-one matrix converges in a single sweep") {
  const double hi = std::sqrt(2.0) / 2.0;
  const StochasticMatrix m = from_rows({{1.0 - hi, hi}, {1.0 - hi, hi}});
  const StationaryResult r = leading_left_eigenvector(m);
  CHECK(r.converged);
  CHECK(r.unique);
  // the fixed point is reached after one product; the stopping rule spends
  // one more sweep confirming that the iterate stopped moving
  CHECK(r.iterations <= 2);
  CHECK(r.vector[0] == doctest::Approx(1.0 - hi).epsilon(1e-12));
  CHECK(r.vector[1] == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("fixed-point residual is below tolerance on success") {
  RandomStream rng(44);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t K = 2 + static_cast<std::size_t>(rng.uniform01() * 20);
    std::vector<std::vector<double>> rows(K, std::vector<double>(K));
    for (auto& row : rows) {
      double sum = 0.0;
      for (double& x : row) {
        x = 0.05 + rng.uniform01();  // bounded away from zero: irreducible
        sum += x;
      }
      for (double& x : row) x /= sum;
    }
    const StationaryResult r = leading_left_eigenvector(from_rows(rows), 1e-12);
    CHECK(r.converged);
    CHECK(r.unique);
    CHECK(r.residual <= 1e-12);
    CHECK(std::accumulate(r.vector.begin(), r.vector.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("permutation equivariance of the stationary vector") {
  RandomStream rng(45);
  const std::size_t K = 9;
  std::vector<std::vector<double>> rows(K, std::vector<double>(K));
  for (auto& row : rows) {
    double sum = 0.0;
    for (double& x : row) {
      x = 0.02 + rng.uniform01();
      sum += x;
    }
    for (double& x : row) x /= sum;
  }
  const StationaryResult base = leading_left_eigenvector(from_rows(rows));

  // relabel cells by the permutation pi(i) = (i + 3) mod K
  const auto pi = [K](std::size_t i) { return (i + 3) % K; };
  std::vector<std::vector<double>> permuted(K, std::vector<double>(K));
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) permuted[pi(i)][pi(j)] = rows[i][j];
  const StationaryResult moved = leading_left_eigenvector(from_rows(permuted));

  for (std::size_t i = 0; i < K; ++i)
    CHECK(moved.vector[pi(i)] == doctest::Approx(base.vector[i]).epsilon(1e-9));
}

TEST_CASE("non-convergence is reported, not hidden") {
  // nearly-reducible chain mixes too slowly for a tiny iteration cap
  const StochasticMatrix slow = from_rows({{0.999, 0.001}, {0.0005, 0.9995}});
  const StationaryResult r = leading_left_eigenvector(slow, 1e-14, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.residual > 0.0);
  CHECK(r.vector.size() == 2);
}

TEST_CASE("stationary vector to piecewise-constant density") {
  const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
  for (double v : stationary_to_density(uniform, 4)) CHECK(v == 1.0);

  const double hi = std::sqrt(2.0) / 2.0;
  const std::vector<double> two{1.0 - hi, hi};
  const std::vector<double> d = stationary_to_density(two, 2);
  CHECK(d[0] == doctest::Approx(0.58579).epsilon(1e-4));
  CHECK(d[1] == doctest::Approx(1.41421).epsilon(1e-4));

  // integrates to one exactly: sum d_i / K == sum v_i
  double mass = 0.0;
  for (double v : d) mass += v / 2.0;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(stationary_to_density(two, 3), std::invalid_argument);
}

TEST_CASE("stationary density of counted logistic matrices approaches arcsine") {
  const std::size_t K = 100;
  const ReferenceDensity arcsine = ReferenceDensity::logistic_arcsine();
  std::vector<double> masses(K);
  for (std::size_t i = 0; i < K; ++i)
    masses[i] = arcsine.cdf((i + 1.0) / K) - arcsine.cdf(static_cast<double>(i) / K);

  const auto l1_to_arcsine = [&](std::size_t n, std::uint64_t seed) {
    const SampleSet s = logistic_orbit_sample(n, seed);
    const StationaryResult r = leading_left_eigenvector(ulam_matrix_from_pairs(s, K));
    REQUIRE(r.converged);
    double l1 = 0.0;
    for (std::size_t i = 0; i < K; ++i) l1 += std::abs(r.vector[i] - masses[i]);
    return l1;
  };

  std::vector<std::vector<double>> l1s(3);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::size_t idx = 0;
    for (std::size_t n : {10000u, 100000u, 1000000u}) l1s[idx++].push_back(l1_to_arcsine(n, seed));
  }
  CHECK(testsupport::median(l1s[0]) > testsupport::median(l1s[1]));
  CHECK(testsupport::median(l1s[1]) > testsupport::median(l1s[2]));
}
