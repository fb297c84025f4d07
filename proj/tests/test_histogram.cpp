#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "transferop/analysis.hpp"
#include "transferop/histogram.hpp"

using namespace transferop;

TEST_CASE("bin_index conventions") {
  CHECK(bin_index(0.0, 10) == 1);
  CHECK(bin_index(1.0, 10) == 10);  // last cell is closed
  CHECK(bin_index(0.25, 4) == 2);   // half-open: 0.25 belongs to [0.25, 0.5)
  CHECK(bin_index(0.9999999, 10) == 10);
  CHECK_THROWS_AS(bin_index(-0.01, 10), std::domain_error);
  CHECK_THROWS_AS(bin_index(1.01, 10), std::domain_error);
  CHECK_THROWS_AS(bin_index(0.5, 0), std::invalid_argument);
}

TEST_CASE("1-D fit and evaluation") {
  const std::vector<double> xs{0.1, 0.3, 0.6, 0.9};
  const HistDensity h = hist_fit(xs, 2);
  CHECK(h.counts[0] == 2.0);
  CHECK(h.counts[1] == 2.0);
  CHECK(h.value(0.2) == 1.0);
  CHECK(h.value(0.7) == 1.0);

  const HistDensity single = hist_fit(std::vector<double>{0.42}, 1);
  CHECK(single.value(0.0) == 1.0);
  CHECK(single.value(0.99) == 1.0);

  const HistDensity sparse = hist_fit(std::vector<double>{0.05}, 10);
  CHECK(sparse.value(0.5) == 0.0);  // empty cell

  CHECK_THROWS_WITH_AS(static_cast<void>(hist_fit(std::vector<double>{0.5, 1.2, -0.3}, 4)),
                       doctest::Contains("indices: 1, 2"), std::domain_error);
}

TEST_CASE("mass conservation") {
  RandomStream rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t K = 1 + static_cast<std::size_t>(rng.uniform01() * 40);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 500);
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.uniform01();
    const HistDensity h = hist_fit(xs, K);
    double mass = 0.0;
    for (std::size_t i = 0; i < K; ++i)
      mass += h.value((static_cast<double>(i) + 0.5) / static_cast<double>(K)) /
              static_cast<double>(K);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("2-D fit: product cells, mass conservation") {
  RandomStream rng(23);
  std::vector<SamplePair> pairs(400);
  for (auto& p : pairs) p = {rng.uniform01(), rng.uniform01()};
  const std::size_t K = 7;
  const HistDensity h = hist_fit_2d(pairs, K);
  CHECK(h.dim == 2);

  double total_counts = 0.0;
  for (double c : h.counts) total_counts += c;
  CHECK(total_counts == static_cast<double>(pairs.size()));

  double mass = 0.0;
  const double kd = static_cast<double>(K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j)
      mass += h.value((i + 0.5) / kd, (j + 0.5) / kd) / (kd * kd);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("refinement consistency: merging a 2K histogram reproduces K cells") {
  RandomStream rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t K = 1 + static_cast<std::size_t>(rng.uniform01() * 30);
    std::vector<double> xs(600);
    for (double& x : xs) x = rng.uniform01();
    const HistDensity coarse = hist_fit(xs, K);
    const HistDensity fine = hist_fit(xs, 2 * K);
    for (std::size_t i = 0; i < K; ++i)
      CHECK(coarse.counts[i] == fine.counts[2 * i] + fine.counts[2 * i + 1]);
  }
}

TEST_CASE("bias bound") {
  CHECK(hist_bias_bound(100, 0.0) == 0.0);
  CHECK(hist_bias_bound(100, 3.0) == 2.0 * hist_bias_bound(200, 3.0));

  const UbConstants c = UbConstants::at(ReferenceDensity::logistic_arcsine(), 0.99);
  CHECK(hist_bias_bound(2503, c.slope) == doctest::Approx(0.06326).epsilon(1e-3));
  CHECK_THROWS_AS(hist_bias_bound(10, -1.0), std::invalid_argument);
}

TEST_CASE("MSE upper bound shape") {
  const UbConstants c = UbConstants::at(ReferenceDensity::logistic_arcsine(), 0.99);

  // bias term vanishes as K grows
  CHECK(hist_mse_upper_bound(1u << 20, 1000000, c.slope, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-6));
  // minimality at the argmin
  const OptimalBinCount opt = hist_optimal_bin_count(1000000, c.slope, c.density);
  CHECK(hist_mse_upper_bound(1, 1000000, c.slope, c.density) >=
        hist_mse_upper_bound(opt.by_argmin, 1000000, c.slope, c.density));
}

TEST_CASE("optimal cell count reproduces the reference optimum") {
  const UbConstants c = UbConstants::at(ReferenceDensity::logistic_arcsine(), 0.99);
  const OptimalBinCount opt = hist_optimal_bin_count(1000000, c.slope, c.density);

  CHECK(opt.by_argmin == 2503);
  CHECK(opt.by_formula == 1986);

  // independent oracle: exhaustive integer scan
  std::size_t best = 1;
  double best_ub = hist_mse_upper_bound(1, 1000000, c.slope, c.density);
  for (std::size_t k = 2; k <= 20000; ++k) {
    const double ub = hist_mse_upper_bound(k, 1000000, c.slope, c.density);
    if (ub < best_ub) {
      best_ub = ub;
      best = k;
    }
  }
  CHECK(opt.by_argmin == best);
}

TEST_CASE("optimal cell count properties") {
  const UbConstants c = UbConstants::at(ReferenceDensity::logistic_arcsine(), 0.99);

  SUBCASE("cube-root scaling in N") {
    const double k1 =
        static_cast<double>(hist_optimal_bin_count(1000000, c.slope, c.density).by_argmin);
    const double k8 =
        static_cast<double>(hist_optimal_bin_count(8000000, c.slope, c.density).by_argmin);
    CHECK(k8 / k1 == doctest::Approx(2.0).epsilon(2e-3));
  }

  SUBCASE("no bias penalty collapses to a single cell") {
    CHECK(hist_optimal_bin_count(1000000, 0.0, c.density).by_argmin == 1);
  }

  SUBCASE("argmin matches an exhaustive scan for random constants") {
    RandomStream rng(5);
    for (int rep = 0; rep < 25; ++rep) {
      const double c1 = 0.5 + 300.0 * rng.uniform01();
      const double p = 0.1 + 5.0 * rng.uniform01();
      const auto n = static_cast<std::size_t>(1000 + rng.uniform01() * 2000000);
      const std::size_t got = hist_optimal_bin_count(n, c1, p).by_argmin;
      std::size_t best = 1;
      double best_ub = hist_mse_upper_bound(1, n, c1, p);
      for (std::size_t k = 2; k <= 30000; ++k) {
        const double ub = hist_mse_upper_bound(k, n, c1, p);
        if (ub < best_ub) {
          best_ub = ub;
          best = k;
        }
      }
      CHECK(got == best);
    }
  }

  SUBCASE("formula and argmin differ by the cube root of two") {
    const OptimalBinCount opt = hist_optimal_bin_count(1000000, c.slope, c.density);
    const double ratio =
        static_cast<double>(opt.by_argmin) / static_cast<double>(opt.by_formula);
    CHECK(ratio == doctest::Approx(std::cbrt(2.0)).epsilon(1e-3));
  }
}
