#include "transferop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "transferop/histogram.hpp"

namespace transferop {

std::string matrix_method_name(MatrixMethod m) {
  switch (m) {
    case MatrixMethod::UlamCounts: return "ulam_counts";
    case MatrixMethod::UlamExact: return "ulam_exact";
    case MatrixMethod::KdeConditional: return "kde_conditional";
    case MatrixMethod::NoisyKernelExact: return "noisy_kernel_exact";
  }
  return "unknown";
}

std::size_t StochasticMatrix::flagged_rows() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
}

namespace {

StochasticMatrix make_matrix(std::size_t K, MatrixMethod method) {
  if (K == 0) throw std::invalid_argument("matrix size must be positive");
  StochasticMatrix m;
  m.K = K;
  m.method = method;
  m.entries.assign(K * K, 0.0);
  m.flags.assign(K, 0);
  return m;
}

void fill_uniform_row(StochasticMatrix& m, std::size_t i) {
  const double u = 1.0 / static_cast<double>(m.K);
  for (std::size_t j = 0; j < m.K; ++j) m.at(i, j) = u;
  m.flags[i] = 1;
}

}  // namespace

StochasticMatrix ulam_matrix_from_pairs(const SampleSet& samples, std::size_t K) {
  if (samples.pairs.empty()) throw std::invalid_argument("empty sample set");
  StochasticMatrix m = make_matrix(K, MatrixMethod::UlamCounts);

  std::vector<double> row_totals(K, 0.0);
  for (const auto& p : samples.pairs) {
    const std::size_t i = bin_index(p.x, K) - 1;
    const std::size_t j = bin_index(p.x_next, K) - 1;
    m.at(i, j) += 1.0;
    row_totals[i] += 1.0;
  }
  for (std::size_t i = 0; i < K; ++i) {
    if (row_totals[i] == 0.0) {
      fill_uniform_row(m, i);
      continue;
    }
    for (std::size_t j = 0; j < K; ++j) m.at(i, j) /= row_totals[i];
  }
  return m;
}

StochasticMatrix ulam_matrix_exact(const MapSpec& spec, std::size_t K,
                                   std::size_t quad_points_per_cell,
                                   unsigned threads) {
  if (spec.noise) throw std::invalid_argument("exact Ulam matrix requires a noiseless map");
  if (quad_points_per_cell == 0)
    throw std::invalid_argument("need at least one quadrature point per cell");
  StochasticMatrix m = make_matrix(K, MatrixMethod::UlamExact);

  const double kd = static_cast<double>(K);
  const double qd = static_cast<double>(quad_points_per_cell);
  parallel_for(
      K,
      [&](std::size_t i) {
        for (std::size_t q = 0; q < quad_points_per_cell; ++q) {
          const double y = (static_cast<double>(i) + (static_cast<double>(q) + 0.5) / qd) / kd;
          const double fy = apply_map(spec, y);
          if (fy < 0.0 || fy > 1.0) continue;  // escaping mass is dropped
          m.at(i, bin_index(fy, K) - 1) += 1.0;
        }
        for (std::size_t j = 0; j < K; ++j) m.at(i, j) /= qd;
      },
      threads);
  return m;
}

StochasticMatrix kde_transfer_matrix(const SampleSet& samples, std::size_t K,
                                     const KdeTransferOptions& options) {
  if (samples.pairs.empty()) throw std::invalid_argument("empty sample set");

  const KdeDensity marginal(samples.inputs(), options.delta_marginal, options.kernel);
  const KdeDensity joint(samples.pairs, options.delta_joint_x, options.delta_joint_y,
                         options.kernel);

  StochasticMatrix m = make_matrix(K, MatrixMethod::KdeConditional);
  const double kd = static_cast<double>(K);

  const std::span<const double> sx = joint.xs();
  const std::span<const double> sy = joint.ys();
  const double wx = joint.window(0);
  const double wy = joint.window(1);
  const std::size_t n_total = sx.size();

  // Row i accumulates sum_n kx(i,n) * ky(n,j), which up to the row scale
  // (marginal, bandwidth and cell-width factors, cancelled by the
  // renormalization below) is joint.value(cx_i, c_j) * (1/K). The y-kernel
  // factors are independent of the row, so they are cached per sample block
  // and reused across rows.
  constexpr std::size_t kBlock = 16384;
  struct YProfile {
    std::uint32_t j_lo;
    std::uint32_t count;
    std::uint32_t offset;
  };
  std::vector<YProfile> profile(std::min(kBlock, n_total));
  std::vector<double> ky_arena;

  for (std::size_t block_lo = 0; block_lo < n_total; block_lo += kBlock) {
    const std::size_t block_hi = std::min(block_lo + kBlock, n_total);
    ky_arena.clear();
    for (std::size_t n = block_lo; n < block_hi; ++n) {
      const double y = sy[n];
      const double j_lo_f = std::ceil((y - wy) * kd - 0.5);
      const double j_hi_f = std::floor((y + wy) * kd - 0.5);
      YProfile& p = profile[n - block_lo];
      p.offset = static_cast<std::uint32_t>(ky_arena.size());
      if (j_lo_f > static_cast<double>(K - 1) || j_hi_f < 0.0) {
        p.j_lo = 0;
        p.count = 0;
        continue;
      }
      const auto j_lo = static_cast<std::size_t>(std::max(0.0, j_lo_f));
      const auto j_hi =
          static_cast<std::size_t>(std::min(static_cast<double>(K - 1), j_hi_f));
      p.j_lo = static_cast<std::uint32_t>(j_lo);
      p.count = static_cast<std::uint32_t>(j_hi - j_lo + 1);
      for (std::size_t j = j_lo; j <= j_hi; ++j)
        ky_arena.push_back(
            kernel_eval(options.kernel, (y - m.cell_center(j)) / options.delta_joint_y));
    }

    parallel_for(
        K,
        [&](std::size_t i) {
          const double cx = m.cell_center(i);
          const auto lo = static_cast<std::size_t>(
              std::lower_bound(sx.begin() + block_lo, sx.begin() + block_hi, cx - wx) -
              sx.begin());
          const auto hi = static_cast<std::size_t>(
              std::upper_bound(sx.begin() + block_lo, sx.begin() + block_hi, cx + wx) -
              sx.begin());
          double* row = m.entries.data() + i * K;
          for (std::size_t n = lo; n < hi; ++n) {
            const double kx =
                kernel_eval(options.kernel, (sx[n] - cx) / options.delta_joint_x);
            if (kx == 0.0) continue;
            const YProfile& p = profile[n - block_lo];
            const double* ky = ky_arena.data() + p.offset;
            double* out = row + p.j_lo;
            for (std::uint32_t c = 0; c < p.count; ++c) out[c] += kx * ky[c];
          }
        },
        options.threads);
  }

  parallel_for(
      K,
      [&](std::size_t i) {
        if (marginal.value(m.cell_center(i)) < options.marginal_floor) {
          fill_uniform_row(m, i);
          return;
        }
        double total = 0.0;
        for (std::size_t j = 0; j < K; ++j) total += m.at(i, j);
        if (total <= 0.0) {
          fill_uniform_row(m, i);
          return;
        }
        for (std::size_t j = 0; j < K; ++j) m.at(i, j) /= total;
      },
      options.threads);
  return m;
}

StochasticMatrix noisy_kernel_matrix_exact(const MapSpec& spec, std::size_t K,
                                           unsigned threads) {
  if (!spec.noise) throw std::invalid_argument("noisy kernel matrix requires noise");
  const NoiseSpec& ns = *spec.noise;
  StochasticMatrix m = make_matrix(K, MatrixMethod::NoisyKernelExact);

  const double kd = static_cast<double>(K);
  parallel_for(
      K,
      [&](std::size_t i) {
        const double mean = apply_map(spec, m.cell_center(i));
        double prev = 0.0;  // CDF at the left edge of the domain
        for (std::size_t j = 0; j < K; ++j) {
          const double right = truncated_normal_cdf((static_cast<double>(j) + 1.0) / kd,
                                                    mean, ns);
          m.at(i, j) = right - prev;
          prev = right;
        }
      },
      threads);
  return m;
}

double apply_fp_exact(const MapSpec& spec, const std::function<double(double)>& rho,
                      double x) {
  if (spec.noise) throw std::invalid_argument("exact application requires a noiseless map");
  if (spec.kind != MapKind::Logistic)
    throw std::invalid_argument("preimages are only computed for logistic maps");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("evaluation point must lie in [0,1]");

  // Preimages of the logistic map r y (1-y) = x: y = (1 +- s)/2 with
  // s = sqrt(1 - 4x/r); both carry derivative magnitude r*s.
  const double r = spec.multiplier();
  const double disc = 1.0 - 4.0 * x / r;
  if (disc < 0.0) return 0.0;  // no preimages above the critical value
  const double s = std::sqrt(disc);
  const double dmag = r * s;
  if (dmag < 1e-300)
    throw NumericError("vanishing derivative at the critical value x = r/4");
  const double y_minus = 0.5 * (1.0 - s);
  const double y_plus = 0.5 * (1.0 + s);
  return (rho(y_minus) + rho(y_plus)) / dmag;
}

std::vector<double> push_density(const StochasticMatrix& P, std::span<const double> v) {
  if (v.size() != P.K) throw std::invalid_argument("vector length does not match matrix");
  std::vector<double> out(P.K, 0.0);
  for (std::size_t i = 0; i < P.K; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto row = P.row(i);
    for (std::size_t j = 0; j < P.K; ++j) out[j] += vi * row[j];
  }
  return out;
}

}  // namespace transferop
