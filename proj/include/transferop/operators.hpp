#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "transferop/dynamics.hpp"
#include "transferop/kde.hpp"

namespace transferop {

enum class MatrixMethod { UlamCounts, UlamExact, KdeConditional, NoisyKernelExact };

std::string matrix_method_name(MatrixMethod m);

/// Row-stochastic K x K estimate of the transfer operator on the uniform
/// partition of [0,1]. Entry (i, j) estimates P(x' in cell j | x in cell i).
/// Rows that received no data are filled with the uniform distribution and
/// flagged, which keeps the matrix stochastic for spectral work while
/// preserving honesty in reports.
struct StochasticMatrix {
  std::size_t K = 0;
  MatrixMethod method = MatrixMethod::UlamCounts;
  std::vector<double> entries;       // K*K row-major
  std::vector<unsigned char> flags;  // per-row: 1 = no data / floor hit

  double operator()(std::size_t i, std::size_t j) const { return entries[i * K + j]; }
  double& at(std::size_t i, std::size_t j) { return entries[i * K + j]; }
  std::span<const double> row(std::size_t i) const {
    return {entries.data() + i * K, K};
  }
  double cell_center(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(K);
  }
  std::size_t flagged_rows() const;
};

/// Transition fractions counted from (x_n, x_{n+1}) pairs:
/// entry (i,j) = #{x_n in cell i and x_{n+1} in cell j} / #{x_n in cell i}.
StochasticMatrix ulam_matrix_from_pairs(const SampleSet& samples, std::size_t K);

/// Sampling-free reference for noiseless maps: the Lebesgue fraction of
/// cell i mapped into cell j, computed by composite midpoint quadrature
/// with `quad_points_per_cell` subsamples. Quadrature error per row is at
/// most (branch crossings)/quad_points_per_cell.
StochasticMatrix ulam_matrix_exact(const MapSpec& spec, std::size_t K,
                                   std::size_t quad_points_per_cell = 1024,
                                   unsigned threads = 1);

struct KdeTransferOptions {
  double delta_marginal;
  double delta_joint_x;
  double delta_joint_y;
  KernelSpec kernel = KernelSpec::make(KernelKind::Gaussian);
  double marginal_floor = 1e-12;
  unsigned threads = 1;
};

/// Conditional-density route: fits a 2-D KDE for the joint p(x, x') and a
/// 1-D KDE for the marginal p(x), evaluates the ratio at cell-center pairs,
/// scales by the cell width and renormalizes each row. Rows whose marginal
/// falls below `marginal_floor` (or whose joint slice vanishes) are
/// uniform-filled and flagged.
StochasticMatrix kde_transfer_matrix(const SampleSet& samples, std::size_t K,
                                     const KdeTransferOptions& options);

/// Exact operator matrix for a map with truncated-normal noise: row i is the
/// truncated normal centered at f(cell_center_i) integrated over the cells
/// (CDF differences). Requires spec.noise.
StochasticMatrix noisy_kernel_matrix_exact(const MapSpec& spec, std::size_t K,
                                           unsigned threads = 1);

/// Exact transfer-operator application for the noiseless logistic family:
/// sum of rho(y)/|f'(y)| over the preimages y of x. Points with no preimage
/// contribute zero; a vanishing derivative at a preimage (the critical
/// value) raises NumericError.
double apply_fp_exact(const MapSpec& spec, const std::function<double(double)>& rho,
                      double x);

/// Left action v^T P of a probability row vector; preserves the simplex.
std::vector<double> push_density(const StochasticMatrix& P, std::span<const double> v);

}  // namespace transferop
