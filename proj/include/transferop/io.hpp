#pragma once

#include <filesystem>
#include <string>

#include "transferop/analysis.hpp"
#include "transferop/dynamics.hpp"
#include "transferop/histogram.hpp"
#include "transferop/kde.hpp"
#include "transferop/operators.hpp"
#include "transferop/spectral.hpp"

namespace transferop::io {

/// 17-significant-digit decimal; round-trips the double exactly.
std::string format_double(double v);

// SampleSet: CSV with header `x,x_next` plus a JSON sidecar carrying
// {mode, seed, burn_in, map, params, sigma}.
void write_sample_set(const SampleSet& s, const std::filesystem::path& csv_path,
                      const std::filesystem::path& json_path);
SampleSet read_sample_set(const std::filesystem::path& csv_path,
                          const std::filesystem::path& json_path);

// HistDensity: JSON {dim, K, N, counts} and a (cell center, density) CSV
// for plotting (1-D only for the CSV).
void write_hist_density(const HistDensity& h, const std::filesystem::path& json_path);
void write_hist_density_csv(const HistDensity& h, const std::filesystem::path& csv_path);

// KdeDensity metadata: JSON {kind, delta, N, dim, samples_file}; samples are
// not duplicated, the sidecar references the sample CSV they came from.
void write_kde_meta(const KdeDensity& k, const std::string& samples_file,
                    const std::filesystem::path& json_path);

// Generic (grid, density) evaluation dump.
void write_density_csv(std::span<const double> grid, std::span<const double> values,
                       const std::filesystem::path& csv_path);

// StochasticMatrix: dense row-major CSV headed by K and method, plus JSON
// metadata {K, method, flags, source, bandwidths}.
void write_matrix_csv(const StochasticMatrix& m, const std::filesystem::path& csv_path);
StochasticMatrix read_matrix_csv(const std::filesystem::path& csv_path);
void write_matrix_meta(const StochasticMatrix& m, const std::string& source,
                       const std::string& bandwidths,
                       const std::filesystem::path& json_path);

// StationaryResult: (cell center, mass, density) CSV + JSON
// {residual, iterations, flags}.
void write_stationary(const StationaryResult& r, std::size_t K,
                      const std::filesystem::path& csv_path,
                      const std::filesystem::path& json_path);

// ErrorReport: long-format CSV (method, N, parameter, seed, mse_mean, ub)
// plus a JSON summary with the UB optimum.
void write_error_report(const ErrorReport& r, const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path);

}  // namespace transferop::io
