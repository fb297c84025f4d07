#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "transferop/analysis.hpp"
#include "transferop/io.hpp"
#include "transferop/spectral.hpp"

namespace py = pybind11;
using namespace transferop;

namespace {

std::vector<SamplePair> to_pairs(const std::vector<std::pair<double, double>>& raw) {
  std::vector<SamplePair> out;
  out.reserve(raw.size());
  for (const auto& [x, y] : raw) out.push_back({x, y});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transfer-operator estimation for 1-D maps: sampling, histogram "
            "and kernel density estimation, Ulam/KDE operator matrices and "
            "stationary densities";

  // --- dynamics ---
  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init([](double sigma, double lower, double upper) {
             NoiseSpec ns{sigma, lower, upper};
             ns.validate();
             return ns;
           }),
           py::arg("sigma"), py::arg("lower") = 0.0, py::arg("upper") = 1.0)
      .def_readonly("sigma", &NoiseSpec::sigma)
      .def_readonly("lower", &NoiseSpec::lower)
      .def_readonly("upper", &NoiseSpec::upper);

  py::class_<MapSpec>(m, "MapSpec")
      .def_static("logistic", &MapSpec::logistic, py::arg("r") = 4.0)
      .def_static("logistic_noisy", &MapSpec::logistic_noisy, py::arg("r"),
                  py::arg("noise"))
      .def_property_readonly("name", &MapSpec::name)
      .def_readonly("params", &MapSpec::params);

  py::class_<SampleSet>(m, "SampleSet")
      .def_property_readonly("pairs",
                             [](const SampleSet& s) {
                               std::vector<std::pair<double, double>> out;
                               out.reserve(s.pairs.size());
                               for (const auto& p : s.pairs)
                                 out.emplace_back(p.x, p.x_next);
                               return out;
                             })
      .def_property_readonly("mode",
                             [](const SampleSet& s) {
                               return s.mode == SampleMode::Orbit ? "orbit"
                                                                  : "iid_uniform";
                             })
      .def_readonly("seed", &SampleSet::seed)
      .def_readonly("burn_in", &SampleSet::burn_in)
      .def("inputs", &SampleSet::inputs)
      .def("outputs", &SampleSet::outputs)
      .def("__len__", [](const SampleSet& s) { return s.pairs.size(); });

  m.def("apply_map", &apply_map, py::arg("spec"), py::arg("x"));
  m.def("truncated_normal_pdf", &truncated_normal_pdf, py::arg("x"), py::arg("mu"),
        py::arg("noise"));
  m.def("truncated_normal_cdf", &truncated_normal_cdf, py::arg("x"), py::arg("mu"),
        py::arg("noise"));
  m.def(
      "sample_truncated_normal",
      [](double mu, const NoiseSpec& ns, std::uint64_t seed, std::size_t count) {
        RandomStream rng(seed);
        std::vector<double> out(count);
        for (double& v : out) v = sample_truncated_normal(mu, ns, rng);
        return out;
      },
      py::arg("mu"), py::arg("noise"), py::arg("seed"), py::arg("count") = 1);
  m.def("generate_orbit", &generate_orbit, py::arg("spec"), py::arg("x0"), py::arg("n"),
        py::arg("burn_in") = kDefaultBurnIn, py::arg("seed") = 0);
  m.def("generate_ensemble", &generate_ensemble, py::arg("spec"), py::arg("n"),
        py::arg("seed") = 0);

  // --- histogram ---
  m.def("bin_index", &bin_index, py::arg("x"), py::arg("k"));

  py::class_<HistDensity>(m, "HistDensity")
      .def_readonly("dim", &HistDensity::dim)
      .def_readonly("K", &HistDensity::K)
      .def_readonly("N", &HistDensity::N)
      .def_readonly("counts", &HistDensity::counts)
      .def("value", py::overload_cast<double>(&HistDensity::value, py::const_),
           py::arg("x"))
      .def("value", py::overload_cast<double, double>(&HistDensity::value, py::const_),
           py::arg("x"), py::arg("y"));

  m.def(
      "hist_fit",
      [](const std::vector<double>& xs, std::size_t k) { return hist_fit(xs, k); },
      py::arg("samples"), py::arg("k"));
  m.def(
      "hist_fit_2d",
      [](const std::vector<std::pair<double, double>>& pairs, std::size_t k) {
        return hist_fit_2d(to_pairs(pairs), k);
      },
      py::arg("pairs"), py::arg("k"));
  m.def("hist_bias_bound", &hist_bias_bound, py::arg("k"), py::arg("c1"));
  m.def("hist_mse_upper_bound", &hist_mse_upper_bound, py::arg("k"), py::arg("n"),
        py::arg("c1"), py::arg("p_hat"));
  m.def(
      "hist_optimal_bin_count",
      [](std::size_t n, double c1, double p) {
        const OptimalBinCount o = hist_optimal_bin_count(n, c1, p);
        return std::make_pair(o.by_formula, o.by_argmin);
      },
      py::arg("n"), py::arg("c1"), py::arg("p_tilde"),
      "returns (by_formula, by_argmin)");

  // --- kde ---
  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static(
          "make",
          [](const std::string& name) {
            if (name == "gaussian") return KernelSpec::make(KernelKind::Gaussian);
            if (name == "epanechnikov")
              return KernelSpec::make(KernelKind::Epanechnikov);
            throw std::invalid_argument("unknown kernel: " + name);
          },
          py::arg("name"))
      .def_property_readonly("name", &KernelSpec::name)
      .def_readonly("second_moment", &KernelSpec::second_moment)
      .def_readonly("roughness", &KernelSpec::roughness);

  m.def("kernel_eval", &kernel_eval, py::arg("kernel"), py::arg("z"));

  py::class_<KdeDensity>(m, "KdeDensity")
      .def(py::init([](const std::vector<double>& xs, double delta,
                       const KernelSpec& kernel) {
             return KdeDensity(xs, delta, kernel);
           }),
           py::arg("samples"), py::arg("delta"),
           py::arg("kernel") = KernelSpec::make(KernelKind::Gaussian))
      .def(py::init([](const std::vector<std::pair<double, double>>& pairs, double dx,
                       double dy, const KernelSpec& kernel) {
             return KdeDensity(to_pairs(pairs), dx, dy, kernel);
           }),
           py::arg("pairs"), py::arg("delta_x"), py::arg("delta_y"),
           py::arg("kernel") = KernelSpec::make(KernelKind::Gaussian))
      .def_property_readonly("dim", &KdeDensity::dim)
      .def_property_readonly("bandwidth", &KdeDensity::bandwidth)
      .def("value", py::overload_cast<double>(&KdeDensity::value, py::const_),
           py::arg("x"))
      .def("value", py::overload_cast<double, double>(&KdeDensity::value, py::const_),
           py::arg("x"), py::arg("y"))
      .def("__len__", &KdeDensity::size);

  m.def("kde_bias_bound", &kde_bias_bound, py::arg("delta"), py::arg("p_second"),
        py::arg("c"));
  m.def("kde_mse_upper_bound", &kde_mse_upper_bound, py::arg("delta"), py::arg("n"),
        py::arg("p_at"), py::arg("p_second"), py::arg("kernel"));
  m.def(
      "kde_optimal_bandwidth",
      [](std::size_t n, double p_at, double p_second, const KernelSpec& kernel,
         int dim) {
        const OptimalBandwidth o = kde_optimal_bandwidth(n, p_at, p_second, kernel, dim);
        return std::make_pair(o.by_argmin, o.rate_exponent);
      },
      py::arg("n"), py::arg("p_at"), py::arg("p_second"),
      py::arg("kernel") = KernelSpec::make(KernelKind::Gaussian), py::arg("dim") = 1,
      "returns (by_argmin, rate_exponent)");

  // --- operators ---
  py::class_<StochasticMatrix>(m, "StochasticMatrix")
      .def_readonly("K", &StochasticMatrix::K)
      .def_property_readonly(
          "method", [](const StochasticMatrix& s) { return matrix_method_name(s.method); })
      .def_readonly("entries", &StochasticMatrix::entries)
      .def("row",
           [](const StochasticMatrix& s, std::size_t i) {
             const auto r = s.row(i);
             return std::vector<double>(r.begin(), r.end());
           })
      .def("__call__", &StochasticMatrix::operator(), py::arg("i"), py::arg("j"))
      .def_property_readonly("flagged_rows", &StochasticMatrix::flagged_rows);

  py::class_<KdeTransferOptions>(m, "KdeTransferOptions")
      .def(py::init([](double delta_marginal, double delta_joint_x, double delta_joint_y,
                       const KernelSpec& kernel, double marginal_floor,
                       unsigned threads) {
             return KdeTransferOptions{delta_marginal, delta_joint_x, delta_joint_y,
                                       kernel, marginal_floor, threads};
           }),
           py::arg("delta_marginal"), py::arg("delta_joint_x"), py::arg("delta_joint_y"),
           py::arg("kernel") = KernelSpec::make(KernelKind::Gaussian),
           py::arg("marginal_floor") = 1e-12, py::arg("threads") = 1);

  m.def("ulam_matrix_from_pairs", &ulam_matrix_from_pairs, py::arg("samples"),
        py::arg("k"));
  m.def("ulam_matrix_exact", &ulam_matrix_exact, py::arg("spec"), py::arg("k"),
        py::arg("quad_points_per_cell") = 1024, py::arg("threads") = 1);
  m.def("kde_transfer_matrix", &kde_transfer_matrix, py::arg("samples"), py::arg("k"),
        py::arg("options"));
  m.def("noisy_kernel_matrix_exact", &noisy_kernel_matrix_exact, py::arg("spec"),
        py::arg("k"), py::arg("threads") = 1);
  m.def("apply_fp_exact", &apply_fp_exact, py::arg("spec"), py::arg("rho"),
        py::arg("x"));
  m.def(
      "push_density",
      [](const StochasticMatrix& P, const std::vector<double>& v) {
        return push_density(P, v);
      },
      py::arg("matrix"), py::arg("v"));

  // --- spectral ---
  py::class_<StationaryResult>(m, "StationaryResult")
      .def_readonly("vector", &StationaryResult::vector)
      .def_readonly("residual", &StationaryResult::residual)
      .def_readonly("iterations", &StationaryResult::iterations)
      .def_readonly("converged", &StationaryResult::converged)
      .def_readonly("unique", &StationaryResult::unique);

  m.def("leading_left_eigenvector", &leading_left_eigenvector, py::arg("matrix"),
        py::arg("tol") = 1e-12, py::arg("max_iter") = 100000);
  m.def(
      "stationary_to_density",
      [](const std::vector<double>& v, std::size_t k) {
        return stationary_to_density(v, k);
      },
      py::arg("v"), py::arg("k"));

  // --- analysis ---
  py::class_<ReferenceDensity>(m, "ReferenceDensity")
      .def_static("logistic_arcsine", &ReferenceDensity::logistic_arcsine)
      .def_static("truncated_normal", &ReferenceDensity::truncated_normal,
                  py::arg("mu"), py::arg("sigma"))
      .def_static("uniform", &ReferenceDensity::uniform)
      .def("value", &ReferenceDensity::value, py::arg("x"))
      .def("first_derivative", &ReferenceDensity::first_derivative, py::arg("x"))
      .def("second_derivative", &ReferenceDensity::second_derivative, py::arg("x"))
      .def("cdf", &ReferenceDensity::cdf, py::arg("x"))
      .def_property_readonly("name", &ReferenceDensity::name);

  m.def("evaluation_grid", &evaluation_grid);
  m.def(
      "ub_constants",
      [](double x) {
        const UbConstants c = UbConstants::at(ReferenceDensity::logistic_arcsine(), x);
        return py::dict(py::arg("x_eval") = c.x_eval, py::arg("density") = c.density,
                        py::arg("slope") = c.slope, py::arg("curvature") = c.curvature);
      },
      py::arg("x") = 0.99,
      "arcsine density, |slope| and |curvature| at the evaluation point");
  m.def("logistic_orbit_sample", &logistic_orbit_sample, py::arg("n"), py::arg("seed"));

  m.attr("__version__") = "0.1.0";
}
