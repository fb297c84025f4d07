#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "transferop/io.hpp"

using namespace transferop;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "transferop_io_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("doubles survive the 17-digit round trip") {
  RandomStream rng(55);
  for (int i = 0; i < 1000; ++i) {
    const double scale = std::pow(10.0, -12.0 + 24.0 * rng.uniform01());
    const double v = (rng.uniform01() - 0.5) * scale;
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("sample sets round-trip through CSV plus sidecar") {
  const fs::path dir = temp_dir();
  const MapSpec spec = MapSpec::logistic_noisy(4.0, NoiseSpec{0.02, 0.0, 1.0});
  const SampleSet out = generate_orbit(spec, 0.25, 300, 40, 99);
  io::write_sample_set(out, dir / "s.csv", dir / "s.json");

  const SampleSet in = io::read_sample_set(dir / "s.csv", dir / "s.json");
  REQUIRE(in.pairs.size() == out.pairs.size());
  for (std::size_t k = 0; k < out.pairs.size(); ++k) {
    CHECK(in.pairs[k].x == out.pairs[k].x);
    CHECK(in.pairs[k].x_next == out.pairs[k].x_next);
  }
  CHECK(in.mode == out.mode);
  CHECK(in.seed == out.seed);
  CHECK(in.burn_in == out.burn_in);
  CHECK(in.map.params == out.map.params);
  REQUIRE(in.map.noise.has_value());
  CHECK(in.map.noise->sigma == 0.02);
}

TEST_CASE("noiseless sidecar stores a null sigma") {
  const fs::path dir = temp_dir();
  const SampleSet out = generate_ensemble(MapSpec::logistic(), 10, 1);
  io::write_sample_set(out, dir / "n.csv", dir / "n.json");
  const SampleSet in = io::read_sample_set(dir / "n.csv", dir / "n.json");
  CHECK_FALSE(in.map.noise.has_value());
  CHECK(in.mode == SampleMode::IidUniform);
}

TEST_CASE("rewrites are byte-identical") {
  const fs::path dir = temp_dir();
  const SampleSet s = generate_orbit(MapSpec::logistic(), 0.25, 200, 10, 7);
  io::write_sample_set(s, dir / "a.csv", dir / "a.json");
  io::write_sample_set(s, dir / "b.csv", dir / "b.json");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
}

TEST_CASE("matrices round-trip through the dense CSV") {
  const fs::path dir = temp_dir();
  const SampleSet s = generate_ensemble(MapSpec::logistic(), 3000, 5);
  const StochasticMatrix out = ulam_matrix_from_pairs(s, 17);
  io::write_matrix_csv(out, dir / "m.csv");

  const StochasticMatrix in = io::read_matrix_csv(dir / "m.csv");
  CHECK(in.K == out.K);
  CHECK(in.method == out.method);
  REQUIRE(in.entries.size() == out.entries.size());
  for (std::size_t k = 0; k < out.entries.size(); ++k)
    CHECK(in.entries[k] == out.entries[k]);
}

TEST_CASE("corrupt headers are rejected") {
  const fs::path dir = temp_dir();
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "not,a,header\n1,2\n";
  }
  CHECK_THROWS_AS(io::read_matrix_csv(dir / "bad.csv"), std::runtime_error);
  CHECK_THROWS_AS(io::read_sample_set(dir / "bad.csv", dir / "missing.json"),
                  std::runtime_error);
}

TEST_CASE("density and stationary writers produce one row per cell") {
  const fs::path dir = temp_dir();

  const HistDensity h = hist_fit(std::vector<double>{0.1, 0.4, 0.8}, 4);
  io::write_hist_density(h, dir / "h.json");
  io::write_hist_density_csv(h, dir / "h.csv");
  const std::string csv = slurp(dir / "h.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 cells

  StationaryResult r;
  r.vector = {0.25, 0.75};
  r.residual = 1e-13;
  r.iterations = 12;
  r.converged = true;
  io::write_stationary(r, 2, dir / "st.csv", dir / "st.json");
  const std::string st = slurp(dir / "st.csv");
  CHECK(std::count(st.begin(), st.end(), '\n') == 3);
  CHECK(slurp(dir / "st.json").find("\"residual\"") != std::string::npos);
}

TEST_CASE("error reports serialize the long format and the optimum") {
  const fs::path dir = temp_dir();
  ErrorReport r;
  r.records.push_back({"hist", 1000, 10.0, 1, 0.5, 0.625});
  r.records.push_back({"hist", 1000, 20.0, 1, 0.25, 0.375});
  r.ub_curve = {{10.0, 0.625}, {20.0, 0.375}};
  r.optimum = {20.0, 0.375};
  r.seeds = {1};
  io::write_error_report(r, dir / "e.csv", dir / "e.json");
  const std::string csv = slurp(dir / "e.csv");
  CHECK(csv.find("method,N,parameter,seed,mse_mean,ub") == 0);
  CHECK(csv.find("hist,1000,20,1,0.25,0.375") != std::string::npos);
  CHECK(slurp(dir / "e.json").find("\"optimum\"") != std::string::npos);
}
