#include "transferop/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace transferop::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// std::stod raises out_of_range for subnormal values (strtod sets ERANGE);
// matrix entries in the far kernel tail are legitimately subnormal.
double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::runtime_error("malformed number: " + s);
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::string mode_name(SampleMode m) {
  return m == SampleMode::Orbit ? "orbit" : "iid_uniform";
}

SampleMode mode_from_name(const std::string& s) {
  if (s == "orbit") return SampleMode::Orbit;
  if (s == "iid_uniform") return SampleMode::IidUniform;
  throw std::runtime_error("unknown sample mode: " + s);
}

void dump(const json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json load(const std::filesystem::path& path) {
  auto in = open_in(path);
  return json::parse(in);
}

}  // namespace

void write_sample_set(const SampleSet& s, const std::filesystem::path& csv_path,
                      const std::filesystem::path& json_path) {
  auto csv = open_out(csv_path);
  csv << "x,x_next\n";
  for (const auto& p : s.pairs)
    csv << format_double(p.x) << ',' << format_double(p.x_next) << '\n';

  json j{{"mode", mode_name(s.mode)},
         {"seed", s.seed},
         {"burn_in", s.burn_in},
         {"map", s.map.name()},
         {"params", s.map.params}};
  if (s.map.noise)
    j["sigma"] = s.map.noise->sigma;
  else
    j["sigma"] = nullptr;
  dump(j, json_path);
}

SampleSet read_sample_set(const std::filesystem::path& csv_path,
                          const std::filesystem::path& json_path) {
  SampleSet s;

  json j = load(json_path);
  s.mode = mode_from_name(j.at("mode").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  s.burn_in = j.at("burn_in").get<std::size_t>();
  const auto map_name = j.at("map").get<std::string>();
  if (map_name != "logistic")
    throw std::runtime_error("cannot reconstruct a non-logistic map from disk");
  const auto params = j.at("params").get<std::vector<double>>();
  if (!j.at("sigma").is_null()) {
    s.map = MapSpec::logistic_noisy(params.at(0),
                                    NoiseSpec{j.at("sigma").get<double>(), 0.0, 1.0});
  } else {
    s.map = MapSpec::logistic(params.at(0));
  }

  auto csv = open_in(csv_path);
  std::string line;
  if (!std::getline(csv, line) || line != "x,x_next")
    throw std::runtime_error("bad sample CSV header in " + csv_path.string());
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed sample row: " + line);
    s.pairs.push_back(
        {parse_double(line.substr(0, comma)), parse_double(line.substr(comma + 1))});
  }
  return s;
}

void write_hist_density(const HistDensity& h, const std::filesystem::path& json_path) {
  dump(json{{"dim", h.dim}, {"K", h.K}, {"N", h.N}, {"counts", h.counts}}, json_path);
}

void write_hist_density_csv(const HistDensity& h, const std::filesystem::path& csv_path) {
  if (h.dim != 1) throw std::invalid_argument("CSV dump is for 1-D histograms");
  auto csv = open_out(csv_path);
  csv << "center,density\n";
  const double kd = static_cast<double>(h.K);
  for (std::size_t i = 0; i < h.K; ++i) {
    const double center = (static_cast<double>(i) + 0.5) / kd;
    csv << format_double(center) << ',' << format_double(h.value(center)) << '\n';
  }
}

void write_kde_meta(const KdeDensity& k, const std::string& samples_file,
                    const std::filesystem::path& json_path) {
  json j{{"kind", k.kernel().name()},
         {"N", k.size()},
         {"dim", k.dim()},
         {"samples_file", samples_file}};
  if (k.dim() == 1)
    j["delta"] = k.bandwidth();
  else
    j["delta"] = {k.bandwidth_2d()[0], k.bandwidth_2d()[1]};
  dump(j, json_path);
}

void write_density_csv(std::span<const double> grid, std::span<const double> values,
                       const std::filesystem::path& csv_path) {
  if (grid.size() != values.size())
    throw std::invalid_argument("grid and value lengths differ");
  auto csv = open_out(csv_path);
  csv << "x,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    csv << format_double(grid[i]) << ',' << format_double(values[i]) << '\n';
}

void write_matrix_csv(const StochasticMatrix& m, const std::filesystem::path& csv_path) {
  auto csv = open_out(csv_path);
  csv << "K,method\n" << m.K << ',' << matrix_method_name(m.method) << '\n';
  for (std::size_t i = 0; i < m.K; ++i) {
    const auto row = m.row(i);
    for (std::size_t j = 0; j < m.K; ++j)
      csv << (j ? "," : "") << format_double(row[j]);
    csv << '\n';
  }
}

StochasticMatrix read_matrix_csv(const std::filesystem::path& csv_path) {
  auto csv = open_in(csv_path);
  std::string line;
  if (!std::getline(csv, line) || line != "K,method")
    throw std::runtime_error("bad matrix CSV header in " + csv_path.string());
  if (!std::getline(csv, line)) throw std::runtime_error("truncated matrix CSV");
  const auto comma = line.find(',');
  StochasticMatrix m;
  m.K = std::stoul(line.substr(0, comma));
  const std::string method = line.substr(comma + 1);
  if (method == "ulam_counts") m.method = MatrixMethod::UlamCounts;
  else if (method == "ulam_exact") m.method = MatrixMethod::UlamExact;
  else if (method == "kde_conditional") m.method = MatrixMethod::KdeConditional;
  else if (method == "noisy_kernel_exact") m.method = MatrixMethod::NoisyKernelExact;
  else throw std::runtime_error("unknown matrix method: " + method);

  m.entries.reserve(m.K * m.K);
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) m.entries.push_back(parse_double(cell));
  }
  if (m.entries.size() != m.K * m.K)
    throw std::runtime_error("matrix CSV has wrong entry count");
  m.flags.assign(m.K, 0);
  return m;
}

void write_matrix_meta(const StochasticMatrix& m, const std::string& source,
                       const std::string& bandwidths,
                       const std::filesystem::path& json_path) {
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < m.flags.size(); ++i)
    if (m.flags[i]) flagged.push_back(i);
  json j{{"K", m.K},
         {"method", matrix_method_name(m.method)},
         {"flags", flagged},
         {"source", source}};
  if (bandwidths.empty())
    j["bandwidths"] = nullptr;
  else
    j["bandwidths"] = json::parse(bandwidths);
  dump(j, json_path);
}

void write_stationary(const StationaryResult& r, std::size_t K,
                      const std::filesystem::path& csv_path,
                      const std::filesystem::path& json_path) {
  auto csv = open_out(csv_path);
  csv << "center,mass,density\n";
  const double kd = static_cast<double>(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double center = (static_cast<double>(i) + 0.5) / kd;
    csv << format_double(center) << ',' << format_double(r.vector[i]) << ','
        << format_double(r.vector[i] * kd) << '\n';
  }
  dump(json{{"residual", r.residual},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"unique", r.unique}},
       json_path);
}

void write_error_report(const ErrorReport& r, const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path) {
  auto csv = open_out(csv_path);
  csv << "method,N,parameter,seed,mse_mean,ub\n";
  for (const auto& rec : r.records)
    csv << rec.method << ',' << rec.n << ',' << format_double(rec.parameter) << ','
        << rec.seed << ',' << format_double(rec.mse_mean) << ','
        << format_double(rec.ub) << '\n';

  // runtime_seconds is intentionally not serialized: identical config + seeds
  // must produce byte-identical files.
  json curve = json::array();
  for (const auto& [param, ub] : r.ub_curve) curve.push_back({param, ub});
  dump(json{{"optimum", {{"parameter", r.optimum.first}, {"ub", r.optimum.second}}},
            {"ub_curve", curve},
            {"seeds", r.seeds}},
       json_path);
}

}  // namespace transferop::io
