#include "mfcz/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mfcz {

void write_grid_csv(const std::string& path, const GridFunction& f) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  require(fp != nullptr, ErrorCode::io, "cannot open for writing: " + path);
  std::fprintf(fp, "%d,%.17g,%d\n", f.domain.dim, f.domain.side,
               f.domain.points);
  for (std::size_t i = 0; i < f.size(); ++i)
    std::fprintf(fp, "%zu,%.17g,%.17g\n", i, f.values[i].real(),
                 f.values[i].imag());
  std::fclose(fp);
}

GridFunction read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open: " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::io,
          "empty grid file: " + path);
  int dim = 0, points = 0;
  double side = 0.0;
  require(std::sscanf(line.c_str(), "%d,%lf,%d", &dim, &side, &points) == 3,
          ErrorCode::io, "bad grid header (want dim,L,M): " + path);
  GridFunction f(TorusDomain::make(dim, side, points));
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t idx = 0;
    double re = 0.0, im = 0.0;
    require(std::sscanf(line.c_str(), "%zu,%lf,%lf", &idx, &re, &im) == 3,
            ErrorCode::io, "bad grid row: " + line);
    require(idx < f.size(), ErrorCode::io, "grid row index out of range");
    f.values[idx] = cplx(re, im);
    ++seen;
  }
  require(seen == f.size(), ErrorCode::io,
          "grid file row count does not match M^dim: " + path);
  return f;
}

FrequencySet read_theta_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open: " + path);
  std::vector<Vec> freqs;
  int dim = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double a = 0.0, b = 0.0;
    const int got = std::sscanf(line.c_str(), "%lf,%lf", &a, &b);
    require(got >= 1, ErrorCode::io, "bad frequency row: " + line);
    if (dim == 0) dim = got;
    require(dim == got, ErrorCode::io, "mixed dimensions in: " + path);
    freqs.push_back(got == 1 ? vec1(a) : vec2(a, b));
  }
  require(!freqs.empty(), ErrorCode::io, "no frequencies in: " + path);
  return FrequencySet::make(dim, std::move(freqs));
}

void write_theta_csv(const std::string& path, const FrequencySet& theta) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  require(fp != nullptr, ErrorCode::io, "cannot open for writing: " + path);
  for (const Vec& f : theta.freqs) {
    if (theta.dim == 1)
      std::fprintf(fp, "%.17g\n", f[0]);
    else
      std::fprintf(fp, "%.17g,%.17g\n", f[0], f[1]);
  }
  std::fclose(fp);
}

FrequencySet theta_from_spec(const std::string& spec) {
  if (std::filesystem::exists(spec)) return read_theta_csv(spec);
  return FrequencySet::from_preset(spec);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

}  // namespace mfcz
