#pragma once

#include <map>
#include <string>

#include "mfcz/freqset.hpp"
#include "mfcz/torus.hpp"

namespace mfcz {

/// GridFunction CSV: a `dim,L,M` header line followed by `index,re,im` rows.
void write_grid_csv(const std::string& path, const GridFunction& f);
GridFunction read_grid_csv(const std::string& path);

/// Frequency list CSV: one vector per row (1 or 2 comma-separated columns).
FrequencySet read_theta_csv(const std::string& path);
void write_theta_csv(const std::string& path, const FrequencySet& theta);

/// Resolve `--theta`: an existing file path is read as CSV, anything else is
/// parsed as a preset (arith:N, random:N:seed, cluster:N:eps).
FrequencySet theta_from_spec(const std::string& spec);

/// Flat key=value configuration (one pair per line, '#' comments).
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace mfcz
