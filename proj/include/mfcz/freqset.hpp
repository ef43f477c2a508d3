#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfcz/torus.hpp"

namespace mfcz {

/// Ordered finite collection Theta = (xi_1, ..., xi_N) of distinct frequency
/// vectors. In 1D the entries are kept in increasing order.
struct FrequencySet {
  int dim = 1;
  std::vector<Vec> freqs;

  static FrequencySet make(int dim, std::vector<Vec> freqs);
  static FrequencySet make1d(std::vector<double> freqs);

  int count() const { return static_cast<int>(freqs.size()); }

  /// Presets: "arith:N" -> (1,...,N); "random:N:seed" -> N uniform draws in
  /// [-W, W] (W = N + 1); "cluster:N:eps" -> (0, eps, ..., (N-1)*eps).
  static FrequencySet from_preset(const std::string& spec);
};

/// d(xi, Theta) = min_i |xi - xi_i| (Euclidean).
double dist_to_set(const Vec& xi, const FrequencySet& theta);

/// Theta^k: all k-fold sums with repetition, deduplicated with absolute
/// tolerance `tol`. Throws if the intermediate cardinality exceeds `cap`.
FrequencySet sumset(const FrequencySet& theta, int k, double tol = 1e-9,
                    std::uint64_t cap = 10'000'000);

struct SumsetGrowthRow {
  int k;
  std::uint64_t cardinality;
};

std::vector<SumsetGrowthRow> sumset_growth_table(const FrequencySet& theta,
                                                 int k_max,
                                                 double tol = 1e-9,
                                                 std::uint64_t cap = 10'000'000);

}  // namespace mfcz
