#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mfcz/expspan.hpp"
#include "mfcz/mfop.hpp"
#include "mfcz/opnorm.hpp"

namespace mfcz {

struct BadPart {
  Box box;          // the selected dyadic box J
  GridFunction b;   // supported in J; orthogonal to every e^{i xi_j .} on J
};

/// Measured implicit constants of the decomposition properties:
///   c1 = (sum |J|) * lambda / (sqrt(N) ||f||_1)               (box mass)
///   c2 = ||g||_2^2 / (||f||_1 sqrt(N) lambda)                 (good part)
///   c3 = max_J avg_J |f| * sqrt(N) / lambda                   (stopping)
///   c4 = max_J ||f - b_J||_{L2(J)} / (sqrt(|J|) lambda)       (local L2)
struct CZAudit {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double reconstruction_rel = 0.0;   // ||f - g - sum b_J||_2 / ||f||_2
  double max_cancellation_rel = 0.0; // max |bhat_J(xi_j)| / ||b_J||_1
  double good_sup_constant = 0.0;    // max ||Pi(f 1_J)||_inf(J)/(sqrt(N) avg_J |f|)
  bool degenerate_all_bad = false;   // threshold below the grid floor
  int box_count = 0;
};

struct CZDecomposition {
  GridFunction good;
  std::vector<BadPart> bad_parts;
  double lambda = 0.0;
  FrequencySet theta;
  CZAudit audit;
};

/// Reusable per-geometry Gram factorizations; valid for one fixed Theta on
/// one fixed domain. Pass the same cache to repeated decompositions with the
/// same Theta to amortize the eigendecompositions across boxes and inputs.
struct GramCache {
  std::map<WindowGeometry, std::shared_ptr<GramSystem>> by_geometry;
};

/// Multi-frequency Calderon-Zygmund decomposition f = g + sum_J b_J.
/// Maximal dyadic boxes with avg_J |f| > lambda / sqrt(N) are selected;
/// b_J = (f - Pi_J(f 1_J)) 1_J with Pi_J the L2(J) projection onto the
/// exponential span, which forces bhat_J(xi_j) = 0 for every j.
/// Requires points_per_dim to be a power of two (dyadic grid).
CZDecomposition cz_decompose(const GridFunction& f, double lambda,
                             const FrequencySet& theta,
                             GramCache* cache = nullptr);

/// sup over lambda of lambda * |{ |g| > lambda }| / ||f||_1, computed
/// exactly from the sorted values of |g| (no lambda grid needed).
double weak_type_ratio(const GridFunction& tf, double f_l1);

/// Adversarial L1-normalized test inputs for the weak-(1,1) experiment:
/// a spike, random signed dust, and Dirichlet-kernel bumps over Theta
/// (plain, sign-alternating, random-phase).
std::vector<GridFunction> weak11_test_family(const TorusDomain& d,
                                             const FrequencySet& theta,
                                             std::mt19937_64& rng,
                                             int dust_draws = 4);

struct Weak11Row {
  int n_freqs = 0;
  double sup_ratio = 0.0;   // worst case over the family
  std::string worst_input;
};

struct Weak11Result {
  std::vector<Weak11Row> rows;
  GrowthFit fit;  // of sup_ratio against N
};

Weak11Result weak11_experiment(
    const TorusDomain& d,
    const std::function<MultiFreqOperator(const FrequencySet&)>& make_op,
    const std::function<FrequencySet(int)>& make_theta,
    const std::vector<int>& n_sweep, std::uint64_t seed = 11u,
    int dust_draws = 4);

}  // namespace mfcz
