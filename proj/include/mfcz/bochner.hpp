#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mfcz/freqset.hpp"
#include "mfcz/mfop.hpp"
#include "mfcz/opnorm.hpp"
#include "mfcz/torus.hpp"

namespace mfcz {

/// Bounded open frequency-space region with a signed boundary-distance
/// evaluator (positive inside).
struct PlanarDomain {
  std::string name;
  std::function<double(const Vec&)> boundary_distance;

  bool contains(const Vec& xi) const { return boundary_distance(xi) > 0.0; }

  static PlanarDomain disk(double radius = 1.0);
  static PlanarDomain square(double half_side = 1.0);
  static PlanarDomain annulus(double r_inner, double r_outer);
};

struct WhitneyCube {
  Box box;          // frequency-space cube (center, radius)
  long side_cells;  // side in lattice cells
  int scale;        // floor(log2 radius)
  double center_distance;  // d(center, Gamma)
};

/// Disjoint dyadic cubes covering the interior of Omega away from a
/// pixel-scale collar, with radii comparable to the boundary distance.
struct WhitneyCover {
  TorusDomain grid;  // provides the frequency lattice
  std::vector<WhitneyCube> cubes;
  std::map<int, std::vector<std::size_t>> by_scale;  // scale -> cube indices
  std::vector<std::size_t> covered;    // lattice indices inside some cube
  std::vector<std::size_t> collar;     // lattice indices in Omega, uncovered
  double ratio_low = 0.0, ratio_high = 0.0;  // range of r_i / d(c_i, Gamma)
};

/// Top-down selection of maximal dyadic cubes with sqrt(2)*side <= d(center).
/// Cubes smaller than min_side_cells are not created; uncovered interior
/// points near the boundary form the reported collar.
WhitneyCover whitney_cover(const TorusDomain& grid, const PlanarDomain& omega,
                           long min_side_cells = 2);

/// Partition of unity subordinate to the cover: chi_i = eta_i / sum eta,
/// eta_i a C2 bump on (1+eps)O_i. Dense representation; intended for small
/// grids (tests, reports). Large runs use decompose_scales directly.
std::vector<GridFunction> partition_of_unity(const WhitneyCover& cover,
                                             double eps = 0.1);

/// Generalized Bochner-Riesz symbol: supported in the closure of Omega,
/// vanishing like d(xi, Gamma)^delta at the boundary.
struct BRSymbol {
  double delta = 1.0;
  PlanarDomain region;
  std::function<double(const Vec&)> eval;

  /// classical disk symbol (1 - |xi|^2)_+^delta
  static BRSymbol disk_classical(double delta, double radius = 1.0);
  /// d(xi, Gamma)^delta with adaptive window smoothing for generic regions
  static BRSymbol from_distance(const PlanarDomain& region, double delta,
                                const TorusDomain& grid);
};

GridFunction br_apply(const TorusDomain& grid, const BRSymbol& sym,
                      const GridFunction& f);

/// Single-scale pieces: sigma_j = sum over cubes at scale j of
/// 2^{-j delta} m_delta chi_l. The full multiplier reconstructs as
/// sum_j 2^{j delta} sigma_j on the covered spectrum.
struct ScaleDecomposition {
  std::vector<int> scales;                  // ascending
  std::vector<std::vector<double>> sigma;   // per scale, lattice-indexed
  std::vector<FrequencySet> theta;          // cube centers per scale
  double collar_mass_inf = 0.0;             // sup of m_delta on the collar
  double collar_mass_l2 = 0.0;              // L2(dxi) mass of m_delta there
};

ScaleDecomposition decompose_scales(const TorusDomain& grid,
                                    const BRSymbol& sym,
                                    const WhitneyCover& cover,
                                    double eps = 0.1);

MultiFreqOperator scale_operator(const TorusDomain& grid,
                                 const ScaleDecomposition& dec,
                                 int scale_index);

struct KernelNormReport {
  int scale = 0;
  double sigma_l2 = 0.0;      // L2(dxi) norm of sigma_j
  double kernel_l1 = 0.0;     // L1(dx) norm of K_j
  double kernel_l2 = 0.0;     // equals sigma_l2 / (2 pi)^{n/2} (Parseval)
  double tail_l2 = 0.0;       // ||(1 + 2^j |x|)^M K_j||_L2, M = dim
  double tail_linf = 0.0;
  double periodization_tail = 0.0;  // share of ||K||_1 beyond |x| >= L/4
};

/// Kernel K_j = F^{-1} sigma_j under the physical convention
/// K(x) = (2 pi)^{-n} integral sigma(xi) e^{i x xi} dxi.
/// Precondition: L * 2^j >= 8 so the kernel decays before wraparound
/// (periodization tail reported).
KernelNormReport kernel_norms(const TorusDomain& grid,
                              const std::vector<double>& sigma, int scale);

struct UjScanRow {
  int scale = 0;
  int n_freqs = 0;
  double estimate = 0.0;           // p->p lower bound (exact at p = 2)
  double envelope_single_scale = 0.0;  // 2^{-j (n-1)/s}
  double envelope_mfcz = 0.0;          // N_j^gamma (or N_j^{|1/p-1/2|})
};

std::vector<UjScanRow> uj_norm_scan(const TorusDomain& grid,
                                    const ScaleDecomposition& dec, double p,
                                    double s,
                                    const GridFunction* weight = nullptr,
                                    double t_weight = 1.0, int restarts = 6,
                                    std::uint64_t seed = 5u);

/// Single-scale disk-multiplier decay exponent: for n = 2,
/// max(2 |1/2 - 1/p| - 1/2, 0); for n >= 3 only outside the middle range
/// p in (2(n+2)/(n+4), 2(n+2)/n).
double delta_p(int n, double p);

}  // namespace mfcz
