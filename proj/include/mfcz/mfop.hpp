#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mfcz/freqset.hpp"
#include "mfcz/torus.hpp"

namespace mfcz {

/// Fourier multiplier symbol: an evaluator on frequency vectors plus
/// metadata. Boundedness on the lattice is recorded when the symbol is baked
/// into an operator.
struct Symbol {
  std::string kind;
  std::function<cplx(const Vec&)> eval;
};

/// Fixed C2 bump profile used across the library: (1 - t^2)^3 on [-1, 1].
double bump_profile(double t);
/// Plateau bump: 1 on [-1/2, 1/2], bump_profile(2|t| - 1) on the overhang.
double plateau_profile(double t);

/// T = sum_j T_j acting as a Fourier multiplier on a fixed domain. The total
/// symbol is baked on the frequency lattice at construction; pieces stay
/// available as evaluators.
class MultiFreqOperator {
 public:
  static MultiFreqOperator from_pieces(const TorusDomain& domain,
                                       const FrequencySet& theta,
                                       std::vector<Symbol> pieces,
                                       std::string kind = "custom");
  static MultiFreqOperator from_values(const TorusDomain& domain,
                                       const FrequencySet& theta,
                                       std::vector<cplx> multiplier,
                                       std::string kind = "dense");

  GridFunction apply(const GridFunction& f) const;
  GridFunction apply_adjoint(const GridFunction& f) const;
  GridFunction apply_piece(int j, const GridFunction& f) const;

  const std::vector<cplx>& multiplier() const { return multiplier_; }
  double sup_abs() const { return sup_abs_; }
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const FrequencySet& theta() const { return theta_; }
  const TorusDomain& domain() const { return domain_; }
  const std::string& kind() const { return kind_; }

  /// Kernel K with Tf = h^dim * sum_y K(x - y) f(y); sampled on the grid.
  GridFunction kernel() const;
  GridFunction piece_kernel(int j) const;

 private:
  MultiFreqOperator() = default;
  TorusDomain domain_;
  FrequencySet theta_;
  std::vector<Symbol> pieces_;
  std::vector<cplx> multiplier_;
  double sup_abs_ = 0.0;
  std::string kind_;
};

/// Multi-frequency Hilbert transform: the multiplier is -1 below xi_1,
/// alternates sign across each xi_j, ends at (-1)^{N+1} above xi_N. Lattice
/// points equal to some xi_j take the right-limit value.
MultiFreqOperator mf_hilbert(const TorusDomain& domain,
                             const FrequencySet& theta);

/// Smooth symbol sum_j bump(|xi - xi_j| / sigma_j) with sigma_j half the
/// minimal gap from xi_j to the rest of Theta (sigma_default when N = 1).
Symbol hormander_symbol(const FrequencySet& theta, double width_scale = 1.0,
                        double sigma_default = 1.0);
MultiFreqOperator hormander_operator(const TorusDomain& domain,
                                     const FrequencySet& theta,
                                     double width_scale = 1.0,
                                     double sigma_default = 1.0);

/// max over the lattice (away from Theta) of |finite difference of order a|
/// times d(xi, Theta)^a, for orders a = 0, 1, 2.
struct SymbolDecayCheck {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};
SymbolDecayCheck hormander_decay_check(const TorusDomain& domain,
                                       const Symbol& symbol,
                                       const FrequencySet& theta);

struct BumpSumOperator {
  MultiFreqOperator op;
  double radii_constant = 0.0;   // sup_t sum_j (r_j t)^{n+1} / (1 + r_j t)^M
  int decay_exponent = 0;        // the M used
};

/// T f = sum_j phi_j * f with hat(phi_j) a plateau bump supported in the
/// frequency cube Q_j (identically 1 on Q_j/2). Theta is the list of cube
/// centers. Cubes must be pairwise disjoint.
BumpSumOperator bump_sum_operator(const TorusDomain& domain,
                                  const std::vector<Box>& cubes,
                                  int decay_exponent = 0 /* 0 = dim + 2 */);

/// (sum_j |T(e^{i theta_j .} f)|^q)^{1/q} pointwise; q = infinity gives the
/// maximal variant.
GridFunction modulated_lq_functional(const MultiFreqOperator& t,
                                     const FrequencySet& theta,
                                     const GridFunction& f, double q);

/// Rubio de Francia square-function style aggregate over the lattice
/// partition induced by Theta (1D): bins (-inf, xi_1), [xi_1, xi_2), ...,
/// [xi_N, inf).
GridFunction rubio_functional(const FrequencySet& theta, const GridFunction& f,
                              double q);

/// Max over the annulus 2h <= |x| <= L/4 of
/// sum_j |grad(e^{-i xi_j x} K_j(x))| * |x|^{dim+1}; the multi-frequency
/// kernel regularity constant (modulo the radii constant for bump sums).
double kernel_regularity_constant(const MultiFreqOperator& op);

}  // namespace mfcz
