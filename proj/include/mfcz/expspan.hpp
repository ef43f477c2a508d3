#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mfcz/freqset.hpp"
#include "mfcz/torus.hpp"

namespace mfcz {

/// Offset of x from `center`, each coordinate wrapped to [-L/2, L/2).
Vec centered_offset(const TorusDomain& d, const Vec& x, const Vec& center);

/// Arithmetic structure of a box window: per-axis offset of the first grid
/// point from the box center, and the point count. Boxes with equal geometry
/// have identical (centered) Gram systems.
struct WindowGeometry {
  std::array<double, 2> u0{0.0, 0.0};
  std::array<long, 2> count{1, 1};
  bool operator<(const WindowGeometry& o) const {
    return std::tie(count[0], count[1], u0[0], u0[1]) <
           std::tie(o.count[0], o.count[1], o.u0[0], o.u0[1]);
  }
};
WindowGeometry box_window_geometry(const TorusDomain& d, const Box& q);

/// Element of E = span{ e^{i xi . x} : xi in Theta }.
/// Evaluation at x is sum_j coeff[j] * e^{i xi_j . x}; on the torus the
/// anchor selects the periodic representative (exponentials with off-lattice
/// frequencies are not periodic).
struct SpanElement {
  FrequencySet theta;
  Eigen::VectorXcd coeffs;
  Vec anchor{0.0, 0.0};

  cplx eval(const Vec& x) const;
  cplx eval_periodic(const TorusDomain& d, const Vec& x) const;
  GridFunction sample(const TorusDomain& d) const;
};

/// Inner products of the exponential basis over the grid points of a box,
/// in closed form (geometric sums, so each entry is O(1)).
///
/// gram(j,k) realizes the integral of e^{i (xi_j - xi_k) . u} over the box in
/// box-centered coordinates u; the diagonal equals the box measure
/// h^dim * #points exactly. Solves are regularized with an eigenvalue floor
/// of 1e-12 * measure.
class GramSystem {
 public:
  GramSystem(const TorusDomain& domain, const FrequencySet& theta,
             const Box& region);

  const Eigen::MatrixXcd& gram() const { return gram_; }
  double measure() const { return measure_; }
  double condition_estimate() const { return condition_; }
  const Box& region() const { return region_; }
  int floored_eigenvalues() const { return floored_; }

  /// Pairs (j,k) with |xi_j - xi_k| * radius < 1e-6 (near-collinear basis).
  const std::vector<std::pair<int, int>>& clustered_pairs() const {
    return clustered_;
  }

  /// Solve the normal equations <phi, e_j> = m_j for the coefficients of
  /// phi in box-centered coordinates.
  Eigen::VectorXcd solve_normal(const Eigen::VectorXcd& m) const;

  /// q(x) = ebar(x)^* A^{-1} ebar(x) with e_j(x) = e^{i xi_j . (x - center)};
  /// the L2 span constant at x is sqrt(measure * q(x)).
  double inverse_quadratic_form(const Vec& x) const;

  /// c^* A c = integral over the region of |phi|^2 (centered coefficients).
  double energy(const Eigen::VectorXcd& c) const;

 private:
  TorusDomain domain_;
  FrequencySet theta_;
  Box region_;
  double measure_ = 0.0;
  double condition_ = 1.0;
  int floored_ = 0;
  Eigen::MatrixXcd gram_;  // orientation: entry (j,k) uses xi_j - xi_k
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_;  // of A = conj(gram)
  Eigen::VectorXd floored_evals_;
  std::vector<std::pair<int, int>> clustered_;
};

/// Moments m_j = h^dim * sum_{y in Q} f(y) e^{-i xi_j . (y - center)} with y
/// taken as the periodic representative nearest `center`.
Eigen::VectorXcd box_moments(const GridFunction& f, const FrequencySet& theta,
                             const Box& q, const Vec& center);

/// Best L2(target_region) approximation of f.1_Q by an element of E.
/// The residual is orthogonal to every basis exponential over target_region.
SpanElement project_l2(const GridFunction& f, const FrequencySet& theta,
                       const Box& q, const Box& target_region);

struct ProjectLsResult {
  SpanElement element;
  double objective = 0.0;  // L^s(target_region) norm of the residual
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// Approximate L^s(target_region) minimizer via iteratively reweighted least
/// squares. Throws on non-convergence unless `strict` is false, in which case
/// the best iterate is returned with converged = false.
ProjectLsResult project_ls(const GridFunction& f, const FrequencySet& theta,
                           const Box& q, const Box& target_region, double s,
                           int max_iter = 200, bool strict = true);

struct SpanConstant {
  double value = 0.0;
  bool lower_bound_only = false;
};

/// C_p(Theta, Q) = sup over phi in E of ||phi||_{Linf(Q)} over the p-average
/// of |phi| on 3Q. Exact at p = 2 (Gram quadratic form, sup over the grid
/// points of Q); for p < 2 a certified lower bound from multi-start
/// maximization. Precondition: at least 16 * #Theta grid points across Q
/// per axis (capped at M).
SpanConstant span_constant(const TorusDomain& domain,
                           const FrequencySet& theta, const Box& q, double p,
                           int starts = 64, std::uint64_t seed = 2024);

struct EvenPBound {
  int k = 1;
  double bound = 0.0;             // certified upper bound for p = 2k
  std::uint64_t sumset_cardinality = 0;
  double sumset_scale = 0.0;      // (#Theta^k)^{1/(2k)}
  double trivial_bound = 0.0;     // via #Theta^k <= N^k
};

/// Upper bound for the p = 2k span constant via the k-fold sumset:
/// ||phi||_inf <= C_2(Theta^k, Q)^{1/k} * (avg_{3Q} |phi|^{2k})^{1/(2k)}.
EvenPBound span_constant_even_p(const TorusDomain& domain,
                                const FrequencySet& theta, const Box& q,
                                int k, std::uint64_t cap = 10'000'000);

}  // namespace mfcz
