#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mfcz/mfop.hpp"

namespace mfcz {

struct NormEstimate {
  double p = 2.0;
  bool weighted = false;
  double value = 0.0;
  bool exact = false;  // exact only for p = 2 on a pure multiplier
  int iterations = 0;
  bool converged = true;
  std::vector<double> history;  // objective per iteration of the best restart
  GridFunction extremizer;      // f* with ||Tf*||/||f*|| == value
};

/// Exact 2->2 norm of a multiplier operator: sup over the lattice of |m|.
NormEstimate norm_2_exact(const MultiFreqOperator& t);

/// Lower bound on ||T||_{L^p(w) -> L^p(w)} via alternating duality iteration
/// (nonlinear power method). The objective is monotone nondecreasing across
/// iterations; the reported value is ||Tf*||_{p,w}/||f*||_{p,w} at the
/// returned extremizer. Restarts include constants, a spike, the Dirichlet
/// kernel over Theta, the best lattice character, and seeded random fields.
NormEstimate norm_p_power_method(const MultiFreqOperator& t, double p,
                                 const GridFunction* weight = nullptr,
                                 int restarts = 16, double tol = 1e-9,
                                 int max_iter = 600,
                                 std::uint64_t seed = 7u);

struct GrowthFit {
  double exponent = 0.0;  // slope of log(value) against log(sweep variable)
  double constant = 0.0;  // exp(intercept)
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares fit of log(y) against log(x); needs >= 4 points with
/// positive entries.
GrowthFit fit_growth(const std::vector<double>& x,
                     const std::vector<double>& y);

struct GrowthRow {
  double sweep = 0.0;     // N (or 2^j)
  double estimate = 0.0;  // measured norm (lower bound unless p = 2 exact)
  double envelope = 0.0;  // sweep^envelope_exponent
  double ratio = 0.0;     // estimate / envelope
};

struct GrowthScan {
  std::vector<GrowthRow> rows;
  GrowthFit fit;
  double envelope_exponent = 0.0;
  std::optional<double> gamma;  // weighted-theory exponent when supplied
  bool gamma_interesting = false;  // gamma < 1
};

/// gamma = t*p / (s * min(2,s)) + |1/2 - 1/s|, the weighted growth exponent.
double weighted_growth_exponent(double t, double p, double s);

/// Sweep an operator family over N, estimate p->p norms, and regress the
/// growth. envelope_exponent defaults to |1/p - 1/2| when not supplied.
GrowthScan growth_regression(
    const std::function<MultiFreqOperator(int)>& family,
    const std::vector<int>& n_sweep, double p,
    const GridFunction* weight = nullptr,
    std::optional<double> envelope_exponent = std::nullopt,
    std::optional<double> t_weight = std::nullopt,
    std::optional<double> s_weight = std::nullopt, int restarts = 8,
    std::uint64_t seed = 7u);

}  // namespace mfcz
