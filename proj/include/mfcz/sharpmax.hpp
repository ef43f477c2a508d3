#pragma once

#include "mfcz/expspan.hpp"
#include "mfcz/mfop.hpp"

namespace mfcz {

/// Configuration of the multi-frequency maximal sharp function M^#_{s,Theta}.
struct SharpMaxConfig {
  double s = 2.0;
  FrequencySet theta;
  BoxFamily family;  // empty -> default shifted dyadic family of the domain
  enum class Projection { l2, ls } mode = Projection::l2;
};

/// M^#_{s,Theta} f (x0) = sup over family boxes Q containing x0 of
/// ( avg_Q |f - pr_{Theta,Q}(f 1_Q)|^s )^{1/s}, where the projection
/// minimizes the L^s(3Q) distance to the exponential span. Exact closed-form
/// path at s = 2; IRLS per box otherwise.
GridFunction sharp_maximal(const GridFunction& f, const SharpMaxConfig& cfg);

struct FSRatioReport {
  double f_norm = 0.0;       // ||f||_{L^p(w)}
  double sharp_norm = 0.0;   // ||M^# f||_{L^p(w)}
  double ratio = 0.0;
  double envelope = 0.0;     // N^{(t p / s) max(1/2, 1/s)}
  bool degenerate = false;   // sharp norm vanished while ||f|| did not
};

/// Fefferman-Stein style comparison ||f||_{L^p(w)} against
/// ||M^#_{s,Theta} f||_{L^p(w)}, with the weighted-theory envelope for the
/// supplied reverse-Holder parameter t.
FSRatioReport fefferman_stein_ratio(const GridFunction& f,
                                    const SharpMaxConfig& cfg, double p,
                                    const GridFunction& weight, double t);

struct DominationReport {
  double sup_ratio = 0.0;  // sup_x M^#(Tf)(x) / M_s(f)(x) above the floor
  double envelope = 0.0;   // N^{|1/s - 1/2|}
  int points_used = 0;
};

/// Pointwise domination of a multi-frequency operator by the maximal
/// function: M^#_{s,Theta}(Tf) against M_s(f) over one common box family.
DominationReport pointwise_domination(const MultiFreqOperator& t,
                                      const GridFunction& f,
                                      const SharpMaxConfig& cfg);

}  // namespace mfcz
