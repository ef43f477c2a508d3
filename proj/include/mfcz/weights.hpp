#pragma once

#include <cstdint>
#include <string>

#include "mfcz/torus.hpp"

namespace mfcz {

/// Nonnegative weight on the grid; values below the floor are lifted to it
/// and the event is flagged in reports that care.
struct Weight {
  GridFunction values;
  static constexpr double kFloor = 1e-300;

  static Weight from_grid(GridFunction w);
  const TorusDomain& domain() const { return values.domain; }
};

/// Preset weight constructors.
Weight weight_constant(const TorusDomain& d, double c);
/// max(|x - L/2|, h)^a per axis distance (power weight centered mid-torus).
Weight weight_power(const TorusDomain& d, double a);
/// Two-valued: 1 on the first half of the axis, k on the second.
Weight weight_two_valued(const TorusDomain& d, double k);
/// exp of a smoothed random field (log-Lipschitz-ish), seeded.
Weight weight_random_log_lipschitz(const TorusDomain& d, std::uint64_t seed,
                                   double amplitude = 1.0);

/// Muckenhoupt characteristic sup_Q (avg_Q w)(avg_Q w^{1-p'})^{p-1}; for
/// p = 1, sup_Q (avg_Q w)/(min_Q w).
double ap_characteristic(const Weight& w, double p, const BoxFamily& family);

/// Reverse Holder characteristic sup_Q (avg_Q w^s)^{1/s} / (avg_Q w).
double rh_characteristic(const Weight& w, double s, const BoxFamily& family);

struct JNReport {
  double a_r = 0.0;          // [w]_{A_r}
  double rh_s = 0.0;         // [w]_{RH_s}
  double power_a = 0.0;      // [w^s]_{A_{1+s(r-1)}}
  bool lhs_member = false;   // both characteristics <= tau
  bool rhs_member = false;   // power characteristic <= tau
  bool agree = false;
};

/// The power identity A_r intersect RH_s = { w : w^s in A_{1+s(r-1)} },
/// tested with the membership threshold tau on one common family.
JNReport jn_identity_check(const Weight& w, double r, double s,
                           const BoxFamily& family, double tau = 1e6);

struct ClassMembershipReport {
  double p = 0.0, p0 = 0.0, q0 = 0.0;
  double ap_char = 0.0;      // [w]_{A_{p/p0}}
  double rh_char = 0.0;      // [w]_{RH_{(q0/p)'}}
  double t_conjugate = 0.0;  // (q0/p)'
  bool member = false;
};

/// Membership in W^p(p0, q0) = A_{p/p0} intersect RH_{(q0/p)'}.
ClassMembershipReport class_membership(const Weight& w, double p, double p0,
                                       double q0, const BoxFamily& family,
                                       double tau = 1e6);

}  // namespace mfcz
