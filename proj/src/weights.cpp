#include "mfcz/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mfcz {

Weight Weight::from_grid(GridFunction w) {
  for (auto& v : w.values) {
    require(v.imag() == 0.0, ErrorCode::invalid_argument,
            "Weight: values must be real");
    require(v.real() >= 0.0, ErrorCode::precondition,
            "Weight: values must be nonnegative");
    if (v.real() < kFloor) v = kFloor;
  }
  return Weight{std::move(w)};
}

Weight weight_constant(const TorusDomain& d, double c) {
  require(c > 0.0, ErrorCode::invalid_argument, "weight_constant: c > 0");
  return Weight::from_grid(GridFunction(d, c));
}

Weight weight_power(const TorusDomain& d, double a) {
  GridFunction w(d);
  const double h = d.spacing();
  const double mid = d.side / 2.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec x = d.point(i);
    double dist = std::abs(x[0] - mid);
    if (d.dim == 2) dist = std::max(dist, std::abs(x[1] - mid));
    w.values[i] = std::pow(std::max(dist, h), a);
  }
  return Weight::from_grid(std::move(w));
}

Weight weight_two_valued(const TorusDomain& d, double k) {
  GridFunction w(d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec x = d.point(i);
    w.values[i] = x[0] < d.side / 2.0 ? 1.0 : k;
  }
  return Weight::from_grid(std::move(w));
}

Weight weight_random_log_lipschitz(const TorusDomain& d, std::uint64_t seed,
                                   double amplitude) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GridFunction noise(d);
  for (auto& v : noise.values) v = gauss(rng);
  // keep only the lowest few frequencies: smooth log-weight
  GridFunction hat = dft(noise);
  const double cutoff = 4.5 * d.freq_step();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec xi = d.freq(i);
    if (std::hypot(xi[0], xi[1]) > cutoff) hat.values[i] = 0.0;
  }
  GridFunction logw = idft(hat);
  GridFunction w(d);
  double scale = 0.0;
  for (const auto& v : logw.values) scale = std::max(scale, std::abs(v.real()));
  if (scale == 0.0) scale = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    w.values[i] = std::exp(amplitude * logw.values[i].real() / scale);
  return Weight::from_grid(std::move(w));
}

namespace {

// map each box to (avg of a, avg of b)-style reductions in one pass
template <typename Fn>
double sup_over_family(const Weight& w, const BoxFamily& family, Fn&& fn) {
  double sup = 0.0;
  for (const Box& q : family.boxes) {
    const BoxIndexRange r = box_index_range(w.domain(), q);
    if (r.total() == 0) continue;
    sup = std::max(sup, fn(q, r));
  }
  return sup;
}

}  // namespace

double ap_characteristic(const Weight& w, double p, const BoxFamily& family) {
  require(p >= 1.0, ErrorCode::precondition, "ap_characteristic: p >= 1");
  require(!family.boxes.empty(), ErrorCode::precondition,
          "ap_characteristic: empty family");
  const TorusDomain& d = w.domain();
  std::vector<double> vals(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    vals[i] = w.values.values[i].real();
  PrefixSums ps_w(d, vals);
  if (p == 1.0) {
    // sup_Q avg_Q w / min_Q w (essinf realized as the grid min)
    return sup_over_family(w, family, [&](const Box& q, const BoxIndexRange& r) {
      const double avg = ps_w.window_sum(r) / static_cast<double>(r.total());
      double mn = std::numeric_limits<double>::infinity();
      for_each_point_in_box(d, q, [&](std::size_t i) {
        mn = std::min(mn, vals[i]);
      });
      return avg / mn;
    });
  }
  const double pp = p / (p - 1.0);
  std::vector<double> dual(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    dual[i] = std::pow(vals[i], 1.0 - pp);
  PrefixSums ps_dual(d, dual);
  return sup_over_family(w, family, [&](const Box&, const BoxIndexRange& r) {
    const double n = static_cast<double>(r.total());
    const double avg_w = ps_w.window_sum(r) / n;
    const double avg_dual = ps_dual.window_sum(r) / n;
    return avg_w * std::pow(avg_dual, p - 1.0);
  });
}

double rh_characteristic(const Weight& w, double s, const BoxFamily& family) {
  require(s > 1.0, ErrorCode::precondition, "rh_characteristic: s > 1");
  require(!family.boxes.empty(), ErrorCode::precondition,
          "rh_characteristic: empty family");
  const TorusDomain& d = w.domain();
  std::vector<double> vals(d.size()), pows(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    vals[i] = w.values.values[i].real();
    pows[i] = std::pow(vals[i], s);
  }
  PrefixSums ps_w(d, vals), ps_s(d, pows);
  return sup_over_family(w, family, [&](const Box&, const BoxIndexRange& r) {
    const double n = static_cast<double>(r.total());
    const double avg_w = ps_w.window_sum(r) / n;
    const double avg_s = ps_s.window_sum(r) / n;
    return std::pow(avg_s, 1.0 / s) / avg_w;
  });
}

JNReport jn_identity_check(const Weight& w, double r, double s,
                           const BoxFamily& family, double tau) {
  require(r > 1.0 && s > 1.0, ErrorCode::precondition,
          "jn_identity_check: r, s > 1");
  JNReport rep;
  rep.a_r = ap_characteristic(w, r, family);
  rep.rh_s = rh_characteristic(w, s, family);
  GridFunction ws = w.values;
  for (auto& v : ws.values) v = std::pow(v.real(), s);
  rep.power_a = ap_characteristic(Weight::from_grid(std::move(ws)),
                                  1.0 + s * (r - 1.0), family);
  rep.lhs_member = rep.a_r <= tau && rep.rh_s <= tau;
  rep.rhs_member = rep.power_a <= tau;
  rep.agree = rep.lhs_member == rep.rhs_member;
  return rep;
}

ClassMembershipReport class_membership(const Weight& w, double p, double p0,
                                       double q0, const BoxFamily& family,
                                       double tau) {
  require(p0 < p && p < q0, ErrorCode::precondition,
          "class_membership: requires p0 < p < q0");
  ClassMembershipReport rep;
  rep.p = p;
  rep.p0 = p0;
  rep.q0 = q0;
  const double ratio = q0 / p;  // > 1
  rep.t_conjugate = ratio / (ratio - 1.0);
  rep.ap_char = ap_characteristic(w, p / p0, family);
  rep.rh_char = rh_characteristic(w, rep.t_conjugate, family);
  rep.member = rep.ap_char <= tau && rep.rh_char <= tau;
  return rep;
}

}  // namespace mfcz
