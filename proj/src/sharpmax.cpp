#include "mfcz/sharpmax.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace mfcz {

namespace {

// Boxes sharing their window geometry (same centered point layout for Q and
// 3Q) have identical Gram systems; cache one factorization per class.
struct ScaleData {
  std::unique_ptr<GramSystem> target;  // Gram over 3Q (centered)
  Eigen::MatrixXcd a_q;                // <e_k, e_j> over Q (centered)
};

using GeometryKey = std::pair<WindowGeometry, WindowGeometry>;

}  // namespace

GridFunction sharp_maximal(const GridFunction& f, const SharpMaxConfig& cfg) {
  require(cfg.s >= 1.0 && std::isfinite(cfg.s), ErrorCode::precondition,
          "sharp_maximal: s must be finite and >= 1");
  const TorusDomain& d = f.domain;
  require(cfg.theta.dim == d.dim, ErrorCode::invalid_argument,
          "sharp_maximal: dimension mismatch");
  const BoxFamily family =
      cfg.family.boxes.empty() ? BoxFamily::shifted_dyadic(d) : cfg.family;
  const int n = cfg.theta.count();

  std::vector<double> best(f.size(), 0.0);

  const bool fast = cfg.mode == SharpMaxConfig::Projection::l2 &&
                    std::abs(cfg.s - 2.0) < 1e-14;
  if (fast) {
    // residual via quadratic forms: avg_Q |f - phi|^2 =
    // (||f||_Q^2 - 2 Re<f,phi>_Q + ||phi||_Q^2) / |Q|, no pointwise phi
    std::vector<double> abs2(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      abs2[i] = std::norm(f.values[i]);
    PrefixSums energy_ps(d, abs2);

    std::map<GeometryKey, ScaleData> cache;
    const double hmeas = d.cell_measure();
    for (const Box& q : family.boxes) {
      const BoxIndexRange qr = box_index_range(d, q);
      if (qr.total() == 0) continue;
      ScaleData& sd = [&]() -> ScaleData& {
        const GeometryKey key{box_window_geometry(d, q),
                              box_window_geometry(d, q.dilated(3.0))};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        ScaleData fresh;
        fresh.target =
            std::make_unique<GramSystem>(d, cfg.theta, q.dilated(3.0));
        GramSystem on_q(d, cfg.theta, q);
        fresh.a_q = on_q.gram().conjugate();
        return cache.emplace(key, std::move(fresh)).first->second;
      }();

      const Eigen::VectorXcd m = box_moments(f, cfg.theta, q, q.center);
      const Eigen::VectorXcd c = sd.target->solve_normal(m);
      const double q_pts = static_cast<double>(qr.total());
      const double f_energy = energy_ps.window_sum(qr) * hmeas;
      const double cross = 2.0 * std::real(c.dot(m));  // 2 Re <f, phi>_Q
      const double phi_energy = std::real(c.dot(sd.a_q * c));
      const double resid2 =
          std::max(0.0, (f_energy - cross + phi_energy) / (q_pts * hmeas));
      const double r = std::sqrt(resid2);
      for_each_point_in_box(d, q, [&](std::size_t i) {
        if (r > best[i]) best[i] = r;
      });
    }
  } else {
    for (const Box& q : family.boxes) {
      const BoxIndexRange qr = box_index_range(d, q);
      if (qr.total() == 0) continue;
      const Box q3 = q.dilated(3.0);
      SpanElement phi;
      if (cfg.mode == SharpMaxConfig::Projection::l2)
        phi = project_l2(f, cfg.theta, q, q3);
      else
        phi = project_ls(f, cfg.theta, q, q3, cfg.s, 200, /*strict=*/false)
                  .element;
      double acc = 0.0;
      for_each_point_in_box(d, q, [&](std::size_t i) {
        acc += std::pow(
            std::abs(f.values[i] - phi.eval_periodic(d, d.point(i))), cfg.s);
      });
      const double r =
          std::pow(acc / static_cast<double>(qr.total()), 1.0 / cfg.s);
      for_each_point_in_box(d, q, [&](std::size_t i) {
        if (r > best[i]) best[i] = r;
      });
    }
  }

  GridFunction out(d);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = best[i];
  return out;
}

FSRatioReport fefferman_stein_ratio(const GridFunction& f,
                                    const SharpMaxConfig& cfg, double p,
                                    const GridFunction& weight, double t) {
  require(p > cfg.s, ErrorCode::precondition,
          "fefferman_stein_ratio: requires p > s");
  FSRatioReport rep;
  rep.f_norm = lp_norm_weighted(f, p, weight);
  const GridFunction sharp = sharp_maximal(f, cfg);
  rep.sharp_norm = lp_norm_weighted(sharp, p, weight);
  const double n = static_cast<double>(cfg.theta.count());
  rep.envelope =
      std::pow(n, (t * p / cfg.s) * std::max(0.5, 1.0 / cfg.s));
  if (rep.sharp_norm <= 1e-14 * rep.f_norm) {
    rep.degenerate = true;  // f sits in the global span
    rep.ratio = 0.0;
  } else {
    rep.ratio = rep.f_norm / rep.sharp_norm;
  }
  return rep;
}

DominationReport pointwise_domination(const MultiFreqOperator& t,
                                      const GridFunction& f,
                                      const SharpMaxConfig& cfg) {
  require(t.theta().count() == cfg.theta.count(), ErrorCode::precondition,
          "pointwise_domination: operator and config Theta differ");
  const TorusDomain& d = f.domain;
  const GridFunction tf = t.apply(f);
  const GridFunction sharp_tf = sharp_maximal(tf, cfg);
  const BoxFamily family =
      cfg.family.boxes.empty() ? BoxFamily::shifted_dyadic(d) : cfg.family;
  const GridFunction ms_f = maximal_function(f, family, cfg.s);

  double sup_f = 0.0;
  for (const auto& v : f.values) sup_f = std::max(sup_f, std::abs(v));
  const double floor = 1e-12 * sup_f;

  DominationReport rep;
  const double n = static_cast<double>(cfg.theta.count());
  rep.envelope = std::pow(n, std::abs(1.0 / cfg.s - 0.5));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double denom = ms_f.values[i].real();
    if (denom <= floor) continue;
    rep.sup_ratio = std::max(rep.sup_ratio, sharp_tf.values[i].real() / denom);
    ++rep.points_used;
  }
  return rep;
}

}  // namespace mfcz
