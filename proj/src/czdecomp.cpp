#include "mfcz/czdecomp.hpp"

#include <algorithm>
#include <cmath>

namespace mfcz {

namespace {

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

struct DyadicBox {
  int scale_px;   // side in pixels
  int a0, a1;     // anchor in units of the side
};

// Stopping time: walk the dyadic tree top-down, keep maximal boxes whose
// |f|-average exceeds the threshold.
void select_boxes(const TorusDomain& d, const PrefixSums& ps, double threshold,
                  std::vector<DyadicBox>& out, const DyadicBox& node) {
  BoxIndexRange r;
  r.dim = d.dim;
  r.first[0] = static_cast<long>(node.a0) * node.scale_px;
  r.count[0] = node.scale_px;
  r.first[1] = static_cast<long>(node.a1) * node.scale_px;
  r.count[1] = d.dim == 2 ? node.scale_px : 1;
  const double pts = static_cast<double>(r.total());
  const double avg = ps.window_sum(r) / pts;
  if (avg > threshold) {
    out.push_back(node);
    return;
  }
  if (node.scale_px == 1) return;
  const int half = node.scale_px / 2;
  for (int da = 0; da < 2; ++da)
    for (int db = 0; db < (d.dim == 2 ? 2 : 1); ++db)
      select_boxes(d, ps, threshold, out,
                   DyadicBox{half, node.a0 * 2 + da, node.a1 * 2 + db});
}

Box to_box(const TorusDomain& d, const DyadicBox& db) {
  const double h = d.spacing();
  const double side = db.scale_px * h;
  Box q;
  q.center[0] = (db.a0 + 0.5) * side;
  q.center[1] = d.dim == 2 ? (db.a1 + 0.5) * side : 0.0;
  q.radius = 0.5 * side;
  return q;
}

}  // namespace

CZDecomposition cz_decompose(const GridFunction& f, double lambda,
                             const FrequencySet& theta, GramCache* cache) {
  require(lambda > 0.0, ErrorCode::precondition,
          "cz_decompose: lambda must be positive");
  require(is_pow2(f.domain.points), ErrorCode::precondition,
          "cz_decompose: dyadic grid needs a power-of-two points_per_dim");
  require(theta.dim == f.domain.dim, ErrorCode::invalid_argument,
          "cz_decompose: dimension mismatch");
  const TorusDomain& d = f.domain;
  const int n = theta.count();
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double threshold = lambda / sqrt_n;

  CZDecomposition out;
  out.lambda = lambda;
  out.theta = theta;

  const double f_l1 = lp_norm(f, 1.0);
  if (f_l1 == 0.0) {
    out.good = f;
    return out;
  }

  std::vector<double> absf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f.values[i]);
  PrefixSums ps(d, absf);

  std::vector<DyadicBox> selected;
  select_boxes(d, ps, threshold, selected, DyadicBox{d.points, 0, 0});
  out.audit.degenerate_all_bad =
      !selected.empty() && selected.front().scale_px == d.points;
  out.audit.box_count = static_cast<int>(selected.size());

  out.good = f;
  double sum_measure = 0.0;
  double c3 = 0.0, c4 = 0.0, good_sup = 0.0, max_cancel = 0.0;
  const double hmeas = d.cell_measure();

  for (const DyadicBox& db : selected) {
    const Box j = to_box(d, db);
    std::shared_ptr<GramSystem> gs;
    if (cache) {
      auto& slot = cache->by_geometry[box_window_geometry(d, j)];
      if (!slot) slot = std::make_shared<GramSystem>(d, theta, j);
      gs = slot;
    } else {
      gs = std::make_shared<GramSystem>(d, theta, j);
    }
    const Eigen::VectorXcd moments = box_moments(f, theta, j, j.center);
    const Eigen::VectorXcd coeffs = gs->solve_normal(moments);

    BadPart part;
    part.box = j;
    part.b = GridFunction(d);
    double l1_j = 0.0, proj_l2_sq = 0.0, proj_sup = 0.0, b_l1 = 0.0;
    for_each_point_in_box(d, j, [&](std::size_t i) {
      const Vec u = centered_offset(d, d.point(i), j.center);
      cplx phi = 0.0;
      for (int k = 0; k < n; ++k) {
        const Vec& xi = theta.freqs[k];
        phi += coeffs[k] * std::polar(1.0, xi[0] * u[0] + xi[1] * u[1]);
      }
      part.b.values[i] = f.values[i] - phi;
      out.good.values[i] = phi;  // g = Pi_J(f 1_J) on J
      l1_j += std::abs(f.values[i]);
      proj_l2_sq += std::norm(phi);
      proj_sup = std::max(proj_sup, std::abs(phi));
      b_l1 += std::abs(part.b.values[i]);
    });
    l1_j *= hmeas;
    b_l1 *= hmeas;
    proj_l2_sq *= hmeas;

    const double measure = box_measure(d, j);
    sum_measure += measure;
    const double avg_j = l1_j / measure;
    c3 = std::max(c3, avg_j * sqrt_n / lambda);
    c4 = std::max(c4, std::sqrt(proj_l2_sq) / (std::sqrt(measure) * lambda));
    if (avg_j > 0.0) good_sup = std::max(good_sup, proj_sup / (sqrt_n * avg_j));

    // cancellation: bhat_J(xi_k) relative to ||b_J||_1
    if (b_l1 > 0.0) {
      const Eigen::VectorXcd bm = box_moments(part.b, theta, j, j.center);
      for (int k = 0; k < n; ++k)
        max_cancel = std::max(max_cancel, std::abs(bm[k]) / b_l1);
    }
    out.bad_parts.push_back(std::move(part));
  }

  out.audit.c1 = sum_measure * lambda / (sqrt_n * f_l1);
  {
    const double g_l2 = lp_norm(out.good, 2.0);
    out.audit.c2 = g_l2 * g_l2 / (f_l1 * sqrt_n * lambda);
  }
  out.audit.c3 = c3;
  out.audit.c4 = c4;
  out.audit.good_sup_constant = good_sup;
  out.audit.max_cancellation_rel = max_cancel;

  // reconstruction residual (g and b_J are exact complements by
  // construction; this measures accumulated rounding)
  {
    GridFunction recon = out.good;
    for (const BadPart& part : out.bad_parts)
      for_each_point_in_box(d, part.box, [&](std::size_t i) {
        recon.values[i] += part.b.values[i];
      });
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      num += std::norm(recon.values[i] - f.values[i]);
      den += std::norm(f.values[i]);
    }
    out.audit.reconstruction_rel = den > 0.0 ? std::sqrt(num / den) : 0.0;
  }
  return out;
}

double weak_type_ratio(const GridFunction& tf, double f_l1) {
  require(f_l1 > 0.0, ErrorCode::precondition,
          "weak_type_ratio: zero L1 norm");
  std::vector<double> mags(tf.size());
  for (std::size_t i = 0; i < tf.size(); ++i) mags[i] = std::abs(tf.values[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  const double hmeas = tf.domain.cell_measure();
  double best = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k)
    best = std::max(best, mags[k] * static_cast<double>(k + 1) * hmeas);
  return best / f_l1;
}

std::vector<GridFunction> weak11_test_family(const TorusDomain& d,
                                             const FrequencySet& theta,
                                             std::mt19937_64& rng,
                                             int dust_draws) {
  std::vector<GridFunction> family;
  const double hmeas = d.cell_measure();

  // single spike of unit mass
  {
    GridFunction f(d);
    f.values[d.size() / 2] = 1.0 / hmeas;
    family.push_back(std::move(f));
  }

  // random +-1 dust: a few spikes per unit cell of the frequency spacing
  {
    std::uniform_int_distribution<std::size_t> pos(0, d.size() - 1);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    const int spikes = 16;
    for (int draw = 0; draw < dust_draws; ++draw) {
      GridFunction f(d);
      for (int s = 0; s < spikes; ++s)
        f.values[pos(rng)] += std::polar(1.0 / (spikes * hmeas), phase(rng));
      family.push_back(std::move(f));
    }
  }

  // Dirichlet-kernel bumps: bump(x) * sum_j c_j e^{i xi_j x} for plain,
  // alternating, and random-phase coefficients
  for (int variant = 0; variant < 3; ++variant) {
    GridFunction f(d);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::vector<cplx> coeff(theta.freqs.size());
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      if (variant == 0)
        coeff[j] = 1.0;
      else if (variant == 1)
        coeff[j] = (j % 2 == 0) ? 1.0 : -1.0;
      else
        coeff[j] = std::polar(1.0, phase(rng));
    }
    const double width = d.side / 8.0;
    const Vec c{d.side / 2.0, d.side / 2.0};
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Vec x = d.point(i);
      double env = bump_profile((x[0] - c[0]) / width);
      if (d.dim == 2) env *= bump_profile((x[1] - c[1]) / width);
      if (env == 0.0) continue;
      cplx s = 0.0;
      for (std::size_t j = 0; j < coeff.size(); ++j) {
        const Vec& xi = theta.freqs[j];
        s += coeff[j] * std::polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
      }
      f.values[i] = env * s;
    }
    const double l1 = lp_norm(f, 1.0);
    if (l1 > 0.0) {
      for (auto& v : f.values) v /= l1;
      family.push_back(std::move(f));
    }
  }
  return family;
}

Weak11Result weak11_experiment(
    const TorusDomain& d,
    const std::function<MultiFreqOperator(const FrequencySet&)>& make_op,
    const std::function<FrequencySet(int)>& make_theta,
    const std::vector<int>& n_sweep, std::uint64_t seed, int dust_draws) {
  require(!n_sweep.empty(), ErrorCode::precondition,
          "weak11_experiment: empty sweep");
  Weak11Result res;
  std::vector<double> xs, ys;
  static const char* kNames[] = {"spike", "dust", "dirichlet", "alternating",
                                 "randomphase"};
  for (int n : n_sweep) {
    const FrequencySet theta = make_theta(n);
    const MultiFreqOperator t = make_op(theta);
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
    const auto family = weak11_test_family(d, theta, rng, dust_draws);
    Weak11Row row;
    row.n_freqs = n;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double l1 = lp_norm(family[i], 1.0);
      const GridFunction tf = t.apply(family[i]);
      const double r = weak_type_ratio(tf, l1);
      if (r > row.sup_ratio) {
        row.sup_ratio = r;
        const std::size_t name_idx =
            i == 0 ? 0
                   : (i < 1 + static_cast<std::size_t>(dust_draws)
                          ? 1
                          : 2 + (i - 1 - dust_draws));
        row.worst_input = kNames[std::min<std::size_t>(name_idx, 4)];
      }
    }
    res.rows.push_back(row);
    xs.push_back(static_cast<double>(n));
    ys.push_back(row.sup_ratio);
  }
  if (xs.size() >= 4) res.fit = fit_growth(xs, ys);
  return res;
}

}  // namespace mfcz
