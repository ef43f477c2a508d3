#include "mfcz/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mfcz {

NormEstimate norm_2_exact(const MultiFreqOperator& t) {
  NormEstimate est;
  est.p = 2.0;
  est.exact = true;
  est.value = t.sup_abs();
  // extremizer: the best lattice character
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < t.multiplier().size(); ++i) {
    const double a = std::abs(t.multiplier()[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  GridFunction f(t.domain());
  const Vec xi = t.domain().freq(best);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec x = t.domain().point(i);
    f.values[i] = std::polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
  }
  est.extremizer = std::move(f);
  return est;
}

namespace {

double norm_pw(const GridFunction& f, double p, const GridFunction* w) {
  return w ? lp_norm_weighted(f, p, *w) : lp_norm(f, p);
}

cplx phase_of(const cplx& z) {
  const double a = std::abs(z);
  return a > 0.0 ? z / a : cplx(1.0, 0.0);
}

// candidate starting iterates
std::vector<GridFunction> starting_iterates(const MultiFreqOperator& t,
                                            int restarts,
                                            std::uint64_t seed) {
  const TorusDomain& d = t.domain();
  std::vector<GridFunction> starts;
  {
    GridFunction ones(d, 1.0);
    starts.push_back(std::move(ones));
  }
  {
    GridFunction spike(d);
    spike.values[0] = 1.0;
    starts.push_back(std::move(spike));
  }
  {
    // Dirichlet kernel over Theta (adversarial for multi-frequency symbols)
    GridFunction dk(d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Vec x = d.point(i);
      cplx s = 0.0;
      for (const Vec& xi : t.theta().freqs)
        s += std::polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
      dk.values[i] = s;
    }
    starts.push_back(std::move(dk));
  }
  {
    // best lattice character: an exact fixed point at p = 2
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < t.multiplier().size(); ++i) {
      const double a = std::abs(t.multiplier()[i]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    GridFunction ch(d);
    const Vec xi = d.freq(best);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Vec x = d.point(i);
      ch.values[i] = std::polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
    }
    starts.push_back(std::move(ch));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(starts.size()) < restarts) {
    GridFunction g(d);
    for (auto& v : g.values) v = cplx(gauss(rng), gauss(rng));
    starts.push_back(std::move(g));
  }
  starts.resize(std::max<std::size_t>(1, std::min<std::size_t>(
                                             starts.size(),
                                             static_cast<std::size_t>(
                                                 std::max(restarts, 4)))));
  return starts;
}

}  // namespace

NormEstimate norm_p_power_method(const MultiFreqOperator& t, double p,
                                 const GridFunction* weight, int restarts,
                                 double tol, int max_iter,
                                 std::uint64_t seed) {
  require(p > 1.0 && std::isfinite(p), ErrorCode::precondition,
          "norm_p_power_method: p must lie in (1, infinity)");
  const TorusDomain& d = t.domain();
  if (weight) {
    require(weight->domain == d, ErrorCode::invalid_argument,
            "norm_p_power_method: weight domain mismatch");
    for (const auto& v : weight->values)
      require(v.real() > 0.0, ErrorCode::precondition,
              "norm_p_power_method: weight must be strictly positive");
  }
  const double pp = p / (p - 1.0);

  NormEstimate best;
  best.p = p;
  best.weighted = weight != nullptr;
  best.exact = false;
  best.value = -1.0;

  for (const GridFunction& start : starting_iterates(t, restarts, seed)) {
    GridFunction f = start;
    const double n0 = norm_pw(f, p, weight);
    if (!(n0 > 0.0)) continue;
    for (auto& v : f.values) v /= n0;

    std::vector<double> history;
    double objective = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < max_iter; ++it) {
      const GridFunction tf = t.apply(f);
      const double tf_norm = norm_pw(tf, p, weight);
      if (!(tf_norm > 0.0)) break;
      // g-update: g = dual_p(Tf), unit ball of L^{p'}(w); objective = ||Tf||
      GridFunction g(d);
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double a = std::abs(tf.values[i]);
        g.values[i] = std::pow(a, p - 1.0) * phase_of(tf.values[i]);
      }
      const double gn = norm_pw(g, pp, weight);
      for (auto& v : g.values) v /= gn;
      if (!history.empty() && tf_norm < history.back() - 1e-12 * tf_norm)
        fail(ErrorCode::numeric,
             "norm_p_power_method: objective decreased (internal error)");
      const double prev = history.empty() ? 0.0 : history.back();
      history.push_back(tf_norm);
      objective = tf_norm;
      if (it > 0 && std::abs(tf_norm - prev) <= tol * tf_norm) {
        converged = true;
        break;
      }
      // f-update: maximize Re<f, T*(g w)>_dx over the unit ball of L^p(w)
      GridFunction gw = g;
      if (weight)
        for (std::size_t i = 0; i < d.size(); ++i)
          gw.values[i] *= weight->values[i].real();
      GridFunction v = t.apply_adjoint(gw);
      if (weight)
        for (std::size_t i = 0; i < d.size(); ++i)
          v.values[i] /= weight->values[i].real();
      GridFunction fn(d);
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double a = std::abs(v.values[i]);
        fn.values[i] = std::pow(a, pp - 1.0) * phase_of(v.values[i]);
      }
      const double fnn = norm_pw(fn, p, weight);
      if (!(fnn > 0.0)) break;
      for (auto& w2 : fn.values) w2 /= fnn;
      f = std::move(fn);
    }
    if (objective > best.value) {
      best.value = objective;
      best.iterations = it;
      best.converged = converged;
      best.history = std::move(history);
      best.extremizer = std::move(f);
    }
  }
  require(best.value >= 0.0, ErrorCode::numeric,
          "norm_p_power_method: no admissible start");
  return best;
}

GrowthFit fit_growth(const std::vector<double>& x,
                     const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 4, ErrorCode::precondition,
          "fit_growth: need at least 4 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::precondition,
            "fit_growth: log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  require(vx > 0.0, ErrorCode::precondition,
          "fit_growth: degenerate sweep (zero variance)");
  GrowthFit fit;
  fit.points = static_cast<int>(lx.size());
  fit.exponent = cxy / vx;
  fit.constant = std::exp((sy - fit.exponent * sx) / n);
  fit.r2 = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

double weighted_growth_exponent(double t, double p, double s) {
  return t * p / (s * std::min(2.0, s)) + std::abs(0.5 - 1.0 / s);
}

GrowthScan growth_regression(
    const std::function<MultiFreqOperator(int)>& family,
    const std::vector<int>& n_sweep, double p, const GridFunction* weight,
    std::optional<double> envelope_exponent, std::optional<double> t_weight,
    std::optional<double> s_weight, int restarts, std::uint64_t seed) {
  require(n_sweep.size() >= 4, ErrorCode::precondition,
          "growth_regression: need >= 4 sweep values");
  GrowthScan scan;
  if (envelope_exponent) {
    scan.envelope_exponent = *envelope_exponent;
  } else if (t_weight && s_weight) {
    scan.gamma = weighted_growth_exponent(*t_weight, p, *s_weight);
    scan.gamma_interesting = *scan.gamma < 1.0;
    scan.envelope_exponent = *scan.gamma;
  } else {
    scan.envelope_exponent = std::abs(1.0 / p - 0.5);
  }
  std::vector<double> xs, ys;
  for (int n : n_sweep) {
    const MultiFreqOperator t = family(n);
    NormEstimate est;
    if (p == 2.0 && !weight)
      est = norm_2_exact(t);
    else
      est = norm_p_power_method(t, p, weight, restarts, 1e-8, 600, seed);
    GrowthRow row;
    row.sweep = static_cast<double>(n);
    row.estimate = est.value;
    row.envelope = std::pow(row.sweep, scan.envelope_exponent);
    row.ratio = row.estimate / row.envelope;
    scan.rows.push_back(row);
    xs.push_back(row.sweep);
    ys.push_back(std::max(row.estimate, 1e-300));
  }
  scan.fit = fit_growth(xs, ys);
  return scan;
}

}  // namespace mfcz
