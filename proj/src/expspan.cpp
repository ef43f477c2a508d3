#include "mfcz/expspan.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mfcz {

Vec centered_offset(const TorusDomain& d, const Vec& x, const Vec& center) {
  Vec u{0.0, 0.0};
  for (int axis = 0; axis < d.dim; ++axis) {
    double t = x[axis] - center[axis];
    t -= d.side * std::floor(t / d.side + 0.5);
    u[axis] = t;
  }
  return u;
}

namespace {

// h * sum_{m=0}^{K-1} exp(i theta (u0 + m h)), the closed-form 1D window sum.
cplx geometric_window(double theta, double u0, long K, double h) {
  if (K <= 0) return 0.0;
  const double phase_step = theta * h;
  const cplx lead = std::polar(h, theta * u0);
  // near-degenerate ratio: exact constant-phase limit
  if (std::abs(2.0 * std::sin(0.5 * phase_step)) * K < 1e-8)
    return lead * static_cast<double>(K) *
           std::polar(1.0, 0.5 * phase_step * (K - 1));
  const cplx r = std::polar(1.0, phase_step);
  return lead * (std::polar(1.0, phase_step * K) - 1.0) / (r - 1.0);
}

// Per-axis offset (relative to the box center) of the first grid point of
// the window, plus the point count.
void window_geometry(const TorusDomain& d, const Box& q, double u0[2],
                     long count[2]) {
  const BoxIndexRange r = box_index_range(d, q);
  const double h = d.spacing();
  u0[1] = 0.0;
  count[1] = 1;
  for (int axis = 0; axis < d.dim; ++axis) {
    // unwrapped start of the half-open window [c - r, c + r), which is
    // anchored at [c - L/2, c + L/2) when it covers the whole axis
    const double reff = std::min(q.radius, 0.5 * d.side);
    const double lo = q.center[axis] - reff;
    double x = r.first[axis] * h;
    x -= d.side * std::floor((x - lo) / d.side + 1e-9);
    u0[axis] = x - q.center[axis];
    count[axis] = r.count[axis];
  }
}

}  // namespace

WindowGeometry box_window_geometry(const TorusDomain& d, const Box& q) {
  WindowGeometry g;
  double u0[2];
  long count[2];
  window_geometry(d, q, u0, count);
  for (int axis = 0; axis < d.dim; ++axis) {
    g.u0[axis] = u0[axis];
    g.count[axis] = count[axis];
  }
  return g;
}

cplx SpanElement::eval(const Vec& x) const {
  cplx s = 0.0;
  for (int j = 0; j < theta.count(); ++j) {
    const Vec& xi = theta.freqs[j];
    s += coeffs[j] * std::polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
  }
  return s;
}

cplx SpanElement::eval_periodic(const TorusDomain& d, const Vec& x) const {
  const Vec u = centered_offset(d, x, anchor);
  cplx s = 0.0;
  for (int j = 0; j < theta.count(); ++j) {
    const Vec& xi = theta.freqs[j];
    const double ph = xi[0] * (anchor[0] + u[0]) + xi[1] * (anchor[1] + u[1]);
    s += coeffs[j] * std::polar(1.0, ph);
  }
  return s;
}

GridFunction SpanElement::sample(const TorusDomain& d) const {
  GridFunction g(d);
  for (std::size_t i = 0; i < g.size(); ++i)
    g.values[i] = eval_periodic(d, d.point(i));
  return g;
}

GramSystem::GramSystem(const TorusDomain& domain, const FrequencySet& theta,
                       const Box& region)
    : domain_(domain), theta_(theta), region_(region) {
  require(theta.dim == domain.dim, ErrorCode::invalid_argument,
          "GramSystem: dimension mismatch");
  const int n = theta.count();
  double u0[2];
  long count[2];
  window_geometry(domain, region, u0, count);
  double pts = static_cast<double>(count[0]);
  if (domain.dim == 2) pts *= static_cast<double>(count[1]);
  require(pts > 0.0, ErrorCode::precondition,
          "GramSystem: region contains no grid points");
  measure_ = domain.cell_measure() * pts;

  gram_.resize(n, n);
  const double h = domain.spacing();
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k <= j; ++k) {
      cplx e = 1.0;
      for (int axis = 0; axis < domain.dim; ++axis) {
        const double th = theta.freqs[j][axis] - theta.freqs[k][axis];
        e *= geometric_window(th, u0[axis], count[axis], h);
      }
      gram_(j, k) = e;
      gram_(k, j) = std::conj(e);
    }
  }

  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const double dx = theta.freqs[j][0] - theta.freqs[k][0];
      const double dy = theta.freqs[j][1] - theta.freqs[k][1];
      if (std::hypot(dx, dy) * region.radius < 1e-6)
        clustered_.emplace_back(j, k);
    }

  eig_.compute(gram_.conjugate());
  require(eig_.info() == Eigen::Success, ErrorCode::numeric,
          "GramSystem: eigendecomposition failed");
  const double floor = 1e-12 * measure_;
  floored_evals_ = eig_.eigenvalues();
  for (int j = 0; j < n; ++j) {
    if (floored_evals_[j] < floor) {
      floored_evals_[j] = floor;
      ++floored_;
    }
  }
  condition_ = floored_evals_[n - 1] / floored_evals_[0];
  if (floored_ > n / 2) {
    std::ostringstream msg;
    msg << "GramSystem: rank collapse beyond regularization floor;"
        << " near-duplicate frequency pairs:";
    for (auto [a, b] : clustered_) msg << " (" << a << "," << b << ")";
    fail(ErrorCode::numeric, msg.str());
  }
}

Eigen::VectorXcd GramSystem::solve_normal(const Eigen::VectorXcd& m) const {
  const Eigen::VectorXcd y = eig_.eigenvectors().adjoint() * m;
  const Eigen::VectorXcd z = y.array() / floored_evals_.array().cast<cplx>();
  return eig_.eigenvectors() * z;
}

double GramSystem::inverse_quadratic_form(const Vec& x) const {
  const int n = theta_.count();
  const Vec u = centered_offset(domain_, x, region_.center);
  Eigen::VectorXcd v(n);
  for (int j = 0; j < n; ++j) {
    const Vec& xi = theta_.freqs[j];
    v[j] = std::polar(1.0, -(xi[0] * u[0] + xi[1] * u[1]));
  }
  const Eigen::VectorXcd y = eig_.eigenvectors().adjoint() * v;
  double q = 0.0;
  for (int j = 0; j < n; ++j) q += std::norm(y[j]) / floored_evals_[j];
  return q;
}

double GramSystem::energy(const Eigen::VectorXcd& c) const {
  return std::real(c.dot(gram_.conjugate() * c));
}

Eigen::VectorXcd box_moments(const GridFunction& f, const FrequencySet& theta,
                             const Box& q, const Vec& center) {
  const int n = theta.count();
  const TorusDomain& d = f.domain;
  std::vector<std::size_t> pts;
  for_each_point_in_box(d, q, [&](std::size_t i) { pts.push_back(i); });
  Eigen::VectorXcd m = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const Vec& xi = theta.freqs[j];
    cplx s = 0.0;
    for (std::size_t i : pts) {
      const Vec u = centered_offset(d, d.point(i), center);
      s += f.values[i] * std::polar(1.0, -(xi[0] * u[0] + xi[1] * u[1]));
    }
    m[j] = s * d.cell_measure();
  }
  return m;
}

namespace {

SpanElement to_absolute(const FrequencySet& theta, const Eigen::VectorXcd& c,
                        const Vec& center) {
  Eigen::VectorXcd abs_c(c.size());
  for (int j = 0; j < c.size(); ++j) {
    const Vec& xi = theta.freqs[j];
    abs_c[j] = c[j] * std::polar(1.0, -(xi[0] * center[0] + xi[1] * center[1]));
  }
  return SpanElement{theta, abs_c, center};
}

// E(m, j) = e^{i xi_j . u_m} over the window points (centered coordinates).
Eigen::MatrixXcd basis_matrix(const TorusDomain& d, const FrequencySet& theta,
                              const std::vector<std::size_t>& pts,
                              const Vec& center) {
  const int n = theta.count();
  Eigen::MatrixXcd E(static_cast<long>(pts.size()), n);
  for (long m = 0; m < static_cast<long>(pts.size()); ++m) {
    const Vec u = centered_offset(d, d.point(pts[m]), center);
    for (int j = 0; j < n; ++j) {
      const Vec& xi = theta.freqs[j];
      E(m, j) = std::polar(1.0, xi[0] * u[0] + xi[1] * u[1]);
    }
  }
  return E;
}

}  // namespace

SpanElement project_l2(const GridFunction& f, const FrequencySet& theta,
                       const Box& q, const Box& target_region) {
  GramSystem gs(f.domain, theta, target_region);
  const Eigen::VectorXcd m = box_moments(f, theta, q, target_region.center);
  const Eigen::VectorXcd c = gs.solve_normal(m);
  return to_absolute(theta, c, target_region.center);
}

ProjectLsResult project_ls(const GridFunction& f, const FrequencySet& theta,
                           const Box& q, const Box& target_region, double s,
                           int max_iter, bool strict) {
  require(s > 1.0 && std::isfinite(s), ErrorCode::precondition,
          "project_ls: s must be in (1, infinity)");
  const TorusDomain& d = f.domain;
  const int n = theta.count();

  std::vector<std::size_t> pts;
  for_each_point_in_box(d, target_region,
                        [&](std::size_t i) { pts.push_back(i); });
  require(!pts.empty(), ErrorCode::precondition,
          "project_ls: target region contains no grid points");
  const long K = static_cast<long>(pts.size());
  const Vec c0 = target_region.center;
  const Eigen::MatrixXcd E = basis_matrix(d, theta, pts, c0);

  Eigen::VectorXcd data(K);
  {
    std::vector<char> in_q(d.size(), 0);
    for_each_point_in_box(d, q, [&](std::size_t i) { in_q[i] = 1; });
    for (long m = 0; m < K; ++m)
      data[m] = in_q[pts[m]] ? f.values[pts[m]] : cplx(0.0);
  }

  const double hmeas = d.cell_measure();
  auto objective = [&](const Eigen::VectorXcd& c) {
    const Eigen::VectorXcd r = data - E * c;
    double acc = 0.0;
    for (long m = 0; m < K; ++m) acc += std::pow(std::abs(r[m]), s);
    return std::pow(acc * hmeas, 1.0 / s);
  };

  // least-squares warm start
  Eigen::MatrixXcd A0 = E.adjoint() * E;
  A0.diagonal().array() += 1e-12 * std::max(1.0, A0.diagonal().real().maxCoeff());
  Eigen::VectorXcd c = A0.ldlt().solve(E.adjoint() * data);
  double obj = objective(c);
  ProjectLsResult res;
  res.history.push_back(obj);

  const double damp_floor = 1e-10 * (1.0 + data.cwiseAbs().maxCoeff());
  const double relax = s <= 2.0 ? 1.0 : 1.0 / (s - 1.0);
  bool converged = std::abs(s - 2.0) < 1e-14;
  int it = 0;
  for (; it < max_iter && !converged; ++it) {
    const Eigen::VectorXcd r = data - E * c;
    Eigen::VectorXd w(K);
    for (long m = 0; m < K; ++m)
      w[m] = std::pow(std::max(std::abs(r[m]), damp_floor), s - 2.0);
    Eigen::MatrixXcd A = E.adjoint() * w.asDiagonal() * E;
    A.diagonal().array() += 1e-12 * A.diagonal().real().maxCoeff();
    const Eigen::VectorXcd c_solve =
        A.ldlt().solve(E.adjoint() * (w.asDiagonal() * data));
    double step = relax;
    Eigen::VectorXcd c_next = c + step * (c_solve - c);
    double obj_next = objective(c_next);
    int backtracks = 0;
    while (obj_next > obj && backtracks < 8) {
      step *= 0.5;
      c_next = c + step * (c_solve - c);
      obj_next = objective(c_next);
      ++backtracks;
    }
    const double drop = obj - obj_next;
    c = c_next;
    obj = obj_next;
    res.history.push_back(obj);
    if (drop >= 0.0 && drop <= 1e-12 * (1.0 + obj)) {
      converged = true;
      break;
    }
  }
  res.element = to_absolute(theta, c, c0);
  res.objective = obj;
  res.iterations = it;
  res.converged = converged;
  if (!converged && strict) {
    std::ostringstream msg;
    msg << "project_ls: IRLS did not converge after " << max_iter
        << " iterations; objective history tail:";
    for (std::size_t i = res.history.size() > 5 ? res.history.size() - 5 : 0;
         i < res.history.size(); ++i)
      msg << " " << res.history[i];
    fail(ErrorCode::numeric, msg.str());
  }
  return res;
}

SpanConstant span_constant(const TorusDomain& domain,
                           const FrequencySet& theta, const Box& q, double p,
                           int starts, std::uint64_t seed) {
  require(p >= 1.0 && p <= 2.0, ErrorCode::precondition,
          "span_constant: p must lie in [1,2]");
  const int n = theta.count();
  const BoxIndexRange qr = box_index_range(domain, q);
  for (int axis = 0; axis < domain.dim; ++axis)
    require(qr.count[axis] >= std::min<long>(domain.points, 16L * n),
            ErrorCode::precondition,
            "span_constant: grid too coarse (need >= 16 * #Theta points per "
            "box axis)");

  const Box q3 = q.dilated(3.0);
  GramSystem gs(domain, theta, q3);

  // exact p = 2 value and its extremizing point
  double best2 = 0.0;
  Vec x2_best = q.center;
  for_each_point_in_box(domain, q, [&](std::size_t i) {
    const Vec x = domain.point(i);
    const double v = gs.inverse_quadratic_form(x);
    if (v > best2) {
      best2 = v;
      x2_best = x;
    }
  });
  const double value2 = std::sqrt(gs.measure() * best2);
  if (p == 2.0) return SpanConstant{value2, false};

  // p < 2: certified lower bound by multi-start maximization of
  // ||phi||_inf(Q) / (avg_{3Q} |phi|^p)^{1/p} over coefficients.
  std::vector<std::size_t> q_pts, t_pts;
  for_each_point_in_box(domain, q, [&](std::size_t i) { q_pts.push_back(i); });
  for_each_point_in_box(domain, q3, [&](std::size_t i) { t_pts.push_back(i); });
  const Vec center = q3.center;
  const Eigen::MatrixXcd Eq = basis_matrix(domain, theta, q_pts, center);
  const Eigen::MatrixXcd Et = basis_matrix(domain, theta, t_pts, center);
  const long Kq = Eq.rows(), Kt = Et.rows();

  auto ratio_of = [&](const Eigen::VectorXcd& c) {
    const Eigen::VectorXcd on_q = Eq * c;
    double sup = 0.0;
    for (long m = 0; m < Kq; ++m) sup = std::max(sup, std::abs(on_q[m]));
    const Eigen::VectorXcd on_t = Et * c;
    double acc = 0.0;
    for (long m = 0; m < Kt; ++m) acc += std::pow(std::abs(on_t[m]), p);
    const double avg = std::pow(acc / static_cast<double>(Kt), 1.0 / p);
    return avg > 0.0 ? sup / avg : 0.0;
  };

  double best = 0.0;
  auto consider = [&](const Eigen::VectorXcd& c) {
    const double r = ratio_of(c);
    if (r > best) best = r;
  };

  // the exact p = 2 extremizer is always a candidate
  {
    const Vec u = centered_offset(domain, x2_best, center);
    Eigen::VectorXcd v(n);
    for (int j = 0; j < n; ++j) {
      const Vec& xi = theta.freqs[j];
      v[j] = std::polar(1.0, -(xi[0] * u[0] + xi[1] * u[1]));
    }
    consider(gs.solve_normal(v));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int iters = 40;
  for (int st = 0; st < starts; ++st) {
    Eigen::VectorXcd c(n);
    for (int j = 0; j < n; ++j) c[j] = cplx(gauss(rng), gauss(rng));
    c /= c.norm();
    consider(c);
    for (int it = 0; it < iters; ++it) {
      // argmax point of |phi| on Q
      const Eigen::VectorXcd on_q = Eq * c;
      long mstar = 0;
      double sup = -1.0;
      for (long m = 0; m < Kq; ++m) {
        const double a = std::abs(on_q[m]);
        if (a > sup) {
          sup = a;
          mstar = m;
        }
      }
      // weighted normal step toward the point-evaluation functional
      const Eigen::VectorXcd on_t = Et * c;
      Eigen::VectorXd w(Kt);
      for (long m = 0; m < Kt; ++m)
        w[m] = std::pow(std::max(std::abs(on_t[m]), 1e-10), p - 2.0);
      Eigen::MatrixXcd A = Et.adjoint() * w.asDiagonal() * Et;
      A.diagonal().array() += 1e-12 * A.diagonal().real().maxCoeff();
      const Eigen::VectorXcd rhs = Eq.row(mstar).adjoint();
      Eigen::VectorXcd c_next = A.ldlt().solve(rhs);
      const double nrm = c_next.norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      c_next /= nrm;
      const bool settled = (c_next - c).norm() < 1e-12 * (1.0 + c.norm());
      c = c_next;
      consider(c);
      if (settled) break;
    }
  }
  return SpanConstant{best, true};
}

EvenPBound span_constant_even_p(const TorusDomain& domain,
                                const FrequencySet& theta, const Box& q,
                                int k, std::uint64_t cap) {
  require(k >= 1, ErrorCode::precondition, "span_constant_even_p: k >= 1");
  const FrequencySet tk = sumset(theta, k, 1e-9, cap);
  const SpanConstant s2 = span_constant(domain, tk, q, 2.0);
  EvenPBound out;
  out.k = k;
  out.bound = std::pow(s2.value, 1.0 / k);
  out.sumset_cardinality = static_cast<std::uint64_t>(tk.count());
  out.sumset_scale = std::pow(static_cast<double>(tk.count()), 1.0 / (2.0 * k));
  out.trivial_bound = std::sqrt(static_cast<double>(theta.count()));
  return out;
}

}  // namespace mfcz
