#include "mfcz/mfop.hpp"

#include <algorithm>
#include <cmath>

namespace mfcz {

double bump_profile(double t) {
  const double u = 1.0 - t * t;
  return u > 0.0 ? u * u * u : 0.0;
}

double plateau_profile(double t) {
  const double a = std::abs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return bump_profile(2.0 * a - 1.0);
}

MultiFreqOperator MultiFreqOperator::from_pieces(const TorusDomain& domain,
                                                 const FrequencySet& theta,
                                                 std::vector<Symbol> pieces,
                                                 std::string kind) {
  require(!pieces.empty(), ErrorCode::invalid_argument,
          "MultiFreqOperator: needs at least one piece");
  MultiFreqOperator op;
  op.domain_ = domain;
  op.theta_ = theta;
  op.pieces_ = std::move(pieces);
  op.kind_ = std::move(kind);
  op.multiplier_.assign(domain.size(), 0.0);
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Vec xi = domain.freq(i);
    cplx s = 0.0;
    for (const Symbol& piece : op.pieces_) s += piece.eval(xi);
    op.multiplier_[i] = s;
    op.sup_abs_ = std::max(op.sup_abs_, std::abs(s));
  }
  return op;
}

MultiFreqOperator MultiFreqOperator::from_values(const TorusDomain& domain,
                                                 const FrequencySet& theta,
                                                 std::vector<cplx> multiplier,
                                                 std::string kind) {
  require(multiplier.size() == domain.size(), ErrorCode::invalid_argument,
          "MultiFreqOperator: multiplier size mismatch");
  MultiFreqOperator op;
  op.domain_ = domain;
  op.theta_ = theta;
  op.kind_ = std::move(kind);
  op.multiplier_ = std::move(multiplier);
  for (const cplx& v : op.multiplier_)
    op.sup_abs_ = std::max(op.sup_abs_, std::abs(v));
  return op;
}

GridFunction MultiFreqOperator::apply(const GridFunction& f) const {
  require(f.domain == domain_, ErrorCode::invalid_argument,
          "MultiFreqOperator: domain mismatch");
  GridFunction g = dft(f);
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] *= multiplier_[i];
  return idft(g);
}

GridFunction MultiFreqOperator::apply_adjoint(const GridFunction& f) const {
  require(f.domain == domain_, ErrorCode::invalid_argument,
          "MultiFreqOperator: domain mismatch");
  GridFunction g = dft(f);
  for (std::size_t i = 0; i < g.size(); ++i)
    g.values[i] *= std::conj(multiplier_[i]);
  return idft(g);
}

GridFunction MultiFreqOperator::apply_piece(int j, const GridFunction& f) const {
  require(j >= 0 && j < piece_count(), ErrorCode::invalid_argument,
          "MultiFreqOperator: piece index out of range");
  require(f.domain == domain_, ErrorCode::invalid_argument,
          "MultiFreqOperator: domain mismatch");
  GridFunction g = dft(f);
  for (std::size_t i = 0; i < g.size(); ++i)
    g.values[i] *= pieces_[j].eval(domain_.freq(i));
  return idft(g);
}

namespace {

GridFunction kernel_of_multiplier(const TorusDomain& d,
                                  const std::vector<cplx>& m) {
  // K = T(delta)/h^dim, so that Tf = h^dim sum K(x-y) f(y)
  GridFunction freq(d);
  const double scale =
      1.0 / (std::sqrt(static_cast<double>(d.size())) * d.cell_measure());
  for (std::size_t i = 0; i < d.size(); ++i) freq.values[i] = m[i] * scale;
  return idft(freq);
}

}  // namespace

GridFunction MultiFreqOperator::kernel() const {
  return kernel_of_multiplier(domain_, multiplier_);
}

GridFunction MultiFreqOperator::piece_kernel(int j) const {
  require(j >= 0 && j < piece_count(), ErrorCode::invalid_argument,
          "MultiFreqOperator: piece index out of range");
  std::vector<cplx> m(domain_.size());
  for (std::size_t i = 0; i < domain_.size(); ++i)
    m[i] = pieces_[j].eval(domain_.freq(i));
  return kernel_of_multiplier(domain_, m);
}

MultiFreqOperator mf_hilbert(const TorusDomain& domain,
                             const FrequencySet& theta) {
  require(theta.dim == 1 && domain.dim == 1, ErrorCode::precondition,
          "mf_hilbert: one-dimensional only");
  const int n = theta.count();
  for (int j = 0; j + 1 < n; ++j)
    require(theta.freqs[j][0] < theta.freqs[j + 1][0], ErrorCode::precondition,
            "mf_hilbert: Theta must be strictly increasing");
  std::vector<Symbol> pieces(n);
  const double inv_n = 1.0 / n;
  for (int j = 0; j < n; ++j) {
    const double xi_j = theta.freqs[j][0];
    const double jump = 2.0 * (j % 2 == 0 ? 1.0 : -1.0);  // 2*(-1)^{j+1}, 0-based
    pieces[j] = Symbol{"mfhilbert_piece", [xi_j, jump, inv_n](const Vec& xi) {
                         return cplx(xi[0] >= xi_j ? jump - inv_n : -inv_n, 0.0);
                       }};
  }
  return MultiFreqOperator::from_pieces(domain, theta, std::move(pieces),
                                        "mfhilbert");
}

Symbol hormander_symbol(const FrequencySet& theta, double width_scale,
                        double sigma_default) {
  const int n = theta.count();
  std::vector<double> sigma(n, sigma_default);
  for (int j = 0; j < n; ++j) {
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double dx = theta.freqs[j][0] - theta.freqs[k][0];
      const double dy = theta.freqs[j][1] - theta.freqs[k][1];
      gap = std::min(gap, std::hypot(dx, dy));
    }
    if (std::isfinite(gap)) sigma[j] = 0.5 * gap * width_scale;
  }
  auto freqs = theta.freqs;
  return Symbol{"hormander", [freqs, sigma](const Vec& xi) {
                  double s = 0.0;
                  for (std::size_t j = 0; j < freqs.size(); ++j) {
                    const double dx = xi[0] - freqs[j][0];
                    const double dy = xi[1] - freqs[j][1];
                    s += bump_profile(std::hypot(dx, dy) / sigma[j]);
                  }
                  return cplx(s, 0.0);
                }};
}

MultiFreqOperator hormander_operator(const TorusDomain& domain,
                                     const FrequencySet& theta,
                                     double width_scale, double sigma_default) {
  // one piece per frequency, each with the collection's gap-adapted width
  const int n = theta.count();
  std::vector<Symbol> pieces;
  for (int j = 0; j < n; ++j) {
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double dx = theta.freqs[j][0] - theta.freqs[k][0];
      const double dy = theta.freqs[j][1] - theta.freqs[k][1];
      gap = std::min(gap, std::hypot(dx, dy));
    }
    const double s =
        std::isfinite(gap) ? 0.5 * gap * width_scale : sigma_default;
    const Vec c = theta.freqs[j];
    pieces.push_back(Symbol{"hormander_piece", [c, s](const Vec& xi) {
                              const double dx = xi[0] - c[0];
                              const double dy = xi[1] - c[1];
                              return cplx(bump_profile(std::hypot(dx, dy) / s),
                                          0.0);
                            }});
  }
  return MultiFreqOperator::from_pieces(domain, theta, std::move(pieces),
                                        "hormander");
}

SymbolDecayCheck hormander_decay_check(const TorusDomain& domain,
                                       const Symbol& symbol,
                                       const FrequencySet& theta) {
  SymbolDecayCheck out;
  const double step = domain.freq_step();
  auto m = [&](double x, double y) { return symbol.eval(Vec{x, y}); };
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Vec xi = domain.freq(i);
    const double dist = dist_to_set(xi, theta);
    if (dist < 2.0 * step) continue;  // the bound degenerates on Theta itself
    const cplx v = m(xi[0], xi[1]);
    out.c0 = std::max(out.c0, std::abs(v));
    const cplx dx =
        (m(xi[0] + step, xi[1]) - m(xi[0] - step, xi[1])) / (2.0 * step);
    double grad = std::abs(dx);
    double hess = std::abs((m(xi[0] + step, xi[1]) - 2.0 * v +
                            m(xi[0] - step, xi[1])) /
                           (step * step));
    if (domain.dim == 2) {
      const cplx dy =
          (m(xi[0], xi[1] + step) - m(xi[0], xi[1] - step)) / (2.0 * step);
      grad += std::abs(dy);
      hess += std::abs((m(xi[0], xi[1] + step) - 2.0 * v +
                        m(xi[0], xi[1] - step)) /
                       (step * step));
    }
    out.c1 = std::max(out.c1, grad * dist);
    out.c2 = std::max(out.c2, hess * dist * dist);
  }
  return out;
}

BumpSumOperator bump_sum_operator(const TorusDomain& domain,
                                  const std::vector<Box>& cubes,
                                  int decay_exponent) {
  require(!cubes.empty(), ErrorCode::invalid_argument,
          "bump_sum_operator: needs at least one cube");
  const int n = static_cast<int>(cubes.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool separated = false;
      for (int axis = 0; axis < domain.dim; ++axis)
        if (std::abs(cubes[i].center[axis] - cubes[j].center[axis]) >=
            cubes[i].radius + cubes[j].radius)
          separated = true;
      require(separated, ErrorCode::precondition,
              "bump_sum_operator: cubes overlap");
    }

  std::vector<Vec> centers(n);
  for (int j = 0; j < n; ++j) centers[j] = cubes[j].center;
  FrequencySet theta = FrequencySet::make(domain.dim, centers);

  const int dim = domain.dim;
  std::vector<Symbol> pieces;
  for (const Box& q : cubes) {
    const Vec c = q.center;
    const double r = q.radius;
    pieces.push_back(Symbol{"bump", [c, r, dim](const Vec& xi) {
                              double v = plateau_profile((xi[0] - c[0]) / r);
                              if (dim == 2)
                                v *= plateau_profile((xi[1] - c[1]) / r);
                              return cplx(v, 0.0);
                            }});
  }

  BumpSumOperator out{
      MultiFreqOperator::from_pieces(domain, theta, std::move(pieces),
                                     "bumpsum"),
      0.0, decay_exponent > 0 ? decay_exponent : domain.dim + 2};
  const int M = out.decay_exponent;
  double rmin = cubes[0].radius, rmax = cubes[0].radius;
  for (const Box& q : cubes) {
    rmin = std::min(rmin, q.radius);
    rmax = std::max(rmax, q.radius);
  }
  // sup over t of the radii sum, on a log grid spanning every cube scale
  const double t_lo = 1e-4 / rmax, t_hi = 1e4 / rmin;
  const int steps = 4000;
  double sup = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(s) / steps);
    double acc = 0.0;
    for (const Box& q : cubes) {
      const double u = q.radius * t;
      acc += std::pow(u, domain.dim + 1) / std::pow(1.0 + u, M);
    }
    sup = std::max(sup, acc);
  }
  out.radii_constant = sup;
  return out;
}

GridFunction modulated_lq_functional(const MultiFreqOperator& t,
                                     const FrequencySet& theta,
                                     const GridFunction& f, double q) {
  require(q >= 1.0, ErrorCode::precondition,
          "modulated_lq_functional: q must be >= 1");
  const TorusDomain& d = f.domain;
  GridFunction acc(d);
  const bool is_sup = std::isinf(q);
  for (int j = 0; j < theta.count(); ++j) {
    GridFunction mod(d);
    const Vec& th = theta.freqs[j];
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Vec x = d.point(i);
      mod.values[i] =
          f.values[i] * std::polar(1.0, th[0] * x[0] + th[1] * x[1]);
    }
    const GridFunction tf = t.apply(mod);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double a = std::abs(tf.values[i]);
      if (is_sup)
        acc.values[i] = std::max(acc.values[i].real(), a);
      else
        acc.values[i] += std::pow(a, q);
    }
  }
  if (!is_sup)
    for (auto& v : acc.values) v = std::pow(v.real(), 1.0 / q);
  return acc;
}

GridFunction rubio_functional(const FrequencySet& theta, const GridFunction& f,
                              double q) {
  require(q >= 1.0, ErrorCode::precondition, "rubio_functional: q >= 1");
  require(theta.dim == 1 && f.domain.dim == 1, ErrorCode::precondition,
          "rubio_functional: one-dimensional only");
  const TorusDomain& d = f.domain;
  const int n = theta.count();
  // bin index of a lattice frequency: number of xi_j <= xi
  auto bin_of = [&](double xi) {
    int b = 0;
    while (b < n && theta.freqs[b][0] <= xi) ++b;
    return b;
  };
  const GridFunction fh = dft(f);
  GridFunction acc(d);
  const bool is_sup = std::isinf(q);
  for (int b = 0; b <= n; ++b) {
    GridFunction piece(d);
    bool any = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (bin_of(d.freq(i)[0]) == b) {
        piece.values[i] = fh.values[i];
        any = true;
      }
    }
    if (!any) continue;
    const GridFunction pf = idft(piece);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double a = std::abs(pf.values[i]);
      if (is_sup)
        acc.values[i] = std::max(acc.values[i].real(), a);
      else
        acc.values[i] += std::pow(a, q);
    }
  }
  if (!is_sup)
    for (auto& v : acc.values) v = std::pow(v.real(), 1.0 / q);
  return acc;
}

double kernel_regularity_constant(const MultiFreqOperator& op) {
  const TorusDomain& d = op.domain();
  const double h = d.spacing();
  std::vector<GridFunction> modulated;
  for (int j = 0; j < op.piece_count(); ++j) {
    GridFunction kj = op.piece_kernel(j);
    const Vec& xi = op.theta().freqs[j];
    for (std::size_t i = 0; i < d.size(); ++i) {
      Vec x = d.point(i);
      // nearest representative of x to 0
      for (int axis = 0; axis < d.dim; ++axis)
        x[axis] -= d.side * std::floor(x[axis] / d.side + 0.5);
      kj.values[i] *= std::polar(1.0, -(xi[0] * x[0] + xi[1] * x[1]));
    }
    modulated.push_back(std::move(kj));
  }
  auto torus_absdist = [&](const Vec& x) {
    double m = 0.0;
    for (int axis = 0; axis < d.dim; ++axis) {
      double t = x[axis] - d.side * std::floor(x[axis] / d.side + 0.5);
      m = std::max(m, std::abs(t));
    }
    return m;
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vec x = d.point(i);
    const double r = torus_absdist(x);
    if (r < 2.0 * h || r > d.side / 4.0) continue;
    int k0, k1;
    d.coords(i, k0, k1);
    const int M = d.points;
    double grad_sum = 0.0;
    for (const GridFunction& kj : modulated) {
      cplx gx = (kj.values[d.flat_index((k0 + 1) % M, k1)] -
                 kj.values[d.flat_index((k0 + M - 1) % M, k1)]) /
                (2.0 * h);
      double g = std::abs(gx);
      if (d.dim == 2) {
        cplx gy = (kj.values[d.flat_index(k0, (k1 + 1) % M)] -
                   kj.values[d.flat_index(k0, (k1 + M - 1) % M)]) /
                  (2.0 * h);
        g += std::abs(gy);
      }
      grad_sum += g;
    }
    worst = std::max(worst, grad_sum * std::pow(r, d.dim + 1));
  }
  return worst;
}

}  // namespace mfcz
