#include "mfcz/bochner.hpp"

#include <algorithm>
#include <cmath>

namespace mfcz {

PlanarDomain PlanarDomain::disk(double radius) {
  require(radius > 0.0, ErrorCode::invalid_argument, "disk: radius > 0");
  return PlanarDomain{"disk", [radius](const Vec& xi) {
                        return radius - std::hypot(xi[0], xi[1]);
                      }};
}

PlanarDomain PlanarDomain::square(double half_side) {
  require(half_side > 0.0, ErrorCode::invalid_argument, "square: side > 0");
  return PlanarDomain{"square", [half_side](const Vec& xi) {
                        return half_side -
                               std::max(std::abs(xi[0]), std::abs(xi[1]));
                      }};
}

PlanarDomain PlanarDomain::annulus(double r_inner, double r_outer) {
  require(0.0 < r_inner && r_inner < r_outer, ErrorCode::invalid_argument,
          "annulus: 0 < r_inner < r_outer");
  return PlanarDomain{"annulus", [r_inner, r_outer](const Vec& xi) {
                        const double r = std::hypot(xi[0], xi[1]);
                        return std::min(r - r_inner, r_outer - r);
                      }};
}

namespace {

bool is_pow2(long m) { return m > 0 && (m & (m - 1)) == 0; }

struct CellCube {
  long a0, a1;  // anchor in units of the side, signed lattice-cell coords
  long side;
};

// signed lattice cell index -> array index
inline int wrap_cell(long k, int M) {
  return static_cast<int>(((k % M) + M) % M);
}

void whitney_descend(const TorusDomain& grid, const PlanarDomain& omega,
                     long min_side, const CellCube& node,
                     std::vector<CellCube>& accepted) {
  const double step = grid.freq_step();
  const double side_freq = static_cast<double>(node.side) * step;
  const Vec center{(node.a0 + 0.5) * side_freq, (node.a1 + 0.5) * side_freq};
  const double d = omega.boundary_distance(center);
  const double half_diag = side_freq * M_SQRT1_2;
  if (d <= -half_diag) return;  // entirely outside (boundary_distance 1-Lipschitz)
  if (d > 0.0 && M_SQRT2 * side_freq <= d) {
    accepted.push_back(node);
    return;
  }
  if (node.side / 2 < min_side) return;
  const long half = node.side / 2;
  for (int da = 0; da < 2; ++da)
    for (int db = 0; db < 2; ++db)
      whitney_descend(grid, omega, min_side,
                      CellCube{node.a0 * 2 + da, node.a1 * 2 + db, half},
                      accepted);
}

}  // namespace

WhitneyCover whitney_cover(const TorusDomain& grid, const PlanarDomain& omega,
                           long min_side_cells) {
  require(grid.dim == 2, ErrorCode::precondition,
          "whitney_cover: two-dimensional frequency lattice required");
  require(min_side_cells >= 2, ErrorCode::precondition,
          "whitney_cover: min_scale must be at least 2 lattice cells");
  require(is_pow2(grid.points) && is_pow2(min_side_cells),
          ErrorCode::precondition,
          "whitney_cover: dyadic structure needs power-of-two sizes");

  WhitneyCover cover;
  cover.grid = grid;
  const long half_lattice = grid.points / 2;
  std::vector<CellCube> accepted;
  // four origin-anchored quadrant cubes tile the frequency lattice
  for (long a0 = -1; a0 <= 0; ++a0)
    for (long a1 = -1; a1 <= 0; ++a1)
      whitney_descend(grid, omega, min_side_cells,
                      CellCube{a0, a1, half_lattice}, accepted);
  require(!accepted.empty(), ErrorCode::precondition,
          "whitney_cover: no admissible cube (domain thinner than min_scale)");

  const double step = grid.freq_step();
  cover.ratio_low = std::numeric_limits<double>::infinity();
  cover.ratio_high = 0.0;
  for (const CellCube& cc : accepted) {
    WhitneyCube cube;
    const double side_freq = static_cast<double>(cc.side) * step;
    cube.box.center = {(cc.a0 + 0.5) * side_freq, (cc.a1 + 0.5) * side_freq};
    cube.box.radius = 0.5 * side_freq;
    cube.side_cells = cc.side;
    cube.scale = static_cast<int>(std::floor(std::log2(cube.box.radius)));
    cube.center_distance = omega.boundary_distance(cube.box.center);
    const double ratio = cube.box.radius / cube.center_distance;
    cover.ratio_low = std::min(cover.ratio_low, ratio);
    cover.ratio_high = std::max(cover.ratio_high, ratio);
    cover.by_scale[cube.scale].push_back(cover.cubes.size());
    cover.cubes.push_back(cube);
  }

  // occupancy: signed cell coords [a*side, (a+1)*side) per axis
  std::vector<char> occupied(grid.size(), 0);
  const int M = grid.points;
  for (const CellCube& cc : accepted)
    for (long i = cc.a0 * cc.side; i < (cc.a0 + 1) * cc.side; ++i)
      for (long j = cc.a1 * cc.side; j < (cc.a1 + 1) * cc.side; ++j)
        occupied[grid.flat_index(wrap_cell(i, M), wrap_cell(j, M))] = 1;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (occupied[idx])
      cover.covered.push_back(idx);
    else if (omega.boundary_distance(grid.freq(idx)) > 0.0)
      cover.collar.push_back(idx);
  }
  return cover;
}

namespace {

// iterate lattice points in the support of the (1+eps)-inflated cube
template <typename F>
void for_each_cube_window(const TorusDomain& grid, const WhitneyCube& cube,
                          double eps, F&& fn) {
  const double step = grid.freq_step();
  const double r = cube.box.radius * (1.0 + eps);
  const long lo0 = static_cast<long>(std::ceil((cube.box.center[0] - r) / step));
  const long hi0 = static_cast<long>(std::floor((cube.box.center[0] + r) / step));
  const long lo1 = static_cast<long>(std::ceil((cube.box.center[1] - r) / step));
  const long hi1 = static_cast<long>(std::floor((cube.box.center[1] + r) / step));
  const int M = grid.points;
  for (long i = std::max(lo0, -(long)M / 2); i <= std::min(hi0, (long)M / 2 - 1); ++i)
    for (long j = std::max(lo1, -(long)M / 2); j <= std::min(hi1, (long)M / 2 - 1); ++j) {
      const Vec xi{i * step, j * step};
      fn(grid.flat_index(wrap_cell(i, M), wrap_cell(j, M)), xi);
    }
}

double cube_bump(const WhitneyCube& cube, const Vec& xi, double eps) {
  const double r = cube.box.radius * (1.0 + eps);
  return bump_profile((xi[0] - cube.box.center[0]) / r) *
         bump_profile((xi[1] - cube.box.center[1]) / r);
}

std::vector<double> bump_sum_field(const TorusDomain& grid,
                                   const WhitneyCover& cover, double eps) {
  std::vector<double> s_eta(grid.size(), 0.0);
  for (const WhitneyCube& cube : cover.cubes)
    for_each_cube_window(grid, cube, eps, [&](std::size_t idx, const Vec& xi) {
      s_eta[idx] += cube_bump(cube, xi, eps);
    });
  return s_eta;
}

}  // namespace

std::vector<GridFunction> partition_of_unity(const WhitneyCover& cover,
                                             double eps) {
  const TorusDomain& grid = cover.grid;
  const std::vector<double> s_eta = bump_sum_field(grid, cover, eps);
  std::vector<GridFunction> chi;
  chi.reserve(cover.cubes.size());
  for (const WhitneyCube& cube : cover.cubes) {
    GridFunction c(grid);
    for_each_cube_window(grid, cube, eps, [&](std::size_t idx, const Vec& xi) {
      if (s_eta[idx] > 0.0)
        c.values[idx] = cube_bump(cube, xi, eps) / s_eta[idx];
    });
    chi.push_back(std::move(c));
  }
  return chi;
}

BRSymbol BRSymbol::disk_classical(double delta, double radius) {
  require(delta > 0.0, ErrorCode::invalid_argument, "BRSymbol: delta > 0");
  const double r2 = radius * radius;
  return BRSymbol{delta, PlanarDomain::disk(radius), [delta, r2](const Vec& xi) {
                    const double v = 1.0 - (xi[0] * xi[0] + xi[1] * xi[1]) / r2;
                    return v > 0.0 ? std::pow(v, delta) : 0.0;
                  }};
}

BRSymbol BRSymbol::from_distance(const PlanarDomain& region, double delta,
                                 const TorusDomain& grid) {
  require(delta > 0.0, ErrorCode::invalid_argument, "BRSymbol: delta > 0");
  const double step = grid.freq_step();
  auto dist_pow = [region, delta](const Vec& xi) {
    const double d = region.boundary_distance(xi);
    return d > 0.0 ? std::pow(d, delta) : 0.0;
  };
  // 5x5 window average at spacing ~ d/8: restores the smooth profile near
  // ridge lines of the distance function
  return BRSymbol{delta, region, [dist_pow, region, step](const Vec& xi) {
                    const double d = region.boundary_distance(xi);
                    if (d <= 0.0) return 0.0;
                    const double w = std::max(step, d / 8.0);
                    double acc = 0.0;
                    for (int a = -2; a <= 2; ++a)
                      for (int b = -2; b <= 2; ++b)
                        acc += dist_pow(
                            Vec{xi[0] + a * w / 2.0, xi[1] + b * w / 2.0});
                    return acc / 25.0;
                  }};
}

GridFunction br_apply(const TorusDomain& grid, const BRSymbol& sym,
                      const GridFunction& f) {
  require(f.domain == grid, ErrorCode::invalid_argument,
          "br_apply: domain mismatch");
  GridFunction hat = dft(f);
  for (std::size_t i = 0; i < grid.size(); ++i)
    hat.values[i] *= sym.eval(grid.freq(i));
  return idft(hat);
}

ScaleDecomposition decompose_scales(const TorusDomain& grid,
                                    const BRSymbol& sym,
                                    const WhitneyCover& cover, double eps) {
  const std::vector<double> s_eta = bump_sum_field(grid, cover, eps);
  ScaleDecomposition dec;
  for (const auto& [scale, idxs] : cover.by_scale) {
    std::vector<double> sigma(grid.size(), 0.0);
    const double unscale = std::pow(2.0, -static_cast<double>(scale) * sym.delta);
    std::vector<Vec> centers;
    for (std::size_t ci : idxs) {
      const WhitneyCube& cube = cover.cubes[ci];
      centers.push_back(cube.box.center);
      for_each_cube_window(grid, cube, eps, [&](std::size_t idx, const Vec& xi) {
        if (s_eta[idx] > 0.0)
          sigma[idx] += unscale * sym.eval(xi) * cube_bump(cube, xi, eps) /
                        s_eta[idx];
      });
    }
    dec.scales.push_back(scale);
    dec.sigma.push_back(std::move(sigma));
    dec.theta.push_back(FrequencySet::make(2, std::move(centers)));
  }
  // mass of the symbol left on the uncovered collar
  double inf_mass = 0.0, l2_mass = 0.0;
  for (std::size_t idx : cover.collar) {
    const double v = sym.eval(grid.freq(idx));
    inf_mass = std::max(inf_mass, v);
    l2_mass += v * v;
  }
  const double dxi = grid.freq_step() * grid.freq_step();
  dec.collar_mass_inf = inf_mass;
  dec.collar_mass_l2 = std::sqrt(l2_mass * dxi);
  return dec;
}

MultiFreqOperator scale_operator(const TorusDomain& grid,
                                 const ScaleDecomposition& dec,
                                 int scale_index) {
  require(scale_index >= 0 &&
              scale_index < static_cast<int>(dec.scales.size()),
          ErrorCode::invalid_argument, "scale_operator: bad index");
  std::vector<cplx> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    m[i] = dec.sigma[scale_index][i];
  return MultiFreqOperator::from_values(grid, dec.theta[scale_index],
                                        std::move(m), "uj");
}

KernelNormReport kernel_norms(const TorusDomain& grid,
                              const std::vector<double>& sigma, int scale) {
  require(grid.dim == 2, ErrorCode::precondition, "kernel_norms: dim 2");
  const double two_j = std::pow(2.0, scale);
  require(grid.side * two_j >= 8.0, ErrorCode::precondition,
          "kernel_norms: torus too small for this scale (need L * 2^j >= 8)");
  KernelNormReport rep;
  rep.scale = scale;
  const double dxi = grid.freq_step() * grid.freq_step();
  double s2 = 0.0;
  GridFunction hat(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s2 += sigma[i] * sigma[i];
    hat.values[i] = sigma[i];
  }
  rep.sigma_l2 = std::sqrt(s2 * dxi);

  GridFunction k = idft(hat);
  const double scale_factor = dxi * static_cast<double>(grid.points) /
                              std::pow(2.0 * M_PI, 2);
  const double hmeas = grid.cell_measure();
  double l1 = 0.0, l2 = 0.0, tail2 = 0.0, tinf = 0.0, far = 0.0;
  const int tail_m = grid.dim;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = std::abs(k.values[i]) * scale_factor;
    Vec x = grid.point(i);
    for (int axis = 0; axis < 2; ++axis)
      x[axis] -= grid.side * std::floor(x[axis] / grid.side + 0.5);
    const double r = std::hypot(x[0], x[1]);
    const double wgt = std::pow(1.0 + two_j * r, tail_m);
    l1 += a;
    l2 += a * a;
    tail2 += wgt * wgt * a * a;
    tinf = std::max(tinf, wgt * a);
    if (std::max(std::abs(x[0]), std::abs(x[1])) >= grid.side / 4.0) far += a;
  }
  rep.kernel_l1 = l1 * hmeas;
  rep.kernel_l2 = std::sqrt(l2 * hmeas);
  rep.tail_l2 = std::sqrt(tail2 * hmeas);
  rep.tail_linf = tinf;
  rep.periodization_tail = l1 > 0.0 ? far / l1 : 0.0;
  return rep;
}

std::vector<UjScanRow> uj_norm_scan(const TorusDomain& grid,
                                    const ScaleDecomposition& dec, double p,
                                    double s, const GridFunction* weight,
                                    double t_weight, int restarts,
                                    std::uint64_t seed) {
  std::vector<UjScanRow> rows;
  for (std::size_t si = 0; si < dec.scales.size(); ++si) {
    const MultiFreqOperator u = scale_operator(grid, dec, static_cast<int>(si));
    UjScanRow row;
    row.scale = dec.scales[si];
    row.n_freqs = dec.theta[si].count();
    if (p == 2.0 && !weight)
      row.estimate = norm_2_exact(u).value;
    else
      row.estimate =
          norm_p_power_method(u, p, weight, restarts, 1e-7, 300, seed).value;
    const double n1 = grid.dim - 1;
    row.envelope_single_scale =
        std::pow(2.0, -static_cast<double>(row.scale) * n1 / s);
    const double nf = static_cast<double>(row.n_freqs);
    row.envelope_mfcz =
        weight ? std::pow(nf, t_weight * p / (2.0 * s) + (0.5 - 1.0 / s))
               : std::pow(nf, std::abs(1.0 / p - 0.5));
    rows.push_back(row);
  }
  return rows;
}

double delta_p(int n, double p) {
  require(n >= 2, ErrorCode::precondition, "delta_p: n >= 2");
  require(p >= 1.0, ErrorCode::precondition, "delta_p: p >= 1");
  const double gap = std::isinf(p) ? 0.5 : std::abs(0.5 - 1.0 / p);
  if (n == 2) return std::max(2.0 * gap - 0.5, 0.0);
  const double hi = 2.0 * (n + 2.0) / n;
  const double lo = 2.0 * (n + 2.0) / (n + 4.0);
  require(std::isinf(p) || p >= hi || p <= lo, ErrorCode::precondition,
          "delta_p: formula not asserted for n >= 3 in the middle p-range");
  return std::max(n * gap - 0.5, 0.0);
}

}  // namespace mfcz
