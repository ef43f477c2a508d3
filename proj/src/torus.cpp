#include "mfcz/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace mfcz {

TorusDomain TorusDomain::make(int dim, double side, int points) {
  require(dim == 1 || dim == 2, ErrorCode::invalid_argument,
          "TorusDomain: dim must be 1 or 2");
  require(side > 0.0, ErrorCode::invalid_argument,
          "TorusDomain: side_length must be positive");
  require(points > 0 && points % 2 == 0, ErrorCode::invalid_argument,
          "TorusDomain: points_per_dim must be even and positive");
  return TorusDomain{dim, side, points};
}

double TorusDomain::freq_step() const { return 2.0 * M_PI / side; }

std::size_t TorusDomain::size() const {
  std::size_t n = static_cast<std::size_t>(points);
  return dim == 1 ? n : n * n;
}

double TorusDomain::cell_measure() const {
  const double h = spacing();
  return dim == 1 ? h : h * h;
}

std::size_t TorusDomain::flat_index(int k0, int k1) const {
  return dim == 1 ? static_cast<std::size_t>(k0)
                  : static_cast<std::size_t>(k0) * points + k1;
}

void TorusDomain::coords(std::size_t idx, int& k0, int& k1) const {
  if (dim == 1) {
    k0 = static_cast<int>(idx);
    k1 = 0;
  } else {
    k0 = static_cast<int>(idx / points);
    k1 = static_cast<int>(idx % points);
  }
}

Vec TorusDomain::point(std::size_t idx) const {
  int k0, k1;
  coords(idx, k0, k1);
  const double h = spacing();
  return {k0 * h, dim == 2 ? k1 * h : 0.0};
}

Vec TorusDomain::freq(std::size_t idx) const {
  int k0, k1;
  coords(idx, k0, k1);
  return {freq_component(k0), dim == 2 ? freq_component(k1) : 0.0};
}

int TorusDomain::snap_freq_component(double xi, double* snap_dist) const {
  const double step = freq_step();
  long m = std::lround(xi / step);
  // reduce into [-M/2, M/2)
  const long M = points;
  long r = ((m % M) + M) % M;
  long signed_m = r < M / 2 ? r : r - M;
  if (snap_dist) *snap_dist = std::abs(xi - static_cast<double>(m) * step);
  long k = signed_m >= 0 ? signed_m : signed_m + M;
  return static_cast<int>(k);
}

// Grid points of a box are taken from the half-open window [c - r, c + r)
// per axis; this keeps dyadic siblings exactly disjoint on the grid, which
// the decomposition relies on. The discrete measure is h^dim * #points.
BoxIndexRange box_index_range(const TorusDomain& d, const Box& q) {
  require(q.radius > 0.0, ErrorCode::invalid_argument,
          "Box: radius must be positive");
  BoxIndexRange r;
  r.dim = d.dim;
  const double h = d.spacing();
  const double eps = 1e-9;  // in index units, absorbs boundary roundoff
  for (int axis = 0; axis < d.dim; ++axis) {
    const double c = q.center[axis];
    long lo = static_cast<long>(std::ceil((c - q.radius) / h - eps));
    const long hi = static_cast<long>(std::ceil((c + q.radius) / h - eps)) - 1;
    long count = hi - lo + 1;
    if (count < 1) count = 0;
    if (count > d.points) {
      // window covers the whole axis; anchor it at [c - L/2, c + L/2)
      count = d.points;
      lo = static_cast<long>(std::ceil((c - 0.5 * d.side) / h - eps));
    }
    r.first[axis] = ((lo % d.points) + d.points) % d.points;
    r.count[axis] = count;
  }
  return r;
}

double box_measure(const TorusDomain& d, const Box& q) {
  const BoxIndexRange r = box_index_range(d, q);
  require(r.total() > 0, ErrorCode::precondition,
          "Box contains no grid points (smaller than grid spacing)");
  return static_cast<double>(r.total()) * d.cell_measure();
}

// ---------------------------------------------------------------------------
// DFT (FFTW backend, unitary normalization)
// ---------------------------------------------------------------------------

namespace {

struct PlanKey {
  int dim;
  int points;
  int sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(dim, points, sign) < std::tie(o.dim, o.points, o.sign);
  }
};

// Plans are cached per (dim, M, direction); execution via fftw_execute_dft on
// caller-owned aligned buffers is thread safe, planning is not.
fftw_plan get_plan(const PlanKey& key, fftw_complex* in, fftw_complex* out) {
  static std::mutex mu;
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_plan p = key.dim == 1
                    ? fftw_plan_dft_1d(key.points, in, out, key.sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED)
                    : fftw_plan_dft_2d(key.points, key.points, in, out,
                                       key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

GridFunction transform(const GridFunction& f, int sign) {
  GridFunction out(f.domain);
  require(f.values.size() == f.domain.size(), ErrorCode::invalid_argument,
          "GridFunction: values size does not match domain");
  std::vector<cplx> in = f.values;  // fftw may not preserve input
  fftw_plan p = get_plan(
      PlanKey{f.domain.dim, f.domain.points, sign},
      reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.values.data()));
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.values.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.domain.size()));
  for (auto& v : out.values) v *= scale;
  return out;
}

}  // namespace

GridFunction dft(const GridFunction& f) { return transform(f, FFTW_FORWARD); }
GridFunction idft(const GridFunction& f) { return transform(f, FFTW_BACKWARD); }

// ---------------------------------------------------------------------------
// Norms and averages
// ---------------------------------------------------------------------------

double lp_norm(const GridFunction& f, double p) {
  require(p >= 1.0, ErrorCode::precondition, "lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (const auto& v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.domain.cell_measure(), 1.0 / p);
}

double lp_norm_weighted(const GridFunction& f, double p,
                        const GridFunction& w) {
  require(p >= 1.0, ErrorCode::precondition, "lp_norm: p must be >= 1");
  require(w.domain == f.domain, ErrorCode::invalid_argument,
          "lp_norm: weight domain mismatch");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (w.values[i].real() > 0.0) m = std::max(m, std::abs(f.values[i]));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w.values[i].real();
    require(wi >= 0.0, ErrorCode::precondition,
            "lp_norm: weight must be nonnegative");
    s += std::pow(std::abs(f.values[i]), p) * wi;
  }
  return std::pow(s * f.domain.cell_measure(), 1.0 / p);
}

double box_average(const GridFunction& f, const Box& q, double p) {
  require(p >= 1.0 || std::isinf(p), ErrorCode::precondition,
          "box_average: p must be >= 1");
  const BoxIndexRange r = box_index_range(f.domain, q);
  require(r.total() > 0, ErrorCode::precondition,
          "box_average: box contains no grid points");
  if (std::isinf(p)) {
    double m = 0.0;
    for_each_point_in_box(f.domain, q,
                          [&](std::size_t i) { m = std::max(m, std::abs(f.values[i])); });
    return m;
  }
  double s = 0.0;
  for_each_point_in_box(f.domain, q, [&](std::size_t i) {
    s += std::pow(std::abs(f.values[i]), p);
  });
  return std::pow(s / static_cast<double>(r.total()), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Box families and the maximal function
// ---------------------------------------------------------------------------

BoxFamily BoxFamily::shifted_dyadic(const TorusDomain& d, int min_scale_px,
                                    int max_scale_px) {
  if (max_scale_px <= 0) max_scale_px = d.points / 2;
  require(min_scale_px >= 1 && min_scale_px <= max_scale_px,
          ErrorCode::invalid_argument, "BoxFamily: bad scale bounds");
  BoxFamily fam;
  const double h = d.spacing();
  for (int s = min_scale_px; s <= max_scale_px; s *= 2) {
    const int n_shift = s >= 2 ? 2 : 1;  // half-shift only resolvable for s >= 2
    for (int sh0 = 0; sh0 < n_shift; ++sh0) {
      for (int sh1 = 0; sh1 < (d.dim == 2 ? n_shift : 1); ++sh1) {
        const double off0 = sh0 * (s / 2) * h;
        const double off1 = sh1 * (s / 2) * h;
        for (int a = 0; a < d.points / s; ++a) {
          const double c0 = off0 + (a + 0.5) * s * h;
          if (d.dim == 1) {
            fam.boxes.push_back(Box{vec1(c0), 0.5 * s * h});
          } else {
            for (int b = 0; b < d.points / s; ++b) {
              const double c1 = off1 + (b + 0.5) * s * h;
              fam.boxes.push_back(Box{vec2(c0, c1), 0.5 * s * h});
            }
          }
        }
      }
    }
  }
  return fam;
}

GridFunction maximal_function(const GridFunction& f, const BoxFamily& family,
                              double p) {
  require(!family.boxes.empty(), ErrorCode::precondition,
          "maximal_function: empty box family");
  require(p >= 1.0, ErrorCode::precondition, "maximal_function: p must be >= 1");
  std::vector<double> powed(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    powed[i] = std::pow(std::abs(f.values[i]), p);
  PrefixSums ps(f.domain, powed);
  GridFunction out(f.domain);
  std::vector<double> best(f.size(), 0.0);
  for (const Box& q : family.boxes) {
    const BoxIndexRange r = box_index_range(f.domain, q);
    if (r.total() == 0) continue;
    const double avg = ps.window_sum(r) / static_cast<double>(r.total());
    for_each_point_in_box(f.domain, q, [&](std::size_t i) {
      if (avg > best[i]) best[i] = avg;
    });
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    out.values[i] = std::pow(best[i], 1.0 / p);
  return out;
}

// ---------------------------------------------------------------------------
// Prefix sums
// ---------------------------------------------------------------------------

PrefixSums::PrefixSums(const TorusDomain& d, const std::vector<double>& data)
    : domain_(d) {
  const long M = d.points;
  if (d.dim == 1) {
    acc_.assign(M + 1, 0.0);
    for (long i = 0; i < M; ++i) acc_[i + 1] = acc_[i] + data[i];
  } else {
    acc_.assign((M + 1) * (M + 1), 0.0);
    for (long i = 0; i < M; ++i)
      for (long j = 0; j < M; ++j)
        acc_[(i + 1) * (M + 1) + (j + 1)] =
            data[i * M + j] + acc_[i * (M + 1) + (j + 1)] +
            acc_[(i + 1) * (M + 1) + j] - acc_[i * (M + 1) + j];
  }
}

namespace {
// Split a wrapped window [first, first+count) mod M into at most two
// contiguous segments [a,b).
inline int split_window(long first, long count, long M, long seg[2][2]) {
  if (count >= M) {
    seg[0][0] = 0;
    seg[0][1] = M;
    return 1;
  }
  first = ((first % M) + M) % M;
  if (first + count <= M) {
    seg[0][0] = first;
    seg[0][1] = first + count;
    return 1;
  }
  seg[0][0] = first;
  seg[0][1] = M;
  seg[1][0] = 0;
  seg[1][1] = first + count - M;
  return 2;
}
}  // namespace

double PrefixSums::window_sum(const BoxIndexRange& r) const {
  const long M = domain_.points;
  long seg0[2][2];
  const int n0 = split_window(r.first[0], r.count[0], M, seg0);
  if (domain_.dim == 1) {
    double s = 0.0;
    for (int a = 0; a < n0; ++a) s += acc_[seg0[a][1]] - acc_[seg0[a][0]];
    return s;
  }
  long seg1[2][2];
  const int n1 = split_window(r.first[1], r.count[1], M, seg1);
  const long W = M + 1;
  double s = 0.0;
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n1; ++b) {
      const long i0 = seg0[a][0], i1 = seg0[a][1];
      const long j0 = seg1[b][0], j1 = seg1[b][1];
      s += acc_[i1 * W + j1] - acc_[i0 * W + j1] - acc_[i1 * W + j0] +
           acc_[i0 * W + j0];
    }
  return s;
}

PrefixSumsComplex::PrefixSumsComplex(const TorusDomain& d,
                                     const std::vector<cplx>& data)
    : domain_(d) {
  const long M = d.points;
  if (d.dim == 1) {
    acc_.assign(M + 1, 0.0);
    for (long i = 0; i < M; ++i) acc_[i + 1] = acc_[i] + data[i];
  } else {
    acc_.assign((M + 1) * (M + 1), 0.0);
    for (long i = 0; i < M; ++i)
      for (long j = 0; j < M; ++j)
        acc_[(i + 1) * (M + 1) + (j + 1)] =
            data[i * M + j] + acc_[i * (M + 1) + (j + 1)] +
            acc_[(i + 1) * (M + 1) + j] - acc_[i * (M + 1) + j];
  }
}

cplx PrefixSumsComplex::window_sum(const BoxIndexRange& r) const {
  const long M = domain_.points;
  long seg0[2][2];
  const int n0 = split_window(r.first[0], r.count[0], M, seg0);
  if (domain_.dim == 1) {
    cplx s = 0.0;
    for (int a = 0; a < n0; ++a) s += acc_[seg0[a][1]] - acc_[seg0[a][0]];
    return s;
  }
  long seg1[2][2];
  const int n1 = split_window(r.first[1], r.count[1], M, seg1);
  const long W = M + 1;
  cplx s = 0.0;
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n1; ++b) {
      const long i0 = seg0[a][0], i1 = seg0[a][1];
      const long j0 = seg1[b][0], j1 = seg1[b][1];
      s += acc_[i1 * W + j1] - acc_[i0 * W + j1] - acc_[i1 * W + j0] +
           acc_[i0 * W + j0];
    }
  return s;
}

}  // namespace mfcz
