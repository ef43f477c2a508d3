#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "mfcz/error.hpp"

namespace mfcz {

using cplx = std::complex<double>;

/// A point or frequency vector; only the first `dim` entries are meaningful,
/// the rest are zero.
using Vec = std::array<double, 2>;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

/// Periodic lattice [0,L)^dim sampled with M points per dimension.
/// The frequency lattice is (2*pi/L) * {-M/2, ..., M/2 - 1} per dimension.
struct TorusDomain {
  int dim = 1;       // 1 or 2
  double side = 1.0; // L
  int points = 2;    // M, even

  static TorusDomain make(int dim, double side, int points);

  double spacing() const { return side / points; }            // h
  double freq_step() const;                                   // 2*pi/L
  double nyquist() const { return freq_step() * (points / 2); }
  std::size_t size() const;                                   // M^dim
  double cell_measure() const;                                // h^dim

  /// Signed lattice frequency index for array index k in [0,M):
  /// k for k < M/2, k - M otherwise (standard FFT layout).
  int signed_index(int k) const { return k < points / 2 ? k : k - points; }
  double freq_component(int k) const { return freq_step() * signed_index(k); }

  std::size_t flat_index(int k0, int k1 = 0) const;
  void coords(std::size_t idx, int& k0, int& k1) const;
  Vec point(std::size_t idx) const;
  Vec freq(std::size_t idx) const;

  /// Nearest lattice array index for a frequency component; also reports the
  /// snap distance.
  int snap_freq_component(double xi, double* snap_dist = nullptr) const;

  bool operator==(const TorusDomain&) const = default;
};

/// Complex-valued function sampled on a TorusDomain.
struct GridFunction {
  TorusDomain domain;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(const TorusDomain& d, cplx fill = 0.0)
      : domain(d), values(d.size(), fill) {}

  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

/// Axis-aligned box on the torus: center plus radius in the l-infinity
/// metric, so a Box is an interval (1D) or square (2D).
struct Box {
  Vec center{0.0, 0.0};
  double radius = 0.0;

  Box dilated(double lambda) const { return Box{center, lambda * radius}; }
};

/// Per-dimension index window [first, first+count) (mod M) of the grid
/// points lying in a box. count is capped at M.
struct BoxIndexRange {
  std::array<long, 2> first{0, 0};
  std::array<long, 2> count{0, 0};
  int dim = 1;
  std::size_t total() const {
    std::size_t t = static_cast<std::size_t>(count[0]);
    if (dim == 2) t *= static_cast<std::size_t>(count[1]);
    return t;
  }
};

BoxIndexRange box_index_range(const TorusDomain& d, const Box& q);

/// Number of lattice points in Q times h^dim; the discrete measure used for
/// every average in the library.
double box_measure(const TorusDomain& d, const Box& q);

/// Visit every grid point in Q: callback(flat_index).
template <typename F>
void for_each_point_in_box(const TorusDomain& d, const Box& q, F&& f) {
  const BoxIndexRange r = box_index_range(d, q);
  const long M = d.points;
  if (d.dim == 1) {
    for (long a = 0; a < r.count[0]; ++a)
      f(static_cast<std::size_t>(((r.first[0] + a) % M + M) % M));
    return;
  }
  for (long a = 0; a < r.count[0]; ++a) {
    const long k0 = ((r.first[0] + a) % M + M) % M;
    for (long b = 0; b < r.count[1]; ++b) {
      const long k1 = ((r.first[1] + b) % M + M) % M;
      f(d.flat_index(static_cast<int>(k0), static_cast<int>(k1)));
    }
  }
}

/// Unitary discrete Fourier transform; Parseval holds exactly in both the
/// raw and the h^dim-weighted l2 norms.
GridFunction dft(const GridFunction& f);
GridFunction idft(const GridFunction& f);

/// (sum |f|^p h^dim)^(1/p); p = infinity gives max |f|.
double lp_norm(const GridFunction& f, double p);
double lp_norm_weighted(const GridFunction& f, double p, const GridFunction& w);

/// ( (1/#Q) sum_{x in Q} |f(x)|^p )^(1/p).
double box_average(const GridFunction& f, const Box& q, double p);

/// Finite surrogate for "all balls": every dyadic box of the grid plus
/// half-shifted copies, scales from one pixel up to side L/2.
struct BoxFamily {
  std::vector<Box> boxes;

  static BoxFamily shifted_dyadic(const TorusDomain& d, int min_scale_px = 1,
                                  int max_scale_px = 0 /* 0 = M/2 */);
};

/// Hardy-Littlewood style maximal function over the family:
/// at x, sup over boxes containing x of box_average(f, Q, p).
GridFunction maximal_function(const GridFunction& f, const BoxFamily& family,
                              double p);

/// Periodic prefix sums of a real array derived from f (pointwise transform
/// t applied first), used for O(1) box sums.
class PrefixSums {
 public:
  PrefixSums(const TorusDomain& d, const std::vector<double>& data);
  /// Sum over the index window given by r (windows wrap modulo M).
  double window_sum(const BoxIndexRange& r) const;

 private:
  TorusDomain domain_;
  std::vector<double> acc_;  // (M+1) or (M+1)^2 inclusive-exclusive table
  double line_sum(long first, long count, const double* row) const;
};

class PrefixSumsComplex {
 public:
  PrefixSumsComplex(const TorusDomain& d, const std::vector<cplx>& data);
  cplx window_sum(const BoxIndexRange& r) const;

 private:
  TorusDomain domain_;
  std::vector<cplx> acc_;
};

}  // namespace mfcz
