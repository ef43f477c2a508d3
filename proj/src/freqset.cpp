#include "mfcz/freqset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace mfcz {

FrequencySet FrequencySet::make(int dim, std::vector<Vec> freqs) {
  require(dim == 1 || dim == 2, ErrorCode::invalid_argument,
          "FrequencySet: dim must be 1 or 2");
  require(!freqs.empty(), ErrorCode::invalid_argument,
          "FrequencySet: needs at least one frequency");
  if (dim == 1) {
    std::sort(freqs.begin(), freqs.end(),
              [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
  }
  for (std::size_t i = 0; i + 1 < freqs.size(); ++i)
    for (std::size_t j = i + 1; j < (dim == 1 ? i + 2 : freqs.size()); ++j) {
      const double dx = freqs[i][0] - freqs[j][0];
      const double dy = freqs[i][1] - freqs[j][1];
      require(dx * dx + dy * dy > 0.0, ErrorCode::invalid_argument,
              "FrequencySet: entries must be distinct");
    }
  return FrequencySet{dim, std::move(freqs)};
}

FrequencySet FrequencySet::make1d(std::vector<double> freqs) {
  std::vector<Vec> v(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) v[i] = vec1(freqs[i]);
  return make(1, std::move(v));
}

FrequencySet FrequencySet::from_preset(const std::string& spec) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const std::size_t next = s.find(':', pos);
      if (next == std::string::npos) {
        parts.push_back(s.substr(pos));
        break;
      }
      parts.push_back(s.substr(pos, next - pos));
      pos = next + 1;
    }
    return parts;
  };
  const auto parts = split(spec);
  require(!parts.empty(), ErrorCode::invalid_argument, "empty theta preset");
  const std::string& kind = parts[0];
  auto arg_int = [&](std::size_t i, const char* what) {
    require(parts.size() > i, ErrorCode::invalid_argument,
            std::string("theta preset missing argument: ") + what);
    return std::stoll(parts[i]);
  };
  if (kind == "arith") {
    const long long n = arg_int(1, "N");
    require(n >= 1, ErrorCode::invalid_argument, "arith:N needs N >= 1");
    std::vector<double> f(n);
    for (long long j = 0; j < n; ++j) f[j] = static_cast<double>(j + 1);
    return make1d(std::move(f));
  }
  if (kind == "random") {
    const long long n = arg_int(1, "N");
    const long long seed = parts.size() > 2 ? std::stoll(parts[2]) : 1;
    require(n >= 1, ErrorCode::invalid_argument, "random:N:seed needs N >= 1");
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> u(-(n + 1.0), n + 1.0);
    std::vector<double> f(n);
    for (auto& x : f) x = u(rng);
    std::sort(f.begin(), f.end());
    // nudge accidental near-collisions apart
    for (std::size_t i = 1; i < f.size(); ++i)
      if (f[i] - f[i - 1] < 1e-6) f[i] = f[i - 1] + 1e-6;
    return make1d(std::move(f));
  }
  if (kind == "cluster") {
    const long long n = arg_int(1, "N");
    require(parts.size() > 2, ErrorCode::invalid_argument,
            "cluster:N:eps needs eps");
    const double eps = std::stod(parts[2]);
    require(n >= 1 && eps > 0.0, ErrorCode::invalid_argument,
            "cluster:N:eps needs N >= 1 and eps > 0");
    std::vector<double> f(n);
    for (long long j = 0; j < n; ++j) f[j] = static_cast<double>(j) * eps;
    return make1d(std::move(f));
  }
  fail(ErrorCode::unknown_name, "unknown theta preset: " + spec +
                                    " (expected arith:N, random:N:seed, "
                                    "cluster:N:eps, or a CSV path)");
}

double dist_to_set(const Vec& xi, const FrequencySet& theta) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& f : theta.freqs) {
    const double dx = xi[0] - f[0];
    const double dy = xi[1] - f[1];
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

namespace {

struct QuantKey {
  long long a, b;
  bool operator==(const QuantKey&) const = default;
};

struct QuantKeyHash {
  std::size_t operator()(const QuantKey& k) const {
    std::size_t h = std::hash<long long>()(k.a);
    h ^= std::hash<long long>()(k.b) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

// One sumset step: A + Theta, deduplicated on a tol-quantized lattice.
std::vector<Vec> add_once(const std::vector<Vec>& a, const FrequencySet& theta,
                          double tol, std::uint64_t cap) {
  std::unordered_set<QuantKey, QuantKeyHash> seen;
  std::vector<Vec> out;
  seen.reserve(a.size() * theta.freqs.size());
  for (const Vec& x : a) {
    for (const Vec& t : theta.freqs) {
      const Vec s{x[0] + t[0], x[1] + t[1]};
      const QuantKey key{static_cast<long long>(std::llround(s[0] / tol)),
                         static_cast<long long>(std::llround(s[1] / tol))};
      if (seen.insert(key).second) {
        out.push_back(s);
        require(out.size() <= cap, ErrorCode::precondition,
                "sumset: cardinality cap exceeded");
      }
    }
  }
  return out;
}

}  // namespace

FrequencySet sumset(const FrequencySet& theta, int k, double tol,
                    std::uint64_t cap) {
  require(k >= 1, ErrorCode::precondition, "sumset: k must be >= 1");
  std::vector<Vec> acc = theta.freqs;
  for (int step = 1; step < k; ++step) acc = add_once(acc, theta, tol, cap);
  if (theta.dim == 1)
    std::sort(acc.begin(), acc.end(),
              [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
  return FrequencySet{theta.dim, std::move(acc)};
}

std::vector<SumsetGrowthRow> sumset_growth_table(const FrequencySet& theta,
                                                 int k_max, double tol,
                                                 std::uint64_t cap) {
  require(k_max >= 1, ErrorCode::precondition, "growth table: k_max >= 1");
  std::vector<SumsetGrowthRow> rows;
  std::vector<Vec> acc = theta.freqs;
  rows.push_back({1, acc.size()});
  for (int k = 2; k <= k_max; ++k) {
    acc = add_once(acc, theta, tol, cap);
    rows.push_back({k, acc.size()});
  }
  return rows;
}

}  // namespace mfcz
