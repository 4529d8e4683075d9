#pragma once

// Shared fixtures for unit and acceptance tests: seeded data generators and
// brute-force reference computations kept independent of the library's
// scanning code paths.

#include <cmath>
#include <random>
#include <vector>

#include "geots/oracle.hpp"
#include "geots/query.hpp"

namespace testsupport {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double real(double a, double b) { return a + (b - a) * unit(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }
  std::int64_t integer(std::int64_t a, std::int64_t b) {
    return a + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(b - a + 1)));
  }
  bool flip() { return (gen_() & 1u) != 0; }

 private:
  std::mt19937_64 gen_;
};

/// Random-walk series scattered over a box: low periodicity by construction.
inline geots::Dataset random_walk_dataset(std::size_t count, std::size_t n, std::uint64_t seed,
                                          double box = 1000.0) {
  Rng rng(seed);
  std::vector<geots::GeoTimeSeries> series(count);
  for (std::size_t i = 0; i < count; ++i) {
    series[i].id = i;
    series[i].loc = {rng.real(0.0, box), rng.real(0.0, box)};
    series[i].values.resize(n);
    double v = rng.real(0.0, 100.0);
    for (std::size_t t = 0; t < n; ++t) {
      v += rng.real(-5.0, 5.0);
      series[i].values[t] = v;
    }
  }
  return geots::make_dataset(std::move(series));
}

/// Reference local similarity by explicit interval enumeration; O(n^2),
/// no sweeping or early exits shared with the implementation under test.
inline std::size_t brute_sigma(std::span<const double> a, std::span<const double> b, double eps) {
  std::size_t best = 0;
  for (std::size_t start = 0; start < a.size(); ++start) {
    std::size_t len = 0;
    while (start + len < a.size() && std::fabs(a[start + len] - b[start + len]) <= eps) ++len;
    if (len > best) best = len;
  }
  return best;
}

/// Longest true run in a per-timestamp qualification mask, by enumeration.
inline std::size_t brute_longest_run(const std::vector<bool>& ok) {
  std::size_t best = 0;
  for (std::size_t start = 0; start < ok.size(); ++start) {
    std::size_t len = 0;
    while (start + len < ok.size() && ok[start + len]) ++len;
    if (len > best) best = len;
  }
  return best;
}

/// Plain spatial range scan over locations.
inline std::vector<geots::SeriesId> brute_spatial_range(const geots::Dataset& data,
                                                        geots::Point q, double rho) {
  std::vector<geots::SeriesId> ids;
  for (const auto& t : data.series)
    if (geots::spatial_distance(q, t.loc) <= rho) ids.push_back(t.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

/// A random query spec of the given kind; the query series is a dataset
/// member, value-jittered half of the time.
inline geots::QuerySpec random_spec(const geots::Dataset& data, geots::QueryKind kind,
                                    geots::Method method, Rng& rng) {
  geots::QuerySpec spec;
  spec.kind = kind;
  spec.method = method;
  spec.query = data.series[rng.index(data.series.size())];
  if (rng.flip()) {
    const double jitter = 0.02 * data.value_range.extent();
    for (double& v : spec.query.values) v += rng.real(-jitter, jitter);
  }
  spec.rho = rng.real(0.05, 0.40) * data.bbox.diagonal();
  spec.eps = rng.real(0.01, 0.10) * data.value_range.extent();
  spec.delta = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(data.n) / 2));
  spec.k = static_cast<std::size_t>(rng.integer(1, 30));
  return spec;
}

}  // namespace testsupport
