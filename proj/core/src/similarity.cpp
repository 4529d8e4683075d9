#include "geots/similarity.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "checkpoint_scan.hpp"

namespace geots {

Dataset make_dataset(std::vector<GeoTimeSeries> series) {
  if (series.empty()) throw std::invalid_argument("dataset: no series");

  Dataset data;
  data.n = series.front().values.size();
  if (data.n == 0) throw std::invalid_argument("dataset: series 0 has no values");

  std::unordered_set<SeriesId> seen;
  seen.reserve(series.size());
  data.value_range = {std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};

  for (const auto& t : series) {
    if (!seen.insert(t.id).second)
      throw std::invalid_argument("dataset: duplicate id " + std::to_string(t.id));
    if (t.values.size() != data.n)
      throw std::invalid_argument("dataset: series " + std::to_string(t.id) + " has length " +
                                  std::to_string(t.values.size()) + ", expected " +
                                  std::to_string(data.n));
    if (!std::isfinite(t.loc.x) || !std::isfinite(t.loc.y))
      throw std::invalid_argument("dataset: series " + std::to_string(t.id) +
                                  " has a non-finite location");
    for (double v : t.values)
      if (!std::isfinite(v))
        throw std::invalid_argument("dataset: series " + std::to_string(t.id) +
                                    " contains a non-finite value");
    data.bbox.expand(t.loc);
    for (double v : t.values) {
      data.value_range.min = std::min(data.value_range.min, v);
      data.value_range.max = std::max(data.value_range.max, v);
    }
  }
  data.series = std::move(series);
  return data;
}

Checkpoints place_checkpoints(std::size_t n, std::size_t delta) {
  if (delta < 1) throw std::invalid_argument("place_checkpoints: delta must be >= 1");
  Checkpoints cp;
  cp.delta = delta;
  for (std::size_t pos = delta - 1; pos < n; pos += delta) cp.positions.push_back(pos);
  return cp;
}

std::size_t local_similarity(std::span<const double> a, std::span<const double> b, double eps,
                             std::uint64_t* comparisons) {
  if (a.size() != b.size()) throw std::invalid_argument("local_similarity: lengths differ");
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (comparisons) ++*comparisons;
    if (std::fabs(a[i] - b[i]) <= eps) {
      if (++run > best) best = run;
    } else {
      run = 0;
    }
  }
  return best;
}

std::size_t local_similarity_checkpointed(std::span<const double> a, std::span<const double> b,
                                          double eps, const Checkpoints& cp,
                                          std::uint64_t* comparisons) {
  if (a.size() != b.size())
    throw std::invalid_argument("local_similarity_checkpointed: lengths differ");
  return detail::checkpointed_max_run(
      a.size(), cp, [&](std::size_t i) { return std::fabs(a[i] - b[i]) <= eps; }, comparisons);
}

}  // namespace geots
