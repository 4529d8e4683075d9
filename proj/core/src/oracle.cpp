#include <algorithm>

#include "geots/oracle.hpp"

namespace geots {

std::vector<Hit> oracle_rr(const Dataset& data, const GeoTimeSeries& query, double rho,
                           double eps, std::size_t delta) {
  std::vector<Hit> hits;
  for (const auto& t : data.series) {
    const double d = spatial_distance(query.loc, t.loc);
    if (d > rho) continue;
    const std::size_t sigma = local_similarity(query.values, t.values, eps);
    if (sigma >= delta) hits.push_back({t.id, d, sigma});
  }
  std::sort(hits.begin(), hits.end(), hit_less_rr);
  return hits;
}

std::vector<Hit> oracle_kr(const Dataset& data, const GeoTimeSeries& query, std::size_t k,
                           double eps, std::size_t delta) {
  std::vector<Hit> hits;
  for (const auto& t : data.series) {
    const std::size_t sigma = local_similarity(query.values, t.values, eps);
    if (sigma < delta) continue;
    hits.push_back({t.id, spatial_distance(query.loc, t.loc), sigma});
  }
  std::sort(hits.begin(), hits.end(), hit_less_kr);
  if (hits.size() > k) hits.resize(k);
  return hits;
}

std::vector<Hit> oracle_rk(const Dataset& data, const GeoTimeSeries& query, double rho,
                           double eps, std::size_t k) {
  std::vector<Hit> hits;
  for (const auto& t : data.series) {
    const double d = spatial_distance(query.loc, t.loc);
    if (d > rho) continue;
    const std::size_t sigma = local_similarity(query.values, t.values, eps);
    if (sigma >= 1) hits.push_back({t.id, d, sigma});
  }
  std::sort(hits.begin(), hits.end(), hit_less_rk);
  if (hits.size() > k) hits.resize(k);
  return hits;
}

std::vector<Hit> oracle_answer(const Dataset& data, const QuerySpec& spec) {
  switch (spec.kind) {
    case QueryKind::rr:
      return oracle_rr(data, spec.query, spec.rho, spec.eps, spec.delta);
    case QueryKind::kr:
      return oracle_kr(data, spec.query, spec.k, spec.eps, spec.delta);
    case QueryKind::rk:
      return oracle_rk(data, spec.query, spec.rho, spec.eps, spec.k);
  }
  return {};
}

}  // namespace geots
