#pragma once

#include "geots/query.hpp"

namespace geots {

// Brute-force reference answers by linear scan: every series gets its
// spatial distance and local similarity computed directly. Ground truth
// for tests and --verify runs; shares the tie-break comparators with the
// query engine.

std::vector<Hit> oracle_rr(const Dataset& data, const GeoTimeSeries& query, double rho,
                           double eps, std::size_t delta);
std::vector<Hit> oracle_kr(const Dataset& data, const GeoTimeSeries& query, std::size_t k,
                           double eps, std::size_t delta);
std::vector<Hit> oracle_rk(const Dataset& data, const GeoTimeSeries& query, double rho,
                           double eps, std::size_t k);

/// Dispatches on spec.kind.
std::vector<Hit> oracle_answer(const Dataset& data, const QuerySpec& spec);

}  // namespace geots
