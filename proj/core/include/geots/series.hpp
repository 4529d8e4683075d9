#pragma once

#include <cstdint>
#include <vector>

#include "geots/geometry.hpp"

namespace geots {

using SeriesId = std::uint64_t;

/// A fixed-length sequence of observations tied to a planar location.
struct GeoTimeSeries {
  SeriesId id = 0;
  Point loc{};
  std::vector<double> values;
};

struct ValueRange {
  double min = 0.0;
  double max = 0.0;

  double extent() const { return max - min; }

  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// A validated collection of geolocated time series. All series share the
/// same length `n`, ids are unique, and every value is finite. `bbox` and
/// `value_range` cover all locations and values respectively.
struct Dataset {
  std::vector<GeoTimeSeries> series;
  std::size_t n = 0;
  Mbr bbox{};
  ValueRange value_range{};

  std::size_t size() const { return series.size(); }
};

/// Builds a Dataset, checking the invariants above. Throws
/// std::invalid_argument naming the offending series on violation.
Dataset make_dataset(std::vector<GeoTimeSeries> series);

}  // namespace geots
