#include <stdexcept>
#include <unordered_map>

#include "geots/index.hpp"

namespace geots {

namespace {

using SeriesMap = std::unordered_map<SeriesId, const GeoTimeSeries*>;

SeriesMap map_series(const Dataset& data) {
  SeriesMap map;
  map.reserve(data.series.size());
  for (const auto& t : data.series) map.emplace(t.id, &t);
  return map;
}

const GeoTimeSeries* lookup(const SeriesMap& map, SeriesId id) {
  auto it = map.find(id);
  if (it == map.end())
    throw std::invalid_argument("attach: index references unknown series id " +
                                std::to_string(id));
  return it->second;
}

// Clusters a leaf's raw series over `range` into at most k envelopes.
std::vector<Mbts> leaf_bands(const IndexNode& node, const SeriesMap& series, TimeRange range,
                             const IndexConfig& cfg) {
  std::vector<const GeoTimeSeries*> raw;
  raw.reserve(node.entries.size());
  for (const auto& e : node.entries) raw.push_back(lookup(series, e.id));

  std::vector<std::vector<double>> reps;
  reps.reserve(raw.size());
  for (const GeoTimeSeries* t : raw)
    reps.emplace_back(t->values.begin() + static_cast<std::ptrdiff_t>(range.begin),
                      t->values.begin() + static_cast<std::ptrdiff_t>(range.end));

  std::vector<Mbts> bands;
  for (const auto& group : cluster_k(reps, cfg.k_mbts, cfg.kmeans_seed)) {
    std::vector<const GeoTimeSeries*> members;
    members.reserve(group.size());
    for (std::size_t i : group) members.push_back(raw[i]);
    bands.push_back(build_mbts(members, range));
  }
  return bands;
}

// Clusters the union of the children's envelopes and merges per group.
std::vector<Mbts> inner_bands(const std::vector<const Mbts*>& child_bands,
                              const IndexConfig& cfg) {
  std::vector<std::vector<double>> reps;
  reps.reserve(child_bands.size());
  for (const Mbts* band : child_bands) reps.push_back(envelope_midpoint(*band));

  std::vector<Mbts> bands;
  for (const auto& group : cluster_k(reps, cfg.k_mbts, cfg.kmeans_seed)) {
    std::vector<const Mbts*> parts;
    parts.reserve(group.size());
    for (std::size_t i : group) parts.push_back(child_bands[i]);
    bands.push_back(merge_mbts(parts));
  }
  return bands;
}

void attach_node(IndexNode& node, const SeriesMap& series, std::size_t n,
                 const IndexConfig& cfg) {
  if (node.is_leaf) {
    node.bands = leaf_bands(node, series, TimeRange{0, n}, cfg);
    return;
  }
  std::vector<const Mbts*> child_bands;
  for (auto& child : node.children) {
    attach_node(*child, series, n, cfg);
    for (const Mbts& band : child->bands) child_bands.push_back(&band);
  }
  node.bands = inner_bands(child_bands, cfg);
}

void attach_node_segmented(IndexNode& node, const SeriesMap& series,
                           const std::vector<TimeRange>& ranges, const IndexConfig& cfg) {
  node.seg_bands.segments.resize(ranges.size());
  if (node.is_leaf) {
    for (std::size_t s = 0; s < ranges.size(); ++s) {
      node.seg_bands.segments[s].range = ranges[s];
      node.seg_bands.segments[s].bands = leaf_bands(node, series, ranges[s], cfg);
    }
  } else {
    for (auto& child : node.children) attach_node_segmented(*child, series, ranges, cfg);
    for (std::size_t s = 0; s < ranges.size(); ++s) {
      std::vector<const Mbts*> child_bands;
      for (auto& child : node.children)
        for (const Mbts& band : child->seg_bands.segments[s].bands)
          child_bands.push_back(&band);
      node.seg_bands.segments[s].range = ranges[s];
      node.seg_bands.segments[s].bands = inner_bands(child_bands, cfg);
    }
  }
  link_segments(node.seg_bands);
}

void strip_node(IndexNode& node) {
  for (Mbts& band : node.bands) {
    band.members.clear();
    band.members.shrink_to_fit();
  }
  for (MbtsSegment& seg : node.seg_bands.segments)
    for (Mbts& band : seg.bands) {
      band.members.clear();
      band.members.shrink_to_fit();
    }
  for (auto& child : node.children) strip_node(*child);
}

}  // namespace

void attach_mbts(Index& index, const Dataset& data) {
  if (!index.root) throw std::invalid_argument("attach_mbts: index has no tree");
  const SeriesMap series = map_series(data);
  attach_node(*index.root, series, index.series_length, index.config);
  index.kind = IndexKind::btsr;
}

void attach_segmented_mbts(Index& index, const Dataset& data) {
  if (!index.root) throw std::invalid_argument("attach_segmented_mbts: index has no tree");
  const SeriesMap series = map_series(data);
  const auto ranges = segment_ranges(index.series_length, index.config.segments);
  attach_node_segmented(*index.root, series, ranges, index.config);
  index.kind = IndexKind::sbtsr;
}

void strip_members(Index& index) {
  if (index.root) strip_node(*index.root);
}

Index build_index(const Dataset& data, IndexKind kind, const IndexConfig& config) {
  Index index = build_rtree(data, config);
  if (kind == IndexKind::btsr)
    attach_mbts(index, data);
  else if (kind == IndexKind::sbtsr)
    attach_segmented_mbts(index, data);
  strip_members(index);
  return index;
}

}  // namespace geots
