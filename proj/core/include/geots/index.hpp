#pragma once

#include <filesystem>
#include <memory>

#include "geots/mbts.hpp"

namespace geots {

enum class IndexKind : std::uint8_t {
  rtree = 0,  // spatial skeleton only, no time-series bounds yet
  btsr = 1,   // k clustered envelopes per node
  sbtsr = 2,  // per-segment envelopes with cross-segment links
};

struct IndexConfig {
  std::uint32_t min_entries = 40;   // m
  std::uint32_t max_entries = 100;  // M
  std::uint32_t k_mbts = 10;        // envelopes per node (per segment)
  std::uint32_t segments = 10;      // SBTSR only
  std::uint64_t kmeans_seed = 42;

  /// Throws std::invalid_argument unless 2 <= m <= M/2, 1 <= k_mbts <= 64
  /// (link masks are 64-bit) and segments >= 1.
  void validate() const;

  friend bool operator==(const IndexConfig&, const IndexConfig&) = default;
};

struct LeafEntry {
  SeriesId id = 0;
  Point loc{};

  friend bool operator==(const LeafEntry&, const LeafEntry&) = default;
};

struct IndexNode {
  Mbr mbr;
  bool is_leaf = true;
  std::vector<std::unique_ptr<IndexNode>> children;  // inner nodes
  std::vector<LeafEntry> entries;                    // leaves
  std::vector<Mbts> bands;                           // BTSR bounds
  SegmentedMbts seg_bands;                           // SBTSR bounds
};

/// An immutable, in-memory search tree over a dataset. Built once, then
/// safely shared across any number of query threads.
struct Index {
  IndexKind kind = IndexKind::rtree;
  IndexConfig config{};
  std::size_t series_length = 0;
  std::size_t series_count = 0;
  std::unique_ptr<IndexNode> root;
};

/// Builds the spatial skeleton by inserting series locations one by one
/// (quadratic split on overflow). Every node except the root holds between
/// config.min_entries and config.max_entries children. Deterministic for a
/// given input order. Throws std::invalid_argument on an empty dataset.
Index build_rtree(const Dataset& data, const IndexConfig& config = {});

/// Bottom-up envelope construction: leaves cluster their raw series into at
/// most k groups; every inner node clusters the union of its children's
/// envelopes and stores the merged envelope per group.
void attach_mbts(Index& index, const Dataset& data);

/// Per-segment variant: each node clusters independently per time segment
/// and records link masks between consecutive segments.
void attach_segmented_mbts(Index& index, const Dataset& data);

/// Drops all member sets (only needed while building and for audits).
void strip_members(Index& index);

/// build_rtree + attach + strip in one call.
Index build_index(const Dataset& data, IndexKind kind, const IndexConfig& config = {});

/// Binary little-endian serialization with a versioned header; round trips
/// are bit-exact. load_index throws std::runtime_error on unreadable,
/// truncated or version-mismatched files and never returns a partial tree.
void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

/// Deep structural comparison (bounds, entries, links, config).
bool index_equal(const Index& a, const Index& b);

}  // namespace geots
