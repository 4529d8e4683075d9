#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "geots/similarity.hpp"

namespace geots {

/// Half-open slice [begin, end) of the time axis.
struct TimeRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }

  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

/// Minimum bounding time series: elementwise max/min envelope over a set of
/// series. `members` lists the covered leaf series; it is only needed while
/// an index is being built and is stripped afterwards.
struct Mbts {
  std::vector<double> upper;
  std::vector<double> lower;
  std::vector<SeriesId> members;  // sorted

  std::size_t length() const { return upper.size(); }
};

/// Envelope of a group of raw series restricted to `range`.
/// Throws std::invalid_argument on an empty group.
Mbts build_mbts(const std::vector<const GeoTimeSeries*>& group, TimeRange range);

/// Envelope of envelopes; members become the union of the parts' members.
Mbts merge_mbts(const std::vector<const Mbts*>& parts);

/// Lloyd's k-means over representative vectors with k-means++ seeding.
/// Deterministic for a fixed seed: at most 20 iterations or relative
/// centroid shift below 1e-6, empty clusters repaired by stealing the
/// farthest point from the largest cluster. Returns at most k non-empty
/// groups of indices into `points`; when k >= |points| every item gets its
/// own group.
std::vector<std::vector<std::size_t>> cluster_k(const std::vector<std::vector<double>>& points,
                                                std::size_t k, std::uint64_t seed);

/// Representative used when clustering envelopes: the band's midline.
std::vector<double> envelope_midpoint(const Mbts& band);

/// Gap between a value and a band given by [lo, hi]: 0 inside, distance to
/// the nearer bound outside. No series inside the band can be closer to v.
inline double band_gap(double v, double lo, double hi) {
  if (v > hi) return v - hi;
  if (v < lo) return lo - v;
  return 0.0;
}

/// Per-timestamp lower bound on |query[i] - T[i]| for every member T.
double mindist_ts(std::span<const double> query, const Mbts& band, std::size_t i);

/// Longest run of timestamps where mindist_ts <= eps; upper-bounds the
/// local similarity of the query with every member. Full sweep over the
/// series length.
std::size_t sigma_bound(std::span<const double> query, const Mbts& band, double eps,
                        std::uint64_t* comparisons = nullptr);

/// Checkpoint-probed bound with full run expansion; same exactness contract
/// as local_similarity_checkpointed (exact whenever >= cp.delta).
std::size_t sigma_bound_checkpointed(std::span<const double> query, const Mbts& band,
                                     const Checkpoints& cp, double eps,
                                     std::uint64_t* comparisons = nullptr);

/// Node admission test: true iff some band admits a run of at least `delta`
/// timestamps with mindist_ts <= eps, found by probing checkpoints and
/// expanding at most delta-1 steps each way (the 2*delta-1 window between
/// adjacent checkpoints decides the test). False means no member series can
/// reach local similarity delta, so the node can be pruned.
bool verify_mbts(std::span<const double> query, std::span<const Mbts> bands,
                 const Checkpoints& cp, double eps, std::size_t delta,
                 std::uint64_t* comparisons = nullptr);

/// One slice of a segmented bound: the clustered envelopes of this slice
/// plus, for every band, a bitmask naming the next slice's bands that share
/// at least one member series. The last segment carries no links.
struct MbtsSegment {
  TimeRange range;
  std::vector<Mbts> bands;
  std::vector<std::uint64_t> links;
};

/// Per-segment envelopes over a partition of the time axis. Runs crossing a
/// segment border continue only through link-connected bands, which keeps
/// any covered series' run intact while the tighter per-segment bands cut
/// dead space.
struct SegmentedMbts {
  std::vector<MbtsSegment> segments;

  std::size_t length() const {
    return segments.empty() ? 0 : segments.back().range.end;
  }
  std::size_t segment_of(std::size_t i) const;
};

/// Splits [0, n) into s contiguous pieces whose sizes differ by at most
/// one, longer pieces first. s is clamped to [1, n].
std::vector<TimeRange> segment_ranges(std::size_t n, std::size_t s);

/// Fills the link masks from member-set intersections between consecutive
/// segments. Requires members to still be present.
void link_segments(SegmentedMbts& sm);

/// Segmented node admission test; the active band set is seeded by the band
/// hit at a checkpoint, shrinks as bands fail the margin, and is re-mapped
/// through the link masks at segment borders. True whenever any covered
/// series has local similarity >= delta.
bool verify_segmented(std::span<const double> query, const SegmentedMbts& sm,
                      const Checkpoints& cp, double eps, std::size_t delta,
                      std::uint64_t* comparisons = nullptr);

/// Longest run achievable by any link-consistent chain of bands, expanding
/// from every timestamp. Upper-bounds local similarity for every covered
/// series and never exceeds the unsegmented bound of the same member set.
std::size_t sigma_bound_segmented(std::span<const double> query, const SegmentedMbts& sm,
                                  double eps, std::uint64_t* comparisons = nullptr);

/// Checkpoint-probed variant of the segmented bound with full expansion;
/// at least as large as the true score of any covered series whose score
/// reaches cp.delta.
std::size_t sigma_bound_segmented_checkpointed(std::span<const double> query,
                                               const SegmentedMbts& sm, const Checkpoints& cp,
                                               double eps, std::uint64_t* comparisons = nullptr);

}  // namespace geots
