#include "geots/mbts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "checkpoint_scan.hpp"
#include "rng.hpp"

namespace geots {

Mbts build_mbts(const std::vector<const GeoTimeSeries*>& group, TimeRange range) {
  if (group.empty()) throw std::invalid_argument("build_mbts: empty group");
  const std::size_t len = range.size();
  Mbts out;
  out.upper.assign(len, -std::numeric_limits<double>::infinity());
  out.lower.assign(len, std::numeric_limits<double>::infinity());
  out.members.reserve(group.size());
  for (const GeoTimeSeries* t : group) {
    for (std::size_t i = 0; i < len; ++i) {
      const double v = t->values[range.begin + i];
      out.upper[i] = std::max(out.upper[i], v);
      out.lower[i] = std::min(out.lower[i], v);
    }
    out.members.push_back(t->id);
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

Mbts merge_mbts(const std::vector<const Mbts*>& parts) {
  if (parts.empty()) throw std::invalid_argument("merge_mbts: empty group");
  const std::size_t len = parts.front()->length();
  Mbts out;
  out.upper.assign(len, -std::numeric_limits<double>::infinity());
  out.lower.assign(len, std::numeric_limits<double>::infinity());
  for (const Mbts* part : parts) {
    if (part->length() != len) throw std::invalid_argument("merge_mbts: lengths differ");
    for (std::size_t i = 0; i < len; ++i) {
      out.upper[i] = std::max(out.upper[i], part->upper[i]);
      out.lower[i] = std::min(out.lower[i], part->lower[i]);
    }
    out.members.insert(out.members.end(), part->members.begin(), part->members.end());
  }
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  return out;
}

std::vector<double> envelope_midpoint(const Mbts& band) {
  std::vector<double> mid(band.length());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (band.upper[i] + band.lower[i]);
  return mid;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

std::vector<std::vector<std::size_t>> cluster_k(const std::vector<std::vector<double>>& points,
                                                std::size_t k, std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("cluster_k: no items");
  if (k < 1) throw std::invalid_argument("cluster_k: k must be >= 1");
  const std::size_t count = points.size();

  if (k >= count) {
    std::vector<std::vector<std::size_t>> groups(count);
    for (std::size_t i = 0; i < count; ++i) groups[i] = {i};
    return groups;
  }
  if (k == 1) {
    std::vector<std::size_t> all(count);
    for (std::size_t i = 0; i < count; ++i) all[i] = i;
    return {std::move(all)};
  }

  detail::Rng rng(seed);

  // k-means++ seeding; stops early when every remaining point coincides
  // with a chosen center.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::vector<double> d2(count, std::numeric_limits<double>::infinity());
  const std::size_t first = rng.below(count);
  centroids.push_back(points[first]);
  for (std::size_t i = 0; i < count; ++i) d2[i] = sq_dist(points[i], centroids.back());
  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    if (total <= 0.0) break;
    double r = rng.unit() * total;
    std::size_t pick = count - 1;
    for (std::size_t i = 0; i < count; ++i) {
      r -= d2[i];
      if (r < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < count; ++i)
      d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
  }

  const std::size_t k_eff = centroids.size();
  std::vector<std::size_t> assign(count, 0);
  std::vector<std::size_t> sizes(k_eff, 0);

  for (int iter = 0; iter < 20; ++iter) {
    // assignment
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_c = 0;
      for (std::size_t c = 0; c < k_eff; ++c) {
        const double d = sq_dist(points[i], centroids[c]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      assign[i] = best_c;
      ++sizes[best_c];
    }

    // repair empty clusters: steal the farthest point of the largest one
    for (std::size_t c = 0; c < k_eff; ++c) {
      while (sizes[c] == 0) {
        std::size_t donor = 0;
        for (std::size_t d = 1; d < k_eff; ++d)
          if (sizes[d] > sizes[donor]) donor = d;
        if (sizes[donor] < 2) break;
        std::size_t far_idx = count;
        double far_d = -1.0;
        for (std::size_t i = 0; i < count; ++i) {
          if (assign[i] != donor) continue;
          const double d = sq_dist(points[i], centroids[donor]);
          if (d > far_d) {
            far_d = d;
            far_idx = i;
          }
        }
        assign[far_idx] = c;
        --sizes[donor];
        ++sizes[c];
      }
    }

    // update
    double shift = 0.0;
    std::vector<std::vector<double>> next(k_eff,
                                          std::vector<double>(points.front().size(), 0.0));
    for (std::size_t i = 0; i < count; ++i) {
      auto& acc = next[assign[i]];
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += points[i][j];
    }
    for (std::size_t c = 0; c < k_eff; ++c) {
      if (sizes[c] == 0) continue;
      double norm = 0.0;
      double delta = 0.0;
      for (std::size_t j = 0; j < next[c].size(); ++j) {
        next[c][j] /= static_cast<double>(sizes[c]);
        const double d = next[c][j] - centroids[c][j];
        delta += d * d;
        norm += centroids[c][j] * centroids[c][j];
      }
      shift = std::max(shift, std::sqrt(delta) / (1.0 + std::sqrt(norm)));
      centroids[c] = std::move(next[c]);
    }
    if (shift < 1e-6) break;
  }

  std::vector<std::vector<std::size_t>> groups(k_eff);
  for (std::size_t i = 0; i < count; ++i) groups[assign[i]].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

double mindist_ts(std::span<const double> query, const Mbts& band, std::size_t i) {
  return band_gap(query[i], band.lower[i], band.upper[i]);
}

std::size_t sigma_bound(std::span<const double> query, const Mbts& band, double eps,
                        std::uint64_t* comparisons) {
  if (query.size() != band.length()) throw std::invalid_argument("sigma_bound: lengths differ");
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < band.length(); ++i) {
    if (comparisons) ++*comparisons;
    if (band_gap(query[i], band.lower[i], band.upper[i]) <= eps) {
      if (++run > best) best = run;
    } else {
      run = 0;
    }
  }
  return best;
}

std::size_t sigma_bound_checkpointed(std::span<const double> query, const Mbts& band,
                                     const Checkpoints& cp, double eps,
                                     std::uint64_t* comparisons) {
  if (query.size() != band.length())
    throw std::invalid_argument("sigma_bound_checkpointed: lengths differ");
  return detail::checkpointed_max_run(
      query.size(), cp,
      [&](std::size_t i) { return band_gap(query[i], band.lower[i], band.upper[i]) <= eps; },
      comparisons);
}

bool verify_mbts(std::span<const double> query, std::span<const Mbts> bands,
                 const Checkpoints& cp, double eps, std::size_t delta,
                 std::uint64_t* comparisons) {
  for (const Mbts& band : bands) {
    if (detail::windowed_run_reaches(
            query.size(), cp, delta,
            [&](std::size_t i) { return band_gap(query[i], band.lower[i], band.upper[i]) <= eps; },
            comparisons))
      return true;
  }
  return false;
}

std::vector<TimeRange> segment_ranges(std::size_t n, std::size_t s) {
  s = std::clamp<std::size_t>(s, 1, n);
  const std::size_t width = n / s;
  const std::size_t extra = n % s;
  std::vector<TimeRange> ranges(s);
  std::size_t at = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t w = width + (i < extra ? 1 : 0);
    ranges[i] = {at, at + w};
    at += w;
  }
  return ranges;
}

std::size_t SegmentedMbts::segment_of(std::size_t i) const {
  // segments are few; a linear scan beats bookkeeping
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (i < segments[s].range.end) return s;
  return segments.size() - 1;
}

void link_segments(SegmentedMbts& sm) {
  auto share_member = [](const std::vector<SeriesId>& a, const std::vector<SeriesId>& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return true;
      if (a[i] < b[j])
        ++i;
      else
        ++j;
    }
    return false;
  };

  for (std::size_t s = 0; s + 1 < sm.segments.size(); ++s) {
    auto& seg = sm.segments[s];
    const auto& next = sm.segments[s + 1];
    seg.links.assign(seg.bands.size(), 0);
    for (std::size_t a = 0; a < seg.bands.size(); ++a)
      for (std::size_t b = 0; b < next.bands.size(); ++b)
        if (share_member(seg.bands[a].members, next.bands[b].members))
          seg.links[a] |= std::uint64_t{1} << b;
  }
  if (!sm.segments.empty()) sm.segments.back().links.clear();
}

namespace {

double seg_gap(std::span<const double> query, const MbtsSegment& seg, std::size_t band,
               std::size_t global_i) {
  const std::size_t local = global_i - seg.range.begin;
  return band_gap(query[global_i], seg.bands[band].lower[local], seg.bands[band].upper[local]);
}

// Walks outward from `pos`, one timestamp per step, keeping the set of
// bands that could still contain a series whose run covers every visited
// timestamp. Bands leave the set when they fail the margin; at a segment
// border the set is re-mapped through the link masks. Returns the number of
// qualifying steps taken (the start position is not counted).
std::size_t walk_chain(std::span<const double> query, const SegmentedMbts& sm, std::size_t seg,
                       std::uint64_t active, std::size_t pos, double eps, int dir,
                       std::size_t max_steps, std::uint64_t* comparisons) {
  const std::size_t n = query.size();
  std::size_t steps = 0;
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(pos);
  while (steps < max_steps) {
    i += dir;
    if (i < 0 || static_cast<std::size_t>(i) >= n) break;
    const std::size_t at = static_cast<std::size_t>(i);

    if (at < sm.segments[seg].range.begin) {
      // entering the previous segment; its links point into the current one
      const MbtsSegment& prev = sm.segments[seg - 1];
      std::uint64_t mapped = 0;
      for (std::size_t b = 0; b < prev.bands.size(); ++b)
        if ((prev.links[b] & active) != 0) mapped |= std::uint64_t{1} << b;
      active = mapped;
      --seg;
    } else if (at >= sm.segments[seg].range.end) {
      const MbtsSegment& cur = sm.segments[seg];
      std::uint64_t mapped = 0;
      for (std::size_t b = 0; b < cur.bands.size(); ++b)
        if ((active >> b) & 1u) mapped |= cur.links[b];
      active = mapped;
      ++seg;
    }
    if (active == 0) break;

    const MbtsSegment& here = sm.segments[seg];
    std::uint64_t still = 0;
    for (std::size_t b = 0; b < here.bands.size(); ++b) {
      if (!((active >> b) & 1u)) continue;
      if (comparisons) ++*comparisons;
      if (seg_gap(query, here, b, at) <= eps) still |= std::uint64_t{1} << b;
    }
    if (still == 0) break;
    active = still;
    ++steps;
  }
  return steps;
}

}  // namespace

bool verify_segmented(std::span<const double> query, const SegmentedMbts& sm,
                      const Checkpoints& cp, double eps, std::size_t delta,
                      std::uint64_t* comparisons) {
  if (sm.segments.size() == 1)
    // a single segment scans exactly like a plain node
    return verify_mbts(query, sm.segments.front().bands, cp, eps, delta, comparisons);

  for (std::size_t c : cp.positions) {
    const std::size_t seg = sm.segment_of(c);
    const MbtsSegment& here = sm.segments[seg];
    for (std::size_t b = 0; b < here.bands.size(); ++b) {
      if (comparisons) ++*comparisons;
      if (seg_gap(query, here, b, c) > eps) continue;
      std::size_t count = 1;
      if (count >= delta) return true;
      const std::uint64_t start = std::uint64_t{1} << b;
      count += walk_chain(query, sm, seg, start, c, eps, -1, delta - 1, comparisons);
      if (count >= delta) return true;
      count += walk_chain(query, sm, seg, start, c, eps, +1, delta - count, comparisons);
      if (count >= delta) return true;
    }
  }
  return false;
}

std::size_t sigma_bound_segmented(std::span<const double> query, const SegmentedMbts& sm,
                                  double eps, std::uint64_t* comparisons) {
  if (sm.segments.size() == 1) {
    std::size_t best = 0;
    for (const Mbts& band : sm.segments.front().bands)
      best = std::max(best, sigma_bound(query, band, eps, comparisons));
    return best;
  }

  const std::size_t n = query.size();
  std::size_t best = 0;
  for (std::size_t start = 0; start < n; ++start) {
    const std::size_t seg = sm.segment_of(start);
    const MbtsSegment& here = sm.segments[seg];
    for (std::size_t b = 0; b < here.bands.size(); ++b) {
      if (comparisons) ++*comparisons;
      if (seg_gap(query, here, b, start) > eps) continue;
      const std::uint64_t mask = std::uint64_t{1} << b;
      const std::size_t len = 1 + walk_chain(query, sm, seg, mask, start, eps, -1, n, comparisons) +
                              walk_chain(query, sm, seg, mask, start, eps, +1, n, comparisons);
      if (len > best) best = len;
    }
  }
  return best;
}

std::size_t sigma_bound_segmented_checkpointed(std::span<const double> query,
                                               const SegmentedMbts& sm, const Checkpoints& cp,
                                               double eps, std::uint64_t* comparisons) {
  if (sm.segments.size() == 1) {
    std::size_t best = 0;
    for (const Mbts& band : sm.segments.front().bands)
      best = std::max(best, sigma_bound_checkpointed(query, band, cp, eps, comparisons));
    return best;
  }

  const std::size_t n = query.size();
  std::size_t best = 0;
  for (std::size_t c : cp.positions) {
    const std::size_t seg = sm.segment_of(c);
    const MbtsSegment& here = sm.segments[seg];
    for (std::size_t b = 0; b < here.bands.size(); ++b) {
      if (comparisons) ++*comparisons;
      if (seg_gap(query, here, b, c) > eps) continue;
      const std::uint64_t mask = std::uint64_t{1} << b;
      const std::size_t len = 1 + walk_chain(query, sm, seg, mask, c, eps, -1, n, comparisons) +
                              walk_chain(query, sm, seg, mask, c, eps, +1, n, comparisons);
      if (len > best) best = len;
    }
  }
  return best;
}

}  // namespace geots
