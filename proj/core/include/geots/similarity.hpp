#pragma once

#include <cstdint>
#include <span>

#include "geots/series.hpp"

namespace geots {

/// Probe positions placed every `delta` timestamps, so that any run of at
/// least `delta` consecutive timestamps covers one of them.
struct Checkpoints {
  std::size_t delta = 1;
  std::vector<std::size_t> positions;
};

/// Positions delta-1, 2*delta-1, ... below n (0-indexed). Empty when
/// delta > n. Throws std::invalid_argument for delta < 1.
Checkpoints place_checkpoints(std::size_t n, std::size_t delta);

/// Local similarity score: length of the longest run of consecutive
/// timestamps where |a[i] - b[i]| <= eps. Single O(n) pass. Throws
/// std::invalid_argument when the lengths differ. When `comparisons` is
/// given, every margin test performed is added to it.
std::size_t local_similarity(std::span<const double> a, std::span<const double> b,
                             double eps, std::uint64_t* comparisons = nullptr);

/// Checkpoint-driven variant: probes only at `cp.positions`, and on a hit
/// expands through the full qualifying run (past neighbouring checkpoints).
/// Returns the exact score whenever it is >= cp.delta; below that the
/// result may undercount, which is all callers comparing against delta
/// need. Work is bounded by one margin test per timestamp.
std::size_t local_similarity_checkpointed(std::span<const double> a, std::span<const double> b,
                                          double eps, const Checkpoints& cp,
                                          std::uint64_t* comparisons = nullptr);

}  // namespace geots
