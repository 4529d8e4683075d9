#pragma once

#include <cstdint>

#include "geots/similarity.hpp"

namespace geots::detail {

// Shared checkpoint probing skeletons. `pred(i)` is the margin test at
// timestamp i; each invocation is one comparison. Both routines exploit
// that a pred is a pure function of the timestamp: a position that failed
// once stays failed, so walks stop at known failures and probing skips
// checkpoints inside already-measured runs. That caps either routine at
// one test per timestamp, never more than a full sweep.

/// Exact length of the longest qualifying run among runs that contain at
/// least one checkpoint. Runs shorter than the checkpoint spacing may be
/// missed entirely, which is fine for callers comparing against delta.
template <typename Pred>
std::size_t checkpointed_max_run(std::size_t n, const Checkpoints& cp, Pred&& pred,
                                 std::uint64_t* comparisons) {
  auto test = [&](std::size_t i) {
    if (comparisons) ++*comparisons;
    return pred(i);
  };

  std::size_t best = 0;
  std::ptrdiff_t last_fail = -1;  // rightmost position known to fail
  std::ptrdiff_t resolved = -1;   // everything at or below lies in a measured run or failed

  for (std::size_t c : cp.positions) {
    if (static_cast<std::ptrdiff_t>(c) <= resolved) continue;
    if (!test(c)) {
      last_fail = static_cast<std::ptrdiff_t>(c);
      resolved = last_fail;
      continue;
    }
    std::size_t count = 1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(c) - 1; i >= 0 && i != last_fail; --i) {
      if (!test(static_cast<std::size_t>(i))) {
        last_fail = i;
        break;
      }
      ++count;
    }
    std::size_t j = c + 1;
    for (; j < n; ++j) {
      if (!test(j)) break;
      ++count;
    }
    if (j < n) last_fail = static_cast<std::ptrdiff_t>(j);
    resolved = static_cast<std::ptrdiff_t>(j);
    if (count > best) best = count;
  }
  return best;
}

/// True iff a run of at least `delta` qualifying timestamps exists. Probes
/// checkpoints and expands at most delta-1 steps each way: a qualifying
/// run's leftmost checkpoint always certifies it within that window.
template <typename Pred>
bool windowed_run_reaches(std::size_t n, const Checkpoints& cp, std::size_t delta, Pred&& pred,
                          std::uint64_t* comparisons) {
  auto test = [&](std::size_t i) {
    if (comparisons) ++*comparisons;
    return pred(i);
  };

  std::ptrdiff_t last_fail = -1;
  for (std::size_t c : cp.positions) {
    if (!test(c)) {
      last_fail = static_cast<std::ptrdiff_t>(c);
      continue;
    }
    std::size_t count = 1;
    if (count >= delta) return true;
    const std::ptrdiff_t floor =
        static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(delta) + 1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(c) - 1;
         i >= 0 && i >= floor && i != last_fail; --i) {
      if (!test(static_cast<std::size_t>(i))) {
        last_fail = i;
        break;
      }
      if (++count >= delta) return true;
    }
    const std::size_t ceil = std::min(n == 0 ? 0 : n - 1, c + delta - 1);
    for (std::size_t j = c + 1; j <= ceil; ++j) {
      if (!test(j)) {
        last_fail = static_cast<std::ptrdiff_t>(j);
        break;
      }
      if (++count >= delta) return true;
    }
  }
  return false;
}

}  // namespace geots::detail
