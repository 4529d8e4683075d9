#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "geots/query.hpp"

namespace geots {

void QuerySpec::validate(std::size_t n) const {
  if (query.values.size() != n)
    throw std::invalid_argument("query spec: query series length " +
                                std::to_string(query.values.size()) + " does not match dataset " +
                                std::to_string(n));
  if (std::isnan(eps) || eps < 0.0) throw std::invalid_argument("query spec: eps must be >= 0");
  const bool needs_rho = kind == QueryKind::rr || kind == QueryKind::rk;
  const bool needs_delta = kind == QueryKind::rr || kind == QueryKind::kr;
  const bool needs_k = kind == QueryKind::kr || kind == QueryKind::rk;
  if (needs_rho && (std::isnan(rho) || rho < 0.0))
    throw std::invalid_argument("query spec: rho must be >= 0");
  if (needs_delta && delta < 1) throw std::invalid_argument("query spec: delta must be >= 1");
  if (needs_k && k < 1) throw std::invalid_argument("query spec: k must be >= 1");
}

QueryEngine::QueryEngine(const Dataset& data, const Index& index) : data_(data), index_(index) {
  if (!index.root) throw std::invalid_argument("query engine: index has no tree");
  if (index.series_count != data.series.size() || index.series_length != data.n)
    throw std::invalid_argument("query engine: index was built for a different dataset (" +
                                std::to_string(index.series_count) + " series of length " +
                                std::to_string(index.series_length) + ")");
  by_id_.reserve(data.series.size());
  for (const auto& t : data.series) by_id_.emplace(t.id, &t);
}

const GeoTimeSeries& QueryEngine::series_by_id(SeriesId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end())
    throw std::invalid_argument("query engine: index references unknown series id " +
                                std::to_string(id));
  return *it->second;
}

std::size_t QueryEngine::series_score(const GeoTimeSeries& t, const QuerySpec& spec,
                                      const Checkpoints& cp, Counters& counters) const {
  ++counters.series_verified;
  if (spec.method == Method::sweep)
    return local_similarity(spec.query.values, t.values, spec.eps, &counters.margin_comparisons);
  return local_similarity_checkpointed(spec.query.values, t.values, spec.eps, cp,
                                       &counters.margin_comparisons);
}

// Boolean admission: can the node hold a series with score >= delta?
bool QueryEngine::node_admits(const IndexNode& node, const QuerySpec& spec, const Checkpoints& cp,
                              Counters& counters) const {
  const std::span<const double> q(spec.query.values);
  if (spec.method == Method::checkpoint) {
    if (index_.kind == IndexKind::sbtsr)
      return verify_segmented(q, node.seg_bands, cp, spec.eps, spec.delta,
                              &counters.margin_comparisons);
    return verify_mbts(q, node.bands, cp, spec.eps, spec.delta, &counters.margin_comparisons);
  }
  // the sweep baseline computes the full bound of every band, then decides
  return node_bound(node, spec, cp, counters) >= spec.delta;
}

// Value form of the bound, used to order the top-k frontier.
std::size_t QueryEngine::node_bound(const IndexNode& node, const QuerySpec& spec,
                                    const Checkpoints& cp, Counters& counters) const {
  const std::span<const double> q(spec.query.values);
  std::size_t best = 0;
  if (index_.kind == IndexKind::sbtsr) {
    if (spec.method == Method::sweep)
      return sigma_bound_segmented(q, node.seg_bands, spec.eps, &counters.margin_comparisons);
    return sigma_bound_segmented_checkpointed(q, node.seg_bands, cp, spec.eps,
                                              &counters.margin_comparisons);
  }
  for (const Mbts& band : node.bands) {
    const std::size_t b =
        spec.method == Method::sweep
            ? sigma_bound(q, band, spec.eps, &counters.margin_comparisons)
            : sigma_bound_checkpointed(q, band, cp, spec.eps, &counters.margin_comparisons);
    if (b > best) best = b;
  }
  return best;
}

QueryResult QueryEngine::run(const QuerySpec& spec) const {
  spec.validate(data_.n);
  switch (spec.kind) {
    case QueryKind::rr:
      return run_rr(spec);
    case QueryKind::kr:
      return run_kr(spec);
    case QueryKind::rk:
      return run_rk(spec);
  }
  throw std::invalid_argument("query spec: unknown kind");
}

QueryResult QueryEngine::run_rr(const QuerySpec& spec) const {
  QueryResult res;
  const Checkpoints cp = spec.method == Method::checkpoint
                             ? place_checkpoints(data_.n, spec.delta)
                             : Checkpoints{};

  std::vector<const IndexNode*> todo{index_.root.get()};
  while (!todo.empty()) {
    const IndexNode* node = todo.back();
    todo.pop_back();
    ++res.counters.nodes_visited;

    if (node->is_leaf) {
      ++res.counters.leaves_visited;
      for (const LeafEntry& e : node->entries) {
        const double d = spatial_distance(spec.query.loc, e.loc);
        if (d > spec.rho) continue;
        const std::size_t sigma = series_score(series_by_id(e.id), spec, cp, res.counters);
        if (sigma >= spec.delta) res.hits.push_back({e.id, d, sigma});
      }
    } else {
      for (const auto& child : node->children) {
        if (mindist_sp(spec.query.loc, child->mbr) > spec.rho) continue;
        if (!node_admits(*child, spec, cp, res.counters)) continue;
        todo.push_back(child.get());
      }
    }
  }

  std::sort(res.hits.begin(), res.hits.end(), hit_less_rr);
  return res;
}

namespace {

// Mixed best-first frontier of nodes (keyed by mindist) and series (keyed
// by exact distance). Nodes pop before series at equal key so every series
// at that distance is discovered before any of them is emitted; equal
// series order by id, matching the reference ranking.
struct KrEntry {
  double key = 0.0;
  bool is_series = false;
  const IndexNode* node = nullptr;
  SeriesId id = 0;
  std::size_t sigma = 0;
  std::uint64_t seq = 0;

  bool operator>(const KrEntry& o) const {
    if (key != o.key) return key > o.key;
    if (is_series != o.is_series) return is_series;
    if (is_series) return id > o.id;
    return seq > o.seq;
  }
};

}  // namespace

QueryResult QueryEngine::run_kr(const QuerySpec& spec) const {
  QueryResult res;
  const Checkpoints cp = spec.method == Method::checkpoint
                             ? place_checkpoints(data_.n, spec.delta)
                             : Checkpoints{};

  std::priority_queue<KrEntry, std::vector<KrEntry>, std::greater<>> frontier;
  std::uint64_t seq = 0;
  frontier.push({0.0, false, index_.root.get(), 0, 0, seq++});

  while (!frontier.empty()) {
    const KrEntry top = frontier.top();
    frontier.pop();

    if (top.is_series) {
      // sorted by exact distance: anything later is farther
      res.hits.push_back({top.id, top.key, top.sigma});
      if (res.hits.size() == spec.k) break;
      continue;
    }

    const IndexNode* node = top.node;
    ++res.counters.nodes_visited;
    if (node->is_leaf) {
      ++res.counters.leaves_visited;
      for (const LeafEntry& e : node->entries) {
        const std::size_t sigma = series_score(series_by_id(e.id), spec, cp, res.counters);
        if (sigma < spec.delta) continue;
        const double d = spatial_distance(spec.query.loc, e.loc);
        frontier.push({d, true, nullptr, e.id, sigma, seq++});
      }
    } else {
      for (const auto& child : node->children) {
        if (!node_admits(*child, spec, cp, res.counters)) continue;
        frontier.push({mindist_sp(spec.query.loc, child->mbr), false, child.get(), 0, 0, seq++});
      }
    }
  }

  res.incomplete = res.hits.size() < spec.k;
  return res;
}

namespace {

struct RkEntry {
  std::size_t bound = 0;
  const IndexNode* node = nullptr;
  std::uint64_t seq = 0;

  bool operator<(const RkEntry& o) const {
    if (bound != o.bound) return bound < o.bound;
    return seq > o.seq;  // older first among equal bounds
  }
};

}  // namespace

QueryResult QueryEngine::run_rk(const QuerySpec& spec) const {
  QueryResult res;
  std::size_t delta = 1;
  Checkpoints cp = spec.method == Method::checkpoint ? place_checkpoints(data_.n, delta)
                                                     : Checkpoints{};

  std::priority_queue<RkEntry> frontier;
  std::uint64_t seq = 0;
  frontier.push({data_.n, index_.root.get(), seq++});

  std::vector<Hit> best;  // up to k hits, ordered best-first

  while (!frontier.empty()) {
    const RkEntry top = frontier.top();
    // bounds in the frontier only ever overestimate scores below the
    // current delta, so this cutoff is exact
    if (top.bound < delta) break;
    frontier.pop();

    const IndexNode* node = top.node;
    ++res.counters.nodes_visited;
    if (node->is_leaf) {
      ++res.counters.leaves_visited;
      for (const LeafEntry& e : node->entries) {
        const double d = spatial_distance(spec.query.loc, e.loc);
        if (d > spec.rho) continue;
        const std::size_t sigma = series_score(series_by_id(e.id), spec, cp, res.counters);
        if (sigma < delta) continue;
        const Hit hit{e.id, d, sigma};
        best.insert(std::upper_bound(best.begin(), best.end(), hit, hit_less_rk), hit);
        if (best.size() > spec.k) {
          best.pop_back();
          const std::size_t worst = best.back().sigma;
          if (worst != delta) {
            delta = worst;
            if (spec.method == Method::checkpoint) cp = place_checkpoints(data_.n, delta);
          }
        }
      }
    } else {
      for (const auto& child : node->children) {
        if (mindist_sp(spec.query.loc, child->mbr) > spec.rho) continue;
        const std::size_t bound = node_bound(*child, spec, cp, res.counters);
        if (bound >= delta) frontier.push({bound, child.get(), seq++});
      }
    }
  }

  res.hits = std::move(best);
  res.incomplete = res.hits.size() < spec.k;
  return res;
}

}  // namespace geots
