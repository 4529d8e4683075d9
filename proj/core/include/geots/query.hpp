#pragma once

#include <unordered_map>

#include "geots/index.hpp"

namespace geots {

enum class QueryKind : std::uint8_t { rr, kr, rk };
enum class Method : std::uint8_t { sweep, checkpoint };

/// One hybrid query. `rho` applies to rr/rk, `delta` to rr/kr, `k` to
/// kr/rk; the other fields are ignored for the remaining kinds.
struct QuerySpec {
  GeoTimeSeries query;
  QueryKind kind = QueryKind::rr;
  Method method = Method::checkpoint;
  double rho = 0.0;
  double eps = 0.0;
  std::size_t delta = 1;
  std::size_t k = 1;

  /// Throws std::invalid_argument on out-of-range parameters or a query
  /// series whose length differs from n.
  void validate(std::size_t n) const;
};

struct Hit {
  SeriesId id = 0;
  double distance = 0.0;
  std::size_t sigma = 0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

struct Counters {
  std::uint64_t nodes_visited = 0;
  std::uint64_t leaves_visited = 0;
  std::uint64_t series_verified = 0;
  std::uint64_t margin_comparisons = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

struct QueryResult {
  std::vector<Hit> hits;
  Counters counters{};
  bool incomplete = false;  // a k-query found fewer than k qualifying series
};

// Result orderings, shared with the brute-force reference so both sides
// break ties identically.
inline bool hit_less_rr(const Hit& a, const Hit& b) { return a.id < b.id; }
inline bool hit_less_kr(const Hit& a, const Hit& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.id < b.id;
}
inline bool hit_less_rk(const Hit& a, const Hit& b) {
  if (a.sigma != b.sigma) return a.sigma > b.sigma;
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.id < b.id;
}

/// Evaluates the three query kinds over a built index. Read-only: one
/// engine may serve concurrent run() calls.
class QueryEngine {
 public:
  /// Throws std::invalid_argument when the index was built for a different
  /// series count or length than `data` provides.
  QueryEngine(const Dataset& data, const Index& index);

  QueryResult run(const QuerySpec& spec) const;

  const Dataset& data() const { return data_; }
  const Index& index() const { return index_; }

 private:
  QueryResult run_rr(const QuerySpec& spec) const;
  QueryResult run_kr(const QuerySpec& spec) const;
  QueryResult run_rk(const QuerySpec& spec) const;

  bool node_admits(const IndexNode& node, const QuerySpec& spec, const Checkpoints& cp,
                   Counters& counters) const;
  std::size_t node_bound(const IndexNode& node, const QuerySpec& spec, const Checkpoints& cp,
                         Counters& counters) const;
  std::size_t series_score(const GeoTimeSeries& t, const QuerySpec& spec, const Checkpoints& cp,
                           Counters& counters) const;
  const GeoTimeSeries& series_by_id(SeriesId id) const;

  const Dataset& data_;
  const Index& index_;
  std::unordered_map<SeriesId, const GeoTimeSeries*> by_id_;
};

}  // namespace geots
