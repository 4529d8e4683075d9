#pragma once

#include <optional>
#include <ostream>

#include "geots/oracle.hpp"

namespace geots {

/// A batch of randomly drawn queries of one kind. Radius and margin can be
/// absolute or relative: eps_pct is a percentage of the dataset's value
/// range, rho_pct a percentage of the bounding-box diagonal, rho_area_pct
/// the radius of a circle covering that percentage of the bounding-box
/// area. Percentages are resolved to absolutes before execution and echoed
/// in the report.
struct WorkloadSpec {
  QueryKind kind = QueryKind::rr;
  Method method = Method::checkpoint;
  std::size_t queries = 100;
  std::uint64_t seed = 42;
  std::optional<double> rho;
  std::optional<double> rho_pct;
  std::optional<double> rho_area_pct;
  std::optional<double> eps;
  std::optional<double> eps_pct;
  std::size_t delta = 1;
  std::size_t k = 1;
  bool verify = false;  // diff every answer against the oracle
};

struct ResolvedParams {
  double rho = 0.0;
  double eps = 0.0;
};

/// Throws std::invalid_argument when conflicting or out-of-range
/// (percentages must lie in (0, 100]) parameters are given.
ResolvedParams resolve_workload_params(const WorkloadSpec& spec, const Dataset& data);

struct WorkloadRow {
  std::size_t index = 0;
  SeriesId query_id = 0;
  double wall_us = 0.0;
  std::size_t hits = 0;
  Counters counters{};
  bool oracle_ok = true;
};

struct WorkloadReport {
  WorkloadSpec spec{};
  ResolvedParams resolved{};
  IndexKind index_kind = IndexKind::rtree;
  std::size_t threads = 1;
  std::vector<WorkloadRow> rows;
  double mean_wall_us = 0.0;
  Counters mean_counters{};  // rounded means
  std::size_t mismatches = 0;
};

/// Runs the workload on a thread pool (GEOTS_THREADS caps the worker
/// count); rows come back ordered by query index regardless of completion
/// order. Query series are drawn from the dataset with the spec's seed.
WorkloadReport run_workload(const QueryEngine& engine, const WorkloadSpec& spec);

/// Plot-ready CSV: a `#`-prefixed header echoing the resolved parameters,
/// then one row per query.
void write_report_csv(const WorkloadReport& report, std::ostream& out);

/// Machine-diffable JSON with parameter echo, per-query rows and
/// aggregates.
std::string report_json(const WorkloadReport& report);

}  // namespace geots
