#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "geots/workload.hpp"
#include "rng.hpp"

namespace geots {

namespace {

double pct_checked(double pct, const char* what) {
  if (!(pct > 0.0 && pct <= 100.0))
    throw std::invalid_argument(std::string("workload: ") + what + " must lie in (0, 100]");
  return pct;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GEOTS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) threads = std::min<std::size_t>(threads, static_cast<std::size_t>(v));
  }
  return std::min(threads, std::max<std::size_t>(jobs, 1));
}

const char* kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::rr:
      return "rr";
    case QueryKind::kr:
      return "kr";
    case QueryKind::rk:
      return "rk";
  }
  return "?";
}

const char* method_name(Method m) { return m == Method::sweep ? "sweep" : "checkpoint"; }

const char* index_name(IndexKind k) {
  switch (k) {
    case IndexKind::rtree:
      return "rtree";
    case IndexKind::btsr:
      return "btsr";
    case IndexKind::sbtsr:
      return "sbtsr";
  }
  return "?";
}

}  // namespace

ResolvedParams resolve_workload_params(const WorkloadSpec& spec, const Dataset& data) {
  ResolvedParams out;

  const int rho_given = (spec.rho ? 1 : 0) + (spec.rho_pct ? 1 : 0) + (spec.rho_area_pct ? 1 : 0);
  if (rho_given > 1) throw std::invalid_argument("workload: give at most one radius parameter");
  if (spec.rho) {
    if (*spec.rho < 0.0) throw std::invalid_argument("workload: rho must be >= 0");
    out.rho = *spec.rho;
  } else if (spec.rho_pct) {
    out.rho = pct_checked(*spec.rho_pct, "rho-pct") / 100.0 * data.bbox.diagonal();
  } else if (spec.rho_area_pct) {
    const double frac = pct_checked(*spec.rho_area_pct, "rho-area-pct") / 100.0;
    out.rho = std::sqrt(frac * data.bbox.area() / std::numbers::pi);
  }

  if (spec.eps && spec.eps_pct)
    throw std::invalid_argument("workload: give at most one margin parameter");
  if (spec.eps) {
    if (*spec.eps < 0.0) throw std::invalid_argument("workload: eps must be >= 0");
    out.eps = *spec.eps;
  } else if (spec.eps_pct) {
    out.eps = pct_checked(*spec.eps_pct, "eps-pct") / 100.0 * data.value_range.extent();
  }

  const bool needs_rho = spec.kind == QueryKind::rr || spec.kind == QueryKind::rk;
  if (needs_rho && rho_given == 0)
    throw std::invalid_argument("workload: a radius parameter is required for this query kind");
  if (!spec.eps && !spec.eps_pct)
    throw std::invalid_argument("workload: a margin parameter is required");
  return out;
}

WorkloadReport run_workload(const QueryEngine& engine, const WorkloadSpec& spec) {
  const Dataset& data = engine.data();
  WorkloadReport report;
  report.spec = spec;
  report.resolved = resolve_workload_params(spec, data);
  report.index_kind = engine.index().kind;

  // draw the query series up front so row i is the same regardless of pool size
  detail::Rng rng(spec.seed);
  std::vector<std::size_t> picks(spec.queries);
  for (auto& p : picks) p = rng.below(data.series.size());

  report.rows.resize(spec.queries);
  report.threads = worker_count(spec.queries);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.queries) return;

      QuerySpec q;
      q.query = data.series[picks[i]];
      q.kind = spec.kind;
      q.method = spec.method;
      q.rho = report.resolved.rho;
      q.eps = report.resolved.eps;
      q.delta = spec.delta;
      q.k = spec.k;

      const auto t0 = std::chrono::steady_clock::now();
      const QueryResult result = engine.run(q);
      const auto t1 = std::chrono::steady_clock::now();

      WorkloadRow& row = report.rows[i];
      row.index = i;
      row.query_id = q.query.id;
      row.wall_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
      row.hits = result.hits.size();
      row.counters = result.counters;
      row.oracle_ok = true;
      if (spec.verify) row.oracle_ok = result.hits == oracle_answer(data, q);
    }
  };

  if (report.threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(report.threads);
    for (std::size_t t = 0; t < report.threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  Counters sums{};
  double wall = 0.0;
  for (const auto& row : report.rows) {
    wall += row.wall_us;
    sums.nodes_visited += row.counters.nodes_visited;
    sums.leaves_visited += row.counters.leaves_visited;
    sums.series_verified += row.counters.series_verified;
    sums.margin_comparisons += row.counters.margin_comparisons;
    if (!row.oracle_ok) ++report.mismatches;
  }
  const auto count = static_cast<double>(std::max<std::size_t>(report.rows.size(), 1));
  report.mean_wall_us = wall / count;
  report.mean_counters.nodes_visited =
      static_cast<std::uint64_t>(static_cast<double>(sums.nodes_visited) / count);
  report.mean_counters.leaves_visited =
      static_cast<std::uint64_t>(static_cast<double>(sums.leaves_visited) / count);
  report.mean_counters.series_verified =
      static_cast<std::uint64_t>(static_cast<double>(sums.series_verified) / count);
  report.mean_counters.margin_comparisons =
      static_cast<std::uint64_t>(static_cast<double>(sums.margin_comparisons) / count);
  return report;
}

void write_report_csv(const WorkloadReport& report, std::ostream& out) {
  out << "# kind=" << kind_name(report.spec.kind) << " method=" << method_name(report.spec.method)
      << " index=" << index_name(report.index_kind) << " rho=" << report.resolved.rho
      << " eps=" << report.resolved.eps << " delta=" << report.spec.delta
      << " k=" << report.spec.k << " queries=" << report.spec.queries
      << " seed=" << report.spec.seed << " threads=" << report.threads << '\n';
  out << "query_index,query_id,wall_us,hits,nodes_visited,leaves_visited,series_verified,"
         "margin_comparisons,oracle_ok\n";
  for (const auto& row : report.rows) {
    out << row.index << ',' << row.query_id << ',' << row.wall_us << ',' << row.hits << ','
        << row.counters.nodes_visited << ',' << row.counters.leaves_visited << ','
        << row.counters.series_verified << ',' << row.counters.margin_comparisons << ','
        << (row.oracle_ok ? 1 : 0) << '\n';
  }
}

std::string report_json(const WorkloadReport& report) {
  nlohmann::json j;
  j["params"] = {
      {"kind", kind_name(report.spec.kind)},
      {"method", method_name(report.spec.method)},
      {"index", index_name(report.index_kind)},
      {"rho", report.resolved.rho},
      {"eps", report.resolved.eps},
      {"delta", report.spec.delta},
      {"k", report.spec.k},
      {"queries", report.spec.queries},
      {"seed", report.spec.seed},
      {"threads", report.threads},
      {"verify", report.spec.verify},
  };
  j["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({
        {"query_index", row.index},
        {"query_id", row.query_id},
        {"wall_us", row.wall_us},
        {"hits", row.hits},
        {"nodes_visited", row.counters.nodes_visited},
        {"leaves_visited", row.counters.leaves_visited},
        {"series_verified", row.counters.series_verified},
        {"margin_comparisons", row.counters.margin_comparisons},
        {"oracle_ok", row.oracle_ok},
    });
  }
  j["aggregate"] = {
      {"mean_wall_us", report.mean_wall_us},
      {"mean_nodes_visited", report.mean_counters.nodes_visited},
      {"mean_leaves_visited", report.mean_counters.leaves_visited},
      {"mean_series_verified", report.mean_counters.series_verified},
      {"mean_margin_comparisons", report.mean_counters.margin_comparisons},
      {"mismatches", report.mismatches},
  };
  return j.dump(2);
}

}  // namespace geots
