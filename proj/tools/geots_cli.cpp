// geots: build hybrid indexes over geolocated time series and run
// range/top-k queries filtered by spatial distance and local similarity.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geots/dataset_io.hpp"
#include "geots/index.hpp"
#include "geots/oracle.hpp"
#include "geots/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

geots::QueryKind parse_kind(const std::string& s) {
  if (s == "rr") return geots::QueryKind::rr;
  if (s == "kr") return geots::QueryKind::kr;
  return geots::QueryKind::rk;
}

geots::Method parse_method(const std::string& s) {
  return s == "sweep" ? geots::Method::sweep : geots::Method::checkpoint;
}

geots::IndexKind parse_index_kind(const std::string& s) {
  return s == "btsr" ? geots::IndexKind::btsr : geots::IndexKind::sbtsr;
}

const char* kind_name(geots::QueryKind k) {
  switch (k) {
    case geots::QueryKind::rr:
      return "rr";
    case geots::QueryKind::kr:
      return "kr";
    default:
      return "rk";
  }
}

struct IndexOptions {
  std::string index_file;
  std::string index_kind;
  geots::IndexConfig config{};

  void add_to(CLI::App& cmd, bool allow_file) {
    if (allow_file)
      cmd.add_option("--index-file", index_file, "Load a previously built index file");
    cmd.add_option("--index", index_kind, "Index to build: btsr or sbtsr")
        ->check(CLI::IsMember({"btsr", "sbtsr"}));
    cmd.add_option("--segments", config.segments, "Time segments per node (sbtsr)");
    cmd.add_option("--k-mbts", config.k_mbts, "Bounding time series per node");
    cmd.add_option("--seed", config.kmeans_seed, "Clustering seed");
    cmd.add_option("--min-entries", config.min_entries, "Minimum node fanout");
    cmd.add_option("--max-entries", config.max_entries, "Maximum node fanout");
  }

  geots::Index resolve(const geots::Dataset& data) const {
    if (!index_file.empty()) return geots::load_index(index_file);
    if (index_kind.empty())
      throw std::invalid_argument("either --index-file or --index is required");
    return geots::build_index(data, parse_index_kind(index_kind), config);
  }
};

struct ParamOptions {
  std::optional<double> rho, rho_pct, rho_area_pct, eps, eps_pct;
  std::size_t delta = 1;
  std::size_t k = 1;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--rho", rho, "Search radius (absolute)");
    cmd.add_option("--rho-pct", rho_pct, "Search radius as % of the bounding-box diagonal");
    cmd.add_option("--rho-area-pct", rho_area_pct,
                   "Search radius covering this % of the bounding-box area");
    cmd.add_option("--eps", eps, "Similarity margin (absolute)");
    cmd.add_option("--eps-pct", eps_pct, "Similarity margin as % of the value range");
    cmd.add_option("--delta", delta, "Minimum run length (rr, kr)");
    cmd.add_option("--k", k, "Result count (kr, rk)");
  }

  void fill(geots::WorkloadSpec& spec) const {
    spec.rho = rho;
    spec.rho_pct = rho_pct;
    spec.rho_area_pct = rho_area_pct;
    spec.eps = eps;
    spec.eps_pct = eps_pct;
    spec.delta = delta;
    spec.k = k;
  }
};

nlohmann::json result_json(const geots::QueryResult& result) {
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& h : result.hits)
    hits.push_back({{"id", h.id}, {"distance", h.distance}, {"sigma", h.sigma}});
  return {
      {"hits", hits},
      {"incomplete", result.incomplete},
      {"counters",
       {{"nodes_visited", result.counters.nodes_visited},
        {"leaves_visited", result.counters.leaves_visited},
        {"series_verified", result.counters.series_verified},
        {"margin_comparisons", result.counters.margin_comparisons}}},
  };
}

int cmd_ingest(const std::string& data_path) {
  const geots::Dataset data = geots::read_dataset_csv(data_path);
  nlohmann::json j{
      {"series", data.series.size()},
      {"length", data.n},
      {"bbox", {data.bbox.lo.x, data.bbox.lo.y, data.bbox.hi.x, data.bbox.hi.y}},
      {"value_range", {data.value_range.min, data.value_range.max}},
  };
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_synthesize(const std::string& data_path, std::size_t factor, std::uint64_t seed,
                   const std::string& out_path) {
  const geots::Dataset base = geots::read_dataset_csv(data_path);
  const geots::Dataset grown = geots::synthesize(base, factor, seed);
  geots::write_dataset_csv(grown, out_path);
  std::cerr << "wrote " << grown.series.size() << " series to " << out_path << '\n';
  return kExitOk;
}

int cmd_build(const std::string& data_path, const IndexOptions& index_opts,
              const std::string& out_path) {
  const geots::Dataset data = geots::read_dataset_csv(data_path);
  if (index_opts.index_kind.empty()) throw std::invalid_argument("--index is required");
  const geots::Index index =
      geots::build_index(data, parse_index_kind(index_opts.index_kind), index_opts.config);
  geots::save_index(index, out_path);
  std::cerr << "built " << index_opts.index_kind << " index over " << data.series.size()
            << " series, saved to " << out_path << '\n';
  return kExitOk;
}

int cmd_query(const std::string& data_path, const IndexOptions& index_opts,
              const std::string& kind, const std::string& method, const ParamOptions& params,
              std::optional<geots::SeriesId> query_id, const std::string& query_file) {
  const geots::Dataset data = geots::read_dataset_csv(data_path);
  const geots::Index index = index_opts.resolve(data);
  const geots::QueryEngine engine(data, index);

  geots::QuerySpec spec;
  spec.kind = parse_kind(kind);
  spec.method = parse_method(method);

  geots::WorkloadSpec resolver;
  resolver.kind = spec.kind;
  params.fill(resolver);
  const geots::ResolvedParams resolved = geots::resolve_workload_params(resolver, data);
  spec.rho = resolved.rho;
  spec.eps = resolved.eps;
  spec.delta = params.delta;
  spec.k = params.k;

  if (query_id) {
    const auto it = std::find_if(data.series.begin(), data.series.end(),
                                 [&](const auto& t) { return t.id == *query_id; });
    if (it == data.series.end())
      throw std::invalid_argument("query id " + std::to_string(*query_id) +
                                  " not found in dataset");
    spec.query = *it;
  } else if (!query_file.empty()) {
    const geots::Dataset qd = geots::read_dataset_csv(query_file);
    spec.query = qd.series.front();
  } else {
    throw std::invalid_argument("either --query-id or --query-file is required");
  }

  const geots::QueryResult result = engine.run(spec);
  nlohmann::json j = result_json(result);
  j["params"] = {{"kind", kind},   {"method", method},        {"rho", spec.rho},
                 {"eps", spec.eps}, {"delta", spec.delta},    {"k", spec.k},
                 {"query_id", spec.query.id}};
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& data_path, const IndexOptions& index_opts,
              geots::WorkloadSpec spec, const ParamOptions& params, const std::string& out_csv,
              const std::string& out_json) {
  const geots::Dataset data = geots::read_dataset_csv(data_path);
  const geots::Index index = index_opts.resolve(data);
  const geots::QueryEngine engine(data, index);
  params.fill(spec);

  const geots::WorkloadReport report = geots::run_workload(engine, spec);

  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw std::runtime_error(out_csv + ": cannot open for writing");
    geots::write_report_csv(report, out);
  } else {
    geots::write_report_csv(report, std::cout);
  }
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    if (!out) throw std::runtime_error(out_json + ": cannot open for writing");
    out << geots::report_json(report) << '\n';
  }

  std::cerr << "mean wall: " << report.mean_wall_us << " us over " << report.rows.size()
            << " queries";
  if (spec.verify) std::cerr << ", oracle mismatches: " << report.mismatches;
  std::cerr << '\n';
  return spec.verify && report.mismatches > 0 ? kExitVerifyFailed : kExitOk;
}

int cmd_verify(const std::string& data_path, const std::string& kinds, std::size_t queries,
               std::uint64_t seed, const ParamOptions& params,
               const geots::IndexConfig& config) {
  const geots::Dataset data = geots::read_dataset_csv(data_path);
  const geots::Index btsr = geots::build_index(data, geots::IndexKind::btsr, config);
  const geots::Index sbtsr = geots::build_index(data, geots::IndexKind::sbtsr, config);
  const geots::QueryEngine engines[2] = {{data, btsr}, {data, sbtsr}};

  std::vector<geots::QueryKind> kind_list;
  if (kinds == "all")
    kind_list = {geots::QueryKind::rr, geots::QueryKind::kr, geots::QueryKind::rk};
  else
    kind_list = {parse_kind(kinds)};

  std::size_t mismatches = 0;
  for (const geots::QueryEngine& engine : engines) {
    for (geots::QueryKind kind : kind_list) {
      for (geots::Method method : {geots::Method::sweep, geots::Method::checkpoint}) {
        geots::WorkloadSpec spec;
        spec.kind = kind;
        spec.method = method;
        spec.queries = queries;
        spec.seed = seed;
        spec.verify = true;
        params.fill(spec);
        const geots::WorkloadReport report = geots::run_workload(engine, spec);
        mismatches += report.mismatches;
        std::cerr << (engine.index().kind == geots::IndexKind::btsr ? "btsr" : "sbtsr") << '/'
                  << kind_name(kind) << '/'
                  << (method == geots::Method::sweep ? "sweep" : "checkpoint") << ": "
                  << report.mismatches << " mismatches over " << report.rows.size()
                  << " queries\n";
      }
    }
  }
  if (mismatches > 0) {
    std::cerr << "verification FAILED: " << mismatches << " mismatching answers\n";
    return kExitVerifyFailed;
  }
  std::cerr << "verification passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid local-similarity search over geolocated time series"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_data;
  auto* ingest = app.add_subcommand("ingest", "Validate a CSV dataset and print its summary");
  ingest->add_option("--data", ingest_data, "CSV file (id,x,y,v1,...,vn)")->required();

  // synthesize
  std::string syn_data, syn_out;
  std::size_t syn_factor = 2;
  std::uint64_t syn_seed = 42;
  auto* synthesize = app.add_subcommand("synthesize", "Scale a dataset up with jittered copies");
  synthesize->add_option("--data", syn_data, "Base CSV file")->required();
  synthesize->add_option("--factor", syn_factor, "Total size multiplier")
      ->check(CLI::Range(2, 4));
  synthesize->add_option("--seed", syn_seed, "Jitter seed");
  synthesize->add_option("--out", syn_out, "Output CSV file")->required();

  // build
  std::string build_data, build_out;
  IndexOptions build_index_opts;
  auto* build = app.add_subcommand("build", "Build an index and save it");
  build->add_option("--data", build_data, "CSV file")->required();
  build_index_opts.add_to(*build, /*allow_file=*/false);
  build->add_option("--out", build_out, "Output index file")->required();

  // query
  std::string query_data, query_kind, query_method = "checkpoint", query_file;
  IndexOptions query_index_opts;
  ParamOptions query_params;
  std::optional<geots::SeriesId> query_id;
  auto* query = app.add_subcommand("query", "Run a single query");
  query->add_option("--data", query_data, "CSV file")->required();
  query_index_opts.add_to(*query, /*allow_file=*/true);
  query->add_option("--kind", query_kind, "Query kind: rr, kr or rk")
      ->required()
      ->check(CLI::IsMember({"rr", "kr", "rk"}));
  query->add_option("--method", query_method, "sweep or checkpoint")
      ->check(CLI::IsMember({"sweep", "checkpoint"}));
  query_params.add_to(*query);
  query->add_option("--query-id", query_id, "Use this dataset series as the query");
  query->add_option("--query-file", query_file, "One-row CSV holding the query series");

  // bench
  std::string bench_data, bench_kind, bench_method = "checkpoint", bench_csv, bench_json;
  IndexOptions bench_index_opts;
  ParamOptions bench_params;
  geots::WorkloadSpec bench_spec;
  auto* bench = app.add_subcommand("bench", "Run a query workload and report timings");
  bench->add_option("--data", bench_data, "CSV file")->required();
  bench_index_opts.add_to(*bench, /*allow_file=*/true);
  bench->add_option("--kind", bench_kind, "Query kind: rr, kr or rk")
      ->required()
      ->check(CLI::IsMember({"rr", "kr", "rk"}));
  bench->add_option("--method", bench_method, "sweep or checkpoint")
      ->check(CLI::IsMember({"sweep", "checkpoint"}));
  bench->add_option("--queries", bench_spec.queries, "Number of random queries");
  bench->add_option("--workload-seed", bench_spec.seed, "Query sampling seed");
  bench_params.add_to(*bench);
  bench->add_flag("--verify", bench_spec.verify, "Diff every answer against the oracle");
  bench->add_option("--out", bench_csv, "Write the per-query CSV report here");
  bench->add_option("--json", bench_json, "Write the JSON report here");

  // verify
  std::string verify_data, verify_kinds = "all";
  std::size_t verify_queries = 20;
  std::uint64_t verify_seed = 42;
  ParamOptions verify_params;
  IndexOptions verify_index_opts;
  auto* verify =
      app.add_subcommand("verify", "Cross-check both indexes and methods against the oracle");
  verify->add_option("--data", verify_data, "CSV file")->required();
  verify->add_option("--kind", verify_kinds, "rr, kr, rk or all")
      ->check(CLI::IsMember({"rr", "kr", "rk", "all"}));
  verify->add_option("--queries", verify_queries, "Queries per configuration");
  verify->add_option("--workload-seed", verify_seed, "Query sampling seed");
  verify_params.add_to(*verify);
  verify_index_opts.add_to(*verify, /*allow_file=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_data);
    if (*synthesize) return cmd_synthesize(syn_data, syn_factor, syn_seed, syn_out);
    if (*build) return cmd_build(build_data, build_index_opts, build_out);
    if (*query)
      return cmd_query(query_data, query_index_opts, query_kind, query_method, query_params,
                       query_id, query_file);
    if (*bench) {
      bench_spec.kind = parse_kind(bench_kind);
      bench_spec.method = parse_method(bench_method);
      return cmd_bench(bench_data, bench_index_opts, bench_spec, bench_params, bench_csv,
                       bench_json);
    }
    if (*verify)
      return cmd_verify(verify_data, verify_kinds, verify_queries, verify_seed, verify_params,
                        verify_index_opts.config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
