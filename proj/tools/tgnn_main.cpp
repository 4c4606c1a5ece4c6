#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgnn/baseline.hpp"
#include "tgnn/bench.hpp"
#include "tgnn/errors.hpp"
#include "tgnn/io.hpp"
#include "tgnn/rng.hpp"
#include "tgnn/solver.hpp"
#include "tgnn/workload.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInvalid = 4;

struct SolveArgs {
  std::string nodes_file, edges_file, poi_file, query_file, json_out;
  bool pt1 = true, pt2 = true, pt3 = true;
  bool prune_internal = false;
  bool do_normalize = false;
  double tie_tolerance = 1e-9;
};

int cmd_solve(const SolveArgs& args) {
  tgnn::RoadNetwork net = tgnn::load_network(args.nodes_file, args.edges_file);
  if (args.do_normalize) net = tgnn::normalize(net);
  const std::vector<tgnn::Poi> pois = tgnn::load_pois(args.poi_file, net);
  const std::vector<tgnn::QueryGroup> groups = tgnn::load_queries(args.query_file);
  const tgnn::PoiIndex index = tgnn::PoiIndex::build(pois);

  tgnn::SolverConfig config;
  config.enable_pt1 = args.pt1;
  config.enable_pt2 = args.pt2;
  config.enable_pt3 = args.pt3;
  config.prune_internal_nodes = args.prune_internal;
  config.tie_tolerance = args.tie_tolerance;

  nlohmann::json results = nlohmann::json::array();
  bool any_infeasible = false;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    tgnn::DistanceOracle oracle(net);
    const tgnn::SolverReport report = tgnn::solve(groups[g], index, oracle, config);
    std::cout << "group " << g << '\n' << tgnn::format_result_record(report.solution);
    std::printf("pruning {%s%s%s} dequeued %llu evaluated %llu dijkstra_runs %llu elapsed_s %.6f\n",
                args.pt1 ? "PT1 " : "", args.pt2 ? "PT2 " : "", args.pt3 ? "PT3" : "",
                static_cast<unsigned long long>(report.pois_dequeued),
                static_cast<unsigned long long>(report.pois_evaluated),
                static_cast<unsigned long long>(report.dijkstra_runs), report.elapsed_seconds);
    any_infeasible = any_infeasible || !report.solution.feasible;
    nlohmann::json entry = tgnn::to_json(report.solution);
    entry["group"] = g;
    entry["pois_dequeued"] = report.pois_dequeued;
    entry["pois_evaluated"] = report.pois_evaluated;
    entry["dijkstra_runs"] = report.dijkstra_runs;
    results.push_back(std::move(entry));
  }
  if (!args.json_out.empty()) {
    std::ofstream out(args.json_out);
    out << nlohmann::json{{"results", results}}.dump(2) << '\n';
  }
  return any_infeasible ? kExitInfeasible : 0;
}

int cmd_gen(const std::string& spec_file, const std::string& out_dir) {
  const tgnn::BenchSpec spec = tgnn::parse_bench_spec(spec_file);
  const tgnn::RoadNetwork net = tgnn::build_network(spec);

  tgnn::save_network(out_dir + "/nodes.txt", out_dir + "/edges.txt", net);

  const std::uint64_t instance_seed = tgnn::derive_seed(spec.workload.seed, 0);
  const std::vector<tgnn::Poi> pois =
      tgnn::generate_pois(net, spec.workload.poi_density, tgnn::derive_seed(instance_seed, 1));
  tgnn::save_pois(out_dir + "/pois.txt", pois);

  tgnn::DistanceOracle oracle(net);
  const std::size_t min_nodes = static_cast<std::size_t>(spec.workload.group_size) *
                                static_cast<std::size_t>(spec.workload.trip_length);
  const tgnn::Mbr window = tgnn::place_query_area(net, spec.workload.query_area, min_nodes,
                                                  tgnn::derive_seed(instance_seed, 2));
  std::vector<tgnn::QueryGroup> groups;
  for (int r = 0; r < spec.workload.repetitions; ++r)
    groups.push_back(tgnn::generate_group(net, oracle, window, spec.workload.group_size,
                                          spec.workload.trip_length,
                                          tgnn::derive_seed(instance_seed, 3 + r)));
  tgnn::save_queries(out_dir + "/queries.txt", groups);

  std::cout << "wrote " << net.node_count() << " nodes, " << net.edge_count() << " edges, "
            << pois.size() << " pois, " << groups.size() << " query groups to " << out_dir
            << '\n';
  return 0;
}

int cmd_bench(const std::string& spec_file, const std::string& sweep, const std::string& out_csv,
              int jobs_override, std::uint64_t seed_override, bool has_seed, int reps_override) {
  tgnn::BenchSpec spec = tgnn::parse_bench_spec(spec_file);
  if (jobs_override > 0) spec.jobs = jobs_override;
  if (has_seed) spec.workload.seed = seed_override;
  if (reps_override > 0) spec.workload.repetitions = reps_override;

  const tgnn::RoadNetwork net = tgnn::build_network(spec);
  const std::vector<tgnn::ExperimentRow> rows = tgnn::run_bench(net, spec, sweep, &std::cerr);
  tgnn::write_csv(out_csv, rows);

  std::string means_path = out_csv;
  const auto dot = means_path.rfind('.');
  means_path = (dot == std::string::npos ? means_path : means_path.substr(0, dot)) + "_means.csv";
  tgnn::write_means_csv(means_path, rows);

  std::cout << "wrote " << rows.size() << " rows to " << out_csv << " (means: " << means_path
            << ")\n";
  return 0;
}

int cmd_verify(const std::string& spec_file, int instances, bool mutate) {
  const tgnn::BenchSpec spec = tgnn::parse_bench_spec(spec_file);
  const tgnn::RoadNetwork net = tgnn::build_network(spec);
  if (net.node_count() > spec.max_nodes) {
    std::cerr << "network has " << net.node_count() << " nodes, above the verification cap of "
              << spec.max_nodes << " (raise max_nodes in the spec to override)\n";
    return kExitInvalid;
  }

  tgnn::VerifyOptions options;
  options.instances = instances;
  options.seed = spec.workload.seed;
  options.group_sizes.clear();
  for (int n = 1; n <= spec.workload.group_size; ++n) options.group_sizes.push_back(n);
  options.trip_lengths.clear();
  for (int m = 2; m <= spec.workload.trip_length; ++m) options.trip_lengths.push_back(m);
  options.densities = {spec.workload.poi_density};
  options.query_areas = {spec.workload.query_area};
  options.log = &std::cerr;
  if (mutate) options.mutate_pt1_scale = 0.0;  // deliberately corrupt the pt1 radius

  if (instances == 0) {
    std::cout << "0/0 match (warning: no instances requested)\n";
    return 0;
  }
  const tgnn::VerifyOutcome outcome = tgnn::run_verify(net, options);
  const int matched = outcome.instances_run - outcome.mismatches;
  std::cout << matched << '/' << outcome.instances_run << " match";
  if (outcome.skipped > 0) std::cout << " (" << outcome.skipped << " skipped)";
  std::cout << '\n';
  if (mutate) {
    std::cout << (outcome.mismatches > 0 ? "mutation detected as expected\n"
                                         : "mutation NOT detected\n");
    return outcome.mismatches > 0 ? 0 : kExitError;
  }
  return outcome.mismatches == 0 ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trip-based group nearest neighbor query engine"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "answer queries from files");
  solve->add_option("--nodes", solve_args.nodes_file, "node file")->required();
  solve->add_option("--edges", solve_args.edges_file, "edge file")->required();
  solve->add_option("--pois", solve_args.poi_file, "POI file")->required();
  solve->add_option("--queries", solve_args.query_file, "query file")->required();
  solve->add_option("--json", solve_args.json_out, "also write results as JSON");
  solve->add_flag("--pt1,!--no-pt1", solve_args.pt1, "first pruning technique (default on)");
  solve->add_flag("--pt2,!--no-pt2", solve_args.pt2, "second pruning technique (default on)");
  solve->add_flag("--pt3,!--no-pt3", solve_args.pt3, "third pruning technique (default on)");
  solve->add_flag("--prune-internal", solve_args.prune_internal,
                  "also discard index subtrees outside the search area");
  solve->add_flag("--normalize", solve_args.do_normalize, "rescale network to 1000x1000");
  solve->add_option("--tie-tol", solve_args.tie_tolerance, "tie tolerance (default 1e-9)");

  std::string spec_file, out_path = "results.csv", sweep = "none", out_dir = ".";
  int jobs = 0, instances = 200, reps = 0;
  std::uint64_t seed = 0;
  bool mutate = false;

  CLI::App* bench = app.add_subcommand("bench", "run a parameter sweep and write CSV");
  bench->add_option("--spec", spec_file, "workload spec file")->required();
  bench->add_option("--sweep", sweep, "n|m|rho|qa|pruning-ablation|scalability|none");
  bench->add_option("--out", out_path, "output CSV path");
  bench->add_option("--jobs", jobs, "parallel workers (overrides spec)");
  CLI::Option* seed_opt = bench->add_option("--seed", seed, "seed (overrides spec)");
  bench->add_option("--reps", reps, "repetitions (overrides spec)");

  CLI::App* verify = app.add_subcommand("verify", "cross-check the solver against the oracles");
  verify->add_option("--spec", spec_file, "workload spec file")->required();
  verify->add_option("--instances", instances, "instance count (default 200)");
  verify->add_flag("--mutate", mutate, "corrupt a pruning radius; expects mismatches");

  CLI::App* gen = app.add_subcommand("gen", "generate instance files from a spec");
  gen->add_option("--spec", spec_file, "workload spec file")->required();
  gen->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_args);
    if (bench->parsed())
      return cmd_bench(spec_file, sweep, out_path, jobs, seed, seed_opt->count() > 0, reps);
    if (verify->parsed()) return cmd_verify(spec_file, instances, mutate);
    if (gen->parsed()) return cmd_gen(spec_file, out_dir);
  } catch (const tgnn::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const tgnn::InfeasibleQuery& e) {
    std::cerr << "infeasible query: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const tgnn::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
