#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tgnn/road_network.hpp"
#include "tgnn/workload.hpp"

namespace tgnn {

/// Parsed benchmark/verification configuration (flat key=value file; see
/// README for the key list and defaults).
struct BenchSpec {
  WorkloadSpec workload;

  std::string dataset = "grid";  // "grid" (synthetic lattice) or "files"
  int grid_size = 60;
  bool normalize_network = true;
  std::string nodes_file;
  std::string edges_file;

  std::vector<std::string> algorithms = {"EA", "BA"};
  std::vector<int> n_values = {2, 4, 6, 8, 10};
  std::vector<int> m_values = {2, 4, 6, 8, 10};
  std::vector<double> rho_values = {0.001, 0.005, 0.01, 0.05};
  std::vector<double> qa_values = {25, 50, 75, 100};
  std::vector<int> scalability_n = {5, 10, 15, 20, 25, 30};

  bool measure_time = true;  // false zeroes the elapsed column for reproducible CSV
  int jobs = 1;
  std::size_t max_nodes = 20000;  // verification-size cap
};

BenchSpec parse_bench_spec(const std::string& path);

/// Builds the network the spec names (synthetic grid or files), normalized
/// when requested.
RoadNetwork build_network(const BenchSpec& spec);

struct ExperimentRow {
  std::string dataset;
  int n = 0;
  int m = 0;
  double rho = 0.0;
  double qa = 0.0;
  std::string algorithm;
  int repetition = 0;
  double elapsed_s = 0.0;
  std::uint64_t pois_dequeued = 0;
  std::uint64_t pois_evaluated = 0;
  std::uint64_t dijkstra_runs = 0;
  double total_to = 0.0;
  std::string status = "ok";  // ok | skipped (generation retries exhausted)
};

/// Runs one sweep (n, m, rho, qa, pruning-ablation, scalability, or none for
/// a single cell). Rows come back in deterministic order regardless of the
/// parallelism degree. Throws when algorithms disagree on the total overhead
/// of the same instance.
std::vector<ExperimentRow> run_bench(const RoadNetwork& net, const BenchSpec& spec,
                                     const std::string& sweep, std::ostream* log = nullptr);

void write_csv(const std::string& path, std::span<const ExperimentRow> rows);

/// Per-cell means and standard deviations over the ok rows.
void write_means_csv(const std::string& path, std::span<const ExperimentRow> rows);

struct VerifyOptions {
  int instances = 200;
  std::vector<int> group_sizes = {1, 2, 3, 4, 5, 6};
  std::vector<int> trip_lengths = {2, 3, 4, 5, 6};
  std::vector<double> densities = {0.005, 0.01, 0.05};
  std::vector<double> query_areas = {10, 20, 40};
  std::uint64_t seed = 42;
  double tie_tolerance = 1e-9;
  bool include_baseline = true;
  bool check_single_pt = false;   // additionally run each technique alone
  bool replay_rejected = false;   // brute-force every pruned POI afterwards
  bool drain_remaining = false;   // brute-force every undequeued POI afterwards
  double mutate_pt1_scale = 1.0;  // != 1 deliberately corrupts the pt1 radius
  std::ostream* log = nullptr;
};

struct VerifyOutcome {
  int instances_run = 0;
  int skipped = 0;
  int mismatches = 0;            // solver vs exhaustive vs baseline disagreements
  int single_pt_mismatches = 0;
  int coverage_terminated = 0;   // instances that stopped with a non-empty queue
  std::uint64_t rejected_checked = 0;
  std::uint64_t rejected_violations = 0;  // pruned POI that would beat the answer
  std::uint64_t drained_checked = 0;
  std::uint64_t drained_violations = 0;   // undequeued POI that would beat the answer
  std::vector<std::uint64_t> mismatch_seeds;
};

/// Cross-checks solve against the reference solvers on seeded random
/// instances, cycling the option lists by instance index. Mismatching
/// instances report their seed for replay.
VerifyOutcome run_verify(const RoadNetwork& net, const VerifyOptions& options);

}  // namespace tgnn
