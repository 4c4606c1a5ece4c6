#include "tgnn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "tgnn/baseline.hpp"
#include "tgnn/errors.hpp"
#include "tgnn/io.hpp"
#include "tgnn/rng.hpp"
#include "tgnn/solver.hpp"

namespace tgnn {

namespace {

int to_int(const std::string& key, const std::string& value) {
  try {
    return std::stoi(value);
  } catch (const std::exception&) {
    throw InvalidInput("bad integer for '" + key + "': " + value);
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw InvalidInput("bad number for '" + key + "': " + value);
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw InvalidInput("bad boolean for '" + key + "': " + value);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const std::string& item : split_list(value)) out.push_back(to_int(key, item));
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

BenchSpec parse_bench_spec(const std::string& path) {
  BenchSpec spec;
  for (const auto& [key, value] : load_key_values(path)) {
    if (key == "seed") spec.workload.seed = std::stoull(value);
    else if (key == "reps") spec.workload.repetitions = to_int(key, value);
    else if (key == "n") spec.workload.group_size = to_int(key, value);
    else if (key == "m") spec.workload.trip_length = to_int(key, value);
    else if (key == "rho") spec.workload.poi_density = to_double(key, value);
    else if (key == "qa") spec.workload.query_area = to_double(key, value);
    else if (key == "dataset") spec.dataset = value;
    else if (key == "grid_size") spec.grid_size = to_int(key, value);
    else if (key == "normalize") spec.normalize_network = to_bool(key, value);
    else if (key == "nodes_file") spec.nodes_file = value;
    else if (key == "edges_file") spec.edges_file = value;
    else if (key == "algorithms") spec.algorithms = split_list(value);
    else if (key == "n_values") spec.n_values = to_int_list(key, value);
    else if (key == "m_values") spec.m_values = to_int_list(key, value);
    else if (key == "rho_values") spec.rho_values = to_double_list(key, value);
    else if (key == "qa_values") spec.qa_values = to_double_list(key, value);
    else if (key == "scalability_n") spec.scalability_n = to_int_list(key, value);
    else if (key == "measure_time") spec.measure_time = to_bool(key, value);
    else if (key == "jobs") spec.jobs = to_int(key, value);
    else if (key == "max_nodes") spec.max_nodes = std::stoull(value);
    else throw InvalidInput("unknown spec key '" + key + "'");
  }
  if (spec.dataset != "grid" && spec.dataset != "files")
    throw InvalidInput("dataset must be 'grid' or 'files'");
  if (spec.jobs < 1) throw InvalidInput("jobs must be at least 1");
  return spec;
}

RoadNetwork build_network(const BenchSpec& spec) {
  RoadNetwork net = spec.dataset == "grid" ? make_grid_network(spec.grid_size)
                                           : load_network(spec.nodes_file, spec.edges_file);
  return spec.normalize_network ? normalize(net) : net;
}

namespace {

struct Cell {
  WorkloadSpec params;
  std::vector<std::string> algorithms;
};

SolverConfig config_for(const std::string& algorithm, double tie_tolerance = 1e-9) {
  SolverConfig config;
  config.tie_tolerance = tie_tolerance;
  if (algorithm == "EA") return config;
  config.enable_pt1 = algorithm.find("PT1") != std::string::npos;
  config.enable_pt2 = algorithm.find("PT2") != std::string::npos;
  config.enable_pt3 = algorithm.find("PT3") != std::string::npos;
  return config;
}

bool is_solver_algorithm(const std::string& a) {
  return a == "EA" || a == "EA-none" || a.rfind("EA-PT", 0) == 0;
}

std::vector<Cell> enumerate_cells(const BenchSpec& spec, const std::string& sweep) {
  const std::vector<std::string> ablation = {"EA-none",     "EA-PT1",     "EA-PT2",
                                             "EA-PT3",      "EA-PT1+PT2", "EA-PT1+PT3",
                                             "EA-PT2+PT3",  "EA",         "BA"};
  std::vector<Cell> cells;
  const WorkloadSpec base = spec.workload;
  if (sweep == "n") {
    for (int v : spec.n_values) {
      Cell cell{base, spec.algorithms};
      cell.params.group_size = v;
      cells.push_back(std::move(cell));
    }
  } else if (sweep == "m") {
    for (int v : spec.m_values) {
      Cell cell{base, spec.algorithms};
      cell.params.trip_length = v;
      cells.push_back(std::move(cell));
    }
  } else if (sweep == "rho") {
    for (double v : spec.rho_values) {
      Cell cell{base, spec.algorithms};
      cell.params.poi_density = v;
      cells.push_back(std::move(cell));
    }
  } else if (sweep == "qa") {
    for (double v : spec.qa_values) {
      Cell cell{base, spec.algorithms};
      cell.params.query_area = v;
      cells.push_back(std::move(cell));
    }
  } else if (sweep == "pruning-ablation") {
    cells.push_back({base, ablation});
  } else if (sweep == "scalability") {
    for (int n : spec.scalability_n)
      for (double rho : spec.rho_values) {
        Cell cell{base, {"EA"}};
        cell.params.group_size = n;
        cell.params.poi_density = rho;
        cells.push_back(std::move(cell));
      }
  } else if (sweep == "none") {
    cells.push_back({base, spec.algorithms});
  } else {
    throw InvalidInput("unknown sweep '" + sweep + "'");
  }
  return cells;
}

struct Instance {
  std::vector<Poi> pois;
  QueryGroup group;
};

Instance generate_instance(const RoadNetwork& net, DistanceOracle& oracle,
                           const WorkloadSpec& params, std::uint64_t instance_seed) {
  Instance instance;
  instance.pois = generate_pois(net, params.poi_density, derive_seed(instance_seed, 1));
  const std::size_t min_nodes =
      static_cast<std::size_t>(params.group_size) * static_cast<std::size_t>(params.trip_length);
  const Mbr window =
      place_query_area(net, params.query_area, min_nodes, derive_seed(instance_seed, 2));
  instance.group = generate_group(net, oracle, window, params.group_size, params.trip_length,
                                  derive_seed(instance_seed, 3));
  return instance;
}

std::string dataset_label(const BenchSpec& spec) {
  return spec.dataset == "grid" ? "grid" + std::to_string(spec.grid_size) : "files";
}

ExperimentRow run_algorithm(const RoadNetwork& net, const Instance& instance,
                            const PoiIndex& index, const std::string& algorithm) {
  ExperimentRow row;
  row.algorithm = algorithm;
  DistanceOracle oracle(net);  // fresh per run so counters and timings compare fairly
  if (is_solver_algorithm(algorithm)) {
    const SolverReport report = solve(instance.group, index, oracle, config_for(algorithm));
    row.elapsed_s = report.elapsed_seconds;
    row.pois_dequeued = report.pois_dequeued;
    row.pois_evaluated = report.pois_evaluated;
    row.dijkstra_runs = report.dijkstra_runs;
    row.total_to = report.solution.total_overhead;
  } else if (algorithm == "BA") {
    const BaselineReport report = ba_tgnn(instance.group, instance.pois, oracle);
    row.elapsed_s = report.elapsed_seconds;
    row.pois_dequeued = report.pois_evaluated;
    row.pois_evaluated = report.pois_evaluated;
    row.dijkstra_runs = oracle.sweeps_started();
    row.total_to = report.solution.total_overhead;
  } else if (algorithm == "EXH") {
    const auto started = std::chrono::steady_clock::now();
    const Solution solution = exhaustive(instance.group, instance.pois, oracle);
    row.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    row.pois_dequeued = instance.pois.size();
    row.pois_evaluated = instance.pois.size();
    row.dijkstra_runs = oracle.sweeps_started();
    row.total_to = solution.total_overhead;
  } else {
    throw InvalidInput("unknown algorithm '" + algorithm + "'");
  }
  return row;
}

}  // namespace

std::vector<ExperimentRow> run_bench(const RoadNetwork& net, const BenchSpec& spec,
                                     const std::string& sweep, std::ostream* log) {
  const std::vector<Cell> cells = enumerate_cells(spec, sweep);
  const int reps = spec.workload.repetitions;
  const std::string dataset = dataset_label(spec);

  struct Task {
    std::size_t cell = 0;
    int rep = 0;
    std::size_t row_offset = 0;
  };
  std::vector<Task> tasks;
  std::size_t row_count = 0;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < reps; ++r) {
      tasks.push_back({c, r, row_count});
      row_count += cells[c].algorithms.size();
    }

  std::vector<ExperimentRow> rows(row_count);
  std::vector<std::string> task_errors(tasks.size());

  std::atomic<std::size_t> next_task{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t t = next_task.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      const Cell& cell = cells[task.cell];
      const std::uint64_t instance_seed =
          derive_seed(spec.workload.seed, task.cell * 1024 + static_cast<std::size_t>(task.rep));

      try {
        DistanceOracle gen_oracle(net);
        const Instance instance =
            generate_instance(net, gen_oracle, cell.params, instance_seed);
        const PoiIndex index = PoiIndex::build(instance.pois);

        // One unrecorded warm-up per cell so timed repetitions start hot.
        if (task.rep == 0 && spec.measure_time)
          for (const std::string& algorithm : cell.algorithms)
            run_algorithm(net, instance, index, algorithm);

        for (std::size_t a = 0; a < cell.algorithms.size(); ++a) {
          ExperimentRow row = run_algorithm(net, instance, index, cell.algorithms[a]);
          row.dataset = dataset;
          row.n = cell.params.group_size;
          row.m = cell.params.trip_length;
          row.rho = cell.params.poi_density;
          row.qa = cell.params.query_area;
          row.repetition = task.rep;
          if (!spec.measure_time) row.elapsed_s = 0.0;
          rows[task.row_offset + a] = std::move(row);
        }
      } catch (const InvalidInput& e) {
        // Generation retry exhaustion: record skipped rows, keep going.
        for (std::size_t a = 0; a < cell.algorithms.size(); ++a) {
          ExperimentRow row;
          row.dataset = dataset;
          row.n = cell.params.group_size;
          row.m = cell.params.trip_length;
          row.rho = cell.params.poi_density;
          row.qa = cell.params.query_area;
          row.algorithm = cell.algorithms[a];
          row.repetition = task.rep;
          row.total_to = std::numeric_limits<double>::quiet_NaN();
          row.status = "skipped";
          rows[task.row_offset + a] = std::move(row);
        }
        if (log) *log << "skipped cell rep " << task.rep << " (seed " << instance_seed
                      << "): " << e.what() << '\n';
      } catch (const std::exception& e) {
        task_errors[t] = e.what();
      }
    }
  };

  const int jobs = std::max(1, spec.jobs);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (std::thread& thread : threads) thread.join();

  for (const std::string& error : task_errors)
    if (!error.empty()) throw std::runtime_error("bench task failed: " + error);

  // Cross-algorithm agreement on each instance's total overhead.
  for (const Task& task : tasks) {
    const Cell& cell = cells[task.cell];
    for (std::size_t a = 1; a < cell.algorithms.size(); ++a) {
      const ExperimentRow& base = rows[task.row_offset];
      const ExperimentRow& other = rows[task.row_offset + a];
      if (base.status != "ok" || other.status != "ok") continue;
      const bool both_inf = std::isinf(base.total_to) && std::isinf(other.total_to);
      if (!both_inf && std::abs(base.total_to - other.total_to) > 1e-9)
        throw std::runtime_error(
            "algorithms disagree on total overhead (" + base.algorithm + "=" +
            std::to_string(base.total_to) + ", " + other.algorithm + "=" +
            std::to_string(other.total_to) + ") at cell " + std::to_string(task.cell) +
            " rep " + std::to_string(task.rep));
    }
  }
  return rows;
}

namespace {

std::string csv_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

void write_csv(const std::string& path, std::span<const ExperimentRow> rows) {
  std::ofstream out(path, std::ios::binary);  // LF line endings on every platform
  if (!out) throw InvalidInput("cannot write " + path);
  out << "dataset,n,m,rho,qa,algorithm,repetition,elapsed_s,pois_dequeued,pois_evaluated,"
         "dijkstra_runs,total_to,status\n";
  for (const ExperimentRow& r : rows) {
    out << r.dataset << ',' << r.n << ',' << r.m << ',' << csv_double(r.rho, "%g") << ','
        << csv_double(r.qa, "%g") << ',' << r.algorithm << ',' << r.repetition << ','
        << csv_double(r.elapsed_s, "%.6f") << ',' << r.pois_dequeued << ',' << r.pois_evaluated
        << ',' << r.dijkstra_runs << ',' << csv_double(r.total_to, "%.9f") << ',' << r.status
        << '\n';
  }
}

void write_means_csv(const std::string& path, std::span<const ExperimentRow> rows) {
  struct Aggregate {
    ExperimentRow sample;
    std::vector<double> elapsed;
    double dequeued = 0, evaluated = 0, dijkstra = 0, total_to = 0;
    int count = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Aggregate> cells;
  for (const ExperimentRow& r : rows) {
    if (r.status != "ok") continue;
    std::ostringstream key;
    key << r.dataset << '|' << r.n << '|' << r.m << '|' << r.rho << '|' << r.qa << '|'
        << r.algorithm;
    auto [it, inserted] = cells.try_emplace(key.str());
    if (inserted) {
      it->second.sample = r;
      order.push_back(key.str());
    }
    Aggregate& agg = it->second;
    agg.elapsed.push_back(r.elapsed_s);
    agg.dequeued += static_cast<double>(r.pois_dequeued);
    agg.evaluated += static_cast<double>(r.pois_evaluated);
    agg.dijkstra += static_cast<double>(r.dijkstra_runs);
    agg.total_to += r.total_to;
    ++agg.count;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << "dataset,n,m,rho,qa,algorithm,reps,mean_elapsed_s,stddev_elapsed_s,mean_pois_dequeued,"
         "mean_pois_evaluated,mean_dijkstra_runs,mean_total_to\n";
  for (const std::string& key : order) {
    const Aggregate& agg = cells.at(key);
    const double n = static_cast<double>(agg.count);
    double mean_elapsed = 0;
    for (double e : agg.elapsed) mean_elapsed += e;
    mean_elapsed /= n;
    double var = 0;
    for (double e : agg.elapsed) var += (e - mean_elapsed) * (e - mean_elapsed);
    const double stddev = agg.count > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    const ExperimentRow& s = agg.sample;
    out << s.dataset << ',' << s.n << ',' << s.m << ',' << csv_double(s.rho, "%g") << ','
        << csv_double(s.qa, "%g") << ',' << s.algorithm << ',' << agg.count << ','
        << csv_double(mean_elapsed, "%.6f") << ',' << csv_double(stddev, "%.6f") << ','
        << csv_double(agg.dequeued / n, "%.3f") << ',' << csv_double(agg.evaluated / n, "%.3f")
        << ',' << csv_double(agg.dijkstra / n, "%.3f") << ','
        << csv_double(agg.total_to / n, "%.9f") << '\n';
  }
}

VerifyOutcome run_verify(const RoadNetwork& net, const VerifyOptions& options) {
  VerifyOutcome outcome;

  std::uint64_t attempt = 0;
  const std::uint64_t max_attempts = static_cast<std::uint64_t>(options.instances) * 3 + 16;
  while (outcome.instances_run < options.instances && attempt < max_attempts) {
    const std::uint64_t index = attempt++;
    const WorkloadSpec params{
        options.group_sizes[index % options.group_sizes.size()],
        options.trip_lengths[index % options.trip_lengths.size()],
        options.densities[index % options.densities.size()],
        options.query_areas[index % options.query_areas.size()],
        0,
        1,
    };
    const std::uint64_t instance_seed = derive_seed(options.seed, index);

    DistanceOracle oracle(net);
    Instance instance;
    try {
      instance = generate_instance(net, oracle, params, instance_seed);
    } catch (const InvalidInput&) {
      ++outcome.skipped;
      continue;
    }
    ++outcome.instances_run;

    const PoiIndex index_tree = PoiIndex::build(instance.pois);

    SolverConfig config;
    config.tie_tolerance = options.tie_tolerance;
    config.record_diagnostics = options.replay_rejected || options.drain_remaining;
    config.debug_pt1_radius_scale = options.mutate_pt1_scale;
    const SolverReport report = solve(instance.group, index_tree, oracle, config);

    const Solution reference =
        exhaustive(instance.group, instance.pois, oracle, options.tie_tolerance);

    const auto agrees = [&](const Solution& a, const Solution& b) {
      if (a.feasible != b.feasible) return false;
      if (!a.feasible) return true;
      return std::abs(a.total_overhead - b.total_overhead) <= 1e-9 &&
             a.meetup.poi_id == b.meetup.poi_id;
    };

    bool mismatch = !agrees(report.solution, reference);
    if (options.include_baseline) {
      const BaselineReport baseline =
          ba_tgnn(instance.group, instance.pois, oracle, options.tie_tolerance);
      mismatch = mismatch || !agrees(baseline.solution, reference);
    }
    if (mismatch) {
      ++outcome.mismatches;
      outcome.mismatch_seeds.push_back(instance_seed);
      if (options.log)
        *options.log << "mismatch at instance " << index << " (replay seed " << instance_seed
                     << ", n=" << params.group_size << " m=" << params.trip_length
                     << " rho=" << params.poi_density << " qa=" << params.query_area << ")\n";
    }

    if (options.check_single_pt) {
      for (int technique = 1; technique <= 3; ++technique) {
        SolverConfig single;
        single.tie_tolerance = options.tie_tolerance;
        single.enable_pt1 = technique == 1;
        single.enable_pt2 = technique == 2;
        single.enable_pt3 = technique == 3;
        const SolverReport single_report = solve(instance.group, index_tree, oracle, single);
        if (!agrees(single_report.solution, reference)) {
          ++outcome.single_pt_mismatches;
          outcome.mismatch_seeds.push_back(instance_seed);
          if (options.log)
            *options.log << "single-PT" << technique << " mismatch at instance " << index
                         << " (replay seed " << instance_seed << ")\n";
        }
      }
    }

    // Post-hoc brute force of pruned / never-dequeued POIs: none may beat the
    // returned answer.
    const auto replay_total = [&](std::int32_t poi_id) {
      const Poi& poi = *std::find_if(instance.pois.begin(), instance.pois.end(),
                                     [poi_id](const Poi& p) { return p.poi_id == poi_id; });
      double total = 0.0;
      for (const Trip& trip : instance.group.trips)
        total += compute_trip_overhead(poi, trip, oracle, options.tie_tolerance).overhead;
      return total;
    };
    if (options.replay_rejected) {
      for (std::int32_t poi_id : report.rejected_poi_ids) {
        ++outcome.rejected_checked;
        if (replay_total(poi_id) < report.solution.total_overhead - 1e-9)
          ++outcome.rejected_violations;
      }
    }
    if (options.drain_remaining && report.terminated_by_coverage &&
        !report.undequeued_poi_ids.empty()) {
      ++outcome.coverage_terminated;
      for (std::int32_t poi_id : report.undequeued_poi_ids) {
        ++outcome.drained_checked;
        if (replay_total(poi_id) < report.solution.total_overhead - 1e-9)
          ++outcome.drained_violations;
      }
    }
  }
  return outcome;
}

}  // namespace tgnn
