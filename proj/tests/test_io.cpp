#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tgnn/bench.hpp"
#include "tgnn/errors.hpp"
#include "tgnn/io.hpp"
#include "tgnn/rng.hpp"
#include "tgnn/workload.hpp"

using namespace tgnn;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = temp_path(name);
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("poi file round trip") {
  const RoadNetwork net = make_grid_network(5);
  const auto pois = generate_pois(net, 0.4, 3);
  const auto path = temp_path("io_pois.txt");
  save_pois(path.string(), pois);
  const auto loaded = load_pois(path.string(), net);
  REQUIRE(loaded.size() == pois.size());
  for (std::size_t i = 0; i < pois.size(); ++i) {
    CHECK(loaded[i].poi_id == pois[i].poi_id);
    CHECK(loaded[i].node == pois[i].node);
    CHECK(loaded[i].coord == pois[i].coord);
  }
}

TEST_CASE("poi file errors") {
  const RoadNetwork net = make_grid_network(3);
  const auto bad_node = write_temp("io_pois_bad.txt", "0 99\n");
  CHECK_THROWS_AS(load_pois(bad_node.string(), net), ParseError);
  const auto garbage = write_temp("io_pois_garbage.txt", "0 zero\n");
  CHECK_THROWS_AS(load_pois(garbage.string(), net), ParseError);
}

TEST_CASE("query file round trip") {
  std::vector<QueryGroup> groups(2);
  groups[0].trips = {{0, {0, 5, 9}}, {1, {4, 7}}};
  groups[1].trips = {{0, {1, 2}}};
  const auto path = temp_path("io_queries.txt");
  save_queries(path.string(), groups);
  const auto loaded = load_queries(path.string());
  REQUIRE(loaded.size() == 2);
  REQUIRE(loaded[0].trips.size() == 2);
  CHECK(loaded[0].trips[0].locations == std::vector<NodeId>{0, 5, 9});
  CHECK(loaded[0].trips[1].locations == std::vector<NodeId>{4, 7});
  CHECK(loaded[0].trips[1].user_id == 1);
  CHECK(loaded[1].trips[0].locations == std::vector<NodeId>{1, 2});
}

TEST_CASE("query file errors") {
  const auto short_trip = write_temp("io_q_short.txt", "1\n1 5\n");
  CHECK_THROWS_AS(load_queries(short_trip.string()), ParseError);
  const auto truncated = write_temp("io_q_trunc.txt", "2\n2 0 1\n");
  CHECK_THROWS_AS(load_queries(truncated.string()), ParseError);
  const auto garbage = write_temp("io_q_garbage.txt", "1\n2 a b\n");
  CHECK_THROWS_AS(load_queries(garbage.string()), ParseError);
}

TEST_CASE("network file round trip preserves structure") {
  const RoadNetwork net = normalize(make_grid_network(6));
  const auto nodes = temp_path("io_net_nodes.txt");
  const auto edges = temp_path("io_net_edges.txt");
  save_network(nodes.string(), edges.string(), net);
  const RoadNetwork loaded = load_network(nodes.string(), edges.string());
  CHECK(loaded.node_count() == net.node_count());
  CHECK(loaded.edge_count() == net.edge_count());
  DistanceOracle a(net), b(loaded);
  CHECK(a.shortest_distance(0, 35) == b.shortest_distance(0, 35));
}

TEST_CASE("key=value parsing") {
  const auto path = write_temp("io_kv.txt",
                               "# comment\n"
                               "alpha = 1\n"
                               "beta=two words\n"
                               "alpha = 3\n");
  const auto values = load_key_values(path.string());
  CHECK(values.at("alpha") == "3");  // later wins
  CHECK(values.at("beta") == "two words");
  const auto bad = write_temp("io_kv_bad.txt", "no equals sign\n");
  CHECK_THROWS_AS(load_key_values(bad.string()), ParseError);
}

TEST_CASE("bench spec parsing") {
  const auto path = write_temp("io_spec.txt",
                               "seed = 7\nreps = 3\nn = 4\nm = 5\nrho = 0.02\nqa = 30\n"
                               "dataset = grid\ngrid_size = 25\nnormalize = off\n"
                               "algorithms = EA, EXH\nn_values = 1,2,3\nmeasure_time = off\n");
  const BenchSpec spec = parse_bench_spec(path.string());
  CHECK(spec.workload.seed == 7);
  CHECK(spec.workload.repetitions == 3);
  CHECK(spec.workload.group_size == 4);
  CHECK(spec.workload.trip_length == 5);
  CHECK(spec.workload.poi_density == doctest::Approx(0.02));
  CHECK(spec.workload.query_area == doctest::Approx(30.0));
  CHECK(spec.grid_size == 25);
  CHECK(!spec.normalize_network);
  CHECK(spec.algorithms == std::vector<std::string>{"EA", "EXH"});
  CHECK(spec.n_values == std::vector<int>{1, 2, 3});
  CHECK(!spec.measure_time);

  const auto unknown = write_temp("io_spec_bad.txt", "wat = 1\n");
  CHECK_THROWS_AS(parse_bench_spec(unknown.string()), InvalidInput);
}

TEST_CASE("JSON round trips") {
  QueryGroup group;
  group.trips = {{0, {3, 1, 4}}, {1, {1, 5}}};
  const QueryGroup group2 = group_from_json(to_json(group));
  REQUIRE(group2.trips.size() == group.trips.size());
  for (std::size_t i = 0; i < group.trips.size(); ++i) {
    CHECK(group2.trips[i].user_id == group.trips[i].user_id);
    CHECK(group2.trips[i].locations == group.trips[i].locations);
  }

  Solution solution;
  solution.feasible = true;
  solution.meetup = {12, 34, {5.5, 6.25}};
  solution.total_overhead = 17.125;
  solution.detours = {{0, 2, 9, 10.5}, {1, 1, 3, 6.625}};
  const Solution solution2 = solution_from_json(to_json(solution));
  CHECK(solution2.feasible == solution.feasible);
  CHECK(solution2.meetup.poi_id == solution.meetup.poi_id);
  CHECK(solution2.total_overhead == solution.total_overhead);
  REQUIRE(solution2.detours.size() == 2);
  CHECK(solution2.detours[1].overhead == solution.detours[1].overhead);
  CHECK(solution2.detours[1].detour_index == 1);

  Solution infeasible;
  const Solution infeasible2 = solution_from_json(to_json(infeasible));
  CHECK(!infeasible2.feasible);
  CHECK(std::isinf(infeasible2.total_overhead));
}

TEST_CASE("result record format") {
  Solution solution;
  solution.feasible = true;
  solution.meetup = {3, 10, {1, 1}};
  solution.total_overhead = 4.5;
  solution.detours = {{0, 1, 8, 4.5}};
  const std::string record = format_result_record(solution);
  CHECK(record.find("meetup 3") != std::string::npos);
  CHECK(record.find("user 0 1 8") != std::string::npos);

  Solution infeasible;
  CHECK(format_result_record(infeasible).find("infeasible") != std::string::npos);
}

TEST_CASE("CSV schema and deterministic bytes") {
  std::vector<ExperimentRow> rows(2);
  rows[0] = {"grid10", 2, 3, 0.01, 20, "EA", 0, 0.0, 5, 3, 9, 12.25, "ok"};
  rows[1] = {"grid10", 2, 3, 0.01, 20, "BA", 0, 0.0, 7, 7, 9, 12.25, "ok"};
  const auto path_a = temp_path("io_rows_a.csv");
  const auto path_b = temp_path("io_rows_b.csv");
  write_csv(path_a.string(), rows);
  write_csv(path_b.string(), rows);

  const std::string a = slurp(path_a);
  CHECK(a == slurp(path_b));
  CHECK(a.rfind("dataset,n,m,rho,qa,algorithm,repetition,elapsed_s,pois_dequeued,"
                "pois_evaluated,dijkstra_runs,total_to,status\n",
                0) == 0);
  CHECK(a.find("grid10,2,3,0.01,20,EA,0,0.000000,5,3,9,12.250000000,ok\n") != std::string::npos);

  const auto means = temp_path("io_rows_means.csv");
  write_means_csv(means.string(), rows);
  CHECK(slurp(means).rfind("dataset,n,m,rho,qa,algorithm,reps,", 0) == 0);
}
