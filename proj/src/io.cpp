#include "tgnn/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tgnn/errors.hpp"

namespace tgnn {

namespace {

bool strip_line(std::string& line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line.find_first_not_of(" \t\r\n") != std::string::npos;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  return out;
}

}  // namespace

std::vector<Poi> load_pois(const std::string& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");

  std::vector<Poi> pois;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!strip_line(line)) continue;
    std::istringstream fields(line);
    long long poi_id, node;
    if (!(fields >> poi_id >> node)) throw ParseError(path, line_no, "expected '<poi_id> <node_id>'");
    if (node < 0 || static_cast<std::size_t>(node) >= net.node_count())
      throw ParseError(path, line_no, "POI references unknown node " + std::to_string(node));
    const NodeId node_id = static_cast<NodeId>(node);
    pois.push_back({static_cast<std::int32_t>(poi_id), node_id, net.coord(node_id)});
  }
  return pois;
}

void save_pois(const std::string& path, std::span<const Poi> pois) {
  std::ofstream out = open_out(path);
  out << "# poi_id node_id\n";
  for (const Poi& p : pois) out << p.poi_id << ' ' << p.node << '\n';
}

std::vector<QueryGroup> load_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");

  // Token stream with line tracking for diagnostics.
  std::vector<std::pair<long long, int>> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!strip_line(line)) continue;
    std::istringstream fields(line);
    long long v;
    while (fields >> v) tokens.emplace_back(v, line_no);
    if (!fields.eof()) throw ParseError(path, line_no, "non-numeric token");
  }

  std::vector<QueryGroup> groups;
  std::size_t pos = 0;
  const auto take = [&](const char* what) {
    if (pos >= tokens.size())
      throw ParseError(path, tokens.empty() ? 0 : tokens.back().second,
                       std::string("unexpected end of file, expected ") + what);
    return tokens[pos++];
  };
  while (pos < tokens.size()) {
    const auto [n, n_line] = take("group size");
    if (n < 1) throw ParseError(path, n_line, "group size must be at least 1");
    QueryGroup group;
    for (long long u = 0; u < n; ++u) {
      const auto [m, m_line] = take("trip length");
      if (m < 2) throw ParseError(path, m_line, "trip length must be at least 2");
      Trip trip;
      trip.user_id = static_cast<std::int32_t>(u);
      for (long long j = 0; j < m; ++j) {
        const auto [node, node_line] = take("node id");
        if (node < 0) throw ParseError(path, node_line, "negative node id");
        trip.locations.push_back(static_cast<NodeId>(node));
      }
      group.trips.push_back(std::move(trip));
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

void save_queries(const std::string& path, std::span<const QueryGroup> groups) {
  std::ofstream out = open_out(path);
  out << "# group: '<n>' line, then per user '<m> <node ids...>'\n";
  for (const QueryGroup& group : groups) {
    out << group.size() << '\n';
    for (const Trip& trip : group.trips) {
      out << trip.locations.size();
      for (NodeId loc : trip.locations) out << ' ' << loc;
      out << '\n';
    }
  }
}

void save_network(const std::string& node_path, const std::string& edge_path,
                  const RoadNetwork& net) {
  std::ofstream nodes = open_out(node_path);
  nodes << "# id x y\n";
  for (NodeId id = 0; id < net.node_count(); ++id)
    nodes << id << ' ' << format_double(net.coord(id).x) << ' ' << format_double(net.coord(id).y)
          << '\n';

  std::ofstream edges = open_out(edge_path);
  edges << "# u v weight\n";
  for (NodeId u = 0; u < net.node_count(); ++u)
    for (const RoadNetwork::Edge& e : net.neighbors(u))
      if (u < e.to) edges << u << ' ' << e.to << ' ' << format_double(e.weight) << '\n';
}

std::map<std::string, std::string> load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");

  const auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    const auto last = s.find_last_not_of(" \t\r\n");
    return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
  };

  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!strip_line(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    values[key] = value;
  }
  return values;
}

nlohmann::json to_json(const QueryGroup& group) {
  nlohmann::json trips = nlohmann::json::array();
  for (const Trip& trip : group.trips)
    trips.push_back({{"user_id", trip.user_id}, {"locations", trip.locations}});
  return {{"trips", trips}};
}

QueryGroup group_from_json(const nlohmann::json& j) {
  QueryGroup group;
  for (const auto& t : j.at("trips")) {
    Trip trip;
    trip.user_id = t.at("user_id").get<std::int32_t>();
    trip.locations = t.at("locations").get<std::vector<NodeId>>();
    group.trips.push_back(std::move(trip));
  }
  return group;
}

nlohmann::json to_json(const Solution& solution) {
  nlohmann::json detours = nlohmann::json::array();
  for (const UserDetour& d : solution.detours)
    detours.push_back({{"user_id", d.user_id},
                       {"detour_index", d.detour_index},
                       {"detour_node", d.detour_node},
                       {"overhead", d.overhead}});
  return {{"feasible", solution.feasible},
          {"meetup_poi_id", solution.meetup.poi_id},
          {"meetup_node", solution.meetup.node},
          {"total_overhead", solution.feasible ? nlohmann::json(solution.total_overhead)
                                               : nlohmann::json()},
          {"detours", detours}};
}

Solution solution_from_json(const nlohmann::json& j) {
  Solution solution;
  solution.feasible = j.at("feasible").get<bool>();
  solution.meetup.poi_id = j.at("meetup_poi_id").get<std::int32_t>();
  solution.meetup.node = j.at("meetup_node").get<NodeId>();
  solution.total_overhead =
      j.at("total_overhead").is_null() ? kInfiniteDistance : j.at("total_overhead").get<double>();
  for (const auto& d : j.at("detours")) {
    UserDetour detour;
    detour.user_id = d.at("user_id").get<std::int32_t>();
    detour.detour_index = d.at("detour_index").get<std::int32_t>();
    detour.detour_node = d.at("detour_node").get<NodeId>();
    detour.overhead = d.at("overhead").get<double>();
    solution.detours.push_back(detour);
  }
  return solution;
}

std::string format_result_record(const Solution& solution) {
  std::ostringstream out;
  if (!solution.feasible) {
    out << "infeasible (no reachable meetup POI)\n";
    return out.str();
  }
  char to[64];
  std::snprintf(to, sizeof(to), "%.9f", solution.total_overhead);
  out << "meetup " << solution.meetup.poi_id << " total_overhead " << to << '\n';
  for (const UserDetour& d : solution.detours) {
    std::snprintf(to, sizeof(to), "%.9f", d.overhead);
    out << "user " << d.user_id << ' ' << d.detour_index << ' ' << d.detour_node << ' ' << to
        << '\n';
  }
  return out.str();
}

}  // namespace tgnn
