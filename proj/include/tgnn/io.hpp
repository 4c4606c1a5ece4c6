#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgnn/poi_index.hpp"
#include "tgnn/road_network.hpp"
#include "tgnn/solver.hpp"
#include "tgnn/trip.hpp"

namespace tgnn {

/// POI file: one `<poi_id> <node_id>` per line, `#` comments. Coordinates are
/// taken from the network.
std::vector<Poi> load_pois(const std::string& path, const RoadNetwork& net);
void save_pois(const std::string& path, std::span<const Poi> pois);

/// Query file: one group per record. A record is a line with the group size
/// followed, per user, by a line `m_i <node ids...>`; `#` comments allowed.
std::vector<QueryGroup> load_queries(const std::string& path);
void save_queries(const std::string& path, std::span<const QueryGroup> groups);

/// Writes the node/edge text files understood by load_network.
void save_network(const std::string& node_path, const std::string& edge_path,
                  const RoadNetwork& net);

/// Flat `key = value` config file, `#` comments. Later keys override earlier.
std::map<std::string, std::string> load_key_values(const std::string& path);

/// Structured-document forms; to_json/from_json round-trip exactly.
nlohmann::json to_json(const QueryGroup& group);
QueryGroup group_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Solution& solution);
Solution solution_from_json(const nlohmann::json& j);

/// Plain-text result record: `meetup <poi_id> total_overhead <TO>` followed by
/// one `user <id> <detour_index> <detour_node> <TO_i>` line per user.
std::string format_result_record(const Solution& solution);

}  // namespace tgnn
