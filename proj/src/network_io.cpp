#include "savsim/network_io.hpp"

#include <cmath>

#include "savsim/error.hpp"
#include "savsim/fileio.hpp"

namespace savsim {

using nlohmann::json;

namespace {

template <class T>
T field(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorCode::invalid_input, std::string(where) + " is missing '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::invalid_input, std::string(where) + " field '" + key + "' has the wrong type");
  }
}

const json& array_of(const json& doc, const char* key) {
  static const json empty = json::array();
  if (!doc.contains(key)) return empty;
  const json& arr = doc.at(key);
  if (!arr.is_array()) fail(ErrorCode::invalid_input, std::string("'") + key + "' must be an array");
  return arr;
}

}  // namespace

RoadGraph network_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorCode::invalid_input, "network document must be a JSON object");
  RoadGraph graph;
  for (const json& v : array_of(doc, "vertices")) {
    graph.add_vertex(VertexId{field<std::int64_t>(v, "id", "vertex")}, field<double>(v, "x", "vertex"),
                     field<double>(v, "y", "vertex"));
  }
  for (const json& e : array_of(doc, "edges")) {
    std::optional<double> length;
    if (e.contains("length")) length = field<double>(e, "length", "edge");
    graph.add_edge(EdgeId{field<std::int64_t>(e, "id", "edge")},
                   VertexId{field<std::int64_t>(e, "source", "edge")},
                   VertexId{field<std::int64_t>(e, "sink", "edge")},
                   field<double>(e, "free_flow_speed", "edge"),
                   field<int>(e, "capacity_vehicles", "edge"), length);
  }
  for (const json& s : array_of(doc, "stops")) {
    graph.add_stop(StopId{field<std::int64_t>(s, "id", "stop")},
                   EdgeId{field<std::int64_t>(s, "edge", "stop")}, field<double>(s, "slack", "stop"),
                   zone_from_string(field<std::string>(s, "zone", "stop")));
  }
  return graph;
}

json network_to_json(const RoadGraph& graph) {
  json doc;
  doc["vertices"] = json::array();
  for (const Vertex& v : graph.vertices()) doc["vertices"].push_back({{"id", v.id.value}, {"x", v.x}, {"y", v.y}});
  doc["edges"] = json::array();
  for (const DirectedEdge& e : graph.edges()) {
    json item = {{"id", e.id.value},
                 {"source", e.source.value},
                 {"sink", e.sink.value},
                 {"free_flow_speed", e.free_flow_speed},
                 {"capacity_vehicles", e.capacity_vehicles}};
    const bool derived = graph.has_vertex(e.source) && graph.has_vertex(e.sink) &&
                         e.length == edge_weight(graph.vertex(e.source), graph.vertex(e.sink));
    if (!derived) item["length"] = e.length;
    doc["edges"].push_back(std::move(item));
  }
  doc["stops"] = json::array();
  for (const Stop& s : graph.stops()) {
    doc["stops"].push_back({{"id", s.id.value},
                            {"edge", s.edge.value},
                            {"slack", s.slack},
                            {"zone", std::string(to_string(s.zone))}});
  }
  return doc;
}

RoadGraph read_network_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail(ErrorCode::invalid_input, path.string() + ": malformed JSON");
  try {
    return network_from_json(doc);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

RoadGraph load_network(const std::filesystem::path& path) {
  RoadGraph graph = read_network_file(path);
  const ValidationReport report = validate_graph(graph);
  if (!report.ok()) {
    fail(ErrorCode::config, path.string() + " failed validation:\n" + report.to_string());
  }
  return graph;
}

void save_network(const RoadGraph& graph, const std::filesystem::path& path) {
  const std::string text = network_to_json(graph).dump(2) + "\n";
  write_file_atomically(path, [&](std::ostream& out) { out << text; });
}

}  // namespace savsim
