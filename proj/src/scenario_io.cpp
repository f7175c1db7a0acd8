#include "savsim/scenario_io.hpp"

#include "savsim/error.hpp"
#include "savsim/fileio.hpp"

namespace savsim {

using nlohmann::json;

json scenario_to_json(const ScenarioConfig& c) {
  json doc;
  doc["label"] = c.label;
  doc["network"] = c.network.generic_string();
  doc["requests_file"] = c.requests_file ? json(c.requests_file->generic_string()) : json(nullptr);
  doc["horizon"] = c.horizon;
  doc["replications"] = c.replications;
  doc["base_seed"] = c.base_seed;
  doc["fleet_size"] = c.fleet_size;
  doc["profile"] = c.profile;
  doc["occupancy_sample_interval"] = c.occupancy_sample_interval;
  doc["demand"] = {{"outbound_rate", c.demand.outbound_rate},
                   {"inbound_rate", c.demand.inbound_rate},
                   {"party_size_weights", c.demand.party_size_weights},
                   {"horizon", c.demand.horizon}};
  doc["background_flows"] = json::array();
  for (const BackgroundFlow& f : c.background_flows) {
    doc["background_flows"].push_back({{"origin_vertex", f.origin.value},
                                       {"destination_vertex", f.destination.value},
                                       {"rate", f.rate}});
  }
  doc["policy"] = {{"overdue_threshold", c.policy.overdue_threshold},
                   {"priority_radius", c.policy.priority_radius},
                   {"detour_budget_factor", c.policy.detour_budget_factor},
                   {"capacity", c.policy.capacity}};
  doc["profiles"] = json::object();
  for (const BehaviorProfile& p : c.profiles) {
    doc["profiles"][p.name] = {{"speed_factor", p.speed_factor}, {"dwell_time", p.dwell_time}};
  }
  return doc;
}

namespace {

template <class T>
void read(const json& obj, const char* key, T& into, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::config, where + key + " has the wrong type");
  }
}

}  // namespace

ScenarioConfig scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail(ErrorCode::config, "scenario document must be a JSON object");
  ScenarioConfig c;
  c.base_dir = base_dir;
  std::string network;
  read(doc, "label", c.label, "");
  read(doc, "network", network, "");
  c.network = network;
  if (doc.contains("requests_file") && !doc["requests_file"].is_null()) {
    std::string file;
    read(doc, "requests_file", file, "");
    c.requests_file = file;
  }
  read(doc, "horizon", c.horizon, "");
  read(doc, "replications", c.replications, "");
  read(doc, "base_seed", c.base_seed, "");
  read(doc, "fleet_size", c.fleet_size, "");
  read(doc, "profile", c.profile, "");
  read(doc, "occupancy_sample_interval", c.occupancy_sample_interval, "");

  c.demand.horizon = c.horizon;
  if (doc.contains("demand")) {
    const json& d = doc.at("demand");
    read(d, "outbound_rate", c.demand.outbound_rate, "demand.");
    read(d, "inbound_rate", c.demand.inbound_rate, "demand.");
    read(d, "party_size_weights", c.demand.party_size_weights, "demand.");
    read(d, "horizon", c.demand.horizon, "demand.");
  }
  if (doc.contains("background_flows")) {
    for (const json& f : doc.at("background_flows")) {
      BackgroundFlow flow;
      std::int64_t origin = -1;
      std::int64_t destination = -1;
      read(f, "origin_vertex", origin, "background_flows[].");
      read(f, "destination_vertex", destination, "background_flows[].");
      read(f, "rate", flow.rate, "background_flows[].");
      flow.origin = VertexId{origin};
      flow.destination = VertexId{destination};
      c.background_flows.push_back(flow);
    }
  }
  if (doc.contains("policy")) {
    const json& p = doc.at("policy");
    read(p, "overdue_threshold", c.policy.overdue_threshold, "policy.");
    read(p, "priority_radius", c.policy.priority_radius, "policy.");
    read(p, "detour_budget_factor", c.policy.detour_budget_factor, "policy.");
    read(p, "capacity", c.policy.capacity, "policy.");
  }
  if (doc.contains("profiles")) {
    for (BehaviorProfile& profile : c.profiles) {
      if (!doc["profiles"].contains(profile.name)) continue;
      const json& p = doc["profiles"][profile.name];
      read(p, "speed_factor", profile.speed_factor, "profiles." + profile.name + ".");
      read(p, "dwell_time", profile.dwell_time, "profiles." + profile.name + ".");
    }
  }
  return c;
}

std::pair<std::string, std::string> parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    fail(ErrorCode::invalid_input, "override '" + std::string(assignment) + "' is not key=value");
  }
  return {std::string(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1))};
}

void apply_override(json& doc, std::string_view key, std::string_view value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part(key.substr(start, dot == std::string_view::npos ? key.npos : dot - start));
    if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else if (node->is_array() && !part.empty() &&
               part.find_first_not_of("0123456789") == std::string::npos &&
               std::stoul(part) < node->size()) {
      node = &(*node)[std::stoul(part)];
    } else {
      fail(ErrorCode::invalid_input, "override key '" + std::string(key) + "' is not a scenario field");
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(std::string(value)) : parsed;
}

json load_scenario_document(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json raw = json::parse(text, nullptr, false);
  if (raw.is_discarded()) fail(ErrorCode::config, path.string() + ": malformed JSON");
  try {
    return scenario_to_json(scenario_from_json(raw, path.parent_path()));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  json doc = load_scenario_document(path);
  for (const std::string& o : overrides) {
    const auto [key, value] = parse_override(o);
    apply_override(doc, key, value);
  }
  return scenario_from_json(doc, path.parent_path());
}

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path) {
  const std::string text = scenario_to_json(config).dump(2) + "\n";
  write_file_atomically(path, [&](std::ostream& out) { out << text; });
}

}  // namespace savsim
