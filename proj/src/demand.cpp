#include "savsim/demand.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>

#include "savsim/error.hpp"

namespace savsim {

void DemandProfile::validate() const {
  if (!(outbound_rate >= 0.0) || !(inbound_rate >= 0.0) || !std::isfinite(outbound_rate) ||
      !std::isfinite(inbound_rate)) {
    fail(ErrorCode::invalid_input, "demand rates must be finite and non-negative");
  }
  double total = 0.0;
  for (double w : party_size_weights) {
    if (!(w >= 0.0)) fail(ErrorCode::invalid_input, "party size weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::invalid_input, "party size weights must sum to 1");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    fail(ErrorCode::invalid_input, "demand horizon must be positive");
  }
}

namespace {

std::vector<StopId> stops_in(std::span<const Stop> stops, Zone zone) {
  std::vector<StopId> ids;
  for (const Stop& s : stops) {
    if (s.zone == zone) ids.push_back(s.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void draw_direction(double rate, const std::vector<StopId>& from, const std::vector<StopId>& to,
                    const DemandProfile& profile, std::uint64_t seed, std::uint32_t stream,
                    std::vector<TripRequest>& out) {
  if (rate <= 0.0) return;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> gap(rate / 3600.0);
  std::uniform_int_distribution<std::size_t> pick_from(0, from.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_to(0, to.size() - 1);
  std::discrete_distribution<int> party(profile.party_size_weights.begin(),
                                        profile.party_size_weights.end());
  for (double t = gap(rng); t < profile.horizon; t += gap(rng)) {
    TripRequest r;
    r.request_time = t;
    r.origin = from[pick_from(rng)];
    r.destination = to[pick_to(rng)];
    r.party_size = party(rng) + 1;
    out.push_back(r);
  }
}

}  // namespace

std::vector<TripRequest> generate_requests(const DemandProfile& profile,
                                           std::span<const Stop> stops, std::uint64_t seed) {
  profile.validate();
  const auto housing = stops_in(stops, Zone::peripheral_housing);
  const auto opportunity = stops_in(stops, Zone::central_opportunity);
  const bool need_both = profile.outbound_rate > 0.0 || profile.inbound_rate > 0.0;
  if (need_both && (housing.empty() || opportunity.empty())) {
    fail(ErrorCode::invalid_input,
         "demand needs at least one peripheral_housing and one central_opportunity stop");
  }

  std::vector<TripRequest> outbound;
  std::vector<TripRequest> inbound;
  draw_direction(profile.outbound_rate, housing, opportunity, profile, seed, 1, outbound);
  draw_direction(profile.inbound_rate, opportunity, housing, profile, seed, 2, inbound);

  std::vector<TripRequest> merged;
  merged.reserve(outbound.size() + inbound.size());
  std::merge(outbound.begin(), outbound.end(), inbound.begin(), inbound.end(),
             std::back_inserter(merged),
             [](const TripRequest& a, const TripRequest& b) { return a.request_time < b.request_time; });
  for (std::size_t i = 0; i < merged.size(); ++i) merged[i].id = RequestId{static_cast<std::int64_t>(i)};
  return merged;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_number(const std::string& text, std::size_t line_no) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && *begin == ' ') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  while (ptr < end && *ptr == ' ') ++ptr;
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::invalid_input,
         "request file line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<TripRequest> load_requests(std::istream& in, const RoadGraph& graph) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<TripRequest> requests;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      if (line != "id,origin,destination,request_time_s,party_size") {
        fail(ErrorCode::invalid_input, "request file has an unexpected header: " + line);
      }
      have_header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 5) {
      fail(ErrorCode::invalid_input,
           "request file line " + std::to_string(line_no) + ": expected 5 fields");
    }
    TripRequest r;
    r.id = RequestId{parse_number<std::int64_t>(f[0], line_no)};
    r.origin = StopId{parse_number<std::int64_t>(f[1], line_no)};
    r.destination = StopId{parse_number<std::int64_t>(f[2], line_no)};
    r.request_time = parse_number<double>(f[3], line_no);
    r.party_size = parse_number<int>(f[4], line_no);
    const std::string name = "request " + std::to_string(r.id.value);
    for (StopId s : {r.origin, r.destination}) {
      if (!graph.has_stop(s)) {
        fail(ErrorCode::not_found, name + " references unknown stop " + std::to_string(s.value));
      }
    }
    if (r.origin == r.destination) fail(ErrorCode::invalid_input, name + " has origin == destination");
    if (r.party_size < 1) fail(ErrorCode::invalid_input, name + " has party_size < 1");
    if (!(r.request_time >= 0.0) || !std::isfinite(r.request_time)) {
      fail(ErrorCode::invalid_input, name + " has a negative request time");
    }
    requests.push_back(r);
  }
  std::stable_sort(requests.begin(), requests.end(), [](const TripRequest& a, const TripRequest& b) {
    if (a.request_time != b.request_time) return a.request_time < b.request_time;
    return a.id < b.id;
  });
  std::unordered_set<RequestId> ids;
  for (const TripRequest& r : requests) {
    if (!ids.insert(r.id).second) {
      fail(ErrorCode::invalid_input, "duplicate request id " + std::to_string(r.id.value));
    }
  }
  return requests;
}

std::vector<TripRequest> load_requests(const std::filesystem::path& path, const RoadGraph& graph) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot read " + path.string());
  try {
    return load_requests(in, graph);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void write_requests(std::ostream& out, std::span<const TripRequest> requests) {
  out << "id,origin,destination,request_time_s,party_size\n";
  char buf[64];
  for (const TripRequest& r : requests) {
    auto res = std::to_chars(buf, buf + sizeof(buf), r.request_time);
    out << r.id.value << ',' << r.origin.value << ',' << r.destination.value << ','
        << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << ',' << r.party_size
        << '\n';
  }
}

}  // namespace savsim
