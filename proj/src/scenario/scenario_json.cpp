#include "mllmn/scenario/scenario_json.hpp"

#include <fstream>
#include <sstream>

#include "mllmn/common/error.hpp"

namespace mllmn::scenario {

using nlohmann::json;

namespace {

json points_to_json(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(json::array({p.x, p.y}));
  return arr;
}

std::vector<Point> points_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::parse_error, std::string("scenario.") + field + " must be an array");
  std::vector<Point> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw Error(Errc::parse_error, std::string("scenario.") + field + " entries must be [x, y] pairs");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(Errc::parse_error, std::string("scenario JSON is missing '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("scenario.") + name + ": " + e.what());
  }
}

}  // namespace

json to_json(const WirelessScenario& s) {
  return json{{"radius_m", s.radius_m},
              {"n_lbs", s.n_lbs},
              {"n_fbs", s.n_fbs},
              {"lbs_pos", points_to_json(s.lbs_pos)},
              {"fbs_pos", points_to_json(s.fbs_pos)},
              {"p_total_w", s.p_total_w},
              {"p_fbs_w", s.p_fbs_w},
              {"alpha", s.alpha},
              {"noise_w", s.noise_w},
              {"redundancy_bpshz", s.redundancy_bpshz},
              {"bandwidth_hz", s.bandwidth_hz},
              {"seed", s.seed}};
}

WirelessScenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "scenario JSON must be an object");
  WirelessScenario s;
  s.radius_m = field<double>(j, "radius_m");
  s.n_lbs = field<std::size_t>(j, "n_lbs");
  s.n_fbs = field<std::size_t>(j, "n_fbs");
  if (!j.contains("lbs_pos") || !j.contains("fbs_pos"))
    throw Error(Errc::parse_error, "scenario JSON is missing positions");
  s.lbs_pos = points_from_json(j.at("lbs_pos"), "lbs_pos");
  s.fbs_pos = points_from_json(j.at("fbs_pos"), "fbs_pos");
  s.p_total_w = field<double>(j, "p_total_w");
  s.p_fbs_w = field<double>(j, "p_fbs_w");
  s.alpha = field<double>(j, "alpha");
  s.noise_w = field<double>(j, "noise_w");
  s.redundancy_bpshz = field<double>(j, "redundancy_bpshz");
  s.bandwidth_hz = field<double>(j, "bandwidth_hz");
  s.seed = field<std::uint64_t>(j, "seed");
  s.validate();
  return s;
}

void save_scenario(const WirelessScenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << to_json(s).dump(2) << '\n';
}

WirelessScenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return scenario_from_json(json::parse(buf.str()));
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
}

}  // namespace mllmn::scenario
