#include "mllmn/harness/config.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <sstream>

#include "mllmn/common/error.hpp"

namespace mllmn::harness {

namespace {

using nlohmann::json;
using responders::ResponderKind;
using responders::ResponderProfile;

constexpr double kDefaultNoise[] = {0.02, 0.05, 0.08, 0.10, 0.12, 0.15, 0.20, 0.25};
constexpr std::uint64_t kProfileSeedBase = 1000;

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::validation_error, msg); }

/// Reads the fields of one JSON object and rejects keys nobody asked for.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(fmt::format("{}: expected an object", where()));
  }

  std::string where(std::string_view key = {}) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

  const json* find(std::string_view key) {
    known_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  void u64(std::string_view key, std::uint64_t& out) {
    if (auto v = find(key)) {
      if (!v->is_number_unsigned()) fail(fmt::format("{}: expected a non-negative integer", where(key)));
      out = v->get<std::uint64_t>();
    }
  }
  void size(std::string_view key, std::size_t& out) {
    std::uint64_t x = out;
    u64(key, x);
    out = static_cast<std::size_t>(x);
  }
  void number(std::string_view key, double& out) {
    if (auto v = find(key)) {
      if (!v->is_number()) fail(fmt::format("{}: expected a number", where(key)));
      out = v->get<double>();
    }
  }
  template <class T>
  void opt_number(std::string_view key, std::optional<T>& out) {
    if (auto v = find(key)) {
      if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_unsigned()) fail(fmt::format("{}: expected a non-negative integer", where(key)));
      } else if (!v->is_number()) {
        fail(fmt::format("{}: expected a number", where(key)));
      }
      out = v->get<T>();
    }
  }
  void string(std::string_view key, std::string& out) {
    if (auto v = find(key)) {
      if (!v->is_string()) fail(fmt::format("{}: expected a string", where(key)));
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!known_.count(it.key())) fail(fmt::format("{}: unknown key", where(it.key())));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

std::string kind_options() {
  std::string out;
  for (auto k : {ResponderKind::NearOptimal, ResponderKind::Proportional, ResponderKind::Uniform,
                 ResponderKind::Random, ResponderKind::MaliciousInverse, ResponderKind::Remote}) {
    if (!out.empty()) out += ", ";
    out += responders::to_string(k);
  }
  return out;
}

void read_consensus(const json& j, consensus::ConsensusConfig& c) {
  Fields f(j, "consensus");
  if (auto v = f.find("protocol")) {
    const auto name = v->is_string() ? v->get<std::string>() : v->dump();
    const auto p = consensus::parse_protocol(name);
    if (!p)
      fail(fmt::format("consensus.protocol: unknown protocol '{}' (valid options: {})", name,
                       consensus::protocol_options()));
    c.protocol = *p;
  }
  f.size("n", c.n);
  f.size("f", c.f);
  f.size("tpbft_committee_size", c.tpbft_committee_size);
  f.size("abcpbft_committee_size", c.abcpbft_committee_size);
  f.u64("base_msg_bits", c.base_msg_bits);
  f.u64("signature_bits", c.signature_bits);
  f.size("view_change_budget", c.view_change_budget);
  if (auto v = f.find("abc_params")) {
    Fields a(*v, "consensus.abc_params");
    a.size("population", c.abc.population);
    a.size("iterations", c.abc.iterations);
    a.size("scout_limit", c.abc.scout_limit);
    a.finish();
  }
  if (auto v = f.find("trust_weights")) {
    Fields w(*v, "consensus.trust_weights");
    w.number("w_trust", c.trust_weights.w_trust);
    w.number("w_bits", c.trust_weights.w_bits);
    w.finish();
  }
  f.finish();
}

void read_network(const json& j, netsim::NetworkConfig& n) {
  Fields f(j, "network");
  f.number("bandwidth_hz", n.bandwidth_hz);
  f.number("channel_rate_bps", n.channel_rate_bps);
  f.number("transmission_rate_bps", n.transmission_rate_bps);
  f.number("per_attempt_success", n.per_attempt_success);
  f.number("reliability_target", n.reliability_target);
  f.finish();
}

void read_overrides(const json& j, scenario::ScenarioOverrides& o) {
  Fields f(j, "scenario_overrides");
  f.opt_number("radius_m", o.radius_m);
  f.opt_number("n_lbs", o.n_lbs);
  f.opt_number("n_fbs", o.n_fbs);
  f.opt_number("p_total_w", o.p_total_w);
  f.opt_number("p_fbs_w", o.p_fbs_w);
  f.opt_number("alpha", o.alpha);
  f.opt_number("noise_w", o.noise_w);
  f.opt_number("redundancy_bpshz", o.redundancy_bpshz);
  f.opt_number("bandwidth_hz", o.bandwidth_hz);
  f.finish();
}

ResponderProfile read_profile(const json& j, std::size_t i) {
  Fields f(j, fmt::format("responder_profiles[{}]", i));
  ResponderProfile p;
  std::uint64_t id = i;
  f.u64("id", id);
  p.id = NodeId(static_cast<std::uint32_t>(id));
  if (auto v = f.find("kind")) {
    const auto name = v->is_string() ? v->get<std::string>() : v->dump();
    const auto k = responders::parse_responder_kind(name);
    if (!k) fail(fmt::format("{}: unknown kind '{}' (valid options: {})", f.where("kind"), name, kind_options()));
    p.kind = *k;
  }
  f.number("noise_sigma", p.noise_sigma);
  p.seed = kProfileSeedBase + i;
  f.u64("seed", p.seed);
  f.string("endpoint", p.endpoint);
  f.finish();
  return p;
}

}  // namespace

std::vector<ResponderProfile> default_profiles(std::size_t n, std::size_t f) {
  const std::size_t malicious = std::min<std::size_t>({2, f, n});
  std::vector<ResponderProfile> out;
  for (std::size_t i = 0; i < n; ++i) {
    ResponderProfile p;
    p.id = NodeId(static_cast<std::uint32_t>(i));
    p.seed = kProfileSeedBase + i;
    if (i + malicious >= n) {
      p.kind = ResponderKind::MaliciousInverse;
    } else {
      p.kind = ResponderKind::NearOptimal;
      p.noise_sigma = kDefaultNoise[i % std::size(kDefaultNoise)];
    }
    out.push_back(p);
  }
  return out;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.responder_profiles = default_profiles(c.consensus.n, c.consensus.f);
  return c;
}

void ExperimentConfig::validate() const {
  if (trials < 1) fail("trials: must be at least 1");
  try {
    consensus.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  try {
    network.validate();
  } catch (const Error& e) {
    fail(fmt::format("network: {}", e.what()));
  }
  if (responder_profiles.size() != consensus.n)
    fail(fmt::format("responder_profiles: {} profiles given but consensus.n is {}", responder_profiles.size(),
                     consensus.n));
  std::vector<bool> seen(consensus.n, false);
  for (std::size_t i = 0; i < responder_profiles.size(); ++i) {
    const auto& p = responder_profiles[i];
    if (p.id.index >= consensus.n)
      fail(fmt::format("responder_profiles[{}].id: {} is outside [0, {})", i, p.id.index, consensus.n));
    if (seen[p.id.index]) fail(fmt::format("responder_profiles[{}].id: duplicate id {}", i, p.id.index));
    seen[p.id.index] = true;
    try {
      p.validate();
    } catch (const Error& e) {
      fail(fmt::format("responder_profiles[{}]: {}", i, e.what()));
    }
  }
  if (sweep.parameter != "reliability_target" && sweep.parameter != "per_attempt_success")
    fail(fmt::format("sweep.parameter: unknown parameter '{}' (valid options: reliability_target, per_attempt_success)",
                     sweep.parameter));
  if (sweep.values.empty()) fail("sweep.values: must not be empty");
  for (double v : sweep.values) {
    netsim::NetworkConfig probe = network;
    (sweep.parameter == "reliability_target" ? probe.reliability_target : probe.per_attempt_success) = v;
    try {
      probe.validate();
    } catch (const Error& e) {
      fail(fmt::format("sweep.values: {} is invalid for {}: {}", v, sweep.parameter, e.what()));
    }
  }
  if (!(single_noise_sigma >= 0.0 && single_noise_sigma <= 1.0))
    fail(fmt::format("single_noise_sigma: {} must be in [0, 1]", single_noise_sigma));
  if (history_length < 1) fail("history_length: must be at least 1");
  if (!(remote.timeout_s > 0.0)) fail("remote.timeout_s: must be positive");
  if (remote.max_in_flight < 1) fail("remote.max_in_flight: must be at least 1");
  try {
    (void)scenario::generate_scenario(seed, scenario_overrides);
  } catch (const Error& e) {
    fail(fmt::format("scenario_overrides: {}", e.what()));
  }
}

std::vector<NodeId> ExperimentConfig::byzantine_nodes() const {
  std::vector<NodeId> out;
  for (const auto& p : responder_profiles)
    if (p.kind == ResponderKind::MaliciousInverse) out.push_back(p.id);
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.is_null()) {
    c = default_config();
    c.validate();
    return c;
  }
  Fields f(j, "");
  f.u64("seed", c.seed);
  f.size("trials", c.trials);
  if (auto v = f.find("consensus")) read_consensus(*v, c.consensus);
  if (auto v = f.find("network")) read_network(*v, c.network);
  if (auto v = f.find("scenario_overrides")) read_overrides(*v, c.scenario_overrides);
  if (auto v = f.find("responder_profiles")) {
    if (!v->is_array()) fail("responder_profiles: expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) c.responder_profiles.push_back(read_profile((*v)[i], i));
  } else {
    c.responder_profiles = default_profiles(c.consensus.n, c.consensus.f);
  }
  if (auto v = f.find("sweep")) {
    Fields s(*v, "sweep");
    s.string("parameter", c.sweep.parameter);
    if (auto vals = s.find("values")) {
      if (!vals->is_array()) fail("sweep.values: expected an array of numbers");
      c.sweep.values.clear();
      for (const auto& x : *vals) {
        if (!x.is_number()) fail("sweep.values: expected an array of numbers");
        c.sweep.values.push_back(x.get<double>());
      }
    }
    s.finish();
  }
  if (auto v = f.find("adversary_strategy")) {
    const auto name = v->is_string() ? v->get<std::string>() : v->dump();
    const auto s = consensus::parse_adversary_strategy(name);
    if (!s)
      fail(fmt::format("adversary_strategy: unknown strategy '{}' (valid options: WORST_CANDIDATE, SELF_PROMOTION, "
                       "RANDOM, ABSTAIN, EQUIVOCATE)",
                       name));
    c.adversary_strategy = *s;
  }
  f.number("single_noise_sigma", c.single_noise_sigma);
  f.size("history_length", c.history_length);
  if (auto v = f.find("remote")) {
    Fields r(*v, "remote");
    r.number("timeout_s", c.remote.timeout_s);
    r.size("max_in_flight", c.remote.max_in_flight);
    r.finish();
  }
  f.finish();
  c.remote.history_length = c.history_length;
  c.validate();
  return c;
}

ExperimentConfig parse_config_text(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }))
    return config_from_json(json());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(fmt::format("config is not valid JSON: {}", e.what()));
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(fmt::format("config file '{}' cannot be opened", path.string()));
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const ExperimentConfig& c) {
  json profiles = json::array();
  for (const auto& p : c.responder_profiles) {
    json jp{{"id", p.id.index},
            {"kind", responders::to_string(p.kind)},
            {"noise_sigma", p.noise_sigma},
            {"seed", p.seed}};
    if (!p.endpoint.empty()) jp["endpoint"] = p.endpoint;
    profiles.push_back(jp);
  }
  json overrides = json::object();
  const auto& o = c.scenario_overrides;
  auto put = [&](const char* k, const auto& v) {
    if (v) overrides[k] = *v;
  };
  put("radius_m", o.radius_m);
  put("n_lbs", o.n_lbs);
  put("n_fbs", o.n_fbs);
  put("p_total_w", o.p_total_w);
  put("p_fbs_w", o.p_fbs_w);
  put("alpha", o.alpha);
  put("noise_w", o.noise_w);
  put("redundancy_bpshz", o.redundancy_bpshz);
  put("bandwidth_hz", o.bandwidth_hz);
  const auto& k = c.consensus;
  return {
      {"seed", c.seed},
      {"trials", c.trials},
      {"consensus",
       {{"protocol", consensus::to_string(k.protocol)},
        {"n", k.n},
        {"f", k.f},
        {"tpbft_committee_size", k.tpbft_committee_size},
        {"abcpbft_committee_size", k.abcpbft_committee_size},
        {"base_msg_bits", k.base_msg_bits},
        {"signature_bits", k.signature_bits},
        {"view_change_budget", k.view_change_budget},
        {"abc_params",
         {{"population", k.abc.population}, {"iterations", k.abc.iterations}, {"scout_limit", k.abc.scout_limit}}},
        {"trust_weights", {{"w_trust", k.trust_weights.w_trust}, {"w_bits", k.trust_weights.w_bits}}}}},
      {"network",
       {{"bandwidth_hz", c.network.bandwidth_hz},
        {"channel_rate_bps", c.network.channel_rate_bps},
        {"transmission_rate_bps", c.network.transmission_rate_bps},
        {"per_attempt_success", c.network.per_attempt_success},
        {"reliability_target", c.network.reliability_target}}},
      {"scenario_overrides", overrides},
      {"responder_profiles", profiles},
      {"sweep", {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}}},
      {"adversary_strategy", consensus::to_string(c.adversary_strategy)},
      {"single_noise_sigma", c.single_noise_sigma},
      {"history_length", c.history_length},
      {"remote", {{"timeout_s", c.remote.timeout_s}, {"max_in_flight", c.remote.max_in_flight}}},
  };
}

}  // namespace mllmn::harness
