#pragma once

#include <cstdint>
#include <optional>
#include <vector>

/// False-base-station case study: geometry, channel/attack model and the
/// power allocation problem. The UE sits at the origin of a disc of LBSs and
/// FBSs; each FBS attacks its nearest LBS.
namespace mllmn::scenario {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double norm(Point p);

struct WirelessScenario {
  double radius_m = 5000.0;
  std::size_t n_lbs = 30;
  std::size_t n_fbs = 10;
  std::vector<Point> lbs_pos;
  std::vector<Point> fbs_pos;
  double p_total_w = 2000.0;
  double p_fbs_w = 80.0;
  double alpha = 2.5;
  double noise_w = 4e-14;
  double redundancy_bpshz = 1.0;
  double bandwidth_hz = 20e6;  // stored only; cancels out of the attack model
  std::uint64_t seed = 0;

  /// Throws Error(invalid_config) naming the offending field.
  void validate() const;

  friend bool operator==(const WirelessScenario&, const WirelessScenario&) = default;
};

struct ScenarioOverrides {
  std::optional<double> radius_m;
  std::optional<std::size_t> n_lbs;
  std::optional<std::size_t> n_fbs;
  std::optional<double> p_total_w;
  std::optional<double> p_fbs_w;
  std::optional<double> alpha;
  std::optional<double> noise_w;
  std::optional<double> redundancy_bpshz;
  std::optional<double> bandwidth_hz;
};

/// Positions uniform on the disc (r = R * sqrt(u)); LBSs are drawn first.
WirelessScenario generate_scenario(std::uint64_t seed, const ScenarioOverrides& overrides = {});

struct PowerAllocation {
  std::vector<double> powers_w;

  double total() const;
  friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;
};

/// target_of[j] is the LBS index attacked by FBS j.
struct AttackAssignment {
  std::vector<std::size_t> target_of;

  bool is_targeted(std::size_t lbs) const;
  friend bool operator==(const AttackAssignment&, const AttackAssignment&) = default;
};

/// Nearest LBS per FBS; ties go to the lower LBS index.
AttackAssignment assign_attackers(const WirelessScenario& s);

}  // namespace mllmn::scenario
