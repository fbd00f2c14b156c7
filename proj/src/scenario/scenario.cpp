#include "mllmn/scenario/scenario.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <numeric>

#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"

namespace mllmn::scenario {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(Errc::invalid_config, fmt::format("scenario.{} must be a finite value > 0 (got {})", field, v));
}

Point sample_on_disc(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

double norm(Point p) { return std::hypot(p.x, p.y); }

void WirelessScenario::validate() const {
  require_positive(radius_m, "radius_m");
  require_positive(p_total_w, "p_total_w");
  require_positive(p_fbs_w, "p_fbs_w");
  require_positive(alpha, "alpha");
  require_positive(noise_w, "noise_w");
  require_positive(redundancy_bpshz, "redundancy_bpshz");
  require_positive(bandwidth_hz, "bandwidth_hz");
  if (n_lbs < 1) throw Error(Errc::invalid_config, "scenario.n_lbs must be >= 1");
  if (lbs_pos.size() != n_lbs)
    throw Error(Errc::invalid_config,
                fmt::format("scenario.lbs_pos has {} points but n_lbs is {}", lbs_pos.size(), n_lbs));
  if (fbs_pos.size() != n_fbs)
    throw Error(Errc::invalid_config,
                fmt::format("scenario.fbs_pos has {} points but n_fbs is {}", fbs_pos.size(), n_fbs));
  // Points sampled as r*cos, r*sin can exceed r by an ulp.
  const double limit = radius_m * (1.0 + 1e-12);
  for (std::size_t i = 0; i < lbs_pos.size(); ++i)
    if (norm(lbs_pos[i]) > limit)
      throw Error(Errc::invalid_config, fmt::format("scenario.lbs_pos[{}] lies outside the disc", i));
  for (std::size_t i = 0; i < fbs_pos.size(); ++i)
    if (norm(fbs_pos[i]) > limit)
      throw Error(Errc::invalid_config, fmt::format("scenario.fbs_pos[{}] lies outside the disc", i));
}

WirelessScenario generate_scenario(std::uint64_t seed, const ScenarioOverrides& o) {
  WirelessScenario s;
  s.seed = seed;
  if (o.radius_m) s.radius_m = *o.radius_m;
  if (o.n_lbs) s.n_lbs = *o.n_lbs;
  if (o.n_fbs) s.n_fbs = *o.n_fbs;
  if (o.p_total_w) s.p_total_w = *o.p_total_w;
  if (o.p_fbs_w) s.p_fbs_w = *o.p_fbs_w;
  if (o.alpha) s.alpha = *o.alpha;
  if (o.noise_w) s.noise_w = *o.noise_w;
  if (o.redundancy_bpshz) s.redundancy_bpshz = *o.redundancy_bpshz;
  if (o.bandwidth_hz) s.bandwidth_hz = *o.bandwidth_hz;

  Rng rng(seed);
  s.lbs_pos.reserve(s.n_lbs);
  for (std::size_t i = 0; i < s.n_lbs; ++i) s.lbs_pos.push_back(sample_on_disc(rng, s.radius_m));
  s.fbs_pos.reserve(s.n_fbs);
  for (std::size_t i = 0; i < s.n_fbs; ++i) s.fbs_pos.push_back(sample_on_disc(rng, s.radius_m));
  s.validate();
  return s;
}

double PowerAllocation::total() const { return std::accumulate(powers_w.begin(), powers_w.end(), 0.0); }

bool AttackAssignment::is_targeted(std::size_t lbs) const {
  return std::find(target_of.begin(), target_of.end(), lbs) != target_of.end();
}

AttackAssignment assign_attackers(const WirelessScenario& s) {
  if (s.n_lbs < 1 || s.lbs_pos.empty()) throw Error(Errc::invalid_argument, "assign_attackers needs at least one LBS");
  AttackAssignment a;
  a.target_of.reserve(s.fbs_pos.size());
  for (const auto& f : s.fbs_pos) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.lbs_pos.size(); ++i) {
      const double dx = s.lbs_pos[i].x - f.x;
      const double dy = s.lbs_pos[i].y - f.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    a.target_of.push_back(best);
  }
  return a;
}

}  // namespace mllmn::scenario
