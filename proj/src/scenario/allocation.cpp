#include "mllmn/scenario/allocation.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <optional>

#include "mllmn/common/error.hpp"

namespace mllmn::scenario {

namespace {

constexpr int kMaxBisection = 200;
constexpr std::size_t kMaxEnumeratedSigmoids = 16;

/// Start of the concave branch. Zero for concave terms; the budget itself
/// when the term stays convex over the whole budget.
double inflection_point(const LbsThreat& t, double budget) {
  if (t.defense(0.0).d2 <= 0.0) return 0.0;
  if (t.defense(budget).d2 >= 0.0) return budget;
  double lo = 0.0;
  double hi = budget;
  for (int it = 0; it < kMaxBisection && hi - lo > 1e-12 * budget; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t.defense(mid).d2 > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

/// argmax over p >= lower of h(p) - lambda * p, with h concave on [lower, inf).
double best_response(const LbsThreat& t, double lower, double lambda) {
  if (t.defense(lower).d1 <= lambda) return lower;
  if (t.attackers.size() == 1) {
    const auto& atk = t.attackers.front();
    const double p = (std::sqrt(atk.survival * atk.gain * t.path_gain / lambda) - atk.gain) / t.path_gain;
    return std::max(lower, p);
  }
  double lo = lower;
  double hi = std::max(1.0, 2.0 * lower);
  while (t.defense(hi).d1 > lambda) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < kMaxBisection && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t.defense(mid).d1 > lambda ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct ActiveTerm {
  const LbsThreat* threat;
  double lower;
};

/// Water-filling over the active terms. Returns nullopt when the lower
/// bounds alone exceed the budget.
std::optional<std::vector<double>> water_fill(const std::vector<ActiveTerm>& terms, double budget) {
  std::vector<double> p(terms.size());
  double lower_sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    p[i] = terms[i].lower;
    lower_sum += terms[i].lower;
  }
  if (lower_sum > budget * (1.0 + 1e-12)) return std::nullopt;
  if (terms.empty() || lower_sum >= budget) return p;

  auto fill = [&](double lambda) {
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      p[i] = best_response(*terms[i].threat, terms[i].lower, lambda);
      total += p[i];
    }
    return total;
  };

  double lambda_hi = 0.0;
  for (const auto& t : terms) lambda_hi = std::max(lambda_hi, t.threat->defense(t.lower).d1);
  double lambda_lo = lambda_hi;
  for (int it = 0; fill(lambda_lo) < budget; ++it) {
    if (it > 2000) throw Error(Errc::solver_error, "optimal_allocation: could not bracket the multiplier");
    lambda_lo *= 0.5;
  }
  // Total power is decreasing in lambda: lambda_lo overspends, lambda_hi does not.
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = std::sqrt(lambda_lo * lambda_hi);
    if (mid <= lambda_lo || mid >= lambda_hi) break;
    const double total = fill(mid);
    if (total > budget) {
      lambda_lo = mid;
    } else {
      lambda_hi = mid;
      if (budget - total <= 1e-13 * budget) break;
    }
  }
  const double total = fill(lambda_hi);
  if (std::abs(total - budget) > 1e-6 * budget)
    throw Error(Errc::solver_error,
                fmt::format("optimal_allocation: bisection ended {} W away from the budget", budget - total));
  return p;
}

}  // namespace

PowerAllocation optimal_allocation(const WirelessScenario& s, const AttackAssignment& a) {
  const auto threats = build_threats(s, a);
  if (threats.empty()) throw Error(Errc::refused, "optimal_allocation needs at least one targeted LBS");
  const double budget = s.p_total_w;

  std::vector<double> lower(threats.size());
  std::vector<std::size_t> sigmoid;
  for (std::size_t i = 0; i < threats.size(); ++i) {
    lower[i] = inflection_point(threats[i], budget);
    if (lower[i] > 0.0 && sigmoid.size() < kMaxEnumeratedSigmoids) sigmoid.push_back(i);
  }

  PowerAllocation best{std::vector<double>(s.n_lbs, 0.0)};
  double best_value = -std::numeric_limits<double>::infinity();
  const std::size_t patterns = std::size_t{1} << sigmoid.size();
  // All-on first, so ties favor funding more stations.
  for (std::size_t pattern = patterns; pattern-- > 0;) {
    std::vector<bool> off(threats.size(), false);
    for (std::size_t b = 0; b < sigmoid.size(); ++b)
      if (!(pattern >> b & 1U)) off[sigmoid[b]] = true;

    std::vector<ActiveTerm> active;
    for (std::size_t i = 0; i < threats.size(); ++i)
      if (!off[i]) active.push_back({&threats[i], lower[i]});
    auto powers = water_fill(active, budget);
    if (!powers) continue;

    PowerAllocation candidate{std::vector<double>(s.n_lbs, 0.0)};
    double value = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < threats.size(); ++i) {
      const double p = off[i] ? 0.0 : (*powers)[k++];
      candidate.powers_w[threats[i].lbs] = p;
      value += threats[i].defense(p).value;
    }
    if (value > best_value) {
      best_value = value;
      best = std::move(candidate);
    }
  }
  return best;
}

PowerAllocation brute_force_allocation(const WirelessScenario& s, const AttackAssignment& a,
                                       double grid_step_w) {
  if (s.n_lbs > 4) throw Error(Errc::refused, fmt::format("brute force refuses n_lbs = {} > 4", s.n_lbs));
  if (!(grid_step_w > 0.0)) throw Error(Errc::invalid_argument, "grid step must be > 0");
  const auto threats = build_threats(s, a);
  const auto units = static_cast<long>(std::floor(s.p_total_w / grid_step_w + 1e-9));

  std::vector<double> defense_by_lbs(s.n_lbs, 0.0);
  std::vector<long> current(s.n_lbs, 0);
  std::vector<long> best_units(s.n_lbs, 0);
  double best_value = -std::numeric_limits<double>::infinity();

  auto evaluate = [&] {
    double v = 0.0;
    for (const auto& t : threats) v += t.defense(static_cast<double>(current[t.lbs]) * grid_step_w).value;
    if (v > best_value) {
      best_value = v;
      best_units = current;
    }
  };
  // Enumerate compositions of `units` into n_lbs parts; the last part takes the rest.
  auto recurse = [&](auto&& self, std::size_t idx, long remaining) -> void {
    if (idx + 1 == s.n_lbs) {
      current[idx] = remaining;
      evaluate();
      return;
    }
    for (long u = 0; u <= remaining; ++u) {
      current[idx] = u;
      self(self, idx + 1, remaining - u);
    }
  };
  recurse(recurse, 0, units);

  PowerAllocation out{std::vector<double>(s.n_lbs)};
  for (std::size_t i = 0; i < s.n_lbs; ++i) out.powers_w[i] = static_cast<double>(best_units[i]) * grid_step_w;
  return out;
}

}  // namespace mllmn::scenario
