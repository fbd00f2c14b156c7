#pragma once

#include "mllmn/scenario/attack_model.hpp"

namespace mllmn::scenario {

/// Maximizes average defense subject to sum(p) <= p_total, p >= 0.
///
/// Single-attacker terms are concave in p, so the optimum is water-filling:
/// p_i(lambda) = max(0, (sqrt(o K c / lambda) - K) / c), with lambda found by
/// bisection on the budget. Multi-attacked LBSs are sigmoidal (convex near
/// zero); each is either switched off or restricted to its concave branch, and
/// the best on/off pattern wins. Untargeted LBSs receive 0.
///
/// Throws Error(refused) when no LBS is targeted, Error(solver_error) when the
/// bisection fails to meet the budget to 1e-6 relative.
PowerAllocation optimal_allocation(const WirelessScenario& s, const AttackAssignment& a);

/// Exhaustive search over the budget simplex at grid_step_w resolution.
/// Refuses n_lbs > 4.
PowerAllocation brute_force_allocation(const WirelessScenario& s, const AttackAssignment& a,
                                       double grid_step_w);

}  // namespace mllmn::scenario
