#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"
#include "mllmn/responders/responder.hpp"
#include "mllmn/scenario/allocation.hpp"
#include "mllmn/scenario/attack_model.hpp"
#include "mllmn/scenario/scenario_json.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mllmn;
using namespace mllmn::scenario;
using testutil::random_small;
using testutil::toy;

namespace {

double objective(const WirelessScenario& s, const PowerAllocation& p) {
  return average_defense(s, p, assign_attackers(s)).average_defense;
}

}  // namespace

TEST(GenerateScenario, DeterministicAndInsideDisc) {
  const auto a = generate_scenario(42), b = generate_scenario(42), c = generate_scenario(43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.lbs_pos, c.lbs_pos);
  EXPECT_EQ(a.n_lbs, 30u);
  EXPECT_EQ(a.n_fbs, 10u);
  EXPECT_EQ(a.lbs_pos.size(), 30u);
  EXPECT_EQ(a.fbs_pos.size(), 10u);
  for (const auto& p : a.lbs_pos) EXPECT_LE(norm(p), 5000.0);
  for (const auto& p : a.fbs_pos) EXPECT_LE(norm(p), 5000.0);
  EXPECT_EQ(a.p_total_w, 2000.0);
  EXPECT_EQ(a.p_fbs_w, 80.0);
  EXPECT_EQ(a.alpha, 2.5);
  EXPECT_EQ(a.noise_w, 4e-14);
  EXPECT_EQ(a.redundancy_bpshz, 1.0);
  EXPECT_EQ(a.bandwidth_hz, 20e6);
}

TEST(GenerateScenario, UniformOnDiscRadiusDistribution) {
  // r = R sqrt(u) gives P(r <= R/2) = 1/4.
  ScenarioOverrides o;
  o.n_lbs = 4000;
  o.n_fbs = 0;
  const auto s = generate_scenario(3, o);
  std::size_t inner = 0;
  for (const auto& p : s.lbs_pos) inner += norm(p) <= 2500.0;
  EXPECT_NEAR(static_cast<double>(inner) / 4000.0, 0.25, 0.03);
}

TEST(GenerateScenario, Overrides) {
  ScenarioOverrides o;
  o.n_lbs = 3;
  o.n_fbs = 1;
  const auto s = generate_scenario(1, o);
  EXPECT_EQ(s.lbs_pos.size(), 3u);
  EXPECT_EQ(s.fbs_pos.size(), 1u);
  o.alpha = -1.0;
  EXPECT_THROW(generate_scenario(1, o), Error);
}

TEST(ChannelGain, Values) {
  // Reference values in long double.
  EXPECT_NEAR(channel_gain(80, 1000, 2.5), static_cast<double>(80.0L * std::pow(1000.0L, -2.5L)), 1e-18);
  EXPECT_NEAR(channel_gain(80, 1000, 2.5), 2.52982e-6, 1e-11);
  EXPECT_NEAR(channel_gain(50, 800, 2.5), 2.76214e-6, 1e-11);
  EXPECT_DOUBLE_EQ(channel_gain(33.0, 1.0, 2.5), 33.0);
  EXPECT_DOUBLE_EQ(channel_gain(33.0, 0.0, 2.5), 33.0);  // clamped to 1 m
}

TEST(AttackSuccess, WorkedValueAndMonteCarlo) {
  auto s = toy({{800, 0}}, {{0, 1000}});
  const PowerAllocation p{{50.0}};
  const auto a = assign_attackers(s);
  const double closed = attack_success_prob(s, p, a, 0);
  EXPECT_NEAR(closed, 0.47805, 1e-4);
  const auto mc = oracle::monte_carlo_attack(s, p.powers_w, a.target_of, 0, 1'000'000, 99);
  EXPECT_LE(std::abs(mc.mean - closed), 3 * mc.std_error);
}

TEST(AttackSuccess, UntargetedAndSymmetric) {
  auto s = toy({{1000, 0}, {-3000, 0}}, {{1000, 10}});
  const auto a = assign_attackers(s);
  ASSERT_EQ(a.target_of[0], 0u);
  EXPECT_EQ(attack_success_prob(s, PowerAllocation{{5.0, 5.0}}, a, 1), 0.0);

  auto sym = toy({{1000, 0}}, {{0, 1000}});
  const double g = channel_gain(80, 1000, 2.5);
  EXPECT_NEAR(attack_success_prob(sym, PowerAllocation{{80.0}}, assign_attackers(sym), 0),
              0.5 * outage_factor(g, sym.noise_w, sym.redundancy_bpshz), 1e-15);
}

TEST(AttackSuccess, ZeroPowerIsOutageFactorAlone) {
  auto s = toy({{800, 0}}, {{0, 1000}});
  const double g = channel_gain(80, 1000, 2.5);
  EXPECT_DOUBLE_EQ(attack_success_prob(s, PowerAllocation{{0.0}}, assign_attackers(s), 0),
                   outage_factor(g, s.noise_w, s.redundancy_bpshz));
  EXPECT_GT(outage_factor(g, s.noise_w, s.redundancy_bpshz), 0.9999);
}

TEST(AttackSuccess, MultipleAttackersCombineIndependently) {
  auto s = toy({{500, 0}}, {{600, 0}, {400, 100}});
  const auto a = assign_attackers(s);
  const PowerAllocation p{{100.0}};
  const double gl = channel_gain(100, 500, 2.5);
  double survive = 1.0;
  for (auto f : s.fbs_pos) {
    const double gf = channel_gain(80, norm(f), 2.5);
    survive *= 1.0 - gf / (gf + gl) * outage_factor(gf, s.noise_w, 1.0);
  }
  EXPECT_NEAR(attack_success_prob(s, p, a, 0), 1.0 - survive, 1e-15);
  const auto mc = oracle::monte_carlo_attack(s, p.powers_w, a.target_of, 0, 1'000'000, 5);
  EXPECT_LE(std::abs(mc.mean - (1.0 - survive)), 3 * mc.std_error);
}

TEST(AverageDefense, Limits) {
  ScenarioOverrides o;
  o.n_fbs = 0;
  const auto none = generate_scenario(1, o);
  EXPECT_EQ(average_defense(none, PowerAllocation{std::vector<double>(30, 0.0)}, assign_attackers(none)).average_defense,
            1.0);

  auto s = toy({{1000, 0}, {0, 2000}}, {{1000, 5}, {0, 2005}});
  const auto r = average_defense(s, PowerAllocation{{0.0, 0.0}}, assign_attackers(s));
  EXPECT_LT(r.average_defense, 1e-6);
}

TEST(AverageDefense, HandComputedToy) {
  auto s = toy({{1000, 0}, {0, 2000}, {-3000, 0}}, {{1200, 0}, {0, 2500}});
  const PowerAllocation p{{100.0, 300.0, 50.0}};
  const auto a = assign_attackers(s);
  ASSERT_EQ(a.target_of, (std::vector<std::size_t>{0, 1}));
  auto term = [&](double pl, double dl, double df) {
    const double gl = pl * std::pow(dl, -2.5), gf = 80 * std::pow(df, -2.5);
    return gf / (gf + gl) * std::exp(-4e-14 / gf);
  };
  const double expected = (1 - term(100, 1000, 1200) + 1 - term(300, 2000, 2500) + 1.0) / 3.0;
  const auto r = average_defense(s, p, a);
  EXPECT_NEAR(r.average_defense, expected, 1e-14);
  double recomputed = 0.0;
  for (double x : r.per_lbs_attack_prob) recomputed += 1 - x;
  EXPECT_NEAR(recomputed / 3, r.average_defense, 1e-15);
  EXPECT_EQ(r.per_lbs_attack_prob[2], 0.0);
}

TEST(AverageDefense, RejectsInvalidAllocations) {
  auto s = toy({{1000, 0}, {0, 2000}}, {{1000, 5}});
  const auto a = assign_attackers(s);
  for (const auto& bad : {PowerAllocation{{1.0}}, PowerAllocation{{-1.0, 1.0}}, PowerAllocation{{1500.0, 600.0}}}) {
    try {
      average_defense(s, bad, a);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_allocation);
    }
  }
}

TEST(AssignAttackers, Rules) {
  std::vector<Point> lbs;
  for (int i = 0; i < 10; ++i) lbs.push_back({100.0 * i, 300.0});
  auto s = toy(lbs, {lbs[7]});
  EXPECT_EQ(assign_attackers(s).target_of[0], 7u);

  auto tie = toy({{0, 0}, {0, 0}, {-100, 0}, {0, 0}, {0, 0}, {100, 0}}, {{0, 50}});
  tie.lbs_pos[0] = {1000, 1000};
  tie.lbs_pos[1] = {2000, 1000};
  tie.lbs_pos[3] = {-2000, 1000};
  tie.lbs_pos[4] = {-1000, -1000};
  EXPECT_EQ(assign_attackers(tie).target_of[0], 2u);  // LBS 2 and 5 equidistant

  const auto def = generate_scenario(42);
  EXPECT_EQ(assign_attackers(def).target_of, oracle::nearest_lbs_scan(def));
}

TEST(OptimalAllocation, SymmetricAndSingle) {
  auto sym = toy({{1000, 0}, {-1000, 0}}, {{1100, 0}, {-1100, 0}});
  const auto p = optimal_allocation(sym, assign_attackers(sym));
  EXPECT_NEAR(p.powers_w[0], 1000.0, 1e-6);
  EXPECT_NEAR(p.powers_w[1], 1000.0, 1e-6);

  auto one = toy({{1000, 0}, {-3000, 0}}, {{1100, 0}});
  const auto q = optimal_allocation(one, assign_attackers(one));
  EXPECT_NEAR(q.powers_w[0], 2000.0, 1e-6);
  EXPECT_EQ(q.powers_w[1], 0.0);
}

TEST(OptimalAllocation, RefusesWithoutTargets) {
  auto s = toy({{1000, 0}}, {});
  try {
    optimal_allocation(s, assign_attackers(s));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::refused);
  }
}

TEST(OptimalAllocation, MatchesBruteForceOnSmallInstances) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto s = random_small(seed, 2 + seed % 2, seed % 3 != 0);
    const auto a = assign_attackers(s);
    const double kkt = objective(s, optimal_allocation(s, a));
    const double grid = objective(s, brute_force_allocation(s, a, 1.0));
    EXPECT_GE(kkt, grid - 1e-3) << "seed " << seed;
  }
}

TEST(OptimalAllocation, StationarityOnPositivePowers) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = generate_scenario(seed);
    const auto a = assign_attackers(s);
    const auto p = optimal_allocation(s, a);
    EXPECT_NEAR(p.total(), s.p_total_w, 1e-6 * s.p_total_w);
    const auto m = marginal_defense(s, p, a);
    double lo = INFINITY, hi = 0;
    for (std::size_t i = 0; i < p.powers_w.size(); ++i)
      if (p.powers_w[i] > 0) {
        lo = std::min(lo, m[i]);
        hi = std::max(hi, m[i]);
      }
    EXPECT_LE((hi - lo) / hi, 1e-6) << "seed " << seed;
  }
}

TEST(OptimalAllocation, DominatesBaselines) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto s = generate_scenario(seed);
    const auto ctx = responders::ScenarioContext::build(s);
    const double best = ctx.evaluate(ctx.optimum);
    for (auto kind : {responders::ResponderKind::Uniform, responders::ResponderKind::Proportional,
                      responders::ResponderKind::Random}) {
      responders::ResponderProfile prof{NodeId(0), kind, 0.0, seed, {}};
      EXPECT_GE(best, ctx.evaluate(responders::propose(prof, ctx).allocation)) << seed;
    }
  }
}

TEST(BruteForce, Guards) {
  auto one = toy({{1000, 0}}, {{1100, 0}});
  EXPECT_DOUBLE_EQ(brute_force_allocation(one, assign_attackers(one), 1.0).powers_w[0], 2000.0);
  auto sym = toy({{1000, 0}, {-1000, 0}}, {{1100, 0}, {-1100, 0}});
  const auto p = brute_force_allocation(sym, assign_attackers(sym), 1.0);
  EXPECT_LE(std::abs(p.powers_w[0] - 1000.0), 1.0);
  ScenarioOverrides o;
  o.n_lbs = 5;
  const auto big = generate_scenario(1, o);
  try {
    brute_force_allocation(big, assign_attackers(big), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::refused);
  }
}

TEST(Objective, MonotoneInOwnPower) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = generate_scenario(500 + trial);
    const auto a = assign_attackers(s);
    std::vector<double> p(s.n_lbs);
    for (auto& x : p) x = rng.uniform() * 30;
    for (auto target : a.target_of) {
      auto q = p;
      q[target] += 5.0;
      EXPECT_LT(attack_success_prob(s, {q}, a, target), attack_success_prob(s, {p}, a, target));
      EXPECT_GE(average_defense(s, {q}, a).average_defense, average_defense(s, {p}, a).average_defense);
    }
  }
}

TEST(Objective, ConcaveAlongSegmentsForSingleAttackerInstances) {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_small(seed, 3, true);
    const auto a = assign_attackers(s);
    auto point = [&] {
      std::vector<double> w(3);
      double t = 0;
      for (auto& x : w) t += (x = rng.exponential());
      for (auto& x : w) x = x / t * s.p_total_w;
      return w;
    };
    for (int k = 0; k < 10; ++k) {
      const auto x = point(), y = point();
      std::vector<double> mid(3);
      for (int i = 0; i < 3; ++i) mid[i] = 0.5 * (x[i] + y[i]);
      EXPECT_GE(objective(s, {mid}) + 1e-9, 0.5 * (objective(s, {x}) + objective(s, {y})));
    }
  }
}

TEST(ScenarioJson, RoundTripIsBitExact) {
  const auto s = generate_scenario(42);
  EXPECT_EQ(scenario_from_json(to_json(s)), s);
  const auto path = std::filesystem::temp_directory_path() / "mllmn_scenario_test.json";
  save_scenario(s, path.string());
  EXPECT_EQ(load_scenario(path.string()), s);
  std::filesystem::remove(path);
  auto j = to_json(s);
  j.erase("alpha");
  try {
    scenario_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
  }
}
