#include "mllmn/harness/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <mutex>
#include <thread>

#include "mllmn/common/rng.hpp"
#include "mllmn/consensus/consensus.hpp"
#include "mllmn/harness/pipeline.hpp"

namespace mllmn::harness {

namespace {

constexpr std::uint64_t kSingleSeedSalt = 0x51;
constexpr std::uint64_t kRandomSeedSalt = 0x52;

/// Runs fn(i) for i in [0, n) on a small thread pool; rethrows the first error.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

ResultRow summarize(std::string experiment, std::string param, std::string metric, const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {std::move(experiment), std::move(param), std::move(metric), mean, sd, xs.size()};
}

std::vector<responders::ResponseCandidate> candidates_for(const ExperimentConfig& cfg,
                                                          const responders::ScenarioContext& ctx) {
  std::vector<responders::ResponseCandidate> out;
  for (auto& p : responders::propose_all(cfg.responder_profiles, ctx, {}, cfg.remote))
    out.push_back(std::move(p.candidate));
  return out;
}

}  // namespace

scenario::PowerAllocation mean_allocation(const std::vector<responders::ResponseCandidate>& cands, double p_total_w) {
  std::vector<double> sum(cands.empty() ? 0 : cands.front().allocation.powers_w.size(), 0.0);
  for (const auto& c : cands)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c.allocation.powers_w.at(i);
  double total = 0.0;
  for (double x : sum) total += x;
  if (total > 0.0)
    for (auto& x : sum) x = x / total * p_total_w;
  return {std::move(sum)};
}

std::vector<ResultRow> run_latency_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t T = cfg.trials;
  const std::size_t P = std::size(consensus::kAllProtocols);
  const std::size_t S = cfg.sweep.values.size();
  // samples[protocol][sweep][metric][trial]
  std::vector<std::vector<std::array<std::vector<double>, 3>>> samples(
      P, std::vector<std::array<std::vector<double>, 3>>(S));
  for (auto& per_p : samples)
    for (auto& per_s : per_p)
      for (auto& m : per_s) m.assign(T, 0.0);

  parallel_for(T, [&](std::size_t t) {
    const auto s = scenario::generate_scenario(cfg.seed ^ t, cfg.scenario_overrides);
    const auto ctx = responders::ScenarioContext::build(s);
    consensus::RoundInput in;
    in.round = 0;
    in.seed = cfg.seed ^ t;
    in.candidates = candidates_for(cfg, ctx);
    in.evaluator = scenario_evaluator(ctx);  // fault-free: nobody votes adversarially
    const auto trust = consensus::TrustState::uniform(cfg.consensus.n);
    for (std::size_t p = 0; p < P; ++p) {
      auto cc = cfg.consensus;
      cc.protocol = consensus::kAllProtocols[p];
      for (std::size_t k = 0; k < S; ++k) {
        auto net = cfg.network;
        (cfg.sweep.parameter == "reliability_target" ? net.reliability_target : net.per_attempt_success) =
            cfg.sweep.values[k];
        const auto out = consensus::run_consensus(in, cc, net, trust);
        samples[p][k][0][t] = out.latency_s;
        samples[p][k][1][t] = static_cast<double>(out.message_count);
        samples[p][k][2][t] = static_cast<double>(out.total_bits);
      }
    }
  });

  std::vector<ResultRow> rows;
  const std::string experiment = fmt::format("latency_vs_{}", cfg.sweep.parameter);
  for (std::size_t k = 0; k < S; ++k)
    for (std::size_t p = 0; p < P; ++p) {
      const auto name = consensus::to_string(consensus::kAllProtocols[p]);
      const auto param = fmt::format("{}", cfg.sweep.values[k]);
      rows.push_back(summarize(experiment, param, fmt::format("{}.latency_s", name), samples[p][k][0]));
      rows.push_back(summarize(experiment, param, fmt::format("{}.messages", name), samples[p][k][1]));
      rows.push_back(summarize(experiment, param, fmt::format("{}.bits", name), samples[p][k][2]));
    }
  return rows;
}

std::vector<std::vector<double>> defense_samples(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t T = cfg.trials;
  std::vector<std::vector<double>> out(std::size(kDefenseStrategies), std::vector<double>(T, 0.0));
  const auto byzantine = cfg.byzantine_nodes();

  parallel_for(T, [&](std::size_t t) {
    const auto s = scenario::generate_scenario(cfg.seed ^ t, cfg.scenario_overrides);
    const auto ctx = responders::ScenarioContext::build(s);

    consensus::RoundInput in;
    in.round = 0;
    in.seed = cfg.seed ^ t;
    in.candidates = candidates_for(cfg, ctx);
    in.evaluator = scenario_evaluator(ctx);
    in.policy = {byzantine, cfg.adversary_strategy, cfg.seed ^ t};
    const auto outcome =
        consensus::run_consensus(in, cfg.consensus, cfg.network, consensus::TrustState::uniform(cfg.consensus.n));

    responders::ResponderProfile single{NodeId(0), responders::ResponderKind::NearOptimal, cfg.single_noise_sigma,
                                        mix_seeds(cfg.seed, kSingleSeedSalt), {}};
    responders::ResponderProfile random{NodeId(0), responders::ResponderKind::Random, 0.0,
                                        mix_seeds(cfg.seed, kRandomSeedSalt), {}};

    out[0][t] = ctx.evaluate(ctx.optimum);
    out[1][t] = ctx.evaluate(outcome.winner.allocation);
    out[2][t] = ctx.evaluate(mean_allocation(in.candidates, s.p_total_w));
    out[3][t] = ctx.evaluate(responders::propose(single, ctx).allocation);
    out[4][t] = ctx.evaluate(responders::propose(random, ctx).allocation);
  });
  return out;
}

std::vector<ResultRow> run_defense_experiment(const ExperimentConfig& cfg) {
  const auto samples = defense_samples(cfg);
  const auto s = scenario::generate_scenario(cfg.seed, cfg.scenario_overrides);
  const auto param = fmt::format("p_total_w={}", s.p_total_w);
  std::vector<ResultRow> rows;
  for (std::size_t k = 0; k < samples.size(); ++k)
    rows.push_back(summarize("average_defense", param, kDefenseStrategies[k], samples[k]));
  return rows;
}

}  // namespace mllmn::harness
