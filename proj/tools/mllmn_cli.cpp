#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mllmn/common/error.hpp"
#include "mllmn/consensus/consensus.hpp"
#include "mllmn/harness/config.hpp"
#include "mllmn/harness/csv.hpp"
#include "mllmn/harness/experiments.hpp"
#include "mllmn/harness/pipeline.hpp"
#include "mllmn/ledger/chain_io.hpp"

namespace {

using namespace mllmn;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

harness::ExperimentConfig resolve_config(const GlobalOptions& g) {
  auto cfg = g.config_path.empty() ? harness::default_config() : harness::load_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  return cfg;
}

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out_path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::io_error, fmt::format("cannot write {}", g.out_path));
  os << text;
}

nlohmann::json block_json(const ledger::Block& b) { return nlohmann::json::parse(ledger::block_to_json_line(b)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consensus-coordinated multi-agent response network simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the config seed");
  app.add_option("--out", g.out_path, "Write output here instead of stdout");

  auto* latency = app.add_subcommand("simulate-consensus", "Latency of every protocol over the sweep (CSV)");
  auto* defense = app.add_subcommand("defend-fbs", "Average defense probability per strategy (CSV)");
  auto* pipeline = app.add_subcommand("pipeline", "End-to-end round(s); prints block JSON");
  std::size_t rounds = 1;
  std::string chain_out;
  pipeline->add_option("--rounds", rounds, "Rounds to run")->check(CLI::PositiveNumber);
  pipeline->add_option("--chain-out", chain_out, "Also write the chain as JSON lines");
  auto* verify = app.add_subcommand("verify-chain", "Verify a JSON-lines chain file");
  std::string chain_file;
  verify->add_option("file", chain_file, "Chain file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (latency->parsed()) {
      const auto rows = harness::run_latency_experiment(resolve_config(g));
      emit(g, harness::to_csv(rows));
    } else if (defense->parsed()) {
      const auto rows = harness::run_defense_experiment(resolve_config(g));
      emit(g, harness::to_csv(rows));
    } else if (pipeline->parsed()) {
      harness::Pipeline p(resolve_config(g));
      nlohmann::json all = nlohmann::json::array();
      for (std::size_t r = 0; r < rounds; ++r) {
        const auto res = p.run_round();
        nlohmann::json j{{"block", block_json(res.block)},
                         {"outcome", consensus::to_json(res.outcome)},
                         {"winner_defense", res.winner_defense},
                         {"responder_failures", res.responder_failures}};
        all.push_back(std::move(j));
      }
      if (!chain_out.empty()) ledger::save_chain(chain_out, p.replicas().replica(0).blocks());
      emit(g, (rounds == 1 ? all.front() : all).dump(2) + "\n");
    } else if (verify->parsed()) {
      std::ifstream is(chain_file, std::ios::binary);
      if (!is) throw Error(Errc::io_error, fmt::format("cannot read {}", chain_file));
      std::ostringstream ss;
      ss << is.rdbuf();
      const std::string text = ss.str();
      const auto result = ledger::verify_chain_text(text);
      if (result.ok) {
        const auto n = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
        emit(g, fmt::format("OK: {} block(s) verified\n", n));
        return 0;
      }
      emit(g, fmt::format("FAIL: block {}: {}\n", result.index, result.reason));
      return 1;
    }
  } catch (const Error& e) {
    std::cerr << fmt::format("error [{}]: {}\n", to_string(e.code()), e.what());
    return 2;
  }
  return 0;
}
