#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mllmn/responders/candidate.hpp"
#include "mllmn/scenario/scenario.hpp"

namespace mllmn::responders {

/// A past allocation and the defense it achieved, fed back as context.
struct PromptRecord {
  double total_power_w = 0.0;
  std::vector<double> powers_w;
  double defense_prob = 0.0;
};

/// "If the total power is 3kW, and the power of 30 LBSs is 30W, 40W, 40W,
/// 50W, and others, then the average probability of LBSs resisting FBS
/// attacks is 85%". At most four powers are listed. Totals that are whole
/// kilowatts print as kW.
std::string format_history_prompt(const PromptRecord& record);

/// "If the total power is 2kW, what should each of 30 LBSs be powered to
/// maximize the average probability of LBSs defending against FBS attacks?"
std::string format_query_prompt(double total_power_w, std::size_t n);

/// Full prompt: the most recent `history_length` records, the query, and the
/// reply-format instruction.
std::string build_prompt(std::span<const PromptRecord> history, double total_power_w, std::size_t n,
                         std::size_t history_length = 5);

/// "POWERS: p1,...,pn\nDEFENSE: x%\n" with round-trip precision.
std::string render_allocation_reply(const ResponseCandidate& c);

/// Parses the reply line protocol. Negative or malformed powers are parse
/// errors; a total up to 1% over budget is scaled down to the budget, beyond
/// that the candidate is invalid.
ResponseCandidate parse_allocation_reply(std::string_view text, const scenario::WirelessScenario& s,
                                         NodeId proposer);

}  // namespace mllmn::responders
