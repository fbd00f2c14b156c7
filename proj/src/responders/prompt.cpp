#include "mllmn/responders/prompt.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>

#include "mllmn/common/error.hpp"

namespace mllmn::responders {

namespace {

std::string format_number(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) return fmt::format("{}", static_cast<long long>(std::llround(v)));
  auto s = fmt::format("{:.2f}", v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string format_total(double watts) {
  const double kw = watts / 1000.0;
  if (std::abs(kw - std::round(kw)) < 1e-9 && std::llround(kw) > 0) return format_number(kw) + "kW";
  return format_number(watts) + "W";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view token, std::string_view what) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
    throw Error(Errc::parse_error, fmt::format("malformed {} value '{}'", what, token));
  return v;
}

}  // namespace

std::string format_history_prompt(const PromptRecord& record) {
  std::string listed;
  const std::size_t shown = std::min<std::size_t>(record.powers_w.size(), 4);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) listed += ", ";
    listed += format_number(record.powers_w[i]) + "W";
  }
  if (record.powers_w.size() > shown) listed += ", and others";
  return fmt::format(
      "If the total power is {}, and the power of {} LBSs is {}, then the average probability of LBSs resisting "
      "FBS attacks is {}%",
      format_total(record.total_power_w), record.powers_w.size(), listed, format_number(record.defense_prob * 100.0));
}

std::string format_query_prompt(double total_power_w, std::size_t n) {
  return fmt::format(
      "If the total power is {}, what should each of {} LBSs be powered to maximize the average probability of "
      "LBSs defending against FBS attacks?",
      format_total(total_power_w), n);
}

std::string build_prompt(std::span<const PromptRecord> history, double total_power_w, std::size_t n,
                         std::size_t history_length) {
  std::string out;
  const std::size_t skip = history.size() > history_length ? history.size() - history_length : 0;
  for (std::size_t i = skip; i < history.size(); ++i) out += format_history_prompt(history[i]) + ".\n";
  out += format_query_prompt(total_power_w, n) + "\n";
  out += fmt::format(
      "Answer with exactly one line \"POWERS: p1,p2,...,p{}\" giving each LBS power in watts, followed by one line "
      "\"DEFENSE: x%\" with the expected average defense probability.",
      n);
  return out;
}

std::string render_allocation_reply(const ResponseCandidate& c) {
  std::string out = "POWERS: ";
  for (std::size_t i = 0; i < c.allocation.powers_w.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt::format("{}", c.allocation.powers_w[i]);
  }
  out += fmt::format("\nDEFENSE: {}%\n", c.claimed_defense * 100.0);
  return out;
}

ResponseCandidate parse_allocation_reply(std::string_view text, const scenario::WirelessScenario& s,
                                         NodeId proposer) {
  std::optional<std::string_view> powers_line;
  std::optional<std::string_view> defense_line;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(start, end - start));
    if (line.starts_with("POWERS:") && !powers_line) powers_line = line.substr(7);
    else if (line.starts_with("DEFENSE:") && !defense_line) defense_line = line.substr(8);
    start = end + 1;
  }
  if (!powers_line) throw Error(Errc::parse_error, "reply has no 'POWERS:' line");

  scenario::PowerAllocation alloc;
  std::string_view rest = *powers_line;
  while (true) {
    auto comma = rest.find(',');
    double p = parse_double(rest.substr(0, comma), "power");
    if (p < 0.0) throw Error(Errc::parse_error, fmt::format("negative power {} W in reply", p));
    alloc.powers_w.push_back(p);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (alloc.powers_w.size() != s.n_lbs)
    throw Error(Errc::parse_error,
                fmt::format("reply lists {} powers but the scenario has {} LBSs", alloc.powers_w.size(), s.n_lbs));

  const double total = alloc.total();
  if (total > s.p_total_w * (1.0 + 1e-6)) {
    if (total > s.p_total_w * 1.01)
      throw Error(Errc::invalid_candidate,
                  fmt::format("reply total {} W exceeds the {} W budget by more than 1%", total, s.p_total_w));
    const double scale = s.p_total_w / total;
    for (auto& p : alloc.powers_w) p *= scale;
  }

  double claimed = 0.0;
  if (defense_line) {
    auto d = trim(*defense_line);
    const bool percent = !d.empty() && d.back() == '%';
    if (percent) d.remove_suffix(1);
    claimed = parse_double(d, "defense");
    if (percent) claimed /= 100.0;
    if (claimed < 0.0 || claimed > 1.0)
      throw Error(Errc::parse_error, fmt::format("defense probability {} is outside [0, 1]", claimed));
  }
  return make_candidate(proposer, std::move(alloc), claimed, std::string(text));
}

}  // namespace mllmn::responders
