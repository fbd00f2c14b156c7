#include "mllmn/responders/remote.hpp"

#include <cmath>
#include <fmt/format.h>
#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "mllmn/common/error.hpp"

namespace mllmn::responders {

std::string remote_propose(const std::string& endpoint_url, const std::string& prompt_text, double timeout_s) {
  static const std::regex kUrl(R"(^(http://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint_url, m, kUrl))
    throw Error(Errc::remote_error, fmt::format("unsupported endpoint URL '{}'", endpoint_url));
  const std::string base = m[1];
  const std::string path = m[2].matched ? std::string(m[2]) : "/";

  httplib::Client client(base);
  const auto sec = static_cast<time_t>(std::floor(timeout_s));
  const auto usec = static_cast<time_t>((timeout_s - std::floor(timeout_s)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  const std::string body = nlohmann::json{{"prompt", prompt_text}}.dump();
  auto res = client.Post(path, body, "application/json");
  if (!res) throw Error(Errc::remote_error, fmt::format("{}: {}", endpoint_url, httplib::to_string(res.error())));
  if (res->status < 200 || res->status >= 300)
    throw Error(Errc::remote_error, fmt::format("{}: HTTP status {}", endpoint_url, res->status));

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::remote_error, fmt::format("{}: malformed JSON reply: {}", endpoint_url, e.what()));
  }
  if (!parsed.is_object() || !parsed.contains("reply") || !parsed["reply"].is_string())
    throw Error(Errc::remote_error, fmt::format("{}: reply JSON lacks a string 'reply' field", endpoint_url));
  return parsed["reply"].get<std::string>();
}

}  // namespace mllmn::responders
