#pragma once

#include <string>

namespace mllmn::responders {

/// POSTs {"prompt": ...} to endpoint_url and returns the "reply" string.
/// Throws Error(remote_error) on connection failure, timeout, non-2xx status
/// or a malformed body.
std::string remote_propose(const std::string& endpoint_url, const std::string& prompt_text, double timeout_s);

}  // namespace mllmn::responders
