#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mllmn {

enum class Errc {
  invalid_argument,
  invalid_config,
  unreachable_reliability,
  empty_phase,
  empty_input,
  no_quorum,
  invalid_allocation,
  solver_error,
  refused,
  parse_error,
  invalid_candidate,
  remote_error,
  append_rejected,
  io_error,
  validation_error,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception. Every failure path carries one of the codes above
/// so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mllmn
