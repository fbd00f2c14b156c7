#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>

namespace mllmn {

/// Index of a consensus node (one hosted agent) in [0, n).
struct NodeId {
  std::uint32_t index = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t i) : index(i) {}

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

using Digest = std::array<std::uint8_t, 32>;

inline constexpr Digest kZeroDigest{};

}  // namespace mllmn

template <>
struct std::hash<mllmn::NodeId> {
  std::size_t operator()(const mllmn::NodeId& id) const noexcept { return id.index; }
};
