#pragma once

#include <cstdint>
#include <vector>

namespace dsl {

using NodeId = std::uint32_t;

/// Constraint indicator. Must-link is 0 so that path sums count cannot-links.
enum class Theta : std::uint8_t { MustLink = 0, CannotLink = 1 };

inline int theta_weight(Theta t) noexcept { return static_cast<int>(t); }

using Labeling = std::vector<int>;

}  // namespace dsl
