#pragma once

#include <blockface/blocks.hpp>
#include <blockface/raster.hpp>

#include <array>
#include <cstdint>

namespace blockface {

/// Run directions, in feature order. Angles follow the structuring-element
/// matrices: 45 degrees pairs a pixel with its down-right neighbor, 135 with
/// its down-left neighbor.
enum class RunDirection { Deg0 = 0, Deg45 = 1, Deg90 = 2, Deg135 = 3 };

/// Offset (dx, dy) of the second structuring-element pixel for a direction.
std::pair<int, int> run_offset(RunDirection dir);

/// Erosion of the block with the 2-pixel structuring element of the given
/// direction: a pixel survives iff it and its offset neighbor are both 1 and
/// the neighbor is in bounds.
BinaryImage erode(const BinaryImage& bin, const BlockSpec& spec, RunDirection dir);

/// Foreground runs (maximal consecutive 1-segments along lines) per direction,
/// via the identity  runs = foreground_count - erosion_survivors.
struct RunCounts {
    std::array<std::int64_t, 4> runs{};  // 0, 45, 90, 135 degrees
};

RunCounts directional_runs(const BinaryImage& bin, const BlockSpec& spec);

/// The four run counts divided by the block area, in order [0, 45, 90, 135].
std::array<double, 4> run_features(const BinaryImage& bin, const BlockSpec& spec);

}  // namespace blockface
