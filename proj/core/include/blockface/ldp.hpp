#pragma once

#include <blockface/blocks.hpp>
#include <blockface/raster.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace blockface {

/// The 56 valid LDP codes (8-bit values with exactly three bits set), ascending.
/// This is the bin order of every LDP histogram; gallery files embed it so they
/// stay self-describing.
extern const std::array<int, 56> kLdpCodes;

/// Bin index of a code in kLdpCodes, or -1 if the code is not a valid LDP code.
int ldp_bin_of_code(int code);

/// Kirsch edge responses m_0..m_7 for directions E, NE, N, NW, W, SW, S, SE.
struct KirschResponses {
    std::array<int, 8> m{};
};

/// The eight 3x3 Kirsch masks, row-major, in the direction order above.
extern const std::array<std::array<int, 9>, 8> kKirschMasks;

/// Mask responses of one 3x3 neighborhood (row-major, nine values in [0, 255]).
KirschResponses kirsch_responses(const std::array<int, 9>& neighborhood);

/// LDP code: bits set at the k directions with the largest |m_j|, ties broken
/// toward the smaller direction index. Only k = 3 is supported.
int ldp_code(const KirschResponses& responses, int k = 3);

/// 56-bin histogram of LDP codes over the block's interior pixels (where the
/// full 3x3 window fits), normalized to unit mass. Requires at least 3x3.
std::vector<double> ldp_histogram(const GrayImage& img, const BlockSpec& spec);

/// Interior pixel count of a u x v block: (u-2) * (v-2).
inline int ldp_interior_count(const BlockSpec& spec) { return (spec.u - 2) * (spec.v - 2); }

}  // namespace blockface
