#pragma once

#include <blockface/raster.hpp>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace blockface {

/// Axis-aligned rectangle locating one block: top-left corner (x, y), size u x v.
struct BlockSpec {
    int x = 0;
    int y = 0;
    int u = 0;
    int v = 0;

    bool operator==(const BlockSpec&) const = default;
};

/// Name of the PRNG driving block sampling; recorded in gallery files.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

struct BlockSelectConfig {
    int grid_cols = 9;    // g_x
    int grid_rows = 10;   // g_y
    int retain_count = 12;
    std::int64_t iterations = 100000;  // K
    std::uint64_t rng_seed = 1;

    void validate() const;
    bool operator==(const BlockSelectConfig&) const = default;
};

/// Block size from the non-overlapping grid: u = floor(W / g_x), v = floor(H / g_y).
/// Throws if the grid leaves blocks smaller than 3x3.
std::pair<int, int> block_size(int width, int height, const BlockSelectConfig& cfg);

/// Number of 1-pixels inside the rectangle. Throws if the spec is out of bounds.
std::int64_t white_count(const BinaryImage& bin, const BlockSpec& spec);

/// True iff the two rectangles share at least one pixel.
bool overlaps(const BlockSpec& a, const BlockSpec& b);

struct SelectedBlock {
    BlockSpec spec;
    std::int64_t white_count = 0;
};

struct BlockSelection {
    std::vector<SelectedBlock> blocks;  // sorted by (y, x)
    bool complete = false;              // true iff retain_count blocks were found
};

/// One sampling-iteration record, for audit instrumentation.
struct SampleEvent {
    enum class Outcome { Ineligible, Inserted, Rejected };
    BlockSpec spec;
    std::int64_t white_count = 0;
    Outcome outcome = Outcome::Ineligible;
    std::vector<SelectedBlock> displaced;  // incumbents removed by this insertion
};

using SampleObserver = std::function<void(const SampleEvent&)>;

/// Samples K uniform candidate positions over the binary gradient image and
/// keeps the pairwise non-overlapping blocks with the densest white content.
///
/// A candidate is eligible iff its white fraction strictly exceeds
/// M = (mean + median)/2 of the whole image's pixel values. On overlap with
/// incumbents the candidate survives only if it strictly beats every one of
/// them (ties keep the incumbents). After K iterations the top retain_count
/// survivors by white count are returned sorted by (y, x); ties in white count
/// are broken by smaller (y, x). Deterministic given the seed.
BlockSelection sample_significant_blocks(const BinaryImage& bin, const BlockSelectConfig& cfg,
                                         const SampleObserver& observer = nullptr);

}  // namespace blockface
