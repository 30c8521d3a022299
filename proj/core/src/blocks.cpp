#include <blockface/blocks.hpp>

#include <blockface/errors.hpp>

#include <algorithm>
#include <numeric>
#include <random>

namespace blockface {

void BlockSelectConfig::validate() const {
    if (grid_cols < 1 || grid_rows < 1) throw ConfigError("blocks: grid counts must be >= 1");
    if (retain_count < 1) throw ConfigError("blocks: retain count must be >= 1");
    if (static_cast<std::int64_t>(grid_cols) * grid_rows < retain_count)
        throw ConfigError("blocks: retain count exceeds the grid block count");
    if (iterations < 1) throw ConfigError("blocks: iterations must be >= 1");
}

std::pair<int, int> block_size(int width, int height, const BlockSelectConfig& cfg) {
    cfg.validate();
    const int u = width / cfg.grid_cols;
    const int v = height / cfg.grid_rows;
    if (u < 3 || v < 3)
        throw DataError("blocks: grid " + std::to_string(cfg.grid_cols) + "x" +
                        std::to_string(cfg.grid_rows) + " too fine for a " + std::to_string(width) +
                        "x" + std::to_string(height) + " image");
    return {u, v};
}

std::int64_t white_count(const BinaryImage& bin, const BlockSpec& spec) {
    if (spec.x < 0 || spec.y < 0 || spec.u < 1 || spec.v < 1 || spec.x + spec.u > bin.width ||
        spec.y + spec.v > bin.height)
        throw std::invalid_argument("white_count: block out of bounds");
    std::int64_t count = 0;
    for (int y = spec.y; y < spec.y + spec.v; ++y)
        for (int x = spec.x; x < spec.x + spec.u; ++x) count += bin.at(x, y);
    return count;
}

bool overlaps(const BlockSpec& a, const BlockSpec& b) {
    return a.x < b.x + b.u && b.x < a.x + a.u && a.y < b.y + b.v && b.y < a.y + a.v;
}

namespace {

// Unbiased bounded draw from a raw 64-bit generator; the standard library's
// uniform_int_distribution is implementation-defined, this mapping is not.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

// Summed-area table so each candidate's white count is O(1).
struct IntegralImage {
    int width, height;
    std::vector<std::int64_t> sums;  // (width+1) x (height+1)

    explicit IntegralImage(const BinaryImage& bin)
        : width(bin.width), height(bin.height),
          sums(static_cast<std::size_t>(width + 1) * (height + 1), 0) {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                at(x + 1, y + 1) = bin.at(x, y) + at(x, y + 1) + at(x + 1, y) - at(x, y);
    }

    std::int64_t& at(int x, int y) { return sums[static_cast<std::size_t>(y) * (width + 1) + x]; }
    std::int64_t at(int x, int y) const {
        return sums[static_cast<std::size_t>(y) * (width + 1) + x];
    }

    std::int64_t rect_sum(const BlockSpec& s) const {
        return at(s.x + s.u, s.y + s.v) - at(s.x, s.y + s.v) - at(s.x + s.u, s.y) + at(s.x, s.y);
    }
};

}  // namespace

BlockSelection sample_significant_blocks(const BinaryImage& bin, const BlockSelectConfig& cfg,
                                         const SampleObserver& observer) {
    const auto [u, v] = block_size(bin.width, bin.height, cfg);
    const IntegralImage integral(bin);

    // Eligibility threshold M = (mean + median)/2 of the whole image, compared
    // against the block's white fraction. Exact in integers:
    //   wc / (u*v) > (S/N + med) / 2   <=>   wc * 2N > (S + med*N) * u*v
    const std::int64_t n = static_cast<std::int64_t>(bin.pixel_count());
    const std::int64_t total = std::accumulate(bin.data.begin(), bin.data.end(), std::int64_t{0});
    const std::int64_t median = (2 * total > n) ? 1 : 0;  // lower middle of a {0,1} multiset
    const std::int64_t rhs = (total + median * n) * u * v;
    const auto eligible = [&](std::int64_t wc) { return wc * 2 * n > rhs; };

    std::mt19937_64 rng(cfg.rng_seed);
    const std::uint64_t x_positions = static_cast<std::uint64_t>(bin.width - u) + 1;
    const std::uint64_t y_positions = static_cast<std::uint64_t>(bin.height - v) + 1;

    std::vector<SelectedBlock> selected;
    for (std::int64_t iter = 0; iter < cfg.iterations; ++iter) {
        BlockSpec cand;
        cand.x = static_cast<int>(uniform_below(rng, x_positions));
        cand.y = static_cast<int>(uniform_below(rng, y_positions));
        cand.u = u;
        cand.v = v;
        const std::int64_t wc = integral.rect_sum(cand);

        SampleEvent event;
        if (observer) {
            event.spec = cand;
            event.white_count = wc;
        }

        if (!eligible(wc)) {
            if (observer) observer(event);
            continue;
        }

        // Candidate survives only if it strictly beats every overlapped incumbent.
        bool beats_all = true;
        for (const auto& s : selected) {
            if (overlaps(cand, s.spec) && wc <= s.white_count) {
                beats_all = false;
                break;
            }
        }
        if (!beats_all) {
            if (observer) {
                event.outcome = SampleEvent::Outcome::Rejected;
                observer(event);
            }
            continue;
        }
        if (observer) {
            event.outcome = SampleEvent::Outcome::Inserted;
            for (const auto& s : selected)
                if (overlaps(cand, s.spec)) event.displaced.push_back(s);
        }
        std::erase_if(selected, [&](const SelectedBlock& s) { return overlaps(cand, s.spec); });
        selected.push_back({cand, wc});
        if (observer) observer(event);
    }

    // Top retain_count by white count, ties broken by smaller (y, x).
    std::sort(selected.begin(), selected.end(), [](const SelectedBlock& a, const SelectedBlock& b) {
        if (a.white_count != b.white_count) return a.white_count > b.white_count;
        return std::pair(a.spec.y, a.spec.x) < std::pair(b.spec.y, b.spec.x);
    });
    if (static_cast<int>(selected.size()) > cfg.retain_count) selected.resize(cfg.retain_count);

    BlockSelection result;
    result.complete = static_cast<int>(selected.size()) == cfg.retain_count;
    result.blocks = std::move(selected);
    std::sort(result.blocks.begin(), result.blocks.end(),
              [](const SelectedBlock& a, const SelectedBlock& b) {
                  return std::pair(a.spec.y, a.spec.x) < std::pair(b.spec.y, b.spec.x);
              });
    return result;
}

}  // namespace blockface
