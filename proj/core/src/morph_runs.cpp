#include <blockface/morph_runs.hpp>

#include <stdexcept>

namespace blockface {

namespace {

void require_inside(const BinaryImage& bin, const BlockSpec& spec) {
    if (spec.u < 2 || spec.v < 2)
        throw std::invalid_argument("morph_runs: block must be at least 2x2");
    if (spec.x < 0 || spec.y < 0 || spec.x + spec.u > bin.width || spec.y + spec.v > bin.height)
        throw std::invalid_argument("morph_runs: block out of bounds");
}

}  // namespace

std::pair<int, int> run_offset(RunDirection dir) {
    switch (dir) {
        case RunDirection::Deg0: return {1, 0};
        case RunDirection::Deg45: return {1, 1};
        case RunDirection::Deg90: return {0, 1};
        case RunDirection::Deg135: return {-1, 1};
    }
    throw std::invalid_argument("run_offset: bad direction");
}

BinaryImage erode(const BinaryImage& bin, const BlockSpec& spec, RunDirection dir) {
    require_inside(bin, spec);
    const auto [dx, dy] = run_offset(dir);
    BinaryImage out(spec.u, spec.v);
    for (int y = 0; y < spec.v; ++y) {
        for (int x = 0; x < spec.u; ++x) {
            if (!bin.at(spec.x + x, spec.y + y)) continue;
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= spec.u || ny >= spec.v) continue;  // support out of bounds
            out.at(x, y) = bin.at(spec.x + nx, spec.y + ny);
        }
    }
    return out;
}

RunCounts directional_runs(const BinaryImage& bin, const BlockSpec& spec) {
    require_inside(bin, spec);
    std::int64_t foreground = 0;
    for (int y = 0; y < spec.v; ++y)
        for (int x = 0; x < spec.u; ++x) foreground += bin.at(spec.x + x, spec.y + y);

    RunCounts counts;
    for (int d = 0; d < 4; ++d) {
        const BinaryImage eroded = erode(bin, spec, static_cast<RunDirection>(d));
        std::int64_t survivors = 0;
        for (std::uint8_t v : eroded.data) survivors += v;
        // Each maximal segment of length L contributes L pixels and L-1 survivors.
        counts.runs[d] = foreground - survivors;
    }
    return counts;
}

std::array<double, 4> run_features(const BinaryImage& bin, const BlockSpec& spec) {
    const RunCounts counts = directional_runs(bin, spec);
    const double area = static_cast<double>(spec.u) * spec.v;
    std::array<double, 4> features{};
    for (int d = 0; d < 4; ++d) features[d] = static_cast<double>(counts.runs[d]) / area;
    return features;
}

}  // namespace blockface
