#include <blockface/glcm.hpp>

#include <blockface/errors.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace blockface {

void GlcmParams::validate() const {
    if (levels < 2 || levels > 256) throw ConfigError("glcm: levels must be in [2, 256]");
    if (distances.empty()) throw ConfigError("glcm: at least one distance required");
    for (int d : distances)
        if (d < 1) throw ConfigError("glcm: distances must be >= 1");
}

QuantizedBlock quantize(const GrayImage& img, const BlockSpec& spec, int levels) {
    if (levels < 2 || levels > 256) throw std::invalid_argument("quantize: levels must be in [2, 256]");
    if (spec.x < 0 || spec.y < 0 || spec.x + spec.u > img.width || spec.y + spec.v > img.height)
        throw std::invalid_argument("quantize: block out of bounds");
    QuantizedBlock block;
    block.width = spec.u;
    block.height = spec.v;
    block.levels = levels;
    block.data.resize(static_cast<std::size_t>(spec.u) * spec.v);
    for (int y = 0; y < spec.v; ++y)
        for (int x = 0; x < spec.u; ++x)
            block.at(x, y) = static_cast<std::uint8_t>(img.at(spec.x + x, spec.y + y) * levels / 256);
    return block;
}

Cooccurrence cooccurrence(const QuantizedBlock& block, int dx, int dy) {
    if (dx == 0 && dy == 0) throw std::invalid_argument("cooccurrence: offset must be nonzero");
    if (std::abs(dx) >= block.width || std::abs(dy) >= block.height)
        throw std::invalid_argument("cooccurrence: offset larger than the block");
    Cooccurrence m;
    m.levels = block.levels;
    m.cells.assign(static_cast<std::size_t>(block.levels) * block.levels, 0.0);
    for (int y = 0; y < block.height; ++y) {
        const int ny = y + dy;
        if (ny < 0 || ny >= block.height) continue;
        for (int x = 0; x < block.width; ++x) {
            const int nx = x + dx;
            if (nx < 0 || nx >= block.width) continue;
            const int i = block.at(x, y);
            const int j = block.at(nx, ny);
            m.at(i, j) += 1.0;
            m.at(j, i) += 1.0;
        }
    }
    return m;
}

namespace {

// Direction offsets for distance d, as (dx, dy) with y growing downward:
// 0 deg (d,0), 45 deg (d,-d), 90 deg (0,-d), 135 deg (-d,-d).
constexpr std::array<std::pair<int, int>, 4> direction_offsets(int d) {
    return {{{d, 0}, {d, -d}, {0, -d}, {-d, -d}}};
}

}  // namespace

Cooccurrence averaged_glcm(const QuantizedBlock& block, int distance) {
    if (distance < 1) throw std::invalid_argument("averaged_glcm: distance must be >= 1");
    Cooccurrence sum;
    sum.levels = block.levels;
    sum.cells.assign(static_cast<std::size_t>(block.levels) * block.levels, 0.0);
    for (const auto& [dx, dy] : direction_offsets(distance)) {
        if (std::abs(dx) >= block.width || std::abs(dy) >= block.height) continue;
        const Cooccurrence dir = cooccurrence(block, dx, dy);
        for (std::size_t i = 0; i < sum.cells.size(); ++i) sum.cells[i] += dir.cells[i];
    }
    const double mass = std::accumulate(sum.cells.begin(), sum.cells.end(), 0.0);
    sum.normalized = true;
    if (mass == 0.0) {
        sum.degenerate = true;
        return sum;
    }
    for (double& c : sum.cells) c /= mass;
    return sum;
}

HaralickFeatures haralick(const Cooccurrence& m) {
    if (!m.normalized) throw std::invalid_argument("haralick: matrix must be normalized");
    HaralickFeatures f;
    if (m.degenerate) return f;

    std::vector<double> marginal(m.levels, 0.0);
    for (int i = 0; i < m.levels; ++i)
        for (int j = 0; j < m.levels; ++j) marginal[i] += m.at(i, j);

    double mu = 0.0;
    for (int i = 0; i < m.levels; ++i) mu += i * marginal[i];
    double sigma2 = 0.0;
    for (int i = 0; i < m.levels; ++i) sigma2 += (i - mu) * (i - mu) * marginal[i];

    double corr_num = 0.0;
    for (int i = 0; i < m.levels; ++i) {
        for (int j = 0; j < m.levels; ++j) {
            const double p = m.at(i, j);
            if (p == 0.0) continue;
            const int diff = std::abs(i - j);
            f.energy += p * p;
            f.contrast += static_cast<double>(diff) * diff * p;
            f.homogeneity += p / (1.0 + diff);
            corr_num += (i - mu) * (j - mu) * p;
        }
    }
    f.correlation = sigma2 > 0.0 ? corr_num / sigma2 : 0.0;
    return f;
}

std::vector<double> glcm_feature_vector(const GrayImage& img, const BlockSpec& spec,
                                        const GlcmParams& params) {
    params.validate();
    const QuantizedBlock block = quantize(img, spec, params.levels);
    std::vector<double> features;
    features.reserve(params.distances.size() * 4);
    for (int d : params.distances) {
        const Cooccurrence m = averaged_glcm(block, d);
        if (m.degenerate) {
            features.insert(features.end(), {0.0, 0.0, 0.0, 0.0});
            continue;
        }
        const HaralickFeatures f = haralick(m);
        features.push_back(f.energy);
        features.push_back(f.contrast);
        features.push_back((f.correlation + 1.0) / 2.0);
        features.push_back(f.homogeneity);
    }
    return features;
}

}  // namespace blockface
