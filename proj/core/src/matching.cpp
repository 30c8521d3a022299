#include <blockface/matching.hpp>

#include <blockface/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blockface {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void MatchConfig::validate() const {
    if (th1 && *th1 <= 0.0) throw ConfigError("match: th1 must be positive");
    if (ceiling && *ceiling < 0.0) throw ConfigError("match: ceiling must be nonnegative");
}

double chi_square(std::span<const double> f1, std::span<const double> f2) {
    if (f1.size() != f2.size()) throw std::invalid_argument("chi_square: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        const double a = f1[i];
        const double b = f2[i];
        if (a < 0.0 || b < 0.0) throw std::invalid_argument("chi_square: negative feature entry");
        const double denom = a + b;
        if (denom == 0.0) continue;  // 0/0 -> 0 per term
        const double diff = a - b;
        sum += diff * diff / denom;
    }
    return sum;
}

bool spatial_gate(const BlockSpec& a, const BlockSpec& b, double th1) {
    const double dx = static_cast<double>(a.x) - b.x;
    const double dy = static_cast<double>(a.y) - b.y;
    return dx * dx + dy * dy < th1 * th1;
}

namespace {

double effective_th1(const FaceSignature& probe, const MatchConfig& cfg) {
    if (cfg.th1) return *cfg.th1;
    // "Block size" as the gate radius: the larger block dimension.
    int th = 0;
    for (const BlockFeature& b : probe.blocks) th = std::max({th, b.spec.u, b.spec.v});
    return static_cast<double>(th);
}

struct PairScan {
    double dissimilarity = kInf;
    int matched_blocks = 0;
};

PairScan scan_pair(const FaceSignature& probe, const FaceSignature& gallery, double th1,
                   Aggregation aggregation) {
    PairScan out;
    if (probe.blocks.empty() || gallery.blocks.empty()) return out;

    double total = 0.0;
    int contributing = 0;
    for (const BlockFeature& pb : probe.blocks) {
        bool gated = false;
        double best_min = kInf;
        double best_max = 0.0;
        for (const BlockFeature& gb : gallery.blocks) {
            if (!spatial_gate(pb.spec, gb.spec, th1)) continue;
            gated = true;
            const double d = chi_square(pb.vec, gb.vec);
            best_min = std::min(best_min, d);
            best_max = std::max(best_max, d);
        }
        if (gated) ++out.matched_blocks;
        if (aggregation == Aggregation::GatedMin) {
            if (gated) {
                total += best_min;
                ++contributing;
            }
        } else {
            total += best_max;  // gate-false pairs contribute 0, all blocks counted
            ++contributing;
        }
    }
    if (contributing > 0) out.dissimilarity = total / contributing;
    return out;
}

}  // namespace

double image_dissimilarity(const FaceSignature& probe, const FaceSignature& gallery,
                           const MatchConfig& cfg) {
    cfg.validate();
    return scan_pair(probe, gallery, effective_th1(probe, cfg), cfg.aggregation).dissimilarity;
}

MatchResult classify(const FaceSignature& probe, const std::vector<FaceSignature>& gallery,
                     const MatchConfig& cfg) {
    cfg.validate();
    if (gallery.empty()) throw std::invalid_argument("classify: empty gallery");

    const double th1 = effective_th1(probe, cfg);
    MatchResult result;
    result.probe_id = probe.image_id;
    result.ranking.reserve(gallery.size());
    for (const FaceSignature& g : gallery) {
        const PairScan scan = scan_pair(probe, g, th1, cfg.aggregation);
        result.ranking.push_back({g.image_id, g.subject_id, scan.dissimilarity, scan.matched_blocks});
    }
    std::stable_sort(result.ranking.begin(), result.ranking.end(),
                     [](const RankedMatch& a, const RankedMatch& b) {
                         return a.dissimilarity < b.dissimilarity;
                     });

    const double best = result.ranking.front().dissimilarity;
    if (!std::isfinite(best) || (cfg.ceiling && best > *cfg.ceiling)) {
        result.rejected = true;
    } else {
        result.predicted_subject = result.ranking.front().subject_id;
    }
    return result;
}

}  // namespace blockface
