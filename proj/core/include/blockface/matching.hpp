#pragma once

#include <blockface/features.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace blockface {

/// How per-block chi-square values aggregate into an image dissimilarity.
/// GatedMin takes the best spatially-gated gallery block per probe block and
/// skips probe blocks with no gated partner; GatedMax takes the largest
/// gated value per probe block, with gate-false pairs contributing zero.
enum class Aggregation { GatedMin, GatedMax };

struct MatchConfig {
    std::optional<double> th1;       // spatial gate radius; default max(u, v) of the probe blocks
    Aggregation aggregation = Aggregation::GatedMin;
    std::optional<double> ceiling;   // reject when the best D exceeds this (open-set experiments)

    void validate() const;
};

/// Chi-square dissimilarity sum((a-b)^2 / (a+b)) with the 0/0 -> 0 convention.
/// Entries must be nonnegative. Symmetric, zero iff the vectors are equal.
double chi_square(std::span<const double> f1, std::span<const double> f2);

/// True iff the Euclidean distance between the blocks' top-left corners is
/// strictly less than th1.
bool spatial_gate(const BlockSpec& a, const BlockSpec& b, double th1);

/// Dissimilarity D between a probe and one gallery signature. Returns +inf for
/// empty signatures, or (in GatedMin mode) when no probe block has any gated
/// gallery partner.
double image_dissimilarity(const FaceSignature& probe, const FaceSignature& gallery,
                           const MatchConfig& cfg);

struct RankedMatch {
    std::string image_id;
    std::string subject_id;
    double dissimilarity = 0.0;
    int matched_blocks = 0;  // probe blocks with at least one gated gallery block
};

struct MatchResult {
    std::string probe_id;
    std::vector<RankedMatch> ranking;   // ascending by D, ties by enrollment order
    std::string predicted_subject;      // empty when rejected
    bool rejected = false;
};

/// Rank the probe against every gallery signature and predict the subject of
/// the argmin image. Rejects (distinctly) when every D is +inf or the best D
/// exceeds the configured ceiling.
MatchResult classify(const FaceSignature& probe, const std::vector<FaceSignature>& gallery,
                     const MatchConfig& cfg);

}  // namespace blockface
