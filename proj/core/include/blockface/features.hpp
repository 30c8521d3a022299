#pragma once

#include <blockface/blocks.hpp>
#include <blockface/glcm.hpp>
#include <blockface/preprocess.hpp>
#include <blockface/raster.hpp>

#include <array>
#include <string>
#include <vector>

namespace blockface {

/// Every knob that shapes a signature; recorded verbatim next to the features
/// so galleries stay reproducible.
struct PipelineParams {
    PreprocessConfig preprocess;
    BlockSelectConfig blocks;
    GlcmParams glcm;
    int ldp_k = 3;

    void validate() const;
    bool operator==(const PipelineParams&) const = default;
};

inline constexpr int kFeatureLength = 72;  // 56 LDP + 4 runs + 12 GLCM
inline constexpr int kLdpOffset = 0;
inline constexpr int kRunsOffset = 56;
inline constexpr int kGlcmOffset = 60;

/// One significant block with its 72-component feature vector,
/// ordered [56 LDP | 4 runs | 12 GLCM].
struct BlockFeature {
    BlockSpec spec;
    std::int64_t white_count = 0;
    int interior_count = 0;  // LDP interior size, for recovering raw counts
    std::array<double, kFeatureLength> vec{};
};

/// All block features of one image, with identifiers and the exact parameters
/// used. An empty block list marks a degenerate (unmatchable) signature.
struct FaceSignature {
    std::string image_id;
    std::string subject_id;
    int width = 0;
    int height = 0;
    std::vector<BlockFeature> blocks;  // ordered by (y, x)
    PipelineParams params;
};

/// Run the full pipeline on one loaded image: optional center crop, resize,
/// gradient, enhance, posterize, binarize, significant-block sampling, then
/// per-block LDP + GLCM on the resized grayscale image and run counts on the
/// binary gradient image.
FaceSignature extract_signature(const GrayImage& img, const PipelineParams& params,
                                const std::string& image_id = "",
                                const std::string& subject_id = "");

}  // namespace blockface
