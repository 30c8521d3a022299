#include <blockface/features.hpp>

#include <blockface/errors.hpp>
#include <blockface/ldp.hpp>
#include <blockface/morph_runs.hpp>

#include <algorithm>

namespace blockface {

void PipelineParams::validate() const {
    preprocess.validate();
    blocks.validate();
    glcm.validate();
    if (ldp_k != 3) throw ConfigError("ldp: only k = 3 is supported");
    if (static_cast<int>(glcm.distances.size()) * 4 + 56 + 4 != kFeatureLength)
        throw ConfigError("glcm: exactly three distances are required for the 72-component vector");
}

FaceSignature extract_signature(const GrayImage& img, const PipelineParams& params,
                                const std::string& image_id, const std::string& subject_id) {
    params.validate();

    GrayImage gray = img;
    if (params.preprocess.crop_width > 0)
        gray = center_crop(gray, params.preprocess.crop_width, params.preprocess.crop_height);
    gray = resize_bilinear(gray, params.preprocess.target_width, params.preprocess.target_height);

    const GrayImage gradient = gradient_magnitude(gray);
    const GrayImage posterized = posterize(gradient, params.preprocess.poster_levels);
    const BinaryImage binary = binarize_mean_median(posterized);

    const BlockSelection selection = sample_significant_blocks(binary, params.blocks);

    FaceSignature sig;
    sig.image_id = image_id;
    sig.subject_id = subject_id;
    sig.width = gray.width;
    sig.height = gray.height;
    sig.params = params;
    sig.blocks.reserve(selection.blocks.size());

    for (const SelectedBlock& sel : selection.blocks) {
        BlockFeature bf;
        bf.spec = sel.spec;
        bf.white_count = sel.white_count;
        bf.interior_count = ldp_interior_count(sel.spec);

        const std::vector<double> ldp = ldp_histogram(gray, sel.spec);
        std::copy(ldp.begin(), ldp.end(), bf.vec.begin() + kLdpOffset);

        const std::array<double, 4> runs = run_features(binary, sel.spec);
        std::copy(runs.begin(), runs.end(), bf.vec.begin() + kRunsOffset);

        const std::vector<double> glcm = glcm_feature_vector(gray, sel.spec, params.glcm);
        std::copy(glcm.begin(), glcm.end(), bf.vec.begin() + kGlcmOffset);

        sig.blocks.push_back(std::move(bf));
    }
    return sig;
}

}  // namespace blockface
