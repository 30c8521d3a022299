#pragma once

#include <blockface/blocks.hpp>
#include <blockface/raster.hpp>

#include <array>
#include <vector>

namespace blockface {

struct GlcmParams {
    int levels = 16;  // N_g
    std::vector<int> distances = {1, 2, 3};

    void validate() const;
    bool operator==(const GlcmParams&) const = default;
};

/// Block raster reduced to N_g gray levels (each value < N_g).
struct QuantizedBlock {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// N_g x N_g co-occurrence matrix. Built symmetric; cells sum to 1 once
/// normalized, unless the block had no valid pairs (degenerate, all-zero).
struct Cooccurrence {
    int levels = 0;
    std::vector<double> cells;  // row-major levels x levels
    bool normalized = false;
    bool degenerate = false;

    double at(int i, int j) const { return cells[static_cast<std::size_t>(i) * levels + j]; }
    double& at(int i, int j) { return cells[static_cast<std::size_t>(i) * levels + j]; }
};

struct HaralickFeatures {
    double energy = 0.0;
    double contrast = 0.0;
    double correlation = 0.0;
    double homogeneity = 0.0;
};

/// Reduce a grayscale region to N_g levels: v -> floor(v * N_g / 256).
QuantizedBlock quantize(const GrayImage& img, const BlockSpec& spec, int levels);

/// Unnormalized symmetric co-occurrence counts at one offset: each in-bounds
/// pair (p, p+offset) increments both (i, j) and (j, i).
Cooccurrence cooccurrence(const QuantizedBlock& block, int dx, int dy);

/// Average of the four direction matrices (0, 45, 90, 135 degrees) at the given
/// distance, normalized to unit mass. Degenerate (no pairs anywhere) yields an
/// all-zero matrix with the degenerate flag set.
Cooccurrence averaged_glcm(const QuantizedBlock& block, int distance);

/// Energy, contrast, correlation, homogeneity of a normalized matrix.
/// Correlation uses the marginal mean/variance (the matrix is symmetric) and
/// is 0 by convention when the variance vanishes.
HaralickFeatures haralick(const Cooccurrence& m);

/// The 12 GLCM features of one grayscale block: for each distance, in order,
/// [energy, contrast, (correlation+1)/2, homogeneity]. The correlation shift
/// keeps every stored feature nonnegative for the chi-square matcher. A
/// distance with no valid pairs contributes four zeros.
std::vector<double> glcm_feature_vector(const GrayImage& img, const BlockSpec& spec,
                                        const GlcmParams& params);

}  // namespace blockface
