#pragma once

#include <blockface/raster.hpp>

namespace blockface {

/// Knobs for the per-image preprocessing stage. Crop is optional (0 = off) and
/// runs before the resize.
struct PreprocessConfig {
    int target_width = 92;
    int target_height = 112;
    int poster_levels = 8;  // n_L
    int crop_width = 0;     // 0 disables the center crop
    int crop_height = 0;

    void validate() const;
    bool operator==(const PreprocessConfig&) const = default;
};

/// Central crop of w×h (clamped to the image bounds).
GrayImage center_crop(const GrayImage& img, int w, int h);

/// Bilinear resample with half-pixel-centered sampling. Resizing to the input
/// size reproduces the input exactly.
GrayImage resize_bilinear(const GrayImage& img, int w, int h);

/// Per-pixel sum of |I(p) - I(q)| over the existing 8-neighbors of p. Border
/// pixels sum over available neighbors only. Requires at least 2x2.
WideRaster gradient_raw(const GrayImage& img);

/// gradient_raw followed by enhance(): the usual edge map the pipeline feeds on.
GrayImage gradient_magnitude(const GrayImage& img);

/// Shift so the minimum is 0, then scale so the maximum is 255 (rounded half
/// away from zero). A constant input maps to all zeros.
GrayImage enhance(const WideRaster& raster);
GrayImage enhance(const GrayImage& img);

/// Quantize to n_L levels: round(v * n_L / 256) * (256 / n_L), clamped to 255.
GrayImage posterize(const GrayImage& img, int n_L);

/// Threshold at T = (mean + median) / 2 (median = lower middle for even pixel
/// counts); output is 1 where the pixel strictly exceeds T.
BinaryImage binarize_mean_median(const GrayImage& img);

}  // namespace blockface
