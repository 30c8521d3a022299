#include <blockface/preprocess.hpp>

#include <blockface/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace blockface {

void PreprocessConfig::validate() const {
    if (target_width < 3 || target_height < 3)
        throw ConfigError("preprocess: target dimensions must be at least 3x3");
    if (poster_levels < 2 || poster_levels > 256)
        throw ConfigError("preprocess: poster levels must be in [2, 256]");
    if (crop_width < 0 || crop_height < 0)
        throw ConfigError("preprocess: crop dimensions must be nonnegative");
    if ((crop_width == 0) != (crop_height == 0))
        throw ConfigError("preprocess: crop width and height must be given together");
}

GrayImage center_crop(const GrayImage& img, int w, int h) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("center_crop: crop size must be positive");
    w = std::min(w, img.width);
    h = std::min(h, img.height);
    const int x0 = (img.width - w) / 2;
    const int y0 = (img.height - h) / 2;
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("resize_bilinear: target size must be >= 1");
    if (img.empty()) throw std::invalid_argument("resize_bilinear: empty input");
    GrayImage out(w, h);
    const double sx = static_cast<double>(img.width) / w;
    const double sy = static_cast<double>(img.height) / h;
    for (int y = 0; y < h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            const double top = (1.0 - wx) * img.at(x0, y0) + wx * img.at(x1, y0);
            const double bot = (1.0 - wx) * img.at(x0, y1) + wx * img.at(x1, y1);
            const double v = (1.0 - wy) * top + wy * bot;
            out.at(x, y) = static_cast<std::uint8_t>(std::llround(v));
        }
    }
    return out;
}

WideRaster gradient_raw(const GrayImage& img) {
    if (img.width < 2 || img.height < 2)
        throw std::invalid_argument("gradient_raw: image must be at least 2x2");
    WideRaster out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int center = img.at(x, y);
            std::int64_t sum = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= img.width || ny >= img.height) continue;
                    sum += std::abs(center - img.at(nx, ny));
                }
            }
            out.at(x, y) = sum;
        }
    }
    return out;
}

GrayImage gradient_magnitude(const GrayImage& img) { return enhance(gradient_raw(img)); }

GrayImage enhance(const WideRaster& raster) {
    if (raster.empty()) throw std::invalid_argument("enhance: empty raster");
    const auto [lo, hi] = std::minmax_element(raster.data.begin(), raster.data.end());
    const std::int64_t minv = *lo;
    const std::int64_t range = *hi - minv;
    GrayImage out(raster.width, raster.height);
    if (range == 0) return out;  // constant input maps to all zeros
    for (std::size_t i = 0; i < raster.data.size(); ++i) {
        const double scaled = static_cast<double>(raster.data[i] - minv) * 255.0 / range;
        out.data[i] = static_cast<std::uint8_t>(std::llround(scaled));
    }
    return out;
}

GrayImage enhance(const GrayImage& img) {
    WideRaster wide(img.width, img.height);
    std::copy(img.data.begin(), img.data.end(), wide.data.begin());
    return enhance(wide);
}

GrayImage posterize(const GrayImage& img, int n_L) {
    if (n_L < 2 || n_L > 256) throw std::invalid_argument("posterize: n_L must be in [2, 256]");
    if (img.empty()) throw std::invalid_argument("posterize: empty input");
    // 256 values, so precompute the level map once.
    std::array<std::uint8_t, 256> lut;
    const double step = 256.0 / n_L;
    for (int v = 0; v < 256; ++v) {
        const long long level = std::llround(v * n_L / 256.0);
        const long long mapped = std::llround(level * step);
        lut[v] = static_cast<std::uint8_t>(std::min(mapped, 255LL));
    }
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = lut[img.data[i]];
    return out;
}

BinaryImage binarize_mean_median(const GrayImage& img) {
    if (img.empty()) throw std::invalid_argument("binarize_mean_median: empty input");
    const std::int64_t n = static_cast<std::int64_t>(img.pixel_count());
    const std::int64_t sum = std::accumulate(img.data.begin(), img.data.end(), std::int64_t{0});
    std::vector<std::uint8_t> sorted(img.data);
    const std::size_t mid = (sorted.size() - 1) / 2;  // lower middle for even counts
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    const std::int64_t median = sorted[mid];
    // Threshold T = (sum/n + median)/2; compare p > T exactly in integers:
    // p * 2n > sum + median * n.
    const std::int64_t rhs = sum + median * n;
    BinaryImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = (static_cast<std::int64_t>(img.data[i]) * 2 * n > rhs) ? 1 : 0;
    return out;
}

}  // namespace blockface
