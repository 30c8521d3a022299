#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace blockface {

/// 8-bit grayscale raster, row-major, values in [0, 255].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
    }

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

/// Binary raster, row-major, values in {0, 1}.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryImage() = default;
    BinaryImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("BinaryImage: dimensions must be positive");
    }

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

/// Signed wide-integer raster for intermediate results that do not fit 8 bits
/// (raw gradient sums before enhancement).
struct WideRaster {
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> data;

    WideRaster() = default;
    WideRaster(int w, int h, std::int64_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("WideRaster: dimensions must be positive");
    }

    std::int64_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::int64_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

}  // namespace blockface
