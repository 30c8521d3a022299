#pragma once

#include <blockface/raster.hpp>

#include <filesystem>

namespace blockface {

/// Load an 8-bit grayscale image from a PGM (P2/P5, maxval <= 255) or PNG
/// (8-bit gray or RGB) file. RGB is converted to luma by rounding
/// 0.299 R + 0.587 G + 0.114 B. Throws DataError with the path and cause on
/// unreadable files, unsupported bit depths, or malformed headers.
GrayImage load_gray(const std::filesystem::path& path);

/// Write as binary PGM (P5, maxval 255). Binary images are written as 0/255.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
void save_pgm(const BinaryImage& img, const std::filesystem::path& path);

/// Luma of one RGB triple, rounded half away from zero. Exposed for tests.
std::uint8_t rgb_to_luma(int r, int g, int b);

}  // namespace blockface
