#pragma once

#include <blockface/raster.hpp>

#include <filesystem>

// Face-like test images: dark contour shapes (eyes, nose, mouth, extras) on a
// light field, with per-subject layouts, optional additive Gaussian noise
// (sigma 4) and whole-face jitter of up to one pixel per variant. Deterministic
// in (subject, variant).
namespace synthetic {

blockface::GrayImage face(int subject, int variant, bool with_noise = true,
                          bool with_jitter = true);

/// Clean two-disks-plus-bar image for contour-location checks.
blockface::GrayImage two_disks_and_bar();

/// Writes root/s01..sNN/A.pgm.. with `per_subject` variants per subject.
void write_dataset(const std::filesystem::path& root, int subjects, int per_subject);

}  // namespace synthetic
