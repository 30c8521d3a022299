#pragma once

#include <blockface/evaluation.hpp>
#include <blockface/features.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace blockface {

inline constexpr int kFormatVersion = 1;

/// Persisted set of enrolled signatures together with the full parameter
/// record needed to reproduce them (including the RNG algorithm and seed).
struct Gallery {
    PipelineParams params;
    std::vector<FaceSignature> signatures;
};

/// Appends signatures extracted with the same parameter record; a parameter
/// mismatch throws ConfigError.
void gallery_append(Gallery& gallery, FaceSignature signature);

// All documents are JSON with a declared format name and version. Doubles are
// written with 17 significant digits so values round-trip exactly; writing is
// a pure function of the in-memory value, making save/load/save byte-stable.
// Non-finite values serialize as null.

std::string to_json(const FaceSignature& sig);
std::string to_json(const Gallery& gallery);
std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

/// Machine-readable identification results (one document per invocation).
struct IdentifyDocument {
    PipelineParams params;
    MatchConfig match;
    std::vector<MatchResult> results;
};

std::string to_json(const IdentifyDocument& doc);

void save_text(const std::filesystem::path& path, const std::string& text);

FaceSignature load_signature(const std::filesystem::path& path);
Gallery load_gallery(const std::filesystem::path& path);

void save_signature(const std::filesystem::path& path, const FaceSignature& sig);
void save_gallery(const std::filesystem::path& path, const Gallery& gallery);

/// Formats one double the way every document writer does: %.17g, which is
/// enough digits to reconstruct the exact bit pattern on parse.
std::string format_double(double value);

}  // namespace blockface
