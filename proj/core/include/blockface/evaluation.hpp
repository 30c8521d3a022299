#pragma once

#include <blockface/features.hpp>
#include <blockface/matching.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blockface {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
};

/// Point metrics of a confusion table. A metric whose denominator is zero is
/// reported as undefined (nullopt), never as 0.
struct Metrics {
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> accuracy;
    std::optional<double> fpr;  // 1 - specificity
    std::optional<double> fnr;  // 1 - sensitivity
};

/// One scored claim: a probe claimed against a subject, genuine or impostor.
struct Trial {
    std::string claimed_subject;
    std::optional<std::string> predicted_subject;  // nullopt = rejected
    bool genuine = false;
};

ConfusionCounts confusion(const std::vector<Trial>& trials);
Metrics metrics(const ConfusionCounts& c);

struct SplitConfig {
    int train_per_subject = 2;
    int impostors_per_subject = 5;  // negative claims injected into each class

    void validate() const;
};

struct TrialRecord {
    std::string probe_image;
    std::string claimed_subject;
    bool genuine = false;
    std::string predicted_subject;  // empty = rejected
    double best_dissimilarity = 0.0;
    std::string outcome;  // TP / FN / FP / TN
};

struct ProbeRanking {
    std::string probe_image;
    std::string true_subject;
    std::vector<RankedMatch> ranking;
};

struct ExperimentReport {
    std::string dataset;
    PipelineParams params;
    MatchConfig match;
    SplitConfig split;
    ConfusionCounts counts;
    Metrics metric_values;
    std::vector<TrialRecord> trials;
    std::vector<ProbeRanking> rankings;   // one entry per distinct probe image
    std::vector<std::string> warnings;    // skipped subjects, degenerate signatures
    std::int64_t enrolled = 0;
};

/// Enroll the first train_per_subject images of every subject directory under
/// root, score every remaining image as a genuine claim plus round-robin
/// impostor claims per class, and aggregate the confusion counts and metrics.
/// Subjects with too few images are reported and skipped; the experiment
/// continues with the rest. Deterministic given the seed and inputs.
ExperimentReport run_experiment(const std::filesystem::path& dataset_root,
                                const PipelineParams& params, const MatchConfig& match,
                                const SplitConfig& split);

/// Subject-per-directory dataset listing: subjects sorted lexicographically,
/// image files within each subject sorted lexicographically.
struct DatasetEntry {
    std::string subject_id;
    std::vector<std::filesystem::path> images;
};

std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root);

}  // namespace blockface
