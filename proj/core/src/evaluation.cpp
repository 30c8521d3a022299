#include <blockface/evaluation.hpp>

#include <blockface/errors.hpp>
#include <blockface/image_io.hpp>

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>

namespace blockface {

namespace fs = std::filesystem;

void SplitConfig::validate() const {
    if (train_per_subject < 1) throw ConfigError("train_per_subject must be at least 1");
    if (impostors_per_subject < 0) throw ConfigError("impostors_per_subject must be nonnegative");
}

ConfusionCounts confusion(const std::vector<Trial>& trials) {
    ConfusionCounts c;
    for (const auto& t : trials) {
        const bool accepted_as_claim = t.predicted_subject.has_value() &&
                                       *t.predicted_subject == t.claimed_subject;
        if (t.genuine) {
            accepted_as_claim ? ++c.tp : ++c.fn;
        } else {
            accepted_as_claim ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c) {
    Metrics m;
    if (c.tp + c.fn > 0)
        m.sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (c.tn + c.fp > 0)
        m.specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    if (c.total() > 0)
        m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (m.specificity) m.fpr = 1.0 - *m.specificity;
    if (m.sensitivity) m.fnr = 1.0 - *m.sensitivity;
    return m;
}

namespace {

bool looks_like_image(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return ext == ".pgm" || ext == ".png";
}

}  // namespace

std::vector<DatasetEntry> scan_dataset(const fs::path& root) {
    if (!fs::is_directory(root))
        throw DataError("dataset root '" + root.string() + "' is not a directory");
    std::vector<DatasetEntry> entries;
    for (const auto& sub : fs::directory_iterator(root)) {
        if (!sub.is_directory()) continue;
        DatasetEntry e;
        e.subject_id = sub.path().filename().string();
        for (const auto& f : fs::directory_iterator(sub.path())) {
            if (f.is_regular_file() && looks_like_image(f.path())) e.images.push_back(f.path());
        }
        std::sort(e.images.begin(), e.images.end());
        if (!e.images.empty()) entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) {
                  return a.subject_id < b.subject_id;
              });
    return entries;
}

ExperimentReport run_experiment(const fs::path& dataset_root, const PipelineParams& params,
                                const MatchConfig& match, const SplitConfig& split) {
    params.validate();
    match.validate();
    split.validate();

    ExperimentReport report;
    report.dataset = dataset_root.string();
    report.params = params;
    report.match = match;
    report.split = split;

    auto entries = scan_dataset(dataset_root);

    // Partition each subject into train / probe, skipping subjects that cannot
    // contribute a full training set.
    struct SubjectSplit {
        std::string subject_id;
        std::vector<fs::path> train;
        std::vector<fs::path> probes;
    };
    std::vector<SubjectSplit> usable;
    for (auto& e : entries) {
        if (static_cast<int>(e.images.size()) < split.train_per_subject) {
            report.warnings.push_back("subject '" + e.subject_id + "' skipped: has " +
                                      std::to_string(e.images.size()) + " images, needs " +
                                      std::to_string(split.train_per_subject));
            continue;
        }
        SubjectSplit s;
        s.subject_id = e.subject_id;
        s.train.assign(e.images.begin(), e.images.begin() + split.train_per_subject);
        s.probes.assign(e.images.begin() + split.train_per_subject, e.images.end());
        usable.push_back(std::move(s));
    }
    if (usable.empty()) throw DataError("dataset has no subject with enough training images");

    std::vector<FaceSignature> gallery;
    for (const auto& s : usable) {
        for (const auto& img_path : s.train) {
            auto img = load_gray(img_path);
            auto sig = extract_signature(img, params, img_path.filename().string(), s.subject_id);
            if (sig.blocks.empty())
                report.warnings.push_back("training image '" + img_path.string() +
                                          "' produced no significant blocks");
            gallery.push_back(std::move(sig));
        }
    }
    report.enrolled = static_cast<std::int64_t>(gallery.size());

    // Each distinct probe image is classified once; trials reuse the result.
    // Probes are named by their path relative to the dataset root, so two
    // subjects with identically named files stay distinguishable in the report.
    std::map<std::string, MatchResult> cache;
    std::vector<Trial> trials;

    const auto probe_label = [&](const fs::path& img_path) {
        return img_path.lexically_relative(dataset_root).generic_string();
    };

    auto classify_probe = [&](const fs::path& img_path,
                              const std::string& true_subject) -> const MatchResult& {
        const auto key = img_path.string();
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto img = load_gray(img_path);
        auto sig = extract_signature(img, params, img_path.filename().string(), true_subject);
        if (sig.blocks.empty())
            report.warnings.push_back("probe image '" + img_path.string() +
                                      "' produced no significant blocks");
        auto result = classify(sig, gallery, match);
        report.rankings.push_back({probe_label(img_path), true_subject, result.ranking});
        return cache.emplace(key, std::move(result)).first->second;
    };

    auto record_trial = [&](const MatchResult& r, const std::string& probe_image,
                            const std::string& claimed, bool genuine) {
        Trial t;
        t.claimed_subject = claimed;
        t.genuine = genuine;
        if (!r.rejected) t.predicted_subject = r.predicted_subject;
        trials.push_back(t);

        TrialRecord rec;
        rec.probe_image = probe_image;
        rec.claimed_subject = claimed;
        rec.genuine = genuine;
        rec.predicted_subject = r.rejected ? std::string() : r.predicted_subject;
        rec.best_dissimilarity =
            r.ranking.empty() ? std::numeric_limits<double>::infinity()
                              : r.ranking.front().dissimilarity;
        const bool accepted = !r.rejected && r.predicted_subject == claimed;
        rec.outcome = genuine ? (accepted ? "TP" : "FN") : (accepted ? "FP" : "TN");
        report.trials.push_back(std::move(rec));
    };

    // Genuine claims: every held-out image against its own subject.
    for (const auto& s : usable) {
        for (const auto& p : s.probes) {
            const auto& r = classify_probe(p, s.subject_id);
            record_trial(r, probe_label(p), s.subject_id, true);
        }
    }

    // Impostor claims: for subject i, walk the other subjects round-robin
    // starting at i+1 and claim their first probe image against subject i.
    const auto n = usable.size();
    for (std::size_t i = 0; i < n; ++i) {
        int made = 0;
        for (std::size_t step = 1; step < n && made < split.impostors_per_subject; ++step) {
            const auto& other = usable[(i + step) % n];
            if (other.probes.empty()) continue;
            const auto& p = other.probes.front();
            const auto& r = classify_probe(p, other.subject_id);
            record_trial(r, probe_label(p), usable[i].subject_id, false);
            ++made;
        }
    }

    report.counts = confusion(trials);
    report.metric_values = metrics(report.counts);
    return report;
}

}  // namespace blockface
