#include <blockface/blocks.hpp>
#include <blockface/errors.hpp>
#include <blockface/evaluation.hpp>
#include <blockface/features.hpp>
#include <blockface/image_io.hpp>
#include <blockface/matching.hpp>
#include <blockface/serialize.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace blockface;

namespace {

struct RunConfig {
    PipelineParams params;
    MatchConfig match;
    SplitConfig split;

    void validate() const {
        params.validate();
        match.validate();
        split.validate();
    }
};

std::int64_t parse_i64(const std::string& text, const std::string& what) {
    std::int64_t value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ConfigError(what + ": '" + text + "' is not an integer");
    return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ConfigError(what + ": '" + text + "' is not a nonnegative integer");
    return value;
}

double parse_f64(const std::string& text, const std::string& what) {
    try {
        std::size_t idx = 0;
        const double value = std::stod(text, &idx);
        if (idx != text.size()) throw std::invalid_argument("");
        return value;
    } catch (const std::exception&) {
        throw ConfigError(what + ": '" + text + "' is not a number");
    }
}

std::vector<int> parse_distances(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(static_cast<int>(parse_i64(item, "distances")));
    if (out.empty()) throw ConfigError("distances: empty list");
    return out;
}

std::pair<int, int> parse_size(const std::string& text, const std::string& what) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw ConfigError(what + ": '" + text + "' is not WIDTHxHEIGHT");
    return {static_cast<int>(parse_i64(text.substr(0, x), what)),
            static_cast<int>(parse_i64(text.substr(x + 1), what))};
}

Aggregation parse_mode(const std::string& text) {
    if (text == "gated-min") return Aggregation::GatedMin;
    if (text == "gated-max") return Aggregation::GatedMax;
    throw ConfigError("mode: '" + text + "' is neither gated-min nor gated-max");
}

/// Raw option storage bound to CLI11; presence is checked via count() so the
/// layering below can tell "flag given" from "default".
struct FlagValues {
    std::string config_path;
    std::uint64_t seed = 0;
    int grid_cols = 0;
    int grid_rows = 0;
    int retain = 0;
    std::int64_t iterations = 0;
    int levels = 0;
    int glcm_levels = 0;
    std::string distances;
    int target_width = 0;
    int target_height = 0;
    std::string center_crop;
    double th1 = 0.0;
    std::string mode;
    double threshold = 0.0;
    int train_per_subject = 0;
    int impostors = 0;
};

void add_config_flag(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--config", v.config_path, "key=value config file; flags override it");
}

void add_pipeline_flags(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--seed", v.seed, "block sampling RNG seed");
    cmd->add_option("--grid-cols", v.grid_cols, "block grid columns");
    cmd->add_option("--grid-rows", v.grid_rows, "block grid rows");
    cmd->add_option("--retain", v.retain, "significant blocks kept per image");
    cmd->add_option("--iterations", v.iterations, "random block samples drawn");
    cmd->add_option("--levels", v.levels, "posterization gray levels");
    cmd->add_option("--glcm-levels", v.glcm_levels, "co-occurrence quantization levels");
    cmd->add_option("--distances", v.distances, "co-occurrence distances, e.g. 1,2,3");
    cmd->add_option("--target-width", v.target_width, "resize width");
    cmd->add_option("--target-height", v.target_height, "resize height");
    cmd->add_option("--center-crop", v.center_crop, "pre-resize center crop, WIDTHxHEIGHT");
}

void add_match_flags(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--th1", v.th1, "spatial gate radius in pixels");
    cmd->add_option("--mode", v.mode, "gated-min or gated-max");
    cmd->add_option("--threshold", v.threshold, "reject when best dissimilarity exceeds this");
}

void add_split_flags(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--train-per-subject", v.train_per_subject,
                    "training images per subject");
    cmd->add_option("--impostors-per-subject", v.impostors,
                    "impostor claims injected per subject");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string entry = strip(line);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + entry + "'");
        const std::string key = strip(entry.substr(0, eq));
        const std::string value = strip(entry.substr(eq + 1));

        if (key == "seed") {
            cfg.params.blocks.rng_seed = parse_u64(value, key);
        } else if (key == "grid-cols") {
            cfg.params.blocks.grid_cols = static_cast<int>(parse_i64(value, key));
        } else if (key == "grid-rows") {
            cfg.params.blocks.grid_rows = static_cast<int>(parse_i64(value, key));
        } else if (key == "retain") {
            cfg.params.blocks.retain_count = static_cast<int>(parse_i64(value, key));
        } else if (key == "iterations") {
            cfg.params.blocks.iterations = parse_i64(value, key);
        } else if (key == "levels") {
            cfg.params.preprocess.poster_levels = static_cast<int>(parse_i64(value, key));
        } else if (key == "glcm-levels") {
            cfg.params.glcm.levels = static_cast<int>(parse_i64(value, key));
        } else if (key == "distances") {
            cfg.params.glcm.distances = parse_distances(value);
        } else if (key == "target-width") {
            cfg.params.preprocess.target_width = static_cast<int>(parse_i64(value, key));
        } else if (key == "target-height") {
            cfg.params.preprocess.target_height = static_cast<int>(parse_i64(value, key));
        } else if (key == "center-crop") {
            const auto [w, h] = parse_size(value, key);
            cfg.params.preprocess.crop_width = w;
            cfg.params.preprocess.crop_height = h;
        } else if (key == "th1") {
            cfg.match.th1 = parse_f64(value, key);
        } else if (key == "mode") {
            cfg.match.aggregation = parse_mode(value);
        } else if (key == "threshold") {
            cfg.match.ceiling = parse_f64(value, key);
        } else if (key == "train-per-subject") {
            cfg.split.train_per_subject = static_cast<int>(parse_i64(value, key));
        } else if (key == "impostors-per-subject") {
            cfg.split.impostors_per_subject = static_cast<int>(parse_i64(value, key));
        } else {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        }
    }
}

/// Defaults, then the config file, then BLOCKFACE_SEED, then explicit flags.
RunConfig build_config(const CLI::App* cmd, const FlagValues& v) {
    RunConfig cfg;
    const auto given = [&](const std::string& flag) {
        const auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--config")) apply_config_file(cfg, v.config_path);

    if (const char* env = std::getenv("BLOCKFACE_SEED"))
        if (!given("--seed")) cfg.params.blocks.rng_seed = parse_u64(env, "BLOCKFACE_SEED");

    if (given("--seed")) cfg.params.blocks.rng_seed = v.seed;
    if (given("--grid-cols")) cfg.params.blocks.grid_cols = v.grid_cols;
    if (given("--grid-rows")) cfg.params.blocks.grid_rows = v.grid_rows;
    if (given("--retain")) cfg.params.blocks.retain_count = v.retain;
    if (given("--iterations")) cfg.params.blocks.iterations = v.iterations;
    if (given("--levels")) cfg.params.preprocess.poster_levels = v.levels;
    if (given("--glcm-levels")) cfg.params.glcm.levels = v.glcm_levels;
    if (given("--distances")) cfg.params.glcm.distances = parse_distances(v.distances);
    if (given("--target-width")) cfg.params.preprocess.target_width = v.target_width;
    if (given("--target-height")) cfg.params.preprocess.target_height = v.target_height;
    if (given("--center-crop")) {
        const auto [w, h] = parse_size(v.center_crop, "center-crop");
        cfg.params.preprocess.crop_width = w;
        cfg.params.preprocess.crop_height = h;
    }
    if (given("--th1")) cfg.match.th1 = v.th1;
    if (given("--mode")) cfg.match.aggregation = parse_mode(v.mode);
    if (given("--threshold")) cfg.match.ceiling = v.threshold;
    if (given("--train-per-subject")) cfg.split.train_per_subject = v.train_per_subject;
    if (given("--impostors-per-subject")) cfg.split.impostors_per_subject = v.impostors;
    cfg.validate();
    return cfg;
}

int cmd_extract(const std::vector<std::string>& images, const RunConfig& cfg,
                const std::string& subject, const std::string& out) {
    const bool dir_mode = images.size() > 1 || fs::is_directory(out);
    if (!out.empty() && dir_mode) fs::create_directories(out);
    int failures = 0;
    for (const auto& image : images) {
        try {
            const fs::path src(image);
            const auto img = load_gray(src);
            const auto sig =
                extract_signature(img, cfg.params, src.filename().string(), subject);
            fs::path dest;
            if (out.empty()) {
                dest = src;
                dest.replace_extension(".sig.json");
            } else if (dir_mode) {
                dest = fs::path(out) / (src.stem().string() + ".sig.json");
            } else {
                dest = out;
            }
            save_signature(dest, sig);
            std::cout << dest.string() << ": " << sig.blocks.size() << " blocks\n";
        } catch (const DataError& e) {
            std::cerr << "error: " << e.what() << '\n';
            ++failures;
        }
    }
    return failures == 0 ? 0 : 2;
}

int cmd_enroll(const std::string& dataset, const RunConfig& cfg, const std::string& out) {
    Gallery gallery;
    if (fs::exists(out)) {
        gallery = load_gallery(out);
        if (!(gallery.params == cfg.params))
            throw ConfigError("gallery '" + out +
                              "' was built with different parameters; refusing to append");
    } else {
        gallery.params = cfg.params;
    }

    const auto entries = scan_dataset(dataset);
    if (entries.empty()) throw DataError("no subject directories with images in '" + dataset + "'");

    int subjects = 0;
    std::size_t added = 0;
    for (const auto& e : entries) {
        if (static_cast<int>(e.images.size()) < cfg.split.train_per_subject) {
            std::cerr << "warning: subject '" << e.subject_id << "' has " << e.images.size()
                      << " images, needs " << cfg.split.train_per_subject << "; skipped\n";
            continue;
        }
        ++subjects;
        for (int i = 0; i < cfg.split.train_per_subject; ++i) {
            const auto& path = e.images[static_cast<std::size_t>(i)];
            const auto img = load_gray(path);
            gallery_append(gallery, extract_signature(img, cfg.params,
                                                      path.filename().string(), e.subject_id));
            ++added;
        }
    }
    if (added == 0) throw DataError("no subject in '" + dataset + "' had enough images");
    save_gallery(out, gallery);
    std::cout << out << ": " << gallery.signatures.size() << " signatures (" << added
              << " added from " << subjects << " subjects)\n";
    return 0;
}

int cmd_identify(const std::string& gallery_path, const std::vector<std::string>& probes,
                 const MatchConfig& match, int top, bool as_json) {
    const Gallery gallery = load_gallery(gallery_path);
    if (gallery.signatures.empty()) throw DataError("gallery '" + gallery_path + "' is empty");

    IdentifyDocument doc;
    doc.params = gallery.params;
    doc.match = match;
    for (const auto& probe : probes) {
        const fs::path src(probe);
        const auto img = load_gray(src);
        const auto sig = extract_signature(img, gallery.params, src.filename().string(), "");
        doc.results.push_back(classify(sig, gallery.signatures, match));
        if (sig.blocks.empty() && !as_json)
            std::cerr << "note: '" << probe << "' yielded no significant blocks\n";
    }

    if (as_json) {
        std::cout << to_json(doc);
        return 0;
    }
    const auto show_d = [](double d) {
        return std::isfinite(d) ? format_double(d) : std::string("inf");
    };
    for (const auto& r : doc.results) {
        if (r.rejected) {
            std::cout << r.probe_id << ": reject (no match within the configured limits)\n";
        } else {
            std::cout << r.probe_id << ": " << r.predicted_subject
                      << " (D = " << show_d(r.ranking.front().dissimilarity) << ")\n";
        }
        const int n = std::min<int>(top, static_cast<int>(r.ranking.size()));
        for (int i = 0; i < n; ++i) {
            const auto& m = r.ranking[static_cast<std::size_t>(i)];
            std::cout << "  " << (i + 1) << ". " << m.subject_id << '/' << m.image_id
                      << "  D = " << show_d(m.dissimilarity) << "  (" << m.matched_blocks
                      << " gated blocks)\n";
        }
    }
    return 0;
}

int cmd_evaluate(const std::string& dataset, const RunConfig& cfg, const std::string& out) {
    const auto report = run_experiment(dataset, cfg.params, cfg.match, cfg.split);
    fs::create_directories(out);
    const auto json_path = fs::path(out) / "report.json";
    const auto csv_path = fs::path(out) / "report.csv";
    save_text(json_path, report_to_json(report));
    save_text(csv_path, report_to_csv(report));

    for (const auto& wmsg : report.warnings) std::cerr << "warning: " << wmsg << '\n';
    const auto show = [](const char* name, const std::optional<double>& v) {
        std::cout << "  " << name << ": ";
        if (v)
            std::cout << format_double(*v) << '\n';
        else
            std::cout << "undefined\n";
    };
    std::cout << "enrolled " << report.enrolled << " signatures; " << report.trials.size()
              << " trials\n";
    std::cout << "  TP " << report.counts.tp << "  FP " << report.counts.fp << "  TN "
              << report.counts.tn << "  FN " << report.counts.fn << '\n';
    show("sensitivity", report.metric_values.sensitivity);
    show("specificity", report.metric_values.specificity);
    show("accuracy", report.metric_values.accuracy);
    std::cout << "wrote " << json_path.string() << " and " << csv_path.string() << '\n';
    return 0;
}

int cmd_inspect(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open '" + file + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("cannot parse '" + file + "': " + e.what());
    }
    const std::string format = j.is_object() ? j.value("format", "") : "";

    const auto print_params = [&](const nlohmann::json& p) {
        std::cout << "  resize " << p["preprocess"]["target_width"] << "x"
                  << p["preprocess"]["target_height"] << ", levels "
                  << p["preprocess"]["poster_levels"] << ", grid "
                  << p["blocks"]["grid_cols"] << "x" << p["blocks"]["grid_rows"] << ", retain "
                  << p["blocks"]["retain_count"] << ", iterations "
                  << p["blocks"]["iterations"] << "\n  rng "
                  << p["blocks"]["rng"]["algorithm"].get<std::string>() << " seed "
                  << p["blocks"]["rng"]["seed"] << ", glcm levels " << p["glcm"]["levels"]
                  << " distances " << p["glcm"]["distances"].dump() << ", ldp k "
                  << p["ldp"]["k"] << '\n';
    };
    const auto print_blocks = [&](const nlohmann::json& blocks) {
        for (const auto& b : blocks)
            std::cout << "    block (" << b["x"] << ", " << b["y"] << ") " << b["u"] << "x"
                      << b["v"] << "  white " << b["white_count"] << '\n';
    };

    if (format == "blockface-signature") {
        std::cout << "signature " << j["image_id"].get<std::string>() << " (subject '"
                  << j["subject_id"].get<std::string>() << "'), image " << j["width"] << "x"
                  << j["height"] << ", " << j["blocks"].size() << " blocks\n";
        print_params(j["params"]);
        print_blocks(j["blocks"]);
    } else if (format == "blockface-gallery") {
        std::cout << "gallery, " << j["signatures"].size() << " signatures\n";
        print_params(j["params"]);
        for (const auto& s : j["signatures"])
            std::cout << "  " << s["subject_id"].get<std::string>() << '/'
                      << s["image_id"].get<std::string>() << ": " << s["blocks"].size()
                      << " blocks\n";
    } else if (format == "blockface-report") {
        std::cout << "report on " << j["dataset"].get<std::string>() << '\n';
        print_params(j["params"]);
        std::cout << "  mode " << j["match"]["mode"].get<std::string>() << ", enrolled "
                  << j["enrolled"] << ", trials " << j["trials"].size() << '\n';
        const auto& c = j["counts"];
        std::cout << "  TP " << c["tp"] << "  FP " << c["fp"] << "  TN " << c["tn"] << "  FN "
                  << c["fn"] << '\n';
        for (const auto& [name, value] : j["metrics"].items())
            std::cout << "  " << name << ": " << value.dump() << '\n';
        for (const auto& wmsg : j["warnings"])
            std::cout << "  warning: " << wmsg.get<std::string>() << '\n';
    } else if (format == "blockface-identify") {
        std::cout << "identification results, " << j["probes"].size() << " probes\n";
        for (const auto& p : j["probes"]) {
            std::cout << "  " << p["probe"].get<std::string>() << ": ";
            if (p["rejected"].get<bool>())
                std::cout << "reject\n";
            else
                std::cout << p["predicted"].get<std::string>() << '\n';
        }
    } else {
        throw DataError("'" + file + "' is not a recognized document");
    }
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Block-based face identification from directional and co-occurrence texture"};
    app.require_subcommand(1);
    FlagValues v;

    auto* extract = app.add_subcommand("extract", "compute signature files for images");
    std::vector<std::string> extract_images;
    std::string extract_subject, extract_out;
    extract->add_option("images", extract_images, "input images (PGM or PNG)")->required();
    extract->add_option("--subject", extract_subject, "subject id recorded in the signatures");
    extract->add_option("--out", extract_out, "output file (one image) or directory");
    add_config_flag(extract, v);
    add_pipeline_flags(extract, v);

    auto* enroll = app.add_subcommand("enroll", "build a gallery from a dataset directory");
    std::string enroll_dataset, enroll_out;
    enroll->add_option("dataset", enroll_dataset, "dataset root (subject dirs of images)")
        ->required();
    enroll->add_option("--out", enroll_out, "gallery file")->required();
    add_config_flag(enroll, v);
    add_pipeline_flags(enroll, v);
    add_split_flags(enroll, v);

    auto* identify = app.add_subcommand("identify", "rank probe images against a gallery");
    std::string identify_gallery;
    std::vector<std::string> identify_probes;
    int identify_top = 5;
    bool identify_json = false;
    identify->add_option("--gallery", identify_gallery, "gallery file")->required();
    identify->add_option("probes", identify_probes, "probe images")->required();
    identify->add_option("--top", identify_top, "ranking entries to print");
    identify->add_flag("--json", identify_json, "print one machine-readable document");
    add_config_flag(identify, v);
    add_match_flags(identify, v);

    auto* evaluate = app.add_subcommand("evaluate", "run the identification experiment");
    std::string eval_dataset, eval_out = ".";
    evaluate->add_option("dataset", eval_dataset, "dataset root (subject dirs of images)")
        ->required();
    evaluate->add_option("--out", eval_out, "directory for report.json and report.csv");
    add_config_flag(evaluate, v);
    add_pipeline_flags(evaluate, v);
    add_match_flags(evaluate, v);
    add_split_flags(evaluate, v);

    auto* inspect = app.add_subcommand("inspect", "print a document in human-readable form");
    std::string inspect_file;
    inspect->add_option("file", inspect_file, "signature, gallery, or report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    }

    if (extract->parsed())
        return cmd_extract(extract_images, build_config(extract, v), extract_subject,
                           extract_out);
    if (enroll->parsed()) return cmd_enroll(enroll_dataset, build_config(enroll, v), enroll_out);
    if (identify->parsed())
        return cmd_identify(identify_gallery, identify_probes, build_config(identify, v).match,
                            identify_top, identify_json);
    if (evaluate->parsed()) return cmd_evaluate(eval_dataset, build_config(evaluate, v), eval_out);
    if (inspect->parsed()) return cmd_inspect(inspect_file);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
