#include <blockface/serialize.hpp>

#include <blockface/errors.hpp>
#include <blockface/ldp.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace blockface {

namespace {

using nlohmann::json;

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

/// Minimal document writer. Emission order is fixed by the call sequence, so
/// two writes of the same value are byte-identical.
class Writer {
public:
    explicit Writer(std::string& out) : out_(out) {}

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& name) {
        comma();
        out_ += '"';
        out_ += escape_json(name);
        out_ += "\": ";
        just_keyed_ = true;
    }

    void value(const std::string& s) {
        comma();
        out_ += '"';
        out_ += escape_json(s);
        out_ += '"';
    }
    void value(const char* s) { value(std::string(s)); }
    void value(std::int64_t v) {
        comma();
        out_ += std::to_string(v);
    }
    void value(int v) { value(static_cast<std::int64_t>(v)); }
    void value(std::uint64_t v) {
        comma();
        out_ += std::to_string(v);
    }
    void value(bool v) {
        comma();
        out_ += v ? "true" : "false";
    }
    void value(double v) {
        comma();
        out_ += format_double(v);
    }
    void null() {
        comma();
        out_ += "null";
    }
    void value(const std::optional<double>& v) {
        if (v)
            value(*v);
        else
            null();
    }

private:
    void open(char c) {
        comma();
        out_ += c;
        need_comma_ = false;
    }
    void close(char c) {
        out_ += c;
        need_comma_ = true;
    }
    void comma() {
        if (just_keyed_) {
            just_keyed_ = false;
            return;
        }
        if (need_comma_) out_ += ", ";
        need_comma_ = true;
    }

    std::string& out_;
    bool need_comma_ = false;
    bool just_keyed_ = false;
};

void write_params(Writer& w, const PipelineParams& p) {
    w.begin_object();
    w.key("preprocess");
    w.begin_object();
    w.key("target_width");
    w.value(p.preprocess.target_width);
    w.key("target_height");
    w.value(p.preprocess.target_height);
    w.key("poster_levels");
    w.value(p.preprocess.poster_levels);
    w.key("crop_width");
    w.value(p.preprocess.crop_width);
    w.key("crop_height");
    w.value(p.preprocess.crop_height);
    w.end_object();
    w.key("blocks");
    w.begin_object();
    w.key("grid_cols");
    w.value(p.blocks.grid_cols);
    w.key("grid_rows");
    w.value(p.blocks.grid_rows);
    w.key("retain_count");
    w.value(p.blocks.retain_count);
    w.key("iterations");
    w.value(p.blocks.iterations);
    w.key("rng");
    w.begin_object();
    w.key("algorithm");
    w.value(kRngAlgorithm);
    w.key("seed");
    w.value(p.blocks.rng_seed);
    w.end_object();
    w.end_object();
    w.key("glcm");
    w.begin_object();
    w.key("levels");
    w.value(p.glcm.levels);
    w.key("distances");
    w.begin_array();
    for (int d : p.glcm.distances) w.value(d);
    w.end_array();
    w.end_object();
    w.key("ldp");
    w.begin_object();
    w.key("k");
    w.value(p.ldp_k);
    w.key("codes");
    w.begin_array();
    for (int c : kLdpCodes) w.value(c);
    w.end_array();
    w.end_object();
    w.end_object();
}

void write_signature_body(Writer& w, const FaceSignature& sig) {
    w.key("image_id");
    w.value(sig.image_id);
    w.key("subject_id");
    w.value(sig.subject_id);
    w.key("width");
    w.value(sig.width);
    w.key("height");
    w.value(sig.height);
    w.key("blocks");
    w.begin_array();
    for (const auto& b : sig.blocks) {
        w.begin_object();
        w.key("x");
        w.value(b.spec.x);
        w.key("y");
        w.value(b.spec.y);
        w.key("u");
        w.value(b.spec.u);
        w.key("v");
        w.value(b.spec.v);
        w.key("white_count");
        w.value(b.white_count);
        w.key("interior_count");
        w.value(b.interior_count);
        w.key("features");
        w.begin_array();
        for (double f : b.vec) w.value(f);
        w.end_array();
        w.end_object();
    }
    w.end_array();
}

PipelineParams parse_params(const json& j) {
    PipelineParams p;
    const auto& pre = j.at("preprocess");
    p.preprocess.target_width = pre.at("target_width").get<int>();
    p.preprocess.target_height = pre.at("target_height").get<int>();
    p.preprocess.poster_levels = pre.at("poster_levels").get<int>();
    p.preprocess.crop_width = pre.at("crop_width").get<int>();
    p.preprocess.crop_height = pre.at("crop_height").get<int>();
    const auto& blk = j.at("blocks");
    p.blocks.grid_cols = blk.at("grid_cols").get<int>();
    p.blocks.grid_rows = blk.at("grid_rows").get<int>();
    p.blocks.retain_count = blk.at("retain_count").get<int>();
    p.blocks.iterations = blk.at("iterations").get<std::int64_t>();
    const auto& rng = blk.at("rng");
    if (rng.at("algorithm").get<std::string>() != kRngAlgorithm)
        throw DataError("file was produced with RNG '" +
                        rng.at("algorithm").get<std::string>() + "', this build uses '" +
                        std::string(kRngAlgorithm) + "'");
    p.blocks.rng_seed = rng.at("seed").get<std::uint64_t>();
    const auto& gl = j.at("glcm");
    p.glcm.levels = gl.at("levels").get<int>();
    p.glcm.distances.clear();
    for (const auto& d : gl.at("distances")) p.glcm.distances.push_back(d.get<int>());
    const auto& ldp = j.at("ldp");
    p.ldp_k = ldp.at("k").get<int>();
    std::vector<int> codes;
    for (const auto& c : ldp.at("codes")) codes.push_back(c.get<int>());
    if (codes.size() != kLdpCodes.size() ||
        !std::equal(codes.begin(), codes.end(), kLdpCodes.begin()))
        throw DataError("file's directional code table does not match this build");
    p.validate();
    return p;
}

FaceSignature parse_signature_body(const json& j, const PipelineParams& params) {
    FaceSignature sig;
    sig.params = params;
    sig.image_id = j.at("image_id").get<std::string>();
    sig.subject_id = j.at("subject_id").get<std::string>();
    sig.width = j.at("width").get<int>();
    sig.height = j.at("height").get<int>();
    for (const auto& jb : j.at("blocks")) {
        BlockFeature b;
        b.spec.x = jb.at("x").get<int>();
        b.spec.y = jb.at("y").get<int>();
        b.spec.u = jb.at("u").get<int>();
        b.spec.v = jb.at("v").get<int>();
        b.white_count = jb.at("white_count").get<std::int64_t>();
        b.interior_count = jb.at("interior_count").get<int>();
        const auto& feats = jb.at("features");
        if (feats.size() != static_cast<std::size_t>(kFeatureLength))
            throw DataError("block feature vector has " + std::to_string(feats.size()) +
                            " components, expected " + std::to_string(kFeatureLength));
        for (std::size_t i = 0; i < b.vec.size(); ++i) b.vec[i] = feats[i].get<double>();
        sig.blocks.push_back(std::move(b));
    }
    return sig;
}

json parse_document(const std::filesystem::path& path, const std::string& expect_format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("cannot parse '" + path.string() + "': " + e.what());
    }
    if (!j.is_object() || j.value("format", "") != expect_format)
        throw DataError("'" + path.string() + "' is not a " + expect_format + " document");
    const int version = j.value("version", -1);
    if (version != kFormatVersion)
        throw DataError("'" + path.string() + "' has format version " +
                        std::to_string(version) + ", this build reads version " +
                        std::to_string(kFormatVersion));
    return j;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value) || std::isinf(value)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void gallery_append(Gallery& gallery, FaceSignature signature) {
    if (!(signature.params == gallery.params))
        throw ConfigError("signature parameters do not match the gallery's parameter record");
    gallery.signatures.push_back(std::move(signature));
}

std::string to_json(const FaceSignature& sig) {
    std::string out;
    Writer w(out);
    w.begin_object();
    w.key("format");
    w.value("blockface-signature");
    w.key("version");
    w.value(kFormatVersion);
    w.key("params");
    write_params(w, sig.params);
    write_signature_body(w, sig);
    w.end_object();
    out += '\n';
    return out;
}

std::string to_json(const Gallery& gallery) {
    std::string out;
    Writer w(out);
    w.begin_object();
    w.key("format");
    w.value("blockface-gallery");
    w.key("version");
    w.value(kFormatVersion);
    w.key("params");
    write_params(w, gallery.params);
    w.key("signatures");
    w.begin_array();
    for (const auto& sig : gallery.signatures) {
        w.begin_object();
        write_signature_body(w, sig);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    out += '\n';
    return out;
}

namespace {

void write_match_config(Writer& w, const MatchConfig& m) {
    w.begin_object();
    w.key("th1");
    w.value(m.th1);
    w.key("mode");
    w.value(m.aggregation == Aggregation::GatedMin ? "gated-min" : "gated-max");
    w.key("threshold");
    w.value(m.ceiling);
    w.end_object();
}

}  // namespace

std::string to_json(const IdentifyDocument& doc) {
    std::string out;
    Writer w(out);
    w.begin_object();
    w.key("format");
    w.value("blockface-identify");
    w.key("version");
    w.value(kFormatVersion);
    w.key("params");
    write_params(w, doc.params);
    w.key("match");
    write_match_config(w, doc.match);
    w.key("probes");
    w.begin_array();
    for (const auto& r : doc.results) {
        w.begin_object();
        w.key("probe");
        w.value(r.probe_id);
        w.key("rejected");
        w.value(r.rejected);
        w.key("predicted");
        if (r.rejected)
            w.null();
        else
            w.value(r.predicted_subject);
        w.key("ranking");
        w.begin_array();
        for (const auto& m : r.ranking) {
            w.begin_object();
            w.key("image");
            w.value(m.image_id);
            w.key("subject");
            w.value(m.subject_id);
            w.key("dissimilarity");
            w.value(m.dissimilarity);
            w.key("matched_blocks");
            w.value(m.matched_blocks);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    out += '\n';
    return out;
}

std::string report_to_json(const ExperimentReport& report) {
    std::string out;
    Writer w(out);
    w.begin_object();
    w.key("format");
    w.value("blockface-report");
    w.key("version");
    w.value(kFormatVersion);
    w.key("dataset");
    w.value(report.dataset);
    w.key("params");
    write_params(w, report.params);
    w.key("match");
    write_match_config(w, report.match);
    w.key("split");
    w.begin_object();
    w.key("train_per_subject");
    w.value(report.split.train_per_subject);
    w.key("impostors_per_subject");
    w.value(report.split.impostors_per_subject);
    w.end_object();
    w.key("enrolled");
    w.value(report.enrolled);
    w.key("counts");
    w.begin_object();
    w.key("tp");
    w.value(report.counts.tp);
    w.key("fp");
    w.value(report.counts.fp);
    w.key("tn");
    w.value(report.counts.tn);
    w.key("fn");
    w.value(report.counts.fn);
    w.end_object();
    w.key("metrics");
    w.begin_object();
    w.key("sensitivity");
    w.value(report.metric_values.sensitivity);
    w.key("specificity");
    w.value(report.metric_values.specificity);
    w.key("accuracy");
    w.value(report.metric_values.accuracy);
    w.key("fpr");
    w.value(report.metric_values.fpr);
    w.key("fnr");
    w.value(report.metric_values.fnr);
    w.end_object();
    w.key("trials");
    w.begin_array();
    for (const auto& t : report.trials) {
        w.begin_object();
        w.key("probe");
        w.value(t.probe_image);
        w.key("claimed");
        w.value(t.claimed_subject);
        w.key("genuine");
        w.value(t.genuine);
        w.key("predicted");
        w.value(t.predicted_subject);
        w.key("best_dissimilarity");
        w.value(t.best_dissimilarity);
        w.key("outcome");
        w.value(t.outcome);
        w.end_object();
    }
    w.end_array();
    w.key("rankings");
    w.begin_array();
    for (const auto& r : report.rankings) {
        w.begin_object();
        w.key("probe");
        w.value(r.probe_image);
        w.key("subject");
        w.value(r.true_subject);
        w.key("ranking");
        w.begin_array();
        for (const auto& m : r.ranking) {
            w.begin_object();
            w.key("image");
            w.value(m.image_id);
            w.key("subject");
            w.value(m.subject_id);
            w.key("dissimilarity");
            w.value(m.dissimilarity);
            w.key("matched_blocks");
            w.value(m.matched_blocks);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.key("warnings");
    w.begin_array();
    for (const auto& msg : report.warnings) w.value(msg);
    w.end_array();
    w.end_object();
    out += '\n';
    return out;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "probe,true_subject,predicted,best_dissimilarity,correct\n";
    for (const auto& r : report.rankings) {
        const bool has_match = !r.ranking.empty() &&
                               std::isfinite(r.ranking.front().dissimilarity);
        const std::string predicted = has_match ? r.ranking.front().subject_id : "";
        out << r.probe_image << ',' << r.true_subject << ',' << predicted << ',';
        if (has_match)
            out << format_double(r.ranking.front().dissimilarity);
        else
            out << "inf";
        out << ',' << (has_match && predicted == r.true_subject ? "1" : "0") << '\n';
    }
    return out.str();
}

void save_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

FaceSignature load_signature(const std::filesystem::path& path) {
    const json j = parse_document(path, "blockface-signature");
    try {
        return parse_signature_body(j, parse_params(j.at("params")));
    } catch (const json::exception& e) {
        throw DataError("malformed signature '" + path.string() + "': " + e.what());
    }
}

Gallery load_gallery(const std::filesystem::path& path) {
    const json j = parse_document(path, "blockface-gallery");
    try {
        Gallery g;
        g.params = parse_params(j.at("params"));
        for (const auto& js : j.at("signatures"))
            g.signatures.push_back(parse_signature_body(js, g.params));
        return g;
    } catch (const json::exception& e) {
        throw DataError("malformed gallery '" + path.string() + "': " + e.what());
    }
}

void save_signature(const std::filesystem::path& path, const FaceSignature& sig) {
    save_text(path, to_json(sig));
}

void save_gallery(const std::filesystem::path& path, const Gallery& gallery) {
    save_text(path, to_json(gallery));
}

}  // namespace blockface
