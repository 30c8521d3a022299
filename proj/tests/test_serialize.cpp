#include <blockface/errors.hpp>
#include <blockface/serialize.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>

#include <doctest.h>

#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace blockface;
using testsupport::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
}

// A signature with deliberately awkward doubles and strings, to stress the
// writer and parser rather than the pipeline.
FaceSignature crafted_signature() {
    FaceSignature sig;
    sig.image_id = "s01/we\"ird\n\tname.pgm";
    sig.subject_id = "s\\01";
    sig.width = 92;
    sig.height = 112;
    sig.params = PipelineParams{};
    sig.params.blocks.rng_seed = 0xdeadbeefcafe1234ull;

    BlockFeature a;
    a.spec = BlockSpec{3, 4, 10, 11};
    a.white_count = 57;
    a.interior_count = 72;
    const double tricky[] = {0.0,
                             1.0 / 3.0,
                             0.1,
                             1e-300,
                             5e-324,
                             std::nextafter(1.0, 2.0),
                             255.0,
                             12345678901234567.0,
                             2.2250738585072014e-308,
                             1.0 - 1e-16};
    for (std::size_t i = 0; i < a.vec.size(); ++i) a.vec[i] = tricky[i % 10] + 1e-9 * double(i);
    BlockFeature b;
    b.spec = BlockSpec{40, 60, 10, 11};
    b.white_count = 103;
    b.interior_count = 72;
    for (std::size_t i = 0; i < b.vec.size(); ++i) b.vec[i] = double(i) / 71.0;
    sig.blocks = {a, b};
    return sig;
}

void check_signatures_equal(const FaceSignature& x, const FaceSignature& y) {
    CHECK(x.image_id == y.image_id);
    CHECK(x.subject_id == y.subject_id);
    CHECK(x.width == y.width);
    CHECK(x.height == y.height);
    CHECK(x.params == y.params);
    REQUIRE(x.blocks.size() == y.blocks.size());
    for (std::size_t i = 0; i < x.blocks.size(); ++i) {
        CHECK(x.blocks[i].spec.x == y.blocks[i].spec.x);
        CHECK(x.blocks[i].spec.y == y.blocks[i].spec.y);
        CHECK(x.blocks[i].spec.u == y.blocks[i].spec.u);
        CHECK(x.blocks[i].spec.v == y.blocks[i].spec.v);
        CHECK(x.blocks[i].white_count == y.blocks[i].white_count);
        CHECK(x.blocks[i].interior_count == y.blocks[i].interior_count);
        for (std::size_t k = 0; k < x.blocks[i].vec.size(); ++k)
            CHECK(x.blocks[i].vec[k] == y.blocks[i].vec[k]);
    }
}

}  // namespace

TEST_CASE("format_double basics") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(-3.25) == "-3.25");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "null");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "null");
}

TEST_CASE("format_double round-trips every finite value bit-exactly") {
    const double samples[] = {1.0 / 3.0,
                              0.1,
                              1e-300,
                              5e-324,
                              1e308,
                              std::nextafter(1.0, 2.0),
                              -7.25e-12,
                              12345678901234567.0,
                              2.2250738585072014e-308};
    for (double v : samples) {
        const std::string s = format_double(v);
        char* end = nullptr;
        const double back = std::strtod(s.c_str(), &end);
        CHECK(end == s.c_str() + s.size());
        CHECK(back == v);
    }
    // And a pile of pseudo-random magnitudes.
    std::uint64_t state = 12345;
    for (int i = 0; i < 500; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double mantissa = double(state >> 11) / double(1ull << 53);
        const int expo = int(state % 600) - 300;
        const double v = std::ldexp(mantissa, expo);
        const std::string s = format_double(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_CASE("signature survives save/load and re-save is byte-identical") {
    const FaceSignature sig = crafted_signature();
    TempDir dir;
    const auto path = dir.file("sig.json");
    save_signature(path, sig);

    const std::string bytes = slurp(path);
    CHECK(bytes == to_json(sig));
    CHECK(bytes.back() == '\n');

    const FaceSignature back = load_signature(path);
    check_signatures_equal(sig, back);
    CHECK(to_json(back) == bytes);
}

TEST_CASE("pipeline-produced signature round-trips exactly") {
    PipelineParams params;
    params.blocks.iterations = 3000;
    params.blocks.rng_seed = 77;
    const GrayImage img = synthetic::face(2, 1);
    const FaceSignature sig = extract_signature(img, params, "img-a", "subj-a");
    REQUIRE(!sig.blocks.empty());

    TempDir dir;
    const auto path = dir.file("real.sig.json");
    save_signature(path, sig);
    const FaceSignature back = load_signature(path);
    check_signatures_equal(sig, back);
    CHECK(to_json(back) == to_json(sig));
}

TEST_CASE("signature document is valid JSON with declared format and params") {
    const FaceSignature sig = crafted_signature();
    const auto j = nlohmann::json::parse(to_json(sig));
    CHECK(j.at("format") == "blockface-signature");
    CHECK(j.at("version") == kFormatVersion);
    CHECK(j.at("image_id") == sig.image_id);
    CHECK(j.at("subject_id") == sig.subject_id);
    CHECK(j.at("params").at("blocks").at("rng").at("algorithm") == "mt19937_64");
    CHECK(j.at("params").at("blocks").at("rng").at("seed") == sig.params.blocks.rng_seed);
    CHECK(j.at("params").at("ldp").at("codes").size() == 56);
    CHECK(j.at("blocks").size() == 2);
    CHECK(j.at("blocks").at(0).at("features").size() == 72);
}

TEST_CASE("gallery round-trip preserves every signature and the params") {
    Gallery g;
    g.params = PipelineParams{};
    g.params.blocks.rng_seed = 5;
    FaceSignature s1 = crafted_signature();
    s1.params = g.params;
    FaceSignature s2 = s1;
    s2.image_id = "other.pgm";
    s2.blocks.pop_back();
    gallery_append(g, s1);
    gallery_append(g, s2);
    REQUIRE(g.signatures.size() == 2);

    TempDir dir;
    const auto path = dir.file("gal.json");
    save_gallery(path, g);
    CHECK(slurp(path) == to_json(g));

    const Gallery back = load_gallery(path);
    CHECK(back.params == g.params);
    REQUIRE(back.signatures.size() == 2);
    check_signatures_equal(g.signatures[0], back.signatures[0]);
    check_signatures_equal(g.signatures[1], back.signatures[1]);
    CHECK(to_json(back) == to_json(g));
}

TEST_CASE("gallery_append rejects a parameter mismatch") {
    Gallery g;
    g.params = PipelineParams{};
    FaceSignature sig = crafted_signature();
    sig.params = g.params;
    sig.params.glcm.levels = 8;
    CHECK_THROWS_AS(gallery_append(g, sig), ConfigError);
    sig.params = g.params;
    sig.params.blocks.rng_seed += 1;
    CHECK_THROWS_AS(gallery_append(g, sig), ConfigError);
    sig.params = g.params;
    CHECK_NOTHROW(gallery_append(g, sig));
    CHECK(g.signatures.size() == 1);
}

TEST_CASE("malformed documents are rejected with DataError") {
    const FaceSignature sig = crafted_signature();
    const std::string good = to_json(sig);
    TempDir dir;
    const auto path = dir.file("doc.json");

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_signature(dir.file("nope.json")), DataError);
    }
    SUBCASE("not JSON at all") {
        save_text(path, "this is { not json");
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("wrong format name") {
        save_text(path, replace_once(good, "blockface-signature", "blockface-gallery"));
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("signature file offered as a gallery") {
        save_text(path, good);
        CHECK_THROWS_AS(load_gallery(path), DataError);
    }
    SUBCASE("future format version") {
        save_text(path, replace_once(good, "\"version\": 1", "\"version\": 2"));
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("different RNG algorithm") {
        save_text(path, replace_once(good, "mt19937_64", "pcg64"));
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("different directional code table") {
        save_text(path, replace_once(good, "\"codes\": [7, 11", "\"codes\": [7, 10"));
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("truncated feature vector") {
        auto j = nlohmann::json::parse(good);
        j.at("blocks").at(0).at("features").erase(0);
        save_text(path, j.dump());
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("feature entry of the wrong type") {
        auto j = nlohmann::json::parse(good);
        j.at("blocks").at(0).at("features").at(3) = "oops";
        save_text(path, j.dump());
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
    SUBCASE("missing required key") {
        auto j = nlohmann::json::parse(good);
        j.erase("image_id");
        save_text(path, j.dump());
        CHECK_THROWS_AS(load_signature(path), DataError);
    }
}

TEST_CASE("save_text refuses an unwritable path") {
    CHECK_THROWS_AS(save_text("/nonexistent-dir-xyz/out.json", "x"), DataError);
}

TEST_CASE("identify document serializes rejections and infinities as null") {
    IdentifyDocument doc;
    doc.params = PipelineParams{};
    doc.match.th1 = 11.0;
    doc.match.aggregation = Aggregation::GatedMin;

    MatchResult hit;
    hit.probe_id = "probe-1";
    hit.predicted_subject = "s01";
    hit.rejected = false;
    hit.ranking.push_back(RankedMatch{"img-a", "s01", 0.25, 9});
    hit.ranking.push_back(RankedMatch{"img-b", "s02", 1.75, 4});

    MatchResult miss;
    miss.probe_id = "probe-2";
    miss.rejected = true;
    miss.ranking.push_back(
        RankedMatch{"img-a", "s01", std::numeric_limits<double>::infinity(), 0});

    doc.results = {hit, miss};
    const std::string text = to_json(doc);
    CHECK(text == to_json(doc));  // writing is a pure function of the value

    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("format") == "blockface-identify");
    CHECK(j.at("version") == kFormatVersion);
    CHECK(j.at("match").at("th1") == 11.0);
    CHECK(j.at("match").at("mode") == "gated-min");
    CHECK(j.at("match").at("threshold").is_null());
    REQUIRE(j.at("probes").size() == 2);

    const auto& p0 = j.at("probes").at(0);
    CHECK(p0.at("probe") == "probe-1");
    CHECK(p0.at("rejected") == false);
    CHECK(p0.at("predicted") == "s01");
    CHECK(p0.at("ranking").at(0).at("dissimilarity") == 0.25);
    CHECK(p0.at("ranking").at(1).at("matched_blocks") == 4);

    const auto& p1 = j.at("probes").at(1);
    CHECK(p1.at("rejected") == true);
    CHECK(p1.at("predicted").is_null());
    CHECK(p1.at("ranking").at(0).at("dissimilarity").is_null());
}

TEST_CASE("identify document records the literal-max mode and the ceiling") {
    IdentifyDocument doc;
    doc.params = PipelineParams{};
    doc.match.aggregation = Aggregation::GatedMax;
    doc.match.ceiling = 3.5;
    const auto j = nlohmann::json::parse(to_json(doc));
    CHECK(j.at("match").at("mode") == "gated-max");
    CHECK(j.at("match").at("th1").is_null());
    CHECK(j.at("match").at("threshold") == 3.5);
    CHECK(j.at("probes").empty());
}

namespace {

ExperimentReport crafted_report() {
    ExperimentReport r;
    r.dataset = "/data/demo";
    r.params = PipelineParams{};
    r.match.th1 = 11.0;
    r.split.train_per_subject = 2;
    r.split.impostors_per_subject = 5;
    r.enrolled = 4;
    r.counts = ConfusionCounts{3, 1, 9, 0};
    r.metric_values = metrics(r.counts);

    r.trials.push_back(TrialRecord{"s01/C.pgm", "s01", true, "s01", 0.125, "TP"});
    r.trials.push_back(TrialRecord{"s01/C.pgm", "s02", false, "s01", 0.125, "TN"});
    r.trials.push_back(TrialRecord{"s02/C.pgm", "s02", true, "", 0.0, "FN"});

    ProbeRanking pr1;
    pr1.probe_image = "s01/C.pgm";
    pr1.true_subject = "s01";
    pr1.ranking = {RankedMatch{"s01/A.pgm", "s01", 0.125, 8},
                   RankedMatch{"s02/A.pgm", "s02", 2.5, 6}};
    ProbeRanking pr2;
    pr2.probe_image = "s02/C.pgm";
    pr2.true_subject = "s02";
    pr2.ranking = {RankedMatch{"s01/A.pgm", "s01",
                               std::numeric_limits<double>::infinity(), 0}};
    ProbeRanking pr3;
    pr3.probe_image = "s03/C.pgm";
    pr3.true_subject = "s03";  // no ranking entries at all
    r.rankings = {pr1, pr2, pr3};
    r.warnings = {"subject s09 has 1 image(s), needs at least 3; skipped"};
    return r;
}

}  // namespace

TEST_CASE("report JSON carries counts, metrics, trials, rankings and warnings") {
    const ExperimentReport r = crafted_report();
    const std::string text = report_to_json(r);
    CHECK(text == report_to_json(r));
    CHECK(text.back() == '\n');

    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("format") == "blockface-report");
    CHECK(j.at("version") == kFormatVersion);
    CHECK(j.at("dataset") == "/data/demo");
    CHECK(j.at("split").at("train_per_subject") == 2);
    CHECK(j.at("split").at("impostors_per_subject") == 5);
    CHECK(j.at("enrolled") == 4);
    CHECK(j.at("counts").at("tp") == 3);
    CHECK(j.at("counts").at("fp") == 1);
    CHECK(j.at("counts").at("tn") == 9);
    CHECK(j.at("counts").at("fn") == 0);
    CHECK(j.at("metrics").at("sensitivity") == 1.0);
    CHECK(j.at("metrics").at("specificity") == 0.9);
    CHECK(j.at("metrics").at("accuracy").get<double>() == doctest::Approx(12.0 / 13.0));

    REQUIRE(j.at("trials").size() == 3);
    CHECK(j.at("trials").at(0).at("probe") == "s01/C.pgm");
    CHECK(j.at("trials").at(0).at("genuine") == true);
    CHECK(j.at("trials").at(0).at("outcome") == "TP");
    CHECK(j.at("trials").at(2).at("predicted") == "");

    REQUIRE(j.at("rankings").size() == 3);
    CHECK(j.at("rankings").at(0).at("ranking").size() == 2);
    CHECK(j.at("rankings").at(1).at("ranking").at(0).at("dissimilarity").is_null());
    CHECK(j.at("rankings").at(2).at("ranking").empty());

    REQUIRE(j.at("warnings").size() == 1);
    CHECK(j.at("warnings").at(0).get<std::string>().find("s09") != std::string::npos);
}

TEST_CASE("report JSON writes undefined metrics as null") {
    ExperimentReport r = crafted_report();
    r.counts = ConfusionCounts{0, 0, 0, 0};
    r.metric_values = metrics(r.counts);
    const auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j.at("metrics").at("sensitivity").is_null());
    CHECK(j.at("metrics").at("specificity").is_null());
    CHECK(j.at("metrics").at("accuracy").is_null());
    CHECK(j.at("metrics").at("fpr").is_null());
    CHECK(j.at("metrics").at("fnr").is_null());
}

TEST_CASE("report CSV lists one row per probe ranking") {
    const ExperimentReport r = crafted_report();
    const std::string csv = report_to_csv(r);
    CHECK(csv ==
          "probe,true_subject,predicted,best_dissimilarity,correct\n"
          "s01/C.pgm,s01,s01,0.125,1\n"
          "s02/C.pgm,s02,,inf,0\n"
          "s03/C.pgm,s03,,inf,0\n");
}

TEST_CASE("report CSV marks a wrong-subject best match as incorrect") {
    ExperimentReport r = crafted_report();
    r.rankings[0].ranking[0].subject_id = "s02";
    r.rankings[0].ranking[0].image_id = "s02/A.pgm";
    const std::string csv = report_to_csv(r);
    CHECK(csv.find("s01/C.pgm,s01,s02,0.125,0\n") != std::string::npos);
}
