#include <blockface/blocks.hpp>
#include <blockface/features.hpp>
#include <blockface/glcm.hpp>
#include <blockface/ldp.hpp>
#include <blockface/matching.hpp>
#include <blockface/morph_runs.hpp>
#include <blockface/preprocess.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace blockface;

GrayImage random_image(int width, int height, std::uint64_t seed) {
    GrayImage img(width, height);
    std::mt19937_64 rng(seed);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

BinaryImage random_binary(int width, int height, std::uint64_t seed) {
    BinaryImage bin(width, height);
    std::mt19937_64 rng(seed);
    for (auto& p : bin.data) p = static_cast<std::uint8_t>(rng() & 1);
    return bin;
}

void BM_gradient_magnitude(benchmark::State& state) {
    const auto img = random_image(92, 112, 7);
    for (auto _ : state) benchmark::DoNotOptimize(gradient_magnitude(img));
}
BENCHMARK(BM_gradient_magnitude);

void BM_sample_significant_blocks(benchmark::State& state) {
    const auto bin = random_binary(92, 112, 11);
    BlockSelectConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sample_significant_blocks(bin, cfg));
}
BENCHMARK(BM_sample_significant_blocks);

void BM_ldp_histogram(benchmark::State& state) {
    const auto img = random_image(92, 112, 13);
    const BlockSpec spec{40, 50, 10, 11};
    for (auto _ : state) benchmark::DoNotOptimize(ldp_histogram(img, spec));
}
BENCHMARK(BM_ldp_histogram);

void BM_averaged_glcm(benchmark::State& state) {
    const auto img = random_image(92, 112, 17);
    const GlcmParams params;
    const BlockSpec spec{40, 50, 10, 11};
    const auto q = quantize(img, spec, params.levels);
    for (auto _ : state) {
        for (int d : params.distances) benchmark::DoNotOptimize(averaged_glcm(q, d));
    }
}
BENCHMARK(BM_averaged_glcm);

void BM_run_features(benchmark::State& state) {
    const auto bin = random_binary(92, 112, 19);
    const BlockSpec spec{40, 50, 10, 11};
    for (auto _ : state) benchmark::DoNotOptimize(run_features(bin, spec));
}
BENCHMARK(BM_run_features);

void BM_extract_signature(benchmark::State& state) {
    const auto img = random_image(92, 112, 23);
    PipelineParams params;
    params.blocks.iterations = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(extract_signature(img, params));
}
BENCHMARK(BM_extract_signature)->Arg(10000)->Arg(100000);

void BM_chi_square(benchmark::State& state) {
    std::mt19937_64 rng(29);
    std::array<double, kFeatureLength> a{}, b{};
    for (auto& x : a) x = static_cast<double>(rng() & 0xffff) / 65536.0;
    for (auto& x : b) x = static_cast<double>(rng() & 0xffff) / 65536.0;
    for (auto _ : state) benchmark::DoNotOptimize(chi_square(a, b));
}
BENCHMARK(BM_chi_square);

void BM_image_dissimilarity(benchmark::State& state) {
    PipelineParams params;
    params.blocks.iterations = 20000;
    const auto probe = extract_signature(random_image(92, 112, 31), params);
    const auto gallery = extract_signature(random_image(92, 112, 37), params);
    const MatchConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(image_dissimilarity(probe, gallery, cfg));
}
BENCHMARK(BM_image_dissimilarity);

}  // namespace

BENCHMARK_MAIN();
