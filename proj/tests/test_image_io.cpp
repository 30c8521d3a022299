#include <blockface/errors.hpp>
#include <blockface/image_io.hpp>

#include <doctest.h>

#include "support/tempdir.hpp"

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

using namespace blockface;
using testsupport::TempDir;

namespace {

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    REQUIRE(out.good());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    REQUIRE(out.good());
}

// 3x2 8-bit grayscale PNG, pixels row-major: 0 100 255 / 40 200 10.
const std::vector<std::uint8_t> kGrayPng = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x03, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00, 0x00, 0x00, 0x00, 0xb8,
    0x1f, 0x39, 0xc6, 0x00, 0x00, 0x00, 0x10, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60,
    0x48, 0xf9, 0xcf, 0xa0, 0x71, 0x82, 0x0b, 0x00, 0x09, 0x6d, 0x02, 0x5e, 0x28, 0xbc, 0x6c,
    0x31, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x1 RGB PNG, pixels: (100,150,200), (255,0,0).
const std::vector<std::uint8_t> kRgbPng = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00, 0x00, 0x7b,
    0x40, 0xe8, 0xdd, 0x00, 0x00, 0x00, 0x0f, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x48,
    0x99, 0x76, 0xe2, 0x3f, 0x03, 0x03, 0x00, 0x0b, 0x6a, 0x02, 0xc2, 0xce, 0x18, 0xa4, 0xd6,
    0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x1 16-bit grayscale PNG, unsupported on purpose.
const std::vector<std::uint8_t> kGray16Png = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x81,
    0xd9, 0xfc, 0x15, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60,
    0x7e, 0x31, 0xc7, 0x01, 0x00, 0x04, 0x41, 0x01, 0xc8, 0x12, 0x7a, 0xe8, 0xa0, 0x00, 0x00,
    0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

}  // namespace

TEST_CASE("rgb_to_luma uses the BT.601 weights") {
    CHECK(rgb_to_luma(100, 150, 200) == 141);
    CHECK(rgb_to_luma(0, 0, 0) == 0);
    CHECK(rgb_to_luma(255, 255, 255) == 255);
    CHECK(rgb_to_luma(255, 0, 0) == 76);
}

TEST_CASE("save_pgm/load_gray round-trips binary P5 data") {
    TempDir tmp;
    GrayImage img(23, 17);
    std::mt19937_64 rng(7);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() & 0xff);

    const auto path = tmp.file("round.pgm");
    save_pgm(img, path);
    const GrayImage back = load_gray(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.data == img.data);
}

TEST_CASE("load_gray parses ASCII P2 with comment lines") {
    TempDir tmp;
    const auto path = tmp.file("ascii.pgm");
    write_text(path,
               "P2\n"
               "# a comment\n"
               "3 2\n"
               "# another comment\n255\n"
               "0 128 255\n7 9 11\n");
    const GrayImage img = load_gray(path);
    REQUIRE(img.width == 3);
    REQUIRE(img.height == 2);
    CHECK(img.data == std::vector<std::uint8_t>{0, 128, 255, 7, 9, 11});
}

TEST_CASE("binary images are saved as 0/255 PGM") {
    TempDir tmp;
    BinaryImage bin(2, 2);
    bin.at(0, 0) = 1;
    bin.at(1, 1) = 1;
    const auto path = tmp.file("bin.pgm");
    save_pgm(bin, path);
    const GrayImage back = load_gray(path);
    CHECK(back.data == std::vector<std::uint8_t>{255, 0, 0, 255});
}

TEST_CASE("load_gray reports the offending path for a missing file") {
    TempDir tmp;
    const auto path = tmp.file("nope.pgm");
    try {
        load_gray(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("nope.pgm") != std::string::npos);
    }
}

TEST_CASE("load_gray rejects 16-bit PGM data") {
    TempDir tmp;
    const auto path = tmp.file("deep.pgm");
    write_text(path, "P2\n2 1\n65535\n0 40000\n");
    CHECK_THROWS_AS(load_gray(path), DataError);
}

TEST_CASE("load_gray rejects truncated binary PGM data") {
    TempDir tmp;
    const auto path = tmp.file("short.pgm");
    write_text(path, "P5\n4 4\n255\nab");
    CHECK_THROWS_AS(load_gray(path), DataError);
}

TEST_CASE("load_gray rejects unknown formats") {
    TempDir tmp;
    const auto path = tmp.file("mystery.img");
    write_text(path, "BM totally a bitmap");
    CHECK_THROWS_AS(load_gray(path), DataError);
}

TEST_CASE("load_gray reads an 8-bit grayscale PNG") {
    TempDir tmp;
    const auto path = tmp.file("gray.png");
    write_bytes(path, kGrayPng);
    const GrayImage img = load_gray(path);
    REQUIRE(img.width == 3);
    REQUIRE(img.height == 2);
    CHECK(img.data == std::vector<std::uint8_t>{0, 100, 255, 40, 200, 10});
}

TEST_CASE("load_gray converts RGB PNG through luma") {
    TempDir tmp;
    const auto path = tmp.file("rgb.png");
    write_bytes(path, kRgbPng);
    const GrayImage img = load_gray(path);
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 1);
    CHECK(img.at(0, 0) == 141);
    CHECK(img.at(1, 0) == 76);
}

TEST_CASE("load_gray rejects 16-bit PNGs") {
    TempDir tmp;
    const auto path = tmp.file("deep.png");
    write_bytes(path, kGray16Png);
    CHECK_THROWS_AS(load_gray(path), DataError);
}

TEST_CASE("load_gray rejects corrupt PNG bodies") {
    TempDir tmp;
    auto bytes = kGrayPng;
    bytes.resize(bytes.size() / 2);  // chop mid-IDAT
    const auto path = tmp.file("cut.png");
    write_bytes(path, bytes);
    CHECK_THROWS_AS(load_gray(path), DataError);
}
