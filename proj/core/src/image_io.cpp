#include <blockface/image_io.hpp>

#include <blockface/errors.hpp>

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace blockface {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& cause) {
    throw DataError("cannot load '" + path.string() + "': " + cause);
}

// Skips PGM whitespace and '#' comment lines, then reads one unsigned token.
int read_pnm_int(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) return -1;
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 20) return -1;  // absurd header value
        c = in.get();
    }
    if (c != EOF) in.unget();
    return value;
}

GrayImage load_pgm(const std::filesystem::path& path, std::ifstream& in) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    const bool ascii = magic[1] == '2';
    const int width = read_pnm_int(in);
    const int height = read_pnm_int(in);
    const int maxval = read_pnm_int(in);
    if (width <= 0 || height <= 0 || maxval <= 0) fail(path, "malformed PGM header");
    if (maxval > 255) fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) + ")");

    GrayImage img(width, height);
    if (ascii) {
        for (auto& px : img.data) {
            const int v = read_pnm_int(in);
            if (v < 0 || v > maxval) fail(path, "malformed PGM pixel data");
            px = static_cast<std::uint8_t>(v);
        }
    } else {
        const int sep = in.get();  // single whitespace after maxval
        if (sep == EOF || !std::isspace(sep)) fail(path, "malformed PGM header");
        in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
        if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
            fail(path, "truncated PGM pixel data");
    }
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::filesystem::path& path) {
    PngReader r;
    r.fp = std::fopen(path.string().c_str(), "rb");
    if (!r.fp) fail(path, "unreadable file");

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) fail(path, "libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(r.png))) fail(path, "malformed PNG data");

    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    const int bit_depth = png_get_bit_depth(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);
    if (bit_depth == 16) fail(path, "unsupported bit depth (16)");
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(r.png);
        png_set_strip_alpha(r.png);
    }
    png_read_update_info(r.png, r.info);

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));
    const int channels = png_get_channels(r.png, r.info);
    if (width <= 0 || height <= 0) fail(path, "malformed PNG header");
    if (channels != 1 && channels != 3)
        fail(path, "unsupported channel count (" + std::to_string(channels) + ")");

    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * channels);
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        if (channels == 1) {
            std::memcpy(&img.data[static_cast<std::size_t>(y) * width], row.data(), width);
        } else {
            for (int x = 0; x < width; ++x)
                img.at(x, y) = rgb_to_luma(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
        }
    }
    png_read_end(r.png, nullptr);
    return img;
}

}  // namespace

std::uint8_t rgb_to_luma(int r, int g, int b) {
    return static_cast<std::uint8_t>(std::llround(0.299 * r + 0.587 * g + 0.114 * b));
}

GrayImage load_gray(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "unreadable file");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in) fail(path, "file too short");
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        in.seekg(0);
        return load_pgm(path, in);
    }
    if (magic[0] == static_cast<char>(0x89) && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    fail(path, "unsupported format (expected PGM P2/P5 or PNG)");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.empty()) throw std::invalid_argument("save_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void save_pgm(const BinaryImage& img, const std::filesystem::path& path) {
    GrayImage gray(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) gray.data[i] = img.data[i] ? 255 : 0;
    save_pgm(gray, path);
}

}  // namespace blockface
