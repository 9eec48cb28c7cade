#pragma once

#include <png.h>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "texkit/image.hpp"

namespace texkit {

// Quantize a sample in [0, max_value] to one of `levels` uniform bins:
// level = floor(v * levels / (max_value + 1)), clamped to levels - 1.
inline std::uint16_t quantize_sample(std::uint32_t value, std::uint32_t max_value, int levels) {
    const std::uint64_t range = static_cast<std::uint64_t>(max_value) + 1;
    std::uint64_t lvl = static_cast<std::uint64_t>(value) * static_cast<std::uint64_t>(levels) / range;
    if (lvl >= static_cast<std::uint64_t>(levels)) lvl = static_cast<std::uint64_t>(levels) - 1;
    return static_cast<std::uint16_t>(lvl);
}

// Integer-rounded Rec. 601 luminance of an 8-bit RGB triple.
inline std::uint32_t luminance601(std::uint32_t r, std::uint32_t g, std::uint32_t b) {
    return (299 * r + 587 * g + 114 * b + 500) / 1000;
}

namespace detail {

inline int pgm_next_token(std::istream& in, std::string& token) {
    token.clear();
    int c = in.get();
    // Skip whitespace and '#' comments between header fields.
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    return token.empty() ? EOF : 0;
}

inline long pgm_int_field(std::istream& in, const std::string& what) {
    std::string tok;
    if (pgm_next_token(in, tok) == EOF) {
        throw std::runtime_error("PGM: truncated header while reading " + what);
    }
    try {
        std::size_t pos = 0;
        const long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("PGM: malformed " + what + " value '" + tok + "'");
    }
}

inline GrayImage load_pgm(std::istream& in, int levels, const std::string& name) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') {
        throw std::runtime_error(name + ": not a binary PGM (P5) stream");
    }
    const long w = pgm_int_field(in, "width");
    const long h = pgm_int_field(in, "height");
    const long maxval = pgm_int_field(in, "maxval");
    if (w < 1 || h < 1) throw std::runtime_error(name + ": PGM has empty raster");
    if (maxval < 1 || maxval > 65535) {
        throw std::runtime_error(name + ": PGM maxval out of range");
    }

    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(count * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw std::runtime_error(name + ": PGM raster truncated");
    }

    GrayImage img(static_cast<int>(w), static_cast<int>(h), levels);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t v;
        if (bytes_per_sample == 2) {
            v = (static_cast<std::uint32_t>(raw[2 * i]) << 8) | raw[2 * i + 1];
        } else {
            v = raw[i];
        }
        if (v > static_cast<std::uint32_t>(maxval)) {
            throw std::runtime_error(name + ": PGM sample exceeds maxval");
        }
        img.pixels[i] = quantize_sample(v, static_cast<std::uint32_t>(maxval), levels);
    }
    return img;
}

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

inline GrayImage load_png(std::FILE* fp, int levels, const std::string& name) {
    PngReadCtx ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw std::runtime_error(name + ": libpng init failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw std::runtime_error(name + ": libpng init failed");

    if (setjmp(png_jmpbuf(ctx.png))) {
        throw std::runtime_error(name + ": PNG decode failed");
    }

    png_init_io(ctx.png, fp);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);

    // Normalize everything to 8-bit gray or RGB without alpha.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    }
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3) {
        throw std::runtime_error(name + ": unsupported PNG channel layout");
    }
    if (w < 1 || h < 1) throw std::runtime_error(name + ": PNG has empty raster");

    const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
    std::vector<unsigned char> raster(row_bytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raster.data() + y * row_bytes;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    GrayImage img(static_cast<int>(w), static_cast<int>(h), levels);
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = rows[y];
        for (png_uint_32 x = 0; x < w; ++x) {
            std::uint32_t v;
            if (channels == 1) {
                v = row[x];
            } else {
                v = luminance601(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
            }
            img.pixels[static_cast<std::size_t>(y) * w + x] = quantize_sample(v, 255, levels);
        }
    }
    return img;
}

}  // namespace detail

// Loads a PNG or binary PGM (P5) file, reduces color inputs to luminance,
// and uniformly quantizes the source range to `levels` bins. The format is
// detected from the file's magic bytes, not its extension.
inline GrayImage load_gray(const std::filesystem::path& path, int levels) {
    if (levels < 2 || levels > 65536) {
        throw std::invalid_argument("load_gray: levels must be in [2, 65536]");
    }
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        throw std::runtime_error("load_gray: cannot open '" + path.string() + "'");
    }
    unsigned char magic[8] = {};
    probe.read(reinterpret_cast<char*>(magic), sizeof(magic));
    const auto got = probe.gcount();
    probe.close();

    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (got >= 8 && std::equal(png_sig, png_sig + 8, magic)) {
        std::FILE* fp = std::fopen(path.string().c_str(), "rb");
        if (!fp) throw std::runtime_error("load_gray: cannot open '" + path.string() + "'");
        std::unique_ptr<std::FILE, int (*)(std::FILE*)> guard(fp, &std::fclose);
        return detail::load_png(fp, levels, path.filename().string());
    }
    if (got >= 2 && magic[0] == 'P' && magic[1] == '5') {
        std::ifstream in(path, std::ios::binary);
        return detail::load_pgm(in, levels, path.filename().string());
    }
    throw std::runtime_error("load_gray: unsupported format in '" + path.string() +
                             "' (expected PNG or binary PGM)");
}

// Writes the image's level indices as a binary PGM with maxval = levels - 1,
// so a round trip through load_gray(path, levels) reproduces it bit-exactly.
inline void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    require_valid(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("save_pgm: cannot write '" + path.string() + "'");
    }
    const int maxval = img.levels - 1;
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    if (maxval > 255) {
        std::vector<unsigned char> raw(img.pixels.size() * 2);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            raw[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
            raw[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
        }
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    } else {
        std::vector<unsigned char> raw(img.pixels.size());
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            raw[i] = static_cast<unsigned char>(img.pixels[i]);
        }
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    }
    if (!out) {
        throw std::runtime_error("save_pgm: write failed for '" + path.string() + "'");
    }
}

}  // namespace texkit
