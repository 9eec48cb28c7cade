#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace texkit {

// Grayscale image holding quantized intensity levels in [0, levels-1],
// stored row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<std::uint16_t> pixels;

    GrayImage() = default;

    GrayImage(int w, int h, int g, std::uint16_t fill = 0)
        : width(w), height(h), levels(g),
          pixels(static_cast<std::size_t>(check_dims(w, h, g)) , fill) {}

    std::uint16_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint16_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

private:
    static std::size_t check_dims(int w, int h, int g) {
        if (w < 1 || h < 1) {
            throw std::invalid_argument("GrayImage: width and height must be >= 1");
        }
        if (g < 2 || g > 65536) {
            throw std::invalid_argument("GrayImage: levels must be in [2, 65536]");
        }
        return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    }
};

// Throws if the image violates its structural invariants.
inline void require_valid(const GrayImage& img) {
    if (img.width < 1 || img.height < 1) {
        throw std::invalid_argument("GrayImage: width and height must be >= 1");
    }
    if (img.levels < 2 || img.levels > 65536) {
        throw std::invalid_argument("GrayImage: levels must be in [2, 65536]");
    }
    if (img.pixels.size() != img.pixel_count()) {
        throw std::invalid_argument("GrayImage: pixel buffer size mismatch");
    }
    for (const auto v : img.pixels) {
        if (static_cast<int>(v) >= img.levels) {
            throw std::invalid_argument("GrayImage: pixel value out of level range");
        }
    }
}

// Square sliding-window crop: side length and step between window origins.
struct CropSpec {
    int window = 128;
    int stride = 64;
};

inline void require_valid(const CropSpec& spec, const GrayImage& img) {
    if (spec.stride < 1 || spec.stride > spec.window) {
        throw std::invalid_argument("CropSpec: need 1 <= stride <= window");
    }
    if (spec.window > img.width || spec.window > img.height) {
        throw std::invalid_argument("CropSpec: window larger than image");
    }
}

// Number of window origins along an axis of the given extent.
inline int crop_count_1d(int extent, int window, int stride) {
    return (extent - window) / stride + 1;
}

// Windows at top-left offsets {0, stride, 2*stride, ...} in each axis such
// that each window fits entirely; emitted row-major over the offset grid.
inline std::vector<GrayImage> crop_windows(const GrayImage& img, const CropSpec& spec) {
    require_valid(spec, img);
    const int cols = crop_count_1d(img.width, spec.window, spec.stride);
    const int rows = crop_count_1d(img.height, spec.window, spec.stride);

    std::vector<GrayImage> out;
    out.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            GrayImage w(spec.window, spec.window, img.levels);
            const int y0 = r * spec.stride;
            const int x0 = c * spec.stride;
            for (int y = 0; y < spec.window; ++y) {
                for (int x = 0; x < spec.window; ++x) {
                    w.at(x, y) = img.at(x0 + x, y0 + y);
                }
            }
            out.push_back(std::move(w));
        }
    }
    return out;
}

// Uniform rebinning to a coarser level count: level' = floor(level * G' / G).
// Monotone in the input level; identity when new_levels == levels.
inline GrayImage requantize(const GrayImage& img, int new_levels) {
    if (new_levels < 2 || new_levels > img.levels) {
        throw std::invalid_argument("requantize: new level count must be in [2, levels]");
    }
    if (new_levels == img.levels) return img;

    GrayImage out(img.width, img.height, new_levels);
    const auto g_old = static_cast<std::uint64_t>(img.levels);
    const auto g_new = static_cast<std::uint64_t>(new_levels);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        auto lvl = static_cast<std::uint64_t>(img.pixels[i]) * g_new / g_old;
        if (lvl >= g_new) lvl = g_new - 1;
        out.pixels[i] = static_cast<std::uint16_t>(lvl);
    }
    return out;
}

}  // namespace texkit
