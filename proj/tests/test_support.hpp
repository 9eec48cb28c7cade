#pragma once

// Test-only reference implementations and data generators. The oracles are
// written as independent nested loops so they share no code path with the
// library functions they check.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <texkit/features.hpp>
#include <texkit/image.hpp>
#include <texkit/rng.hpp>

namespace testsupport {

// ---------------------------------------------------------------------------
// Random and synthetic images
// ---------------------------------------------------------------------------

inline texkit::GrayImage random_image(texkit::SeededRng& rng, int w, int h, int levels) {
    texkit::GrayImage img(w, h, levels);
    for (auto& px : img.pixels) {
        px = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(levels)));
    }
    return img;
}

inline texkit::GrayImage transpose(const texkit::GrayImage& img) {
    texkit::GrayImage out(img.height, img.width, img.levels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(y, x) = img.at(x, y);
        }
    }
    return out;
}

inline std::uint16_t clamp255(double v) {
    if (v < 0.0) return 0;
    if (v > 255.0) return 255;
    return static_cast<std::uint16_t>(std::lround(v));
}

// Sinusoidal grating plus small uniform noise, 256 levels.
inline texkit::GrayImage grating(int w, int h, double period, double angle, int noise_amp,
                                 texkit::SeededRng& rng) {
    texkit::GrayImage img(w, h, 256);
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double phase = 2.0 * 3.14159265358979323846 * (x * ca + y * sa) / period;
            double v = 128.0 + 100.0 * std::sin(phase);
            if (noise_amp > 0) {
                v += static_cast<double>(rng.below(2 * noise_amp + 1)) - noise_amp;
            }
            img.at(x, y) = clamp255(v);
        }
    }
    return img;
}

inline texkit::GrayImage checkerboard(int w, int h, int cell, int lo, int hi, int noise_amp,
                                      texkit::SeededRng& rng) {
    texkit::GrayImage img(w, h, 256);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = ((x / cell + y / cell) % 2 == 0) ? lo : hi;
            if (noise_amp > 0) {
                v += static_cast<double>(rng.below(2 * noise_amp + 1)) - noise_amp;
            }
            img.at(x, y) = clamp255(v);
        }
    }
    return img;
}

inline texkit::GrayImage uniform_noise(int w, int h, texkit::SeededRng& rng) {
    return random_image(rng, w, h, 256);
}

// ---------------------------------------------------------------------------
// Gray-tone difference oracle
// ---------------------------------------------------------------------------

struct GtdmRef {
    std::vector<double> s;
    std::vector<double> p;
    std::vector<std::int64_t> count;
    std::int64_t n = 0;
};

// Reference table: precomputes the neighbourhood-mean image, then
// accumulates rows in raster order (same accumulation order as the library,
// so s must match bit for bit).
inline GtdmRef gtdm_reference(const texkit::GrayImage& img, int k) {
    GtdmRef ref;
    ref.s.assign(static_cast<std::size_t>(img.levels), 0.0);
    ref.p.assign(static_cast<std::size_t>(img.levels), 0.0);
    ref.count.assign(static_cast<std::size_t>(img.levels), 0);
    ref.n = static_cast<std::int64_t>(img.height - 2 * k) * (img.width - 2 * k);

    const int side = 2 * k + 1;
    const double divisor = static_cast<double>(side * side - 1);
    std::vector<double> mean(img.pixel_count(), 0.0);
    for (int y = k; y < img.height - k; ++y) {
        for (int x = k; x < img.width - k; ++x) {
            std::int64_t acc = 0;
            for (int yy = y - k; yy <= y + k; ++yy) {
                for (int xx = x - k; xx <= x + k; ++xx) {
                    if (xx == x && yy == y) continue;
                    acc += img.at(xx, yy);
                }
            }
            mean[static_cast<std::size_t>(y) * img.width + x] =
                static_cast<double>(acc) / divisor;
        }
    }
    for (int y = k; y < img.height - k; ++y) {
        for (int x = k; x < img.width - k; ++x) {
            const int lvl = img.at(x, y);
            ref.s[static_cast<std::size_t>(lvl)] +=
                std::abs(lvl - mean[static_cast<std::size_t>(y) * img.width + x]);
            ++ref.count[static_cast<std::size_t>(lvl)];
        }
    }
    for (std::size_t i = 0; i < ref.p.size(); ++i) {
        ref.p[i] = static_cast<double>(ref.count[i]) / static_cast<double>(ref.n);
    }
    return ref;
}

inline double coarseness_reference(const GtdmRef& ref, double eps) {
    double dot = 0.0;
    for (std::size_t i = 0; i < ref.s.size(); ++i) dot += ref.p[i] * ref.s[i];
    return 1.0 / (eps + dot);
}

inline double complexity_reference(const GtdmRef& ref) {
    const double n = static_cast<double>(ref.n);
    double acc = 0.0;
    const std::size_t g = ref.p.size();
    for (std::size_t j = 0; j < g; ++j) {        // transposed loop order on purpose
        for (std::size_t i = 0; i < g; ++i) {
            if (ref.p[i] == 0.0 || ref.p[j] == 0.0) continue;
            const double num = std::abs(static_cast<double>(i) - static_cast<double>(j)) *
                               (ref.p[i] * ref.s[i] + ref.p[j] * ref.s[j]);
            acc += num / (n * (ref.p[i] + ref.p[j]));
        }
    }
    return acc;
}

inline double strength_reference(const GtdmRef& ref, double eps) {
    double num = 0.0;
    const std::size_t g = ref.p.size();
    for (std::size_t j = 0; j < g; ++j) {
        for (std::size_t i = 0; i < g; ++i) {
            if (ref.p[i] == 0.0 || ref.p[j] == 0.0) continue;
            const double d = static_cast<double>(i) - static_cast<double>(j);
            num += (ref.p[i] + ref.p[j]) * d * d;
        }
    }
    double s_total = 0.0;
    for (const double v : ref.s) s_total += v;
    return num / (eps + s_total);
}

// ---------------------------------------------------------------------------
// LBP oracle (8 neighbors, radius 1)
// ---------------------------------------------------------------------------

// Independent per-pixel labeling with the square 3x3 ring hardcoded,
// counter-clockwise from east; transitions counted as inequalities around
// the cycle.
inline int lbp8_label_reference(const std::array<int, 8>& ring, int center, int u_threshold) {
    std::array<int, 8> bits{};
    for (int i = 0; i < 8; ++i) bits[static_cast<std::size_t>(i)] = ring[static_cast<std::size_t>(i)] >= center ? 1 : 0;
    int transitions = 0;
    for (int i = 0; i < 8; ++i) {
        if (bits[static_cast<std::size_t>(i)] != bits[static_cast<std::size_t>((i + 1) % 8)]) ++transitions;
    }
    if (transitions > u_threshold) return 9;
    int sum = 0;
    for (const int b : bits) sum += b;
    return sum;
}

inline std::vector<int> lbp8_labels_reference(const texkit::GrayImage& img, int u_threshold) {
    static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int dy[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    std::vector<int> labels;
    for (int y = 1; y < img.height - 1; ++y) {
        for (int x = 1; x < img.width - 1; ++x) {
            std::array<int, 8> ring{};
            for (int i = 0; i < 8; ++i) {
                ring[static_cast<std::size_t>(i)] = img.at(x + dx[i], y + dy[i]);
            }
            labels.push_back(lbp8_label_reference(ring, img.at(x, y), u_threshold));
        }
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

inline double soergel_reference(const std::array<double, 18>& a, const std::array<double, 18>& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::abs(a[i] - b[i]);
        den += std::max(a[i], b[i]);
    }
    return den == 0.0 ? 0.0 : num / den;
}

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("texkit_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(static_cast<unsigned long>(
                     std::hash<std::string>{}(tag) & 0xffffu)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testsupport
