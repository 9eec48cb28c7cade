#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "texkit/image.hpp"

namespace texkit {

// Rotation-invariant uniform LBP operator configuration.
//
// A pattern is "uniform" when its circular bit sequence has at most
// uniformity_threshold 0/1 transitions; uniform patterns are labelled by
// their bit sum (0..neighbors), everything else collapses to the single
// label neighbors + 1, giving neighbors + 2 labels in total.
struct LbpConfig {
    int neighbors = 8;             // P
    int radius = 1;                // R, pixels
    int uniformity_threshold = 2;  // U_T, default P/4
};

inline void require_valid(const LbpConfig& cfg) {
    if (cfg.neighbors < 4) {
        throw std::invalid_argument("LbpConfig: need at least 4 neighbors");
    }
    if (cfg.radius < 1) {
        throw std::invalid_argument("LbpConfig: radius must be >= 1");
    }
    if (cfg.uniformity_threshold < 0 || cfg.uniformity_threshold > cfg.neighbors) {
        throw std::invalid_argument("LbpConfig: uniformity threshold must be in [0, neighbors]");
    }
}

inline int lbp_label_count(const LbpConfig& cfg) { return cfg.neighbors + 2; }

// Binary comparisons against the center value; the sign function maps a
// zero difference to 1.
inline std::vector<std::uint8_t> lbp_bits(std::span<const std::uint16_t> neighbors,
                                          std::uint16_t center) {
    std::vector<std::uint8_t> bits(neighbors.size());
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        bits[i] = neighbors[i] >= center ? 1 : 0;
    }
    return bits;
}

// Number of 0/1 transitions around the circular bit sequence, wraparound
// between the last and first bit included. Always even.
inline int uniformity(std::span<const std::uint8_t> bits) {
    if (bits.empty()) throw std::invalid_argument("uniformity: empty bit sequence");
    int u = std::abs(static_cast<int>(bits.back()) - static_cast<int>(bits.front()));
    for (std::size_t i = 1; i < bits.size(); ++i) {
        u += std::abs(static_cast<int>(bits[i]) - static_cast<int>(bits[i - 1]));
    }
    return u;
}

// Label for one neighborhood: bit sum when the pattern is uniform,
// neighbors + 1 otherwise.
inline int lbp_label(std::span<const std::uint16_t> neighbors, std::uint16_t center,
                     const LbpConfig& cfg) {
    require_valid(cfg);
    if (static_cast<int>(neighbors.size()) != cfg.neighbors) {
        throw std::invalid_argument("lbp_label: neighbor count does not match config");
    }
    const auto bits = lbp_bits(neighbors, center);
    if (uniformity(bits) > cfg.uniformity_threshold) {
        return cfg.neighbors + 1;
    }
    int sum = 0;
    for (const auto b : bits) sum += b;
    return sum;
}

// Sampling offsets on the radius-R circle, counter-clockwise from east,
// rounded to the pixel grid (no interpolation). For P=8, R=1 this is
// exactly the 3x3 square neighborhood: E, NE, N, NW, W, SW, S, SE.
// Coordinates are (dx, dy) with y growing downward.
inline std::vector<std::pair<int, int>> lbp_offsets(const LbpConfig& cfg) {
    require_valid(cfg);
    std::vector<std::pair<int, int>> offs(static_cast<std::size_t>(cfg.neighbors));
    for (int i = 0; i < cfg.neighbors; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / cfg.neighbors;
        const int dx = static_cast<int>(std::lround(cfg.radius * std::cos(angle)));
        const int dy = -static_cast<int>(std::lround(cfg.radius * std::sin(angle)));
        offs[static_cast<std::size_t>(i)] = {dx, dy};
    }
    return offs;
}

// Per-pixel labels for every pixel whose full neighborhood is in bounds,
// row-major over the interior region. The interior margin equals the
// radius, so the result has (width - 2R) x (height - 2R) entries.
inline std::vector<int> lbp_label_image(const GrayImage& img, const LbpConfig& cfg) {
    const auto offs = lbp_offsets(cfg);
    const int margin = cfg.radius;
    if (img.width < 2 * margin + 1 || img.height < 2 * margin + 1) {
        throw std::invalid_argument("lbp_label_image: image too small for radius");
    }

    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(img.width - 2 * margin) *
                   static_cast<std::size_t>(img.height - 2 * margin));
    for (int y = margin; y < img.height - margin; ++y) {
        for (int x = margin; x < img.width - margin; ++x) {
            const std::uint16_t center = img.at(x, y);
            int sum = 0;
            int u = 0;
            int first = 0;
            int prev = 0;
            for (std::size_t i = 0; i < offs.size(); ++i) {
                const int b = img.at(x + offs[i].first, y + offs[i].second) >= center ? 1 : 0;
                sum += b;
                if (i == 0) {
                    first = b;
                } else {
                    u += std::abs(b - prev);
                }
                prev = b;
            }
            u += std::abs(prev - first);
            labels.push_back(u <= cfg.uniformity_threshold ? sum : cfg.neighbors + 1);
        }
    }
    return labels;
}

// Probability of each label over the labelled (interior) pixels.
struct LbpHistogram {
    std::vector<double> probs;  // length neighbors + 2, sums to 1
};

inline LbpHistogram lbp_histogram(const GrayImage& img, const LbpConfig& cfg) {
    const auto labels = lbp_label_image(img, cfg);
    LbpHistogram h;
    h.probs.assign(static_cast<std::size_t>(lbp_label_count(cfg)), 0.0);
    const double inv = 1.0 / static_cast<double>(labels.size());
    for (const int lbl : labels) {
        h.probs[static_cast<std::size_t>(lbl)] += inv;
    }
    return h;
}

}  // namespace texkit
