#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "texkit/image.hpp"

namespace texkit {

// Gray-tone difference table for one image.
//
// For every interior pixel (one whose full (2K+1)x(2K+1) window lies in
// bounds) the absolute difference between its level and the mean of its
// W-1 = (2K+1)^2 - 1 neighbours (center excluded) is accumulated into the
// row of its level. p holds the occurrence probability of each level over
// the same interior region.
struct GtdmTable {
    std::vector<double> s;            // per-level sum of |level - neighbourhood mean|
    std::vector<double> p;            // per-level occurrence probability, sums to 1
    std::vector<std::int64_t> count;  // per-level interior pixel count
    std::int64_t n = 0;               // total interior pixels
    int k = 0;                        // window half-size
};

inline GtdmTable compute_gtdm(const GrayImage& img, int k) {
    if (k < 1) {
        throw std::invalid_argument("compute_gtdm: window half-size must be >= 1");
    }
    if (img.width <= 2 * k || img.height <= 2 * k) {
        throw std::invalid_argument("compute_gtdm: image too small for window half-size");
    }

    GtdmTable t;
    t.k = k;
    t.s.assign(static_cast<std::size_t>(img.levels), 0.0);
    t.p.assign(static_cast<std::size_t>(img.levels), 0.0);
    t.count.assign(static_cast<std::size_t>(img.levels), 0);
    t.n = static_cast<std::int64_t>(img.height - 2 * k) * (img.width - 2 * k);

    const double neighbours = static_cast<double>((2 * k + 1) * (2 * k + 1) - 1);

    for (int y = k; y < img.height - k; ++y) {
        for (int x = k; x < img.width - k; ++x) {
            std::int64_t window_sum = 0;
            for (int dy = -k; dy <= k; ++dy) {
                for (int dx = -k; dx <= k; ++dx) {
                    window_sum += img.at(x + dx, y + dy);
                }
            }
            const int level = img.at(x, y);
            window_sum -= level;
            const double mean = static_cast<double>(window_sum) / neighbours;
            t.s[static_cast<std::size_t>(level)] += std::abs(static_cast<double>(level) - mean);
            ++t.count[static_cast<std::size_t>(level)];
        }
    }
    for (std::size_t i = 0; i < t.p.size(); ++i) {
        t.p[i] = static_cast<double>(t.count[i]) / static_cast<double>(t.n);
    }
    return t;
}

// Coarseness: (eps + sum_i p_i * s_i)^-1. Large for smooth textures where
// each pixel sits close to its neighbourhood mean; eps keeps it finite.
inline double coarseness(const GtdmTable& t, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("coarseness: eps must be positive");
    double acc = eps;
    for (std::size_t i = 0; i < t.s.size(); ++i) {
        acc += t.p[i] * t.s[i];
    }
    return 1.0 / acc;
}

// Complexity: sum over ordered level pairs (i, j), both with nonzero
// probability, of |i-j| / (n * (p_i + p_j)) * (p_i*s_i + p_j*s_j).
inline double complexity(const GtdmTable& t) {
    if (t.n <= 0) throw std::invalid_argument("complexity: table has no interior pixels");
    const double n = static_cast<double>(t.n);
    double acc = 0.0;
    for (std::size_t i = 0; i < t.p.size(); ++i) {
        if (t.p[i] == 0.0) continue;
        for (std::size_t j = 0; j < t.p.size(); ++j) {
            if (t.p[j] == 0.0) continue;
            const double di = static_cast<double>(i);
            const double dj = static_cast<double>(j);
            acc += std::abs(di - dj) / (n * (t.p[i] + t.p[j])) * (t.p[i] * t.s[i] + t.p[j] * t.s[j]);
        }
    }
    return acc;
}

// Texture strength: [sum over ordered nonzero-probability pairs of
// (p_i + p_j) * (i - j)^2] / (eps + sum_i s_i).
inline double strength(const GtdmTable& t, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("strength: eps must be positive");
    double num = 0.0;
    for (std::size_t i = 0; i < t.p.size(); ++i) {
        if (t.p[i] == 0.0) continue;
        for (std::size_t j = 0; j < t.p.size(); ++j) {
            if (t.p[j] == 0.0) continue;
            const double d = static_cast<double>(i) - static_cast<double>(j);
            num += (t.p[i] + t.p[j]) * d * d;
        }
    }
    double den = eps;
    for (const double v : t.s) den += v;
    return num / den;
}

}  // namespace texkit
