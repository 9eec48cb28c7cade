#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "texkit/image.hpp"

namespace texkit {

// First-order level distribution of an image: occurrence probabilities plus
// the population mean and variance of the level values.
struct Histogram {
    std::vector<double> p;
    double mean = 0.0;
    double variance = 0.0;
};

// The five histogram features used in the combined descriptor.
struct HistogramFeatures {
    double mean = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;  // excess kurtosis, 0 for a Gaussian-shaped histogram
    double energy = 0.0;
    double entropy = 0.0;   // bits; 0 iff a single level carries all mass
};

namespace detail {

inline void fill_moments(Histogram& h) {
    double mean = 0.0;
    for (std::size_t i = 0; i < h.p.size(); ++i) {
        mean += static_cast<double>(i) * h.p[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < h.p.size(); ++i) {
        const double d = static_cast<double>(i) - mean;
        var += d * d * h.p[i];
    }
    h.mean = mean;
    h.variance = var;
}

}  // namespace detail

inline Histogram histogram(const GrayImage& img) {
    require_valid(img);
    Histogram h;
    h.p.assign(static_cast<std::size_t>(img.levels), 0.0);
    const double inv = 1.0 / static_cast<double>(img.pixel_count());
    for (const auto v : img.pixels) {
        h.p[v] += inv;
    }
    detail::fill_moments(h);
    return h;
}

// Builds a Histogram from an explicit probability vector (must sum to 1).
inline Histogram histogram_from_probs(std::vector<double> probs) {
    double sum = 0.0;
    for (const double v : probs) {
        if (v < 0.0) throw std::invalid_argument("histogram_from_probs: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("histogram_from_probs: probabilities must sum to 1");
    }
    Histogram h;
    h.p = std::move(probs);
    detail::fill_moments(h);
    return h;
}

// Mean, skewness, kurtosis, energy and entropy of a level histogram.
//
// Skewness and kurtosis are the standardized third and fourth central
// moments (kurtosis less 3). A zero-variance histogram gets skewness 0 and
// kurtosis -3 by convention so every image yields finite features.
inline HistogramFeatures hist_features(const Histogram& h) {
    HistogramFeatures f;
    f.mean = h.mean;

    double m3 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i < h.p.size(); ++i) {
        const double d = static_cast<double>(i) - h.mean;
        m3 += d * d * d * h.p[i];
        m4 += d * d * d * d * h.p[i];
    }
    if (h.variance > 0.0) {
        const double sigma = std::sqrt(h.variance);
        f.skewness = m3 / (sigma * sigma * sigma);
        f.kurtosis = m4 / (h.variance * h.variance) - 3.0;
    } else {
        f.skewness = 0.0;
        f.kurtosis = -3.0;
    }

    double energy = 0.0;
    double entropy = 0.0;
    for (const double p : h.p) {
        energy += p * p;
        if (p > 0.0) entropy -= p * std::log2(p);
    }
    f.energy = energy;
    f.entropy = entropy;
    return f;
}

}  // namespace texkit
