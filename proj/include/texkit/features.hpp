#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "texkit/gtdm.hpp"
#include "texkit/histogram.hpp"
#include "texkit/image.hpp"
#include "texkit/lbp.hpp"

namespace texkit {

// Combined texture descriptor length: 3 gray-tone difference features,
// 5 histogram features, 10 LBP label probabilities.
inline constexpr std::size_t kFeatureDim = 18;

using FeatureValues = std::array<double, kFeatureDim>;

// One candidate's descriptor. Order is fixed:
//   [0] coarseness  [1] complexity  [2] strength
//   [3] mean  [4] skewness  [5] kurtosis  [6] energy  [7] entropy
//   [8..17] LBP label probabilities for labels 0..9
struct FeatureVector {
    std::string id;
    FeatureValues values{};
};

// Knobs for descriptor extraction. The gray-tone difference table is
// computed on a copy rebinned to gtdm_levels (when smaller than the image's
// native level count) to bound the table size; histogram and LBP features
// always use the native levels.
struct ExtractConfig {
    int gtdm_levels = 32;
    int gtdm_k = 1;
    double eps = 1e-6;
    LbpConfig lbp{};
};

inline FeatureVector extract_features(const GrayImage& img, const ExtractConfig& cfg,
                                      std::string id = {}) {
    require_valid(cfg.lbp);
    if (cfg.lbp.neighbors != 8) {
        throw std::invalid_argument(
            "extract_features: the 18-dim descriptor requires an 8-neighbor LBP");
    }
    if (cfg.eps <= 0.0) {
        throw std::invalid_argument("extract_features: eps must be positive");
    }

    FeatureVector out;
    out.id = std::move(id);

    const bool rebin = cfg.gtdm_levels >= 2 && cfg.gtdm_levels < img.levels;
    const GtdmTable table = rebin ? compute_gtdm(requantize(img, cfg.gtdm_levels), cfg.gtdm_k)
                                  : compute_gtdm(img, cfg.gtdm_k);
    out.values[0] = coarseness(table, cfg.eps);
    out.values[1] = complexity(table);
    out.values[2] = strength(table, cfg.eps);

    const HistogramFeatures hf = hist_features(histogram(img));
    out.values[3] = hf.mean;
    out.values[4] = hf.skewness;
    out.values[5] = hf.kurtosis;
    out.values[6] = hf.energy;
    out.values[7] = hf.entropy;

    const LbpHistogram lh = lbp_histogram(img, cfg.lbp);
    for (std::size_t i = 0; i < 10; ++i) {
        out.values[8 + i] = lh.probs[i];
    }
    return out;
}

// Per-dimension value range over a candidate pool.
struct NormalizationBounds {
    FeatureValues min{};
    FeatureValues max{};
};

inline NormalizationBounds fit_bounds(std::span<const FeatureVector> pool) {
    if (pool.empty()) {
        throw std::invalid_argument("fit_bounds: empty pool");
    }
    NormalizationBounds b;
    b.min = pool.front().values;
    b.max = pool.front().values;
    for (const auto& v : pool) {
        for (std::size_t d = 0; d < kFeatureDim; ++d) {
            if (v.values[d] < b.min[d]) b.min[d] = v.values[d];
            if (v.values[d] > b.max[d]) b.max[d] = v.values[d];
        }
    }
    return b;
}

// Min-max map to [0,1] per dimension. A degenerate dimension (min == max)
// maps to 0; out-of-pool values are not clamped.
inline FeatureVector normalize(const FeatureVector& v, const NormalizationBounds& b) {
    FeatureVector out;
    out.id = v.id;
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
        const double range = b.max[d] - b.min[d];
        out.values[d] = range > 0.0 ? (v.values[d] - b.min[d]) / range : 0.0;
    }
    return out;
}

inline std::vector<FeatureVector> normalize_pool(std::span<const FeatureVector> pool,
                                                 const NormalizationBounds& b) {
    std::vector<FeatureVector> out;
    out.reserve(pool.size());
    for (const auto& v : pool) out.push_back(normalize(v, b));
    return out;
}

// Soergel distance: sum_k |a_k - b_k| / sum_k max(a_k, b_k).
// A proper metric in [0, 1] on non-negative vectors; two all-zero vectors
// are at distance 0 by convention.
inline double soergel(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("soergel: dimension mismatch");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += std::abs(a[k] - b[k]);
        den += a[k] > b[k] ? a[k] : b[k];
    }
    if (den == 0.0) return 0.0;
    return num / den;
}

inline double soergel(const FeatureVector& a, const FeatureVector& b) {
    return soergel(std::span<const double>(a.values), std::span<const double>(b.values));
}

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("euclidean: dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double euclidean(const FeatureVector& a, const FeatureVector& b) {
    return euclidean(std::span<const double>(a.values), std::span<const double>(b.values));
}

}  // namespace texkit
