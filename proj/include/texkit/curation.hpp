#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "texkit/features.hpp"
#include "texkit/rng.hpp"

namespace texkit {

// Outcome of the diversity-driven selection: N pool members chosen as the
// curated dataset, plus the clustering state that produced them.
struct CurationResult {
    std::vector<std::string> selected;        // candidate ids, one per cluster
    std::vector<std::size_t> selected_index;  // positions in the input pool
    std::vector<FeatureValues> final_centers;
    std::size_t iterations = 0;
    bool converged = false;
    double fisher = 0.0;
    std::uint64_t seed = 0;
};

// Index of the nearest center under Soergel distance; ties go to the
// lowest cluster index.
inline std::size_t nearest_center(const FeatureValues& v, std::span<const FeatureValues> centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = soergel(std::span<const double>(v), std::span<const double>(centers[c]));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

inline std::vector<std::size_t> assign_to_centers(std::span<const FeatureVector> pool,
                                                  std::span<const FeatureValues> centers) {
    std::vector<std::size_t> assignment(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        assignment[i] = nearest_center(pool[i].values, centers);
    }
    return assignment;
}

// Per-dimension arithmetic mean of the members' descriptors.
inline FeatureValues cluster_mean(std::span<const FeatureVector> members) {
    if (members.empty()) {
        throw std::invalid_argument("cluster_mean: empty cluster");
    }
    FeatureValues mean{};
    for (const auto& m : members) {
        for (std::size_t d = 0; d < kFeatureDim; ++d) mean[d] += m.values[d];
    }
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
        mean[d] /= static_cast<double>(members.size());
    }
    return mean;
}

// Mean pairwise Soergel distance over the selected members, both orderings
// and the zero self-distances included: (1/C^2) * sum_i sum_j D(m_i, m_j).
inline double fisher(std::span<const FeatureVector> selected) {
    if (selected.empty()) {
        throw std::invalid_argument("fisher: empty selection");
    }
    double acc = 0.0;
    for (const auto& a : selected) {
        for (const auto& b : selected) {
            acc += soergel(a, b);
        }
    }
    const double c = static_cast<double>(selected.size());
    return acc / (c * c);
}

namespace detail {

inline FeatureValues mean_of_cluster(std::span<const FeatureVector> pool,
                                     std::span<const std::size_t> assignment,
                                     std::size_t cluster, std::size_t count) {
    FeatureValues mean{};
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (assignment[i] != cluster) continue;
        for (std::size_t d = 0; d < kFeatureDim; ++d) mean[d] += pool[i].values[d];
    }
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
        mean[d] /= static_cast<double>(count);
    }
    return mean;
}

// Replacement center for a cluster that lost all members: the pool
// candidate farthest from the previous center's nearest pool candidate.
// Ties resolve to the lowest pool index, so the repair is deterministic.
inline FeatureValues reseed_center(std::span<const FeatureVector> pool,
                                   const FeatureValues& previous_center) {
    std::size_t anchor = 0;
    double anchor_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double d = soergel(std::span<const double>(pool[i].values),
                                 std::span<const double>(previous_center));
        if (d < anchor_d) {
            anchor_d = d;
            anchor = i;
        }
    }
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double d = soergel(pool[i], pool[anchor]);
        if (d > far_d) {
            far_d = d;
            far = i;
        }
    }
    return pool[far].values;
}

}  // namespace detail

// Selects n maximally spread pool members by k-means over Soergel distance.
//
// Initial centers are n candidates drawn uniformly without replacement
// (seeded). Each round assigns every candidate to its nearest center and
// recomputes centers as per-dimension cluster means; the loop stops when
// the assignment repeats between consecutive rounds (which forces identical
// means) or after max_iter rounds. Each converged center is then snapped
// back to its nearest still-unused pool candidate, greedily in cluster
// order, so the result always consists of real candidates.
//
// Soergel assignment and arithmetic-mean updates are not variationally
// matched, so no monotone-objective guarantee exists; max_iter bounds the
// loop instead.
inline CurationResult curate(const std::vector<FeatureVector>& pool, std::size_t n,
                             std::uint64_t seed, std::size_t max_iter = 100) {
    if (n == 0) {
        throw std::invalid_argument("curate: n must be positive");
    }
    if (n > pool.size()) {
        throw std::invalid_argument("curate: n exceeds pool size");
    }
    if (max_iter == 0) {
        throw std::invalid_argument("curate: max_iter must be positive");
    }

    CurationResult result;
    result.seed = seed;

    SeededRng rng(seed);
    std::vector<FeatureValues> centers;
    centers.reserve(n);
    for (const std::size_t idx : sample_indices(pool.size(), n, rng)) {
        centers.push_back(pool[idx].values);
    }

    std::vector<std::size_t> prev_assignment;
    std::vector<std::size_t> counts(n);
    for (std::size_t pass = 1; pass <= max_iter; ++pass) {
        std::vector<std::size_t> assignment = assign_to_centers(pool, centers);
        if (!prev_assignment.empty() && assignment == prev_assignment) {
            result.converged = true;
            result.iterations = pass - 1;
            break;
        }
        counts.assign(n, 0);
        for (const std::size_t a : assignment) ++counts[a];
        for (std::size_t c = 0; c < n; ++c) {
            if (counts[c] == 0) {
                centers[c] = detail::reseed_center(pool, centers[c]);
            } else {
                centers[c] = detail::mean_of_cluster(pool, assignment, c, counts[c]);
            }
        }
        prev_assignment = std::move(assignment);
        result.iterations = pass;
    }

    // Snap-back: nearest unused candidate per center, cluster order.
    std::vector<bool> used(pool.size(), false);
    result.selected_index.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = pool.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            const double d = soergel(std::span<const double>(pool[i].values),
                                     std::span<const double>(centers[c]));
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        used[best] = true;
        result.selected_index.push_back(best);
        result.selected.push_back(pool[best].id);
    }
    result.final_centers = std::move(centers);

    std::vector<FeatureVector> chosen;
    chosen.reserve(n);
    for (const std::size_t idx : result.selected_index) chosen.push_back(pool[idx]);
    result.fisher = fisher(chosen);
    return result;
}

}  // namespace texkit
