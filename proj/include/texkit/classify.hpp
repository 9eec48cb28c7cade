#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "texkit/features.hpp"
#include "texkit/rng.hpp"

namespace texkit {

struct LabeledVector {
    FeatureVector vector;
    std::string class_label;
};

enum class Metric { euclidean, soergel };

inline const char* metric_name(Metric m) {
    return m == Metric::soergel ? "soergel" : "euclidean";
}

inline Metric metric_from_name(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "soergel") return Metric::soergel;
    throw std::invalid_argument("unknown metric '" + name + "' (expected euclidean or soergel)");
}

inline double metric_distance(Metric m, const FeatureVector& a, const FeatureVector& b) {
    return m == Metric::soergel ? soergel(a, b) : euclidean(a, b);
}

struct SplitResult {
    std::vector<LabeledVector> train;
    std::vector<LabeledVector> test;
};

// Stratified train/test split: per class, ceil(train_fraction * class size)
// members go to train after a seeded shuffle within the class; classes are
// processed in sorted label order so the split depends only on
// (data order, train_fraction, seed).
inline SplitResult split(std::span<const LabeledVector> data, double train_fraction,
                         std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw std::invalid_argument("split: train_fraction must be in (0, 1)");
    }
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) {
        by_class[data[i].class_label].push_back(i);
    }
    for (const auto& [label, members] : by_class) {
        if (members.size() < 2) {
            throw std::invalid_argument("split: class '" + label + "' has fewer than 2 members");
        }
    }

    SplitResult out;
    SeededRng rng(seed);
    for (auto& [label, members] : by_class) {
        shuffle(members, rng);
        const auto train_count = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(members.size())));
        for (std::size_t i = 0; i < members.size(); ++i) {
            (i < train_count ? out.train : out.test).push_back(data[members[i]]);
        }
    }
    return out;
}

// Majority label among the k nearest training vectors. Distance ties keep
// training-set order (stable sort); a tie in the vote goes to the label of
// the nearest neighbor that carries one of the tied labels.
inline std::string knn_predict(std::span<const LabeledVector> train, const FeatureVector& query,
                               std::size_t k, Metric metric) {
    if (train.empty()) {
        throw std::invalid_argument("knn_predict: empty training set");
    }
    if (k < 1 || k > train.size()) {
        throw std::invalid_argument("knn_predict: k must be in [1, train size]");
    }

    std::vector<std::pair<double, std::size_t>> order(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        order[i] = {metric_distance(metric, train[i].vector, query), i};
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::map<std::string, std::size_t> votes;
    for (std::size_t i = 0; i < k; ++i) {
        ++votes[train[order[i].second].class_label];
    }
    std::size_t best = 0;
    for (const auto& [label, count] : votes) best = std::max(best, count);
    for (std::size_t i = 0; i < k; ++i) {
        const std::string& label = train[order[i].second].class_label;
        if (votes[label] == best) return label;
    }
    return train[order[0].second].class_label;  // unreachable
}

// Accuracy over repeated seeded splits for one value of k.
struct AccuracyReport {
    int k = 0;
    int trials = 0;
    std::vector<double> accuracies;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation over trials
};

inline AccuracyReport evaluate(std::span<const LabeledVector> data, int k, int trials,
                               double train_fraction, std::uint64_t base_seed, Metric metric) {
    if (trials < 1) {
        throw std::invalid_argument("evaluate: trials must be >= 1");
    }
    AccuracyReport report;
    report.k = k;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const SplitResult s = split(data, train_fraction, base_seed + static_cast<std::uint64_t>(t));
        if (s.test.empty()) {
            throw std::invalid_argument("evaluate: split produced an empty test set");
        }
        if (static_cast<std::size_t>(k) > s.train.size()) {
            throw std::invalid_argument("evaluate: k exceeds training set size");
        }
        std::size_t correct = 0;
        for (const auto& q : s.test) {
            if (knn_predict(s.train, q.vector, static_cast<std::size_t>(k), metric) ==
                q.class_label) {
                ++correct;
            }
        }
        report.accuracies.push_back(static_cast<double>(correct) /
                                    static_cast<double>(s.test.size()));
    }
    double sum = 0.0;
    for (const double a : report.accuracies) sum += a;
    report.mean = sum / static_cast<double>(trials);
    double sq = 0.0;
    for (const double a : report.accuracies) {
        const double d = a - report.mean;
        sq += d * d;
    }
    report.stddev = std::sqrt(sq / static_cast<double>(trials));
    return report;
}

inline nlohmann::json report_to_json(const AccuracyReport& r) {
    return nlohmann::json{{"k", r.k},       {"trials", r.trials}, {"accuracies", r.accuracies},
                          {"mean", r.mean}, {"stddev", r.stddev}};
}

inline nlohmann::json reports_to_json(std::span<const AccuracyReport> reports, Metric metric,
                                      double train_fraction, std::uint64_t seed) {
    nlohmann::json j{{"metric", metric_name(metric)},
                     {"train_fraction", train_fraction},
                     {"seed", seed}};
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
    return j;
}

// Aligned text table, one row per k.
inline std::string format_report_table(std::span<const AccuracyReport> reports, Metric metric) {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-6s %-10s %-20s %s\n", "k", "metric", "accuracy",
                  "trials");
    out << line;
    for (const auto& r : reports) {
        char acc[40];
        std::snprintf(acc, sizeof(acc), "%.4f +/- %.4f", r.mean, r.stddev);
        std::snprintf(line, sizeof(line), "%-6d %-10s %-20s %d\n", r.k, metric_name(metric), acc,
                      r.trials);
        out << line;
    }
    return out.str();
}

}  // namespace texkit
