#pragma once

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "texkit/classify.hpp"
#include "texkit/curation.hpp"
#include "texkit/feature_io.hpp"
#include "texkit/features.hpp"
#include "texkit/image.hpp"
#include "texkit/image_io.hpp"

namespace texkit {

// Resolved settings for one CLI invocation.
// Precedence: command-line flags > config file > these defaults.
struct RunConfig {
    int levels = 256;
    ExtractConfig extract{};  // gtdm on 32 levels, K=1, eps=1e-6, LBP 8/1/2
    CropSpec crop{128, 64};
    std::size_t n = 1;
    std::uint64_t seed = 0;
    std::size_t max_iter = 100;
    std::vector<int> k_list{1, 3, 5};
    int trials = 10;
    double train_fraction = 0.4;
    Metric metric = Metric::euclidean;
};

// Overlays settings from a JSON config file onto `cfg`. Unknown keys are
// rejected so typos don't silently fall back to defaults.
inline void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "levels") cfg.levels = value.get<int>();
        else if (key == "gtdm_levels") cfg.extract.gtdm_levels = value.get<int>();
        else if (key == "gtdm_k") cfg.extract.gtdm_k = value.get<int>();
        else if (key == "eps") cfg.extract.eps = value.get<double>();
        else if (key == "lbp") {
            for (const auto& [lk, lv] : value.items()) {
                if (lk == "neighbors") cfg.extract.lbp.neighbors = lv.get<int>();
                else if (lk == "radius") cfg.extract.lbp.radius = lv.get<int>();
                else if (lk == "uniformity_threshold")
                    cfg.extract.lbp.uniformity_threshold = lv.get<int>();
                else throw std::runtime_error("config: unknown lbp key '" + lk + "'");
            }
        }
        else if (key == "window") cfg.crop.window = value.get<int>();
        else if (key == "stride") cfg.crop.stride = value.get<int>();
        else if (key == "n") cfg.n = value.get<std::size_t>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "max_iter") cfg.max_iter = value.get<std::size_t>();
        else if (key == "k") cfg.k_list = value.get<std::vector<int>>();
        else if (key == "trials") cfg.trials = value.get<int>();
        else if (key == "train_fraction") cfg.train_fraction = value.get<double>();
        else if (key == "metric") cfg.metric = metric_from_name(value.get<std::string>());
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
}

namespace detail {

inline bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm";
}

// Image files directly inside `dir`, sorted by filename for determinism.
inline std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error("not a directory: '" + dir.string() + "'");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && has_image_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    return files;
}

inline std::vector<std::filesystem::path> list_subdirs(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    return dirs;
}

}  // namespace detail

// Splits every image in `input_dir` into overlapping square windows and
// writes them as PGM files named <stem>_r<row>_c<col>.pgm, plus a
// manifest.json mapping each source file to its windows. Per-file failures
// are reported and skipped; the exit code is nonzero when any occurred.
inline int cmd_crop(const std::filesystem::path& input_dir, const RunConfig& cfg,
                    const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err) {
    const auto files = detail::list_images(input_dir);
    std::filesystem::create_directories(out_dir);

    nlohmann::json sources = nlohmann::json::object();
    int failures = 0;
    std::vector<std::string> seen_stems;
    for (const auto& file : files) {
        const std::string stem = file.stem().string();
        try {
            if (std::find(seen_stems.begin(), seen_stems.end(), stem) != seen_stems.end()) {
                throw std::runtime_error("duplicate stem '" + stem + "' would overwrite windows");
            }
            seen_stems.push_back(stem);
            const GrayImage img = load_gray(file, cfg.levels);
            const auto windows = crop_windows(img, cfg.crop);
            const int cols = crop_count_1d(img.width, cfg.crop.window, cfg.crop.stride);
            nlohmann::json names = nlohmann::json::array();
            for (std::size_t i = 0; i < windows.size(); ++i) {
                const int r = static_cast<int>(i) / cols;
                const int c = static_cast<int>(i) % cols;
                const std::string name =
                    stem + "_r" + std::to_string(r) + "_c" + std::to_string(c) + ".pgm";
                save_pgm(windows[i], out_dir / name);
                names.push_back(name);
            }
            sources[file.filename().string()] = std::move(names);
            log << file.filename().string() << ": " << windows.size() << " windows\n";
        } catch (const std::exception& e) {
            err << "error: " << file.filename().string() << ": " << e.what() << "\n";
            ++failures;
        }
    }
    if (files.empty()) {
        err << "warning: no PNG/PGM images found in '" << input_dir.string() << "'\n";
    }

    nlohmann::json manifest{{"window", cfg.crop.window},
                            {"stride", cfg.crop.stride},
                            {"levels", cfg.levels},
                            {"sources", sources}};
    write_json(out_dir / "manifest.json", manifest);
    return failures == 0 ? 0 : 1;
}

// Extracts the 18-dim descriptor for every image under `input_dir` and
// writes a feature CSV plus a manifest with the extraction settings and the
// pool's normalization bounds.
//
// Two layouts are accepted: images directly in the directory (unlabeled
// rows, id = file stem) or one subdirectory per class (labeled rows,
// id = <class>/<stem>, label = subdirectory name).
inline int cmd_extract(const std::filesystem::path& input_dir, const RunConfig& cfg,
                       const std::filesystem::path& out_csv, std::ostream& log,
                       std::ostream& err) {
    const auto loose = detail::list_images(input_dir);
    const auto subdirs = detail::list_subdirs(input_dir);
    if (!loose.empty() && !subdirs.empty()) {
        throw std::runtime_error(
            "extract: input mixes loose images and class subdirectories; use one layout");
    }

    struct Item {
        std::filesystem::path file;
        std::string id;
        std::string label;
    };
    std::vector<Item> items;
    if (!subdirs.empty()) {
        for (const auto& sub : subdirs) {
            const std::string cls = sub.filename().string();
            for (const auto& file : detail::list_images(sub)) {
                items.push_back({file, cls + "/" + file.stem().string(), cls});
            }
        }
    } else {
        for (const auto& file : loose) {
            items.push_back({file, file.stem().string(), {}});
        }
    }

    FeatureCsv data;
    data.has_labels = !subdirs.empty();
    int failures = 0;
    for (const auto& item : items) {
        try {
            const GrayImage img = load_gray(item.file, cfg.levels);
            data.rows.push_back(extract_features(img, cfg.extract, item.id));
            if (data.has_labels) data.labels.push_back(item.label);
        } catch (const std::exception& e) {
            err << "error: " << item.id << ": " << e.what() << "\n";
            ++failures;
        }
    }
    if (items.empty()) {
        err << "warning: no PNG/PGM images found in '" << input_dir.string() << "'\n";
    }

    write_features_csv(out_csv, data);

    ExtractManifest manifest;
    manifest.levels = cfg.levels;
    manifest.config = cfg.extract;
    if (!data.rows.empty()) manifest.bounds = fit_bounds(data.rows);
    std::filesystem::path manifest_path = out_csv;
    manifest_path.replace_extension(".manifest.json");
    write_json(manifest_path, manifest_to_json(manifest));

    log << data.rows.size() << " descriptors -> " << out_csv.string() << "\n";
    return failures == 0 ? 0 : 1;
}

// Runs the diversity selection over a feature CSV: rows are min-max
// normalized with bounds fitted on this pool, clustered, and the result is
// written as JSON.
inline int cmd_curate(const std::filesystem::path& csv_path, const RunConfig& cfg,
                      const std::filesystem::path& out_json, std::ostream& log) {
    const FeatureCsv data = read_features_csv(csv_path);
    if (data.rows.empty()) {
        throw std::runtime_error("curate: feature CSV has no rows");
    }
    const NormalizationBounds bounds = fit_bounds(data.rows);
    const std::vector<FeatureVector> pool = normalize_pool(data.rows, bounds);
    const CurationResult result = curate(pool, cfg.n, cfg.seed, cfg.max_iter);
    write_json(out_json, curation_to_json(result));
    log << "selected " << result.selected.size() << " of " << pool.size() << " candidates"
        << " (fisher " << format_double(result.fisher) << ", " << result.iterations
        << " iterations) -> " << out_json.string() << "\n";
    return 0;
}

// Prints the diversity score of the rows of a feature CSV, treating every
// row as one chosen dataset member. Vectors are used as stored unless
// `renormalize` min-max rescales them with this set's own bounds.
inline int cmd_fisher(const std::filesystem::path& csv_path, bool renormalize,
                      std::ostream& out) {
    const FeatureCsv data = read_features_csv(csv_path);
    if (data.rows.empty()) {
        throw std::runtime_error("fisher: feature CSV has no rows");
    }
    std::vector<FeatureVector> rows = data.rows;
    if (renormalize) {
        rows = normalize_pool(rows, fit_bounds(rows));
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", fisher(rows));
    out << buf << "\n";
    return 0;
}

// KNN accuracy over repeated stratified splits of a labeled feature CSV;
// one report per requested k. Prints an aligned table and optionally writes
// the full per-trial JSON.
inline int cmd_classify(const std::filesystem::path& csv_path, const RunConfig& cfg,
                        const std::filesystem::path& out_json, std::ostream& out) {
    const FeatureCsv data = read_features_csv(csv_path);
    if (!data.has_labels) {
        throw std::runtime_error("classify: feature CSV has no label column");
    }
    if (data.rows.empty()) {
        throw std::runtime_error("classify: feature CSV has no rows");
    }

    const NormalizationBounds bounds = fit_bounds(data.rows);
    std::vector<LabeledVector> labeled;
    labeled.reserve(data.rows.size());
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        labeled.push_back({normalize(data.rows[i], bounds), data.labels[i]});
    }

    std::vector<AccuracyReport> reports;
    for (const int k : cfg.k_list) {
        reports.push_back(
            evaluate(labeled, k, cfg.trials, cfg.train_fraction, cfg.seed, cfg.metric));
    }
    out << format_report_table(reports, cfg.metric);
    if (!out_json.empty()) {
        write_json(out_json, reports_to_json(reports, cfg.metric, cfg.train_fraction, cfg.seed));
    }
    return 0;
}

}  // namespace texkit
