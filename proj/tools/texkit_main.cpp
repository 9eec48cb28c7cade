// Command-line front end: crop / extract / curate / fisher / classify.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <texkit/texkit.hpp>

namespace {

// Flag values staged before being overlaid on the config-file settings.
struct FlagSet {
    int levels = 0;
    int gtdm_levels = 0;
    int gtdm_k = 0;
    double eps = 0.0;
    int window = 0;
    int stride = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t max_iter = 0;
    std::vector<int> k_list;
    int trials = 0;
    double train_fraction = 0.0;
    std::string metric;
    std::string config_path;
};

// Registers the shared tuning flags on a subcommand and returns the option
// handles needed to tell "flag given" from "default".
struct SharedOptions {
    CLI::Option* levels = nullptr;
    CLI::Option* gtdm_levels = nullptr;
    CLI::Option* gtdm_k = nullptr;
    CLI::Option* eps = nullptr;
    CLI::Option* window = nullptr;
    CLI::Option* stride = nullptr;
    CLI::Option* n = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* max_iter = nullptr;
    CLI::Option* k_list = nullptr;
    CLI::Option* trials = nullptr;
    CLI::Option* train_fraction = nullptr;
    CLI::Option* metric = nullptr;
};

SharedOptions add_shared_options(CLI::App* cmd, FlagSet& f) {
    SharedOptions o;
    o.levels = cmd->add_option("--levels", f.levels, "Intensity quantization levels");
    o.gtdm_levels =
        cmd->add_option("--gtdm-levels", f.gtdm_levels, "Level count for the gray-tone table");
    o.gtdm_k = cmd->add_option("--gtdm-k", f.gtdm_k, "Gray-tone window half-size K");
    o.eps = cmd->add_option("--eps", f.eps, "Stabilizer for coarseness/strength");
    o.window = cmd->add_option("--window", f.window, "Crop window side in pixels");
    o.stride = cmd->add_option("--stride", f.stride, "Crop stride in pixels");
    o.n = cmd->add_option("--n", f.n, "Number of candidates to select");
    o.seed = cmd->add_option("--seed", f.seed, "RNG seed");
    o.max_iter = cmd->add_option("--max-iter", f.max_iter, "Clustering iteration cap");
    o.k_list = cmd->add_option("--k", f.k_list, "Neighbor counts for KNN (repeatable)");
    o.trials = cmd->add_option("--trials", f.trials, "Number of repeated splits");
    o.train_fraction =
        cmd->add_option("--train-frac", f.train_fraction, "Fraction of each class for training");
    o.metric = cmd->add_option("--metric", f.metric, "Distance metric: euclidean or soergel");
    cmd->add_option("--config", f.config_path, "JSON config file (flags take precedence)");
    return o;
}

texkit::RunConfig resolve_config(const FlagSet& f, const SharedOptions& o) {
    texkit::RunConfig cfg;
    if (!f.config_path.empty()) {
        texkit::apply_config_json(cfg, texkit::read_json(f.config_path));
    }
    if (o.levels->count()) cfg.levels = f.levels;
    if (o.gtdm_levels->count()) cfg.extract.gtdm_levels = f.gtdm_levels;
    if (o.gtdm_k->count()) cfg.extract.gtdm_k = f.gtdm_k;
    if (o.eps->count()) cfg.extract.eps = f.eps;
    if (o.window->count()) cfg.crop.window = f.window;
    if (o.stride->count()) cfg.crop.stride = f.stride;
    if (o.n->count()) cfg.n = f.n;
    if (o.seed->count()) cfg.seed = f.seed;
    if (o.max_iter->count()) cfg.max_iter = f.max_iter;
    if (o.k_list->count()) cfg.k_list = f.k_list;
    if (o.trials->count()) cfg.trials = f.trials;
    if (o.train_fraction->count()) cfg.train_fraction = f.train_fraction;
    if (o.metric->count()) cfg.metric = texkit::metric_from_name(f.metric);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"texkit: texture feature extraction, dataset curation and evaluation"};
    app.require_subcommand(1);

    FlagSet flags;
    std::string input;
    std::string out_path;
    bool renormalize = false;

    auto* crop = app.add_subcommand("crop", "Split images into overlapping square windows");
    crop->add_option("input", input, "Directory of PNG/PGM images")->required();
    crop->add_option("--out", out_path, "Output directory for windows + manifest")->required();
    const auto crop_opts = add_shared_options(crop, flags);

    auto* extract = app.add_subcommand("extract", "Compute 18-dim descriptors for a directory");
    extract->add_option("input", input, "Image directory (flat, or one subdirectory per class)")
        ->required();
    extract->add_option("--out", out_path, "Output CSV path (manifest written alongside)")
        ->required();
    const auto extract_opts = add_shared_options(extract, flags);

    auto* curate = app.add_subcommand("curate", "Select N diverse candidates from a feature CSV");
    curate->add_option("input", input, "Feature CSV")->required();
    curate->add_option("--out", out_path, "Output JSON path")->required();
    const auto curate_opts = add_shared_options(curate, flags);

    auto* fisher = app.add_subcommand("fisher", "Diversity score of a feature CSV");
    fisher->add_option("input", input, "Feature CSV")->required();
    fisher->add_flag("--normalize", renormalize, "Min-max rescale rows with this set's bounds");
    const auto fisher_opts = add_shared_options(fisher, flags);

    auto* classify = app.add_subcommand("classify", "KNN accuracy over a labeled feature CSV");
    classify->add_option("input", input, "Feature CSV with label column")->required();
    classify->add_option("--out", out_path, "Optional JSON report path");
    const auto classify_opts = add_shared_options(classify, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (crop->parsed()) {
            return texkit::cmd_crop(input, resolve_config(flags, crop_opts), out_path, std::cout,
                                    std::cerr);
        }
        if (extract->parsed()) {
            return texkit::cmd_extract(input, resolve_config(flags, extract_opts), out_path,
                                       std::cout, std::cerr);
        }
        if (curate->parsed()) {
            return texkit::cmd_curate(input, resolve_config(flags, curate_opts), out_path,
                                      std::cout);
        }
        if (fisher->parsed()) {
            resolve_config(flags, fisher_opts);  // validates --config if given
            return texkit::cmd_fisher(input, renormalize, std::cout);
        }
        if (classify->parsed()) {
            return texkit::cmd_classify(input, resolve_config(flags, classify_opts), out_path,
                                        std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
