#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "texkit/curation.hpp"
#include "texkit/features.hpp"

namespace texkit {

// 17 significant digits: enough to reproduce any double bit-exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string features_csv_header(bool labeled) {
    std::string h = "id";
    for (std::size_t d = 1; d <= kFeatureDim; ++d) {
        h += ",f" + std::to_string(d);
    }
    if (labeled) h += ",label";
    return h;
}

// Rows of a feature CSV; labels is parallel to rows when has_labels is set.
struct FeatureCsv {
    std::vector<FeatureVector> rows;
    std::vector<std::string> labels;
    bool has_labels = false;
};

namespace detail {

inline void check_csv_field(const std::string& value, const char* what) {
    if (value.find_first_of(",\n\r") != std::string::npos) {
        throw std::invalid_argument(std::string("features CSV: ") + what +
                                    " must not contain commas or newlines: '" + value + "'");
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_csv_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": malformed numeric field '" + s + "'");
    }
}

}  // namespace detail

inline void write_features_csv(std::ostream& out, const FeatureCsv& data) {
    if (data.has_labels && data.labels.size() != data.rows.size()) {
        throw std::invalid_argument("write_features_csv: label count mismatch");
    }
    out << features_csv_header(data.has_labels) << "\n";
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        detail::check_csv_field(data.rows[r].id, "id");
        out << data.rows[r].id;
        for (const double v : data.rows[r].values) {
            out << "," << format_double(v);
        }
        if (data.has_labels) {
            detail::check_csv_field(data.labels[r], "label");
            out << "," << data.labels[r];
        }
        out << "\n";
    }
}

inline void write_features_csv(const std::filesystem::path& path, const FeatureCsv& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_features_csv: cannot write '" + path.string() + "'");
    }
    write_features_csv(out, data);
    if (!out) {
        throw std::runtime_error("write_features_csv: write failed for '" + path.string() + "'");
    }
}

inline FeatureCsv read_features_csv(std::istream& in, const std::string& name) {
    FeatureCsv data;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(name + ": empty file, expected a header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == features_csv_header(false)) {
        data.has_labels = false;
    } else if (line == features_csv_header(true)) {
        data.has_labels = true;
    } else {
        throw std::runtime_error(name + ": unexpected header '" + line + "'");
    }

    const std::size_t expected = 1 + kFeatureDim + (data.has_labels ? 1 : 0);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto fields = detail::split_csv_line(line);
        const std::string where = name + ":" + std::to_string(lineno);
        if (fields.size() != expected) {
            throw std::runtime_error(where + ": expected " + std::to_string(expected) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        FeatureVector v;
        v.id = fields[0];
        for (std::size_t d = 0; d < kFeatureDim; ++d) {
            v.values[d] = detail::parse_csv_double(fields[1 + d], where);
        }
        data.rows.push_back(std::move(v));
        if (data.has_labels) data.labels.push_back(fields.back());
    }
    return data;
}

inline FeatureCsv read_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_features_csv: cannot open '" + path.string() + "'");
    }
    return read_features_csv(in, path.filename().string());
}

// ---------------------------------------------------------------------------
// JSON manifests
// ---------------------------------------------------------------------------

inline nlohmann::json bounds_to_json(const NormalizationBounds& b) {
    return nlohmann::json{{"min", b.min}, {"max", b.max}};
}

inline NormalizationBounds bounds_from_json(const nlohmann::json& j) {
    NormalizationBounds b;
    const auto& mn = j.at("min");
    const auto& mx = j.at("max");
    if (mn.size() != kFeatureDim || mx.size() != kFeatureDim) {
        throw std::runtime_error("bounds manifest: expected 18 values per bound");
    }
    for (std::size_t d = 0; d < kFeatureDim; ++d) {
        b.min[d] = mn[d].get<double>();
        b.max[d] = mx[d].get<double>();
    }
    return b;
}

// Extraction settings plus the pool's normalization bounds; persisted next
// to the feature CSV so later queries reuse the same map.
struct ExtractManifest {
    int levels = 256;
    ExtractConfig config{};
    std::optional<NormalizationBounds> bounds;
};

inline nlohmann::json manifest_to_json(const ExtractManifest& m) {
    nlohmann::json j{
        {"levels", m.levels},
        {"gtdm_levels", m.config.gtdm_levels},
        {"gtdm_k", m.config.gtdm_k},
        {"eps", m.config.eps},
        {"lbp",
         {{"neighbors", m.config.lbp.neighbors},
          {"radius", m.config.lbp.radius},
          {"uniformity_threshold", m.config.lbp.uniformity_threshold}}},
    };
    j["bounds"] = m.bounds ? bounds_to_json(*m.bounds) : nlohmann::json(nullptr);
    return j;
}

inline ExtractManifest manifest_from_json(const nlohmann::json& j) {
    ExtractManifest m;
    m.levels = j.at("levels").get<int>();
    m.config.gtdm_levels = j.at("gtdm_levels").get<int>();
    m.config.gtdm_k = j.at("gtdm_k").get<int>();
    m.config.eps = j.at("eps").get<double>();
    const auto& lbp = j.at("lbp");
    m.config.lbp.neighbors = lbp.at("neighbors").get<int>();
    m.config.lbp.radius = lbp.at("radius").get<int>();
    m.config.lbp.uniformity_threshold = lbp.at("uniformity_threshold").get<int>();
    if (j.contains("bounds") && !j.at("bounds").is_null()) {
        m.bounds = bounds_from_json(j.at("bounds"));
    }
    return m;
}

inline nlohmann::json curation_to_json(const CurationResult& r) {
    return nlohmann::json{
        {"seed", r.seed},          {"iterations", r.iterations},
        {"converged", r.converged}, {"fisher", r.fisher},
        {"selected", r.selected},   {"final_centers", r.final_centers},
    };
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_json: cannot write '" + path.string() + "'");
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw std::runtime_error("write_json: write failed for '" + path.string() + "'");
    }
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_json: cannot open '" + path.string() + "'");
    }
    return nlohmann::json::parse(in);
}

}  // namespace texkit
