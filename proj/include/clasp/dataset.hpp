#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clasp/metrics.hpp"
#include "clasp/series.hpp"

namespace clasp {

struct DatasetRecord {
    std::string name;
    std::optional<std::size_t> window;
    std::optional<std::vector<std::size_t>> change_points;
    std::vector<double> values;
};

enum class SeriesFormat { plain, annotated };

namespace detail {

inline std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string base_name(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

}  // namespace detail

// Plain format: one decimal value per line, '.' separator, blank lines
// ignored. Parse errors carry the offending line number.
inline DatasetRecord load_plain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    DatasetRecord rec;
    rec.name = detail::base_name(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string token = detail::strip(line);
        if (token.empty()) continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": cannot parse '" + token + "' as a number");
        if (!std::isfinite(v))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": non-finite value");
        rec.values.push_back(v);
    }
    if (rec.values.empty()) throw std::runtime_error(path + ": no values found");
    return rec;
}

// Annotated format: one JSON document with fields name (string), window
// (optional integer), change_points (optional integer array) and time_series
// (number array). Errors name the offending field.
inline DatasetRecord load_annotated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid document: " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error(path + ": expected a JSON object");

    DatasetRecord rec;
    if (!doc.contains("name") || !doc["name"].is_string())
        throw std::runtime_error(path + ": field 'name' missing or not a string");
    rec.name = doc["name"].get<std::string>();

    if (!doc.contains("time_series") || !doc["time_series"].is_array() ||
        doc["time_series"].empty())
        throw std::runtime_error(path + ": field 'time_series' missing or empty");
    for (const auto& v : doc["time_series"]) {
        if (!v.is_number())
            throw std::runtime_error(path + ": field 'time_series' holds a non-number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw std::runtime_error(path + ": field 'time_series' holds a non-finite value");
        rec.values.push_back(x);
    }

    if (doc.contains("window")) {
        if (!doc["window"].is_number_unsigned() || doc["window"].get<std::size_t>() < 1)
            throw std::runtime_error(path + ": field 'window' must be a positive integer");
        rec.window = doc["window"].get<std::size_t>();
    }

    if (doc.contains("change_points")) {
        if (!doc["change_points"].is_array())
            throw std::runtime_error(path + ": field 'change_points' must be an array");
        std::vector<std::size_t> cps;
        for (const auto& v : doc["change_points"]) {
            if (!v.is_number_unsigned())
                throw std::runtime_error(path +
                                         ": field 'change_points' holds a non-integer");
            cps.push_back(v.get<std::size_t>());
        }
        try {
            validate_change_points(cps, rec.values.size());
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path + ": field 'change_points': " + e.what());
        }
        rec.change_points = std::move(cps);
    }
    return rec;
}

inline DatasetRecord load_series(const std::string& path, SeriesFormat format) {
    return format == SeriesFormat::plain ? load_plain(path) : load_annotated(path);
}

}  // namespace clasp
