#pragma once

// Experiment records and their CSV/JSON serialization.  CSV is RFC-4180
// (quote when a field contains comma, quote, CR or LF; double embedded
// quotes); floats print with 17 significant digits so a written grid
// round-trips bit for bit.

#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kbt/errors.hpp"

namespace kbt {

using FieldValue = std::variant<long long, double, std::string, bool>;

struct ExperimentRecord {
    std::vector<std::pair<std::string, FieldValue>> fields;

    void put(const std::string& key, long long v) { fields.emplace_back(key, v); }
    void put(const std::string& key, unsigned long long v) {
        fields.emplace_back(key, static_cast<long long>(v));
    }
    void put(const std::string& key, int v) {
        fields.emplace_back(key, static_cast<long long>(v));
    }
    void put(const std::string& key, double v) { fields.emplace_back(key, v); }
    void put(const std::string& key, const std::string& v) {
        fields.emplace_back(key, v);
    }
    void put(const std::string& key, const char* v) {
        fields.emplace_back(key, std::string(v));
    }
    void put_bool(const std::string& key, bool v) { fields.emplace_back(key, v); }

    const FieldValue* find(const std::string& key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return &v;
        return nullptr;
    }

    double number(const std::string& key) const {
        const FieldValue* v = find(key);
        if (!v) throw RangeError("record has no field " + key);
        if (std::holds_alternative<long long>(*v))
            return static_cast<double>(std::get<long long>(*v));
        if (std::holds_alternative<double>(*v)) return std::get<double>(*v);
        if (std::holds_alternative<bool>(*v)) return std::get<bool>(*v) ? 1 : 0;
        throw RangeError("record field " + key + " is not numeric");
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string field_to_string(const FieldValue& v) {
    if (std::holds_alternative<long long>(v))
        return std::to_string(std::get<long long>(v));
    if (std::holds_alternative<double>(v))
        return format_double(std::get<double>(v));
    if (std::holds_alternative<bool>(v))
        return std::get<bool>(v) ? "true" : "false";
    return std::get<std::string>(v);
}

inline std::string csv_escape(const std::string& s) {
    bool needs_quote = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline void write_csv(std::ostream& os,
                      const std::vector<ExperimentRecord>& records) {
    if (records.empty()) return;
    const auto& header = records.front().fields;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << detail::csv_escape(header[i].first);
    }
    os << "\r\n";
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < rec.fields.size(); ++i) {
            if (i) os << ',';
            os << detail::csv_escape(
                detail::field_to_string(rec.fields[i].second));
        }
        os << "\r\n";
    }
}

inline nlohmann::json record_to_json(const ExperimentRecord& rec) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : rec.fields) {
        if (std::holds_alternative<long long>(v))
            j[k] = std::get<long long>(v);
        else if (std::holds_alternative<double>(v))
            j[k] = std::get<double>(v);
        else if (std::holds_alternative<bool>(v))
            j[k] = std::get<bool>(v);
        else
            j[k] = std::get<std::string>(v);
    }
    return j;
}

inline void write_json(std::ostream& os,
                       const std::vector<ExperimentRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rec : records) arr.push_back(record_to_json(rec));
    os << arr.dump(2) << "\n";
}

}  // namespace kbt
