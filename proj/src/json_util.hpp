#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "json.hpp"

#include <cgra/error.hpp>

namespace cgra::detail {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
    throw ParseError((path.empty() ? std::string("document") : path) + ": " + msg);
}

inline std::string child(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

inline json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("document: malformed JSON: ") + e.what());
    }
}

inline const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

inline const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

inline const json& require(const json& obj, const std::string& path, std::string_view key) {
    as_object(obj, path);
    auto it = obj.find(key);
    if (it == obj.end()) fail(child(path, key), "missing required field");
    return *it;
}

inline const json* optional_field(const json& obj, std::string_view key) {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline std::int64_t as_int64(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            fail(path, "integer out of range");
        return static_cast<std::int64_t>(v);
    }
    fail(path, "expected an integer");
}

inline int as_int(const json& j, const std::string& path) {
    const auto v = as_int64(j, path);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        fail(path, "integer out of range");
    return static_cast<int>(v);
}

inline double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

inline std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

inline bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

inline int int_or(const json& obj, const std::string& path, std::string_view key, int fallback) {
    const json* f = optional_field(obj, key);
    return f ? as_int(*f, child(path, key)) : fallback;
}

} // namespace cgra::detail
