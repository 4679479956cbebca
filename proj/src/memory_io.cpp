#include <cgra/io.hpp>

#include "json_util.hpp"

#include <set>

namespace cgra {

using namespace detail;

MemoryImage parse_memory_image(std::string_view text) {
    const json doc = parse_document(text);
    as_object(doc, "");
    MemoryImage mem;
    mem.width_bits = int_or(doc, "", "width_bits", 16);
    if (mem.width_bits < 2 || mem.width_bits > 32) fail("width_bits", "must lie in [2, 32]");

    std::set<std::string> names;
    if (const json* regions = optional_field(doc, "regions")) {
        as_array(*regions, "regions");
        for (std::size_t i = 0; i < regions->size(); ++i) {
            const std::string p = index("regions", i);
            const json& r = as_object((*regions)[i], p);
            MemoryRegion reg;
            reg.name = as_string(require(r, p, "name"), child(p, "name"));
            reg.base_address = as_int64(require(r, p, "base_address"), child(p, "base_address"));
            reg.rows = as_int(require(r, p, "rows"), child(p, "rows"));
            reg.cols = as_int(require(r, p, "cols"), child(p, "cols"));
            if (reg.rows < 0 || reg.cols < 0) fail(p, "region dimensions must be nonnegative");
            if (!names.insert(reg.name).second) fail(child(p, "name"), "duplicate region '" + reg.name + "'");

            // Row-major: either a flat list or a list of rows.  null marks
            // an uninitialised word.
            if (const json* values = optional_field(r, "values")) {
                const std::string q = child(p, "values");
                as_array(*values, q);
                std::vector<std::pair<std::string, const json*>> flat;
                for (std::size_t k = 0; k < values->size(); ++k) {
                    const json& v = (*values)[k];
                    if (v.is_array()) {
                        if (static_cast<int>(v.size()) != reg.cols)
                            fail(index(q, k), "row has " + std::to_string(v.size()) + " values, expected " +
                                                  std::to_string(reg.cols));
                        for (std::size_t c = 0; c < v.size(); ++c) flat.emplace_back(index(index(q, k), c), &v[c]);
                    } else {
                        flat.emplace_back(index(q, k), &v);
                    }
                }
                const auto expected = static_cast<std::size_t>(reg.rows) * static_cast<std::size_t>(reg.cols);
                if (flat.size() != expected)
                    fail(q, "holds " + std::to_string(flat.size()) + " values, expected " + std::to_string(expected));
                for (std::size_t k = 0; k < flat.size(); ++k) {
                    if (flat[k].second->is_null()) continue;
                    mem.store(reg.base_address + static_cast<std::int64_t>(k), as_int64(*flat[k].second, flat[k].first));
                }
            }
            mem.regions.push_back(std::move(reg));
        }
    }

    if (const json* words = optional_field(doc, "words")) {
        as_array(*words, "words");
        for (std::size_t i = 0; i < words->size(); ++i) {
            const std::string p = index("words", i);
            mem.store(as_int64(require((*words)[i], p, "address"), child(p, "address")),
                      as_int64(require((*words)[i], p, "value"), child(p, "value")));
        }
    }

    if (const json* constants = optional_field(doc, "constants")) {
        as_object(*constants, "constants");
        for (const auto& [name, v] : constants->items()) mem.constants[name] = as_int64(v, child("constants", name));
    }
    return mem;
}

std::string serialize_memory_image(const MemoryImage& mem) {
    ordered_json j;
    j["width_bits"] = mem.width_bits;
    j["regions"] = ordered_json::array();
    std::set<std::int64_t> covered;
    for (const auto& reg : mem.regions) {
        ordered_json rows = ordered_json::array();
        for (int r = 0; r < reg.rows; ++r) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < reg.cols; ++c) {
                const std::int64_t addr = reg.base_address + static_cast<std::int64_t>(r) * reg.cols + c;
                covered.insert(addr);
                auto it = mem.words.find(addr);
                row.push_back(it == mem.words.end() ? ordered_json(nullptr) : ordered_json(it->second));
            }
            rows.push_back(std::move(row));
        }
        j["regions"].push_back(ordered_json{{"name", reg.name},
                                            {"base_address", reg.base_address},
                                            {"rows", reg.rows},
                                            {"cols", reg.cols},
                                            {"values", std::move(rows)}});
    }
    ordered_json extra = ordered_json::array();
    for (const auto& [addr, v] : mem.words)
        if (!covered.count(addr)) extra.push_back(ordered_json{{"address", addr}, {"value", v}});
    if (!extra.empty()) j["words"] = std::move(extra);
    j["constants"] = ordered_json::object();
    for (const auto& [name, v] : mem.constants) j["constants"][name] = v;
    return j.dump(2) + "\n";
}

} // namespace cgra
