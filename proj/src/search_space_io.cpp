#include <cgra/io.hpp>

#include "json_util.hpp"

namespace cgra {

using namespace detail;

namespace {

std::vector<int> int_list(const json& j, const std::string& path) {
    as_array(j, path);
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], index(path, i)));
    return out;
}

} // namespace

SearchSpace parse_search_space(std::string_view text) {
    const json doc = parse_document(text);
    as_object(doc, "");
    SearchSpace s;
    if (const json* k = optional_field(doc, "resource_kinds")) {
        as_array(*k, "resource_kinds");
        s.resource_kinds.clear();
        for (std::size_t i = 0; i < k->size(); ++i) {
            const auto name = as_string((*k)[i], index("resource_kinds", i));
            const auto op = opcode_from_string(name);
            if (!op) fail(index("resource_kinds", i), "unknown opcode '" + name + "'");
            s.resource_kinds.push_back(*op);
        }
    }
    if (const json* f = optional_field(doc, "stage_options")) s.stage_options = int_list(*f, "stage_options");
    if (const json* f = optional_field(doc, "shr_options")) s.shr_options = int_list(*f, "shr_options");
    if (const json* f = optional_field(doc, "shc_options")) s.shc_options = int_list(*f, "shc_options");
    if (const json* f = optional_field(doc, "max_area")) s.max_area = as_number(*f, "max_area");
    if (const json* f = optional_field(doc, "max_total_et_factor"))
        s.max_total_et_factor = as_number(*f, "max_total_et_factor");
    if (const json* f = optional_field(doc, "aggregate")) {
        const auto name = as_string(*f, "aggregate");
        if (name == "sum") s.aggregate = EtAggregate::sum;
        else if (name == "max") s.aggregate = EtAggregate::max;
        else fail("aggregate", "expected sum or max, got '" + name + "'");
    }
    try {
        s.validate();
    } catch (const ConfigError& e) {
        fail("", e.what());
    }
    return s;
}

std::string serialize_search_space(const SearchSpace& space) {
    ordered_json j;
    j["resource_kinds"] = ordered_json::array();
    for (Opcode k : space.resource_kinds) j["resource_kinds"].push_back(std::string(to_string(k)));
    j["stage_options"] = space.stage_options;
    j["shr_options"] = space.shr_options;
    j["shc_options"] = space.shc_options;
    j["max_area"] = space.max_area ? ordered_json(*space.max_area) : ordered_json(nullptr);
    j["max_total_et_factor"] = space.max_total_et_factor;
    j["aggregate"] = space.aggregate == EtAggregate::sum ? "sum" : "max";
    return j.dump(2) + "\n";
}

} // namespace cgra
