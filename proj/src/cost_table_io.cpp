#include <cgra/io.hpp>

#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace cgra {

using namespace detail;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw ConfigError("error while reading '" + path.string() + "'");
    return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ConfigError("error while writing '" + path.string() + "'");
}

namespace {

Opcode parse_opcode(const json& j, const std::string& path) {
    const auto name = as_string(j, path);
    const auto op = opcode_from_string(name);
    if (!op) fail(path, "unknown opcode '" + name + "'");
    return *op;
}

Variant parse_variant(const json& j, const std::string& path) {
    const auto name = as_string(j, path);
    if (name == "base") return Variant::base;
    if (name == "rs") return Variant::rs;
    if (name == "rsp") return Variant::rsp;
    fail(path, "unknown variant '" + name + "' (expected base, rs or rsp)");
}

} // namespace

ArchParams parse_arch(std::string_view text) {
    const json doc = parse_document(text);
    as_object(doc, "");
    ArchParams a;
    a.n_rows = int_or(doc, "", "n_rows", a.n_rows);
    a.m_cols = int_or(doc, "", "m_cols", a.m_cols);
    a.read_buses_per_row = int_or(doc, "", "read_buses_per_row", a.read_buses_per_row);
    a.write_buses_per_row = int_or(doc, "", "write_buses_per_row", a.write_buses_per_row);
    a.data_width_bits = int_or(doc, "", "data_width_bits", a.data_width_bits);
    if (const json* s = optional_field(doc, "sharing")) {
        const std::string p = "sharing";
        as_object(*s, p);
        SharedResource r;
        if (const json* k = optional_field(*s, "resource_kind")) r.resource_kind = parse_opcode(*k, child(p, "resource_kind"));
        r.shr = int_or(*s, p, "shr", 0);
        r.shc = int_or(*s, p, "shc", 0);
        r.stages = int_or(*s, p, "stages", 1);
        a.sharing = r;
    }
    try {
        a.validate();
    } catch (const ConfigError& e) {
        fail("", e.what());
    }
    return a;
}

std::string serialize_arch(const ArchParams& arch) {
    ordered_json j;
    j["n_rows"] = arch.n_rows;
    j["m_cols"] = arch.m_cols;
    j["read_buses_per_row"] = arch.read_buses_per_row;
    j["write_buses_per_row"] = arch.write_buses_per_row;
    j["data_width_bits"] = arch.data_width_bits;
    if (arch.sharing) {
        const auto& s = *arch.sharing;
        j["sharing"] = ordered_json{{"resource_kind", std::string(to_string(s.resource_kind))},
                                    {"shr", s.shr},
                                    {"shc", s.shc},
                                    {"stages", s.stages}};
    } else {
        j["sharing"] = nullptr;
    }
    return j.dump(2) + "\n";
}

CostTable parse_cost_table(std::string_view text) {
    const json doc = parse_document(text);
    as_object(doc, "");
    CostTable t;
    t.pe_area = as_number(require(doc, "", "pe_area"), "pe_area");
    t.sh_pe_area = as_number(require(doc, "", "sh_pe_area"), "sh_pe_area");
    t.reg_area = as_number(require(doc, "", "reg_area"), "reg_area");
    t.sh_res_area = as_number(require(doc, "", "sh_res_area"), "sh_res_area");
    if (const json* f = optional_field(doc, "sw_area_fallback")) t.sw_area_fallback = as_bool(*f, "sw_area_fallback");

    const json& sw = as_array(require(doc, "", "sw_area"), "sw_area");
    for (std::size_t i = 0; i < sw.size(); ++i) {
        const std::string p = index("sw_area", i);
        const int shr = as_int(require(sw[i], p, "shr"), child(p, "shr"));
        const int shc = as_int(require(sw[i], p, "shc"), child(p, "shc"));
        const double slices = as_number(require(sw[i], p, "slices"), child(p, "slices"));
        if (!t.sw_area.emplace(std::pair{shr, shc}, slices).second) fail(p, "duplicate (shr, shc) entry");
    }

    const json& md = as_array(require(doc, "", "measured_array_delay"), "measured_array_delay");
    for (std::size_t i = 0; i < md.size(); ++i) {
        const std::string p = index("measured_array_delay", i);
        VariantKey key;
        key.variant = parse_variant(require(md[i], p, "variant"), child(p, "variant"));
        key.shr = int_or(md[i], p, "shr", 0);
        key.shc = int_or(md[i], p, "shc", 0);
        key.stages = int_or(md[i], p, "stages", key.variant == Variant::rsp ? 2 : 1);
        if (key.variant == Variant::rsp && key.stages < 2) fail(child(p, "stages"), "rsp entries need stages >= 2");
        if (key.variant != Variant::rsp && key.stages != 1) fail(child(p, "stages"), "only rsp entries are pipelined");
        if (key.variant == Variant::base && (key.shr != 0 || key.shc != 0))
            fail(p, "base entries carry no sharing shape");
        const double ns = as_number(require(md[i], p, "ns"), child(p, "ns"));
        if (!t.measured_array_delay.emplace(key, ns).second) fail(p, "duplicate variant " + key.label());
    }

    if (const json* cd = optional_field(doc, "component_delays")) {
        as_object(*cd, "component_delays");
        for (const auto& [name, v] : cd->items())
            t.component_delays[name] = as_number(v, child("component_delays", name));
    }
    try {
        t.validate();
    } catch (const ConfigError& e) {
        fail("", e.what());
    }
    return t;
}

std::string serialize_cost_table(const CostTable& costs) {
    ordered_json j;
    j["pe_area"] = costs.pe_area;
    j["sh_pe_area"] = costs.sh_pe_area;
    j["reg_area"] = costs.reg_area;
    j["sh_res_area"] = costs.sh_res_area;
    j["sw_area_fallback"] = costs.sw_area_fallback;
    j["sw_area"] = ordered_json::array();
    for (const auto& [key, slices] : costs.sw_area)
        j["sw_area"].push_back(ordered_json{{"shr", key.first}, {"shc", key.second}, {"slices", slices}});
    j["measured_array_delay"] = ordered_json::array();
    for (const auto& [key, ns] : costs.measured_array_delay) {
        ordered_json e{{"variant", std::string(to_string(key.variant))}, {"shr", key.shr}, {"shc", key.shc}};
        if (key.variant == Variant::rsp) e["stages"] = key.stages;
        e["ns"] = ns;
        j["measured_array_delay"].push_back(std::move(e));
    }
    j["component_delays"] = ordered_json::object();
    for (const auto& [name, ns] : costs.component_delays) j["component_delays"][name] = ns;
    return j.dump(2) + "\n";
}

CostTable load_cost_table(const std::string& path_or_default) {
    if (path_or_default == "default") return CostTable::defaults();
    const std::string text = read_text_file(path_or_default);
    try {
        return parse_cost_table(text);
    } catch (const ParseError& e) {
        throw ParseError(path_or_default + ": " + e.what());
    }
}

} // namespace cgra
