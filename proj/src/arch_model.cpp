#include <cgra/arch_model.hpp>

#include <cgra/error.hpp>

#include <sstream>

namespace cgra {

void ArchParams::validate() const {
    if (n_rows < 1 || m_cols < 1)
        throw ConfigError("array dimensions must be positive, got " + std::to_string(n_rows) +
                          "x" + std::to_string(m_cols));
    if (read_buses_per_row < 1 || write_buses_per_row < 1)
        throw ConfigError("each row needs at least one read and one write bus");
    if (data_width_bits < 2 || data_width_bits > 32)
        throw ConfigError("data_width_bits must lie in [2, 32], got " +
                          std::to_string(data_width_bits));
    if (sharing) {
        const auto& s = *sharing;
        if (s.shr < 0 || s.shc < 0)
            throw ConfigError("shared resource counts must be nonnegative");
        if (s.shr + s.shc < 1)
            throw ConfigError("shared architecture needs shr + shc >= 1");
        if (s.stages < 1)
            throw ConfigError("pipeline stages must be >= 1, got " + std::to_string(s.stages));
        if (!is_compute(s.resource_kind))
            throw ConfigError("resource kind '" + std::string(to_string(s.resource_kind)) +
                              "' cannot be shared");
    }
}

ArchParams ArchParams::base(int n_rows, int m_cols) {
    ArchParams a;
    a.n_rows = n_rows;
    a.m_cols = m_cols;
    return a;
}

ArchParams ArchParams::shared(int n_rows, int m_cols, int shr, int shc, int stages, Opcode kind) {
    ArchParams a = base(n_rows, m_cols);
    a.sharing = SharedResource{kind, shr, shc, stages};
    return a;
}

std::string_view to_string(Variant v) noexcept {
    switch (v) {
    case Variant::base: return "base";
    case Variant::rs: return "rs";
    case Variant::rsp: return "rsp";
    }
    return "?";
}

std::string VariantKey::label() const {
    std::ostringstream os;
    switch (variant) {
    case Variant::base: return "Base";
    case Variant::rs: os << "RS(" << shr << "," << shc << ")"; break;
    case Variant::rsp: os << "RSP(" << shr << "," << shc << ";s" << stages << ")"; break;
    }
    return os.str();
}

VariantKey variant_key(const ArchParams& arch) noexcept {
    if (!arch.sharing) return VariantKey{};
    const auto& s = *arch.sharing;
    return VariantKey{s.stages > 1 ? Variant::rsp : Variant::rs, s.shr, s.shc, s.stages};
}

CostTable CostTable::defaults() {
    CostTable t;
    t.sw_area = {{{1, 0}, 10.0}, {{2, 0}, 34.0}, {{2, 1}, 55.0}, {{2, 2}, 68.0}};
    t.measured_array_delay = {
        {VariantKey{Variant::base, 0, 0, 1}, 26.0},
        {VariantKey{Variant::rs, 1, 0, 1}, 26.85},
        {VariantKey{Variant::rs, 2, 0, 1}, 27.97},
        {VariantKey{Variant::rs, 2, 1, 1}, 28.89},
        {VariantKey{Variant::rs, 2, 2, 1}, 30.23},
        {VariantKey{Variant::rsp, 1, 0, 2}, 16.72},
        {VariantKey{Variant::rsp, 2, 0, 2}, 17.26},
        {VariantKey{Variant::rsp, 2, 1, 2}, 18.21},
        {VariantKey{Variant::rsp, 2, 2, 2}, 18.83},
    };
    t.component_delays = {
        {"pe", 25.6},          {"multiplexer", 1.3},   {"alu", 11.5},
        {"multiplier", 19.7},  {"shift_logic", 2.5},   {"sh_pe", 15.3},
        {"sw_1_0", 0.7},       {"sw_2_0", 1.2},        {"sw_2_1", 1.8},
        {"sw_2_2", 2.0},
    };
    return t;
}

double CostTable::switch_area(int shr, int shc) const {
    if (auto it = sw_area.find({shr, shc}); it != sw_area.end()) return it->second;
    if (sw_area_fallback) {
        // Linear in port count, anchored at the single-port switch.
        return 10.0 + 29.0 * static_cast<double>(shr + shc - 1);
    }
    throw ConfigError("no bus-switch area for (shr=" + std::to_string(shr) +
                      ", shc=" + std::to_string(shc) + ") and sw_area fallback is disabled");
}

void CostTable::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be strictly positive");
    };
    positive(pe_area, "pe_area");
    positive(sh_pe_area, "sh_pe_area");
    positive(reg_area, "reg_area");
    positive(sh_res_area, "sh_res_area");
    if (!(sh_pe_area < pe_area)) throw ConfigError("sh_pe_area must be smaller than pe_area");
    for (const auto& [key, v] : sw_area) positive(v, "sw_area entry");
    for (const auto& [key, v] : measured_array_delay) positive(v, "measured_array_delay entry");
    for (const auto& [key, v] : component_delays) positive(v, "component_delays entry");
}

AreaEstimate estimate_hw_cost(const ArchParams& arch, const CostTable& costs) {
    const double cells = static_cast<double>(arch.n_rows) * arch.m_cols;
    AreaEstimate est;
    est.base_slices = cells * costs.pe_area;
    if (!arch.sharing) {
        est.estimated_slices = est.base_slices;
    } else {
        const auto& s = *arch.sharing;
        const double reg = s.stages > 1 ? costs.reg_area : 0.0;
        const double per_pe = costs.sh_pe_area + reg + costs.switch_area(s.shr, s.shc);
        const double shared_units =
            static_cast<double>(arch.n_rows) * s.shr + static_cast<double>(arch.m_cols) * s.shc;
        est.estimated_slices = cells * per_pe + costs.sh_res_area * shared_units;
    }
    est.satisfies_constraint = check_cost_constraint(est);
    return est;
}

bool check_cost_constraint(const AreaEstimate& est) noexcept {
    return est.estimated_slices < est.base_slices;
}

double lookup_array_delay(const ArchParams& arch, const CostTable& costs) {
    const VariantKey key = variant_key(arch);
    if (auto it = costs.measured_array_delay.find(key); it != costs.measured_array_delay.end())
        return it->second;
    std::string known;
    for (const auto& [k, v] : costs.measured_array_delay) {
        if (!known.empty()) known += ", ";
        known += k.label();
    }
    throw ConfigError("no measured array delay for " + key.label() + "; known variants: " + known);
}

double area_reduction_ratio(double base_slices, double candidate_slices) {
    if (!(base_slices > 0.0))
        throw DomainError("area_reduction_ratio: base area must be positive");
    return 100.0 * (base_slices - candidate_slices) / base_slices;
}

} // namespace cgra
