#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <cgra/opcode.hpp>

namespace cgra {

/// Critical resource pulled out of the PEs and placed along rows/columns.
struct SharedResource {
    Opcode resource_kind = Opcode::mult;
    int shr = 0;     ///< shared instances per row
    int shc = 0;     ///< shared instances per column
    int stages = 1;  ///< pipeline depth of each instance (1 = unpipelined)

    bool operator==(const SharedResource&) const = default;
};

/// Architecture template parameters.  `sharing == std::nullopt` is the Base
/// architecture, where every PE carries its own critical resource.
struct ArchParams {
    int n_rows = 8;
    int m_cols = 8;
    std::optional<SharedResource> sharing;
    int read_buses_per_row = 2;
    int write_buses_per_row = 1;
    int data_width_bits = 16;

    bool is_base() const noexcept { return !sharing.has_value(); }
    /// Pipeline depth of the critical resource; 1 for Base.
    int stages() const noexcept { return sharing ? sharing->stages : 1; }

    /// Throws ConfigError on any broken invariant.
    void validate() const;

    bool operator==(const ArchParams&) const = default;

    static ArchParams base(int n_rows, int m_cols);
    static ArchParams shared(int n_rows, int m_cols, int shr, int shc, int stages,
                             Opcode kind = Opcode::mult);
};

enum class Variant { base, rs, rsp };

std::string_view to_string(Variant v) noexcept;

/// Key into the measured array-delay table.  RS means an unpipelined shared
/// resource; RSP a pipelined one (`stages` > 1).
struct VariantKey {
    Variant variant = Variant::base;
    int shr = 0;
    int shc = 0;
    int stages = 1;

    auto operator<=>(const VariantKey&) const = default;
    std::string label() const;
};

VariantKey variant_key(const ArchParams& arch) noexcept;

/// Per-component synthesis figures.  Defaults are the published PE and
/// array synthesis results for the 8x8, 16-bit base design.
struct CostTable {
    double pe_area = 910.0;
    double sh_pe_area = 489.0;
    double reg_area = 13.0;
    double sh_res_area = 416.0;
    std::map<std::pair<int, int>, double> sw_area;
    std::map<VariantKey, double> measured_array_delay;
    std::map<std::string, double> component_delays;
    /// Linear switch-area model for (shr, shc) pairs that were never synthesized.
    bool sw_area_fallback = false;

    static CostTable defaults();

    /// Bus-switch area for a sharing shape; ConfigError if unknown and the
    /// fallback is disabled.
    double switch_area(int shr, int shc) const;

    void validate() const;

    bool operator==(const CostTable&) const = default;
};

struct AreaEstimate {
    double estimated_slices = 0.0;
    double base_slices = 0.0;
    bool satisfies_constraint = false;

    bool operator==(const AreaEstimate&) const = default;
};

/// Pre-synthesis array area:
///   n*m*(sh_pe + reg' + sw(shr,shc)) + sh_res*(n*shr + m*shc)
/// with reg' = reg_area only for pipelined resources.  Base is n*m*pe_area.
AreaEstimate estimate_hw_cost(const ArchParams& arch, const CostTable& costs);

/// Strict `estimated < base`.
bool check_cost_constraint(const AreaEstimate& est) noexcept;

/// Measured critical-path delay of the whole array (ns).
double lookup_array_delay(const ArchParams& arch, const CostTable& costs);

/// 100*(base - candidate)/base, unrounded.
double area_reduction_ratio(double base_slices, double candidate_slices);

} // namespace cgra
