#pragma once

#include <map>
#include <tuple>
#include <vector>

#include <cgra/arch_model.hpp>
#include <cgra/kernel_ir.hpp>

namespace cgra {

enum class StallKind { rs, rp };

std::string_view to_string(StallKind kind) noexcept;

/// A whole-array cycle inserted into the schedule.
struct Stall {
    int inserted_at_cycle = 0;
    StallKind kind = StallKind::rs;

    bool operator==(const Stall&) const = default;
};

enum class Scope { row, column };

/// One shared critical-resource instance.  Row instances come first
/// (id = row * shr + k), then column instances (id = n*shr + col * shc + k).
struct ResourceInstance {
    int id = 0;
    Scope scope = Scope::row;
    int index = 0;  ///< row or column number
    int stages = 1;

    bool covers(PeCoord pe) const noexcept {
        return scope == Scope::row ? pe.row == index : pe.col == index;
    }
};

std::vector<ResourceInstance> make_instances(const ArchParams& arch);

/// Stage-level occupancy of the shared instances.  An op issued at t on an
/// instance holds stage s at cycle t + s - 1.
class ResourcePool {
public:
    explicit ResourcePool(const ArchParams& arch);

    const std::vector<ResourceInstance>& instances() const noexcept { return instances_; }
    const ResourceInstance& instance(int id) const { return instances_.at(static_cast<std::size_t>(id)); }

    /// Row instances of `row`, then column instances of `col`.
    std::vector<int> reachable(PeCoord pe) const;

    bool is_free(int instance_id, int issue_cycle) const;
    /// Returns the op already holding a conflicting slot, or -1 on success.
    int occupy(int instance_id, int issue_cycle, int op_id);

    /// Occupying op, or -1 if the slot is free.
    int occupant(int instance_id, int cycle, int stage) const;

private:
    int shr_ = 0;
    int shc_ = 0;
    int n_rows_ = 0;
    std::vector<ResourceInstance> instances_;
    std::map<std::tuple<int, int, int>, int> slots_;  // (instance, cycle, stage) -> op id
};

/// A context after resource-sharing / resource-pipelining rearrangement.
struct RearrangedContext {
    Context base;                     ///< rescheduled cycles
    std::map<int, int> assignments;   ///< critical op id -> instance id
    std::vector<Stall> stalls;
    int original_length = 0;
    int rs_stall_count = 0;
    int rp_stall_count = 0;
    int rp_latency_extension = 0;
    int total_cycles = 0;             ///< original + extension + RS + RP stalls

    /// Last cycle any op of the rescheduled context occupies; never exceeds
    /// total_cycles.
    int makespan() const { return base.length_cycles(); }

    bool operator==(const RearrangedContext&) const = default;
};

/// Resource-sharing pass: per cycle, critical ops take free reachable
/// instances in (iteration, row, col) order, row instances before column
/// ones; whatever is left is deferred into an inserted whole-array cycle.
RearrangedContext apply_rs(const Context& ctx, const ArchParams& arch);

/// Resource-pipelining pass: deepens critical ops to the architecture's
/// pipeline depth, delays their data and same-PE successors by the extra
/// latency, then inserts whole-array cycles wherever the stretched schedule
/// oversubscribes a row bus.
RearrangedContext apply_rp(const Context& ctx, const ArchParams& arch);

/// RP expansion followed by RS assignment over the expanded schedule.
/// Base architectures return the context unchanged.
RearrangedContext rearrange(const Context& ctx, const ArchParams& arch);

/// Upper bound on the cycles of `ctx` on `arch`.
int estimate_cycles_upper_bound(const Context& ctx, const ArchParams& arch);

/// Rebuilds the resource pool from the assignments, checking that every
/// critical op has exactly one covering instance and no slot is held twice.
/// Throws InfeasibleError on the first problem.
ResourcePool build_resource_pool(const RearrangedContext& rctx, const ArchParams& arch);

} // namespace cgra
