#include <cgra/rsp_scheduler.hpp>

#include <cgra/error.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace cgra {

std::string_view to_string(StallKind kind) noexcept {
    return kind == StallKind::rs ? "rs" : "rp";
}

std::vector<ResourceInstance> make_instances(const ArchParams& arch) {
    std::vector<ResourceInstance> out;
    if (!arch.sharing) return out;
    const auto& s = *arch.sharing;
    int id = 0;
    for (int r = 0; r < arch.n_rows; ++r)
        for (int k = 0; k < s.shr; ++k) out.push_back({id++, Scope::row, r, s.stages});
    for (int c = 0; c < arch.m_cols; ++c)
        for (int k = 0; k < s.shc; ++k) out.push_back({id++, Scope::column, c, s.stages});
    return out;
}

ResourcePool::ResourcePool(const ArchParams& arch)
    : shr_(arch.sharing ? arch.sharing->shr : 0),
      shc_(arch.sharing ? arch.sharing->shc : 0),
      n_rows_(arch.n_rows),
      instances_(make_instances(arch)) {}

std::vector<int> ResourcePool::reachable(PeCoord pe) const {
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(shr_ + shc_));
    for (int k = 0; k < shr_; ++k) ids.push_back(pe.row * shr_ + k);
    for (int k = 0; k < shc_; ++k) ids.push_back(n_rows_ * shr_ + pe.col * shc_ + k);
    return ids;
}

bool ResourcePool::is_free(int instance_id, int issue_cycle) const {
    const int stages = instance(instance_id).stages;
    for (int s = 1; s <= stages; ++s)
        if (slots_.count({instance_id, issue_cycle + s - 1, s})) return false;
    return true;
}

int ResourcePool::occupy(int instance_id, int issue_cycle, int op_id) {
    const int stages = instance(instance_id).stages;
    for (int s = 1; s <= stages; ++s)
        if (auto it = slots_.find({instance_id, issue_cycle + s - 1, s}); it != slots_.end())
            return it->second;
    for (int s = 1; s <= stages; ++s) slots_.emplace(std::tuple{instance_id, issue_cycle + s - 1, s}, op_id);
    return -1;
}

int ResourcePool::occupant(int instance_id, int cycle, int stage) const {
    auto it = slots_.find({instance_id, cycle, stage});
    return it == slots_.end() ? -1 : it->second;
}

namespace {

using Key = std::tuple<int, int, int, int>;

Key priority(const Operation& op) { return {op.iteration, op.pe.row, op.pe.col, op.id}; }

void require_valid_context(const Context& ctx, const ArchParams& arch) {
    const auto violations = validate_context(ctx, arch);
    if (!violations.empty())
        throw DomainError("context is not legal on this architecture: " + violations.front().message +
                          (violations.size() > 1
                               ? " (+" + std::to_string(violations.size() - 1) + " more)"
                               : std::string{}));
}

void require_valid(const Context& ctx, const ArchParams& arch) {
    arch.validate();
    require_valid_context(ctx, arch);
}

/// The shared resource serves exactly the context's critical opcodes.
void require_matching_kind(const Context& ctx, const ArchParams& arch) {
    const Opcode kind = arch.sharing->resource_kind;
    if (ctx.critical_opcodes != std::set<Opcode>{kind})
        throw ConfigError("shared resource kind '" + std::string(to_string(kind)) +
                          "' must be the context's only critical opcode");
}

/// Walks a schedule cycle by cycle.  `admit` receives the ops due at the
/// current cycle and returns those that must wait; each non-empty return
/// inserts one whole-array cycle that receives the deferred ops while every
/// later op shifts by one.
struct StallInserter {
    std::vector<Stall> stalls;
    std::map<int, int> cycle_map;  ///< input cycle -> output cycle

    template <typename Admit>
    void run(Context& ctx, StallKind kind, Admit&& admit) {
        std::map<int, std::vector<std::size_t>> by_cycle;
        for (std::size_t i = 0; i < ctx.ops.size(); ++i) by_cycle[ctx.ops[i].cycle].push_back(i);

        int shift = 0;
        for (auto& [cycle, group] : by_cycle) {
            int current = cycle + shift;
            cycle_map[cycle] = current;
            std::vector<std::size_t> pending = std::move(group);
            for (;;) {
                for (std::size_t i : pending) ctx.ops[i].cycle = current;
                std::vector<std::size_t> deferred = admit(pending, current);
                if (deferred.empty()) break;
                ++shift;
                ++current;
                stalls.push_back({current, kind});
                pending = std::move(deferred);
            }
        }
    }
};

RearrangedContext rs_pass(const Context& ctx, const ArchParams& arch, std::map<int, int>* cycle_map) {
    const auto& sharing = *arch.sharing;
    const Opcode kind = sharing.resource_kind;
    const bool has_critical = std::any_of(ctx.ops.begin(), ctx.ops.end(),
                                          [kind](const Operation& op) { return op.opcode == kind; });
    if (sharing.shr == 0 && sharing.shc == 0 && has_critical)
        throw InfeasibleError("no shared instance can serve the critical '" +
                              std::string(to_string(kind)) + "' ops (shr = shc = 0)");

    RearrangedContext out;
    out.base = ctx;
    out.base.critical_stages = sharing.stages;
    out.original_length = ctx.length_cycles();

    ResourcePool pool(arch);
    StallInserter inserter;
    inserter.run(out.base, StallKind::rs, [&](const std::vector<std::size_t>& due, int cycle) {
        std::vector<std::size_t> critical;
        for (std::size_t i : due)
            if (out.base.ops[i].opcode == kind) critical.push_back(i);
        std::sort(critical.begin(), critical.end(), [&](std::size_t a, std::size_t b) {
            return priority(out.base.ops[a]) < priority(out.base.ops[b]);
        });
        std::vector<std::size_t> deferred;
        for (std::size_t i : critical) {
            const Operation& op = out.base.ops[i];
            bool placed = false;
            for (int inst : pool.reachable(op.pe)) {
                if (!pool.is_free(inst, cycle)) continue;
                pool.occupy(inst, cycle, op.id);
                out.assignments[op.id] = inst;
                placed = true;
                break;
            }
            if (!placed) deferred.push_back(i);
        }
        return deferred;
    });

    out.stalls = std::move(inserter.stalls);
    out.rs_stall_count = static_cast<int>(out.stalls.size());
    out.total_cycles = out.original_length + out.rs_stall_count;
    if (cycle_map) *cycle_map = std::move(inserter.cycle_map);
    return out;
}

/// Longest-path stretch: every data edge and every same-PE edge keeps its
/// original gap, plus the extra latency when its source is a critical op.
Context stretch(const Context& ctx, Opcode kind, int extra) {
    Context out = ctx;
    out.critical_stages = ctx.critical_stages + extra;
    if (extra == 0) return out;

    std::vector<std::size_t> order(ctx.ops.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair{ctx.ops[a].cycle, ctx.ops[a].id} < std::pair{ctx.ops[b].cycle, ctx.ops[b].id};
    });

    std::unordered_map<int, std::size_t> index_of;
    index_of.reserve(ctx.ops.size());
    for (std::size_t i = 0; i < ctx.ops.size(); ++i) index_of.emplace(ctx.ops[i].id, i);

    std::map<PeCoord, std::size_t> last_on_pe;
    auto edge_bound = [&](std::size_t from, std::size_t to) {
        const Operation& src = ctx.ops[from];
        const int gap = ctx.ops[to].cycle - src.cycle;
        return out.ops[from].cycle + gap + (src.opcode == kind ? extra : 0);
    };

    for (std::size_t i : order) {
        const Operation& op = ctx.ops[i];
        int cycle = op.cycle;
        for (int dep : op.deps) cycle = std::max(cycle, edge_bound(index_of.at(dep), i));
        if (auto it = last_on_pe.find(op.pe); it != last_on_pe.end())
            cycle = std::max(cycle, edge_bound(it->second, i));
        out.ops[i].cycle = cycle;
        last_on_pe[op.pe] = i;
    }
    return out;
}

RearrangedContext rp_pass(const Context& ctx, const ArchParams& arch) {
    const int target = arch.stages();
    const int extra = target - ctx.critical_stages;
    if (extra < 0)
        throw DomainError("context was scheduled for a " + std::to_string(ctx.critical_stages) +
                          "-stage resource; cannot shorten it to " + std::to_string(target));
    const Opcode kind = arch.sharing ? arch.sharing->resource_kind : Opcode::mult;

    RearrangedContext out;
    out.original_length = ctx.length_cycles();
    out.base = stretch(ctx, kind, extra);
    out.rp_latency_extension = out.base.length_cycles() - out.original_length;

    StallInserter inserter;
    inserter.run(out.base, StallKind::rp, [&](const std::vector<std::size_t>& due, int) {
        // row -> (loads, stores), in priority order
        std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> rows;
        for (std::size_t i : due) {
            const Operation& op = out.base.ops[i];
            if (op.opcode == Opcode::load) rows[op.pe.row].first.push_back(i);
            if (op.opcode == Opcode::store) rows[op.pe.row].second.push_back(i);
        }
        std::vector<std::size_t> deferred;
        auto spill = [&](std::vector<std::size_t>& list, int capacity) {
            if (static_cast<int>(list.size()) <= capacity) return;
            std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
                return priority(out.base.ops[a]) < priority(out.base.ops[b]);
            });
            deferred.insert(deferred.end(), list.begin() + capacity, list.end());
        };
        for (auto& [row, lists] : rows) {
            spill(lists.first, arch.read_buses_per_row);
            spill(lists.second, arch.write_buses_per_row);
        }
        return deferred;
    });

    out.stalls = std::move(inserter.stalls);
    out.rp_stall_count = static_cast<int>(out.stalls.size());
    out.total_cycles = out.original_length + out.rp_latency_extension + out.rp_stall_count;
    return out;
}

} // namespace

RearrangedContext apply_rs(const Context& ctx, const ArchParams& arch) {
    if (!arch.sharing) throw ConfigError("resource sharing needs a shared architecture");
    // shr = shc = 0 is reported as infeasible (when it matters) rather than
    // as a malformed architecture.
    if (arch.sharing->shr == 0 && arch.sharing->shc == 0)
        require_valid_context(ctx, arch);
    else
        require_valid(ctx, arch);
    require_matching_kind(ctx, arch);
    if (ctx.critical_stages != arch.sharing->stages)
        throw DomainError("context is scheduled for " + std::to_string(ctx.critical_stages) +
                          "-stage critical ops but the shared resource has " +
                          std::to_string(arch.sharing->stages) + "; apply resource pipelining first");
    return rs_pass(ctx, arch, nullptr);
}

RearrangedContext apply_rp(const Context& ctx, const ArchParams& arch) {
    require_valid(ctx, arch);
    if (arch.sharing) require_matching_kind(ctx, arch);
    return rp_pass(ctx, arch);
}

RearrangedContext rearrange(const Context& ctx, const ArchParams& arch) {
    if (arch.sharing && arch.sharing->shr == 0 && arch.sharing->shc == 0) return apply_rs(ctx, arch);
    require_valid(ctx, arch);
    if (!arch.sharing) {
        if (ctx.critical_stages != 1)
            throw DomainError("the base architecture has unpipelined critical resources; context "
                              "expects " + std::to_string(ctx.critical_stages) + " stages");
        RearrangedContext out;
        out.base = ctx;
        out.original_length = out.total_cycles = ctx.length_cycles();
        return out;
    }
    require_matching_kind(ctx, arch);

    RearrangedContext rp = rp_pass(ctx, arch);
    std::map<int, int> cycle_map;
    RearrangedContext rs = rs_pass(rp.base, arch, &cycle_map);

    RearrangedContext out;
    out.base = std::move(rs.base);
    out.assignments = std::move(rs.assignments);
    out.original_length = rp.original_length;
    out.rp_latency_extension = rp.rp_latency_extension;
    out.rp_stall_count = rp.rp_stall_count;
    out.rs_stall_count = rs.rs_stall_count;
    for (const Stall& s : rp.stalls) out.stalls.push_back({cycle_map.at(s.inserted_at_cycle), s.kind});
    out.stalls.insert(out.stalls.end(), rs.stalls.begin(), rs.stalls.end());
    std::stable_sort(out.stalls.begin(), out.stalls.end(),
                     [](const Stall& a, const Stall& b) { return a.inserted_at_cycle < b.inserted_at_cycle; });
    out.total_cycles =
        out.original_length + out.rp_latency_extension + out.rs_stall_count + out.rp_stall_count;
    return out;
}

int estimate_cycles_upper_bound(const Context& ctx, const ArchParams& arch) {
    return rearrange(ctx, arch).total_cycles;
}

ResourcePool build_resource_pool(const RearrangedContext& rctx, const ArchParams& arch) {
    ResourcePool pool(arch);
    if (!arch.sharing) {
        if (!rctx.assignments.empty())
            throw InfeasibleError("base architecture has no shared instances to assign");
        return pool;
    }
    const Opcode kind = arch.sharing->resource_kind;
    std::size_t critical = 0;
    for (const auto& op : rctx.base.ops) {
        if (op.opcode != kind) continue;
        ++critical;
        auto it = rctx.assignments.find(op.id);
        if (it == rctx.assignments.end())
            throw InfeasibleError("critical op " + std::to_string(op.id) + " has no instance");
        const int inst = it->second;
        if (inst < 0 || inst >= static_cast<int>(pool.instances().size()))
            throw InfeasibleError("op " + std::to_string(op.id) + " assigned to unknown instance " +
                                  std::to_string(inst));
        if (!pool.instance(inst).covers(op.pe))
            throw InfeasibleError("instance " + std::to_string(inst) + " cannot reach op " +
                                  std::to_string(op.id) + " at PE(" + std::to_string(op.pe.row) +
                                  "," + std::to_string(op.pe.col) + ")");
        if (int other = pool.occupy(inst, op.cycle, op.id); other >= 0)
            throw InfeasibleError("ops " + std::to_string(other) + " and " + std::to_string(op.id) +
                                  " collide on instance " + std::to_string(inst) + " at cycle " +
                                  std::to_string(op.cycle));
    }
    if (critical != rctx.assignments.size())
        throw InfeasibleError("assignments name ops that are not critical");
    return pool;
}

} // namespace cgra
