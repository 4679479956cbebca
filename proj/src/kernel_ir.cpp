#include <cgra/kernel_ir.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace cgra {

namespace {

constexpr std::pair<Opcode, std::string_view> kOpcodeNames[] = {
    {Opcode::load, "load"}, {Opcode::store, "store"}, {Opcode::mult, "mult"},
    {Opcode::add, "add"},   {Opcode::sub, "sub"},     {Opcode::shift, "shift"},
    {Opcode::abs, "abs"},   {Opcode::nop, "nop"},
};

std::string where(const Operation& op) {
    std::ostringstream os;
    os << "op " << op.id << " (" << to_string(op.opcode) << " at PE(" << op.pe.row << ","
       << op.pe.col << "), cycle " << op.cycle << ")";
    return os.str();
}

} // namespace

std::string_view to_string(Opcode op) noexcept {
    for (const auto& [code, name] : kOpcodeNames)
        if (code == op) return name;
    return "?";
}

std::optional<Opcode> opcode_from_string(std::string_view name) noexcept {
    for (const auto& [code, n] : kOpcodeNames)
        if (n == name) return code;
    return std::nullopt;
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
    case ViolationKind::out_of_bounds: return "out_of_bounds";
    case ViolationKind::read_bus: return "read_bus";
    case ViolationKind::write_bus: return "write_bus";
    case ViolationKind::dependence_order: return "dependence_order";
    case ViolationKind::pe_conflict: return "pe_conflict";
    case ViolationKind::iteration_order: return "iteration_order";
    }
    return "?";
}

int Context::length_cycles() const {
    int len = 0;
    for (const auto& op : ops) len = std::max(len, op.cycle + occupancy(op) - 1);
    return len;
}

const Operation* Context::find(int id) const {
    auto it = std::find_if(ops.begin(), ops.end(), [id](const Operation& o) { return o.id == id; });
    return it == ops.end() ? nullptr : &*it;
}

std::optional<std::vector<int>> bind_reg_operands(const Operation& op,
                                                  const std::unordered_map<int, PeCoord>& pe_of) {
    std::vector<int> bound;
    std::vector<bool> used(op.deps.size(), false);
    for (const auto& operand : op.operands) {
        const auto* reg = std::get_if<RegOperand>(&operand);
        if (!reg) continue;
        bool found = false;
        for (std::size_t d = 0; d < op.deps.size(); ++d) {
            if (used[d]) continue;
            auto it = pe_of.find(op.deps[d]);
            if (it == pe_of.end() || it->second != reg->pe) continue;
            used[d] = true;
            bound.push_back(op.deps[d]);
            found = true;
            break;
        }
        if (!found) return std::nullopt;
    }
    return bound;
}

int result_width(const Operation& op) {
    switch (op.opcode) {
    case Opcode::load:
        return static_cast<int>(std::count_if(op.operands.begin(), op.operands.end(), [](const Operand& o) {
            return std::holds_alternative<MemOperand>(o);
        }));
    case Opcode::store:
    case Opcode::nop: return 0;
    default: return 1;
    }
}

std::vector<Violation> validate_context(const Context& ctx, const ArchParams& arch) {
    std::vector<Violation> out;

    std::unordered_map<int, const Operation*> by_id;
    by_id.reserve(ctx.ops.size());
    for (const auto& op : ctx.ops) by_id.emplace(op.id, &op);

    // (row, cycle) -> {loads, stores}
    std::map<std::pair<int, int>, std::pair<int, int>> bus_use;
    std::map<PeCoord, std::vector<const Operation*>> per_pe;

    for (const auto& op : ctx.ops) {
        if (op.pe.row < 0 || op.pe.row >= arch.n_rows || op.pe.col < 0 || op.pe.col >= arch.m_cols) {
            out.push_back({ViolationKind::out_of_bounds, op.id, op.pe.row, op.pe.col, op.cycle,
                           where(op) + " lies outside the " + std::to_string(arch.n_rows) + "x" +
                               std::to_string(arch.m_cols) + " array"});
        }
        if (op.opcode == Opcode::load) ++bus_use[{op.pe.row, op.cycle}].first;
        if (op.opcode == Opcode::store) ++bus_use[{op.pe.row, op.cycle}].second;
        if (op.opcode != Opcode::nop) per_pe[op.pe].push_back(&op);

        for (int dep : op.deps) {
            auto it = by_id.find(dep);
            if (it == by_id.end()) {
                out.push_back({ViolationKind::dependence_order, op.id, op.pe.row, op.pe.col, op.cycle,
                               where(op) + " depends on missing op " + std::to_string(dep)});
                continue;
            }
            const Operation& producer = *it->second;
            const int ready = producer.cycle + ctx.occupancy(producer);
            if (ready > op.cycle) {
                out.push_back({ViolationKind::dependence_order, op.id, op.pe.row, op.pe.col, op.cycle,
                               where(op) + " issues before its producer op " +
                                   std::to_string(producer.id) + " is ready (cycle " +
                                   std::to_string(ready) + ")"});
            }
            if (producer.iteration > op.iteration) {
                out.push_back({ViolationKind::iteration_order, op.id, op.pe.row, op.pe.col, op.cycle,
                               where(op) + " has an iteration tag below its producer op " +
                                   std::to_string(producer.id)});
            }
        }
    }

    for (const auto& [slot, use] : bus_use) {
        const auto [row, cycle] = slot;
        if (use.first > arch.read_buses_per_row) {
            out.push_back({ViolationKind::read_bus, -1, row, -1, cycle,
                           "row " + std::to_string(row) + " issues " + std::to_string(use.first) +
                               " loads at cycle " + std::to_string(cycle) + " with " +
                               std::to_string(arch.read_buses_per_row) + " read buses"});
        }
        if (use.second > arch.write_buses_per_row) {
            out.push_back({ViolationKind::write_bus, -1, row, -1, cycle,
                           "row " + std::to_string(row) + " issues " + std::to_string(use.second) +
                               " stores at cycle " + std::to_string(cycle) + " with " +
                               std::to_string(arch.write_buses_per_row) + " write buses"});
        }
    }

    for (auto& [pe, list] : per_pe) {
        std::sort(list.begin(), list.end(),
                  [](const Operation* a, const Operation* b) { return a->cycle < b->cycle; });
        for (std::size_t i = 1; i < list.size(); ++i) {
            const Operation& prev = *list[i - 1];
            const Operation& cur = *list[i];
            if (prev.cycle + ctx.occupancy(prev) > cur.cycle) {
                out.push_back({ViolationKind::pe_conflict, cur.id, pe.row, pe.col, cur.cycle,
                               where(cur) + " overlaps op " + std::to_string(prev.id) +
                                   " on the same PE"});
            }
        }
    }
    return out;
}

std::vector<int> critical_ops_per_cycle(const Context& ctx) {
    std::vector<int> count(static_cast<std::size_t>(ctx.length_cycles()) + 1, 0);
    for (const auto& op : ctx.ops)
        if (ctx.is_critical(op.opcode)) ++count[static_cast<std::size_t>(op.cycle)];
    return count;
}

int max_critical_ops_per_cycle(const Context& ctx) {
    const auto count = critical_ops_per_cycle(ctx);
    return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

std::string pattern_symbol(const Context& ctx, const Operation& op, int stage) {
    std::string base;
    switch (op.opcode) {
    case Opcode::load: base = "Ld"; break;
    case Opcode::store: base = "St"; break;
    case Opcode::mult: base = "*"; break;
    case Opcode::add: base = "+"; break;
    case Opcode::sub: base = "-"; break;
    case Opcode::shift: base = "<<"; break;
    case Opcode::abs: base = "abs"; break;
    case Opcode::nop: return {};
    }
    if (ctx.occupancy(op) > 1) return std::to_string(stage) + base;
    return base;
}

std::vector<std::string> column_pattern(const Context& ctx, int col, int first, int last) {
    if (last < first) return {};
    std::vector<std::set<std::string>> cells(static_cast<std::size_t>(last - first + 1));
    for (const auto& op : ctx.ops) {
        if (op.pe.col != col || op.opcode == Opcode::nop) continue;
        const int occ = ctx.occupancy(op);
        for (int stage = 1; stage <= occ; ++stage) {
            const int c = op.cycle + stage - 1;
            if (c < first || c > last) continue;
            cells[static_cast<std::size_t>(c - first)].insert(pattern_symbol(ctx, op, stage));
        }
    }
    std::vector<std::string> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) {
        std::string joined;
        for (const auto& s : cell) {
            if (!joined.empty()) joined += '/';
            joined += s;
        }
        out.push_back(std::move(joined));
    }
    return out;
}

std::string pattern_dump(const Context& ctx, int first_cycle, int last_cycle) {
    if (last_cycle < 0) last_cycle = ctx.length_cycles();
    std::ostringstream os;
    for (int c = first_cycle; c <= last_cycle; ++c) os << '\t' << c;
    os << '\n';
    for (int col = 0; col < ctx.m_cols; ++col) {
        os << "col#" << (col + 1);
        for (const auto& cell : column_pattern(ctx, col, first_cycle, last_cycle)) os << '\t' << cell;
        os << '\n';
    }
    return os.str();
}

} // namespace cgra
