#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <string>
#include <variant>
#include <vector>

#include <cgra/arch_model.hpp>
#include <cgra/opcode.hpp>

namespace cgra {

struct PeCoord {
    int row = 0;
    int col = 0;

    auto operator<=>(const PeCoord&) const = default;
};

/// Result register of PE (row, col).  The i-th `reg` operand naming a PE binds
/// to the i-th dependence located on that PE.
struct RegOperand {
    PeCoord pe;
    bool operator==(const RegOperand&) const = default;
};

/// Memory word: source address for load, destination address for store.
struct MemOperand {
    std::int64_t address = 0;
    bool operator==(const MemOperand&) const = default;
};

/// Immediate.  A non-empty `name` refers to a named constant held in the
/// configuration cache, resolved from the memory image at run time.
struct ImmOperand {
    std::int64_t value = 0;
    std::string name;
    bool operator==(const ImmOperand&) const = default;
};

using Operand = std::variant<RegOperand, MemOperand, ImmOperand>;

struct Operation {
    int id = 0;
    Opcode opcode = Opcode::nop;
    PeCoord pe;
    int cycle = 1;  ///< 1-based issue cycle
    int iteration = 0;
    std::vector<Operand> operands;
    std::vector<int> deps;  ///< producer op ids

    bool operator==(const Operation&) const = default;
};

/// A loop-pipelined configuration context.
struct Context {
    int n_rows = 1;
    int m_cols = 1;
    int iteration_count = 1;
    std::set<Opcode> critical_opcodes{Opcode::mult};
    /// Pipeline depth the critical ops were scheduled for; a critical op
    /// issued at t occupies its PE through t + critical_stages - 1.
    int critical_stages = 1;
    std::vector<Operation> ops;

    bool is_critical(Opcode op) const { return critical_opcodes.count(op) != 0; }
    /// Cycles an op occupies its PE (and its result latency).
    int occupancy(const Operation& op) const { return is_critical(op.opcode) ? critical_stages : 1; }
    /// Last cycle any op still occupies; 0 for an empty context.
    int length_cycles() const;

    const Operation* find(int id) const;

    bool operator==(const Context&) const = default;
};

enum class ViolationKind {
    out_of_bounds,
    read_bus,
    write_bus,
    dependence_order,
    pe_conflict,
    iteration_order,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    int op_id = -1;  ///< -1 when the violation concerns a (row, cycle) slot
    int row = -1;
    int col = -1;
    int cycle = -1;
    std::string message;
};

/// Structural legality of a context on an architecture.  Violations are
/// data; this never throws.
std::vector<Violation> validate_context(const Context& ctx, const ArchParams& arch);

/// Producer id for each `reg` operand of `op`, in operand order, or nullopt
/// when an operand has no dependence left on the PE it names.
std::optional<std::vector<int>> bind_reg_operands(const Operation& op,
                                                  const std::unordered_map<int, PeCoord>& pe_of);

/// Number of values an op contributes when it is read through a `reg` operand.
int result_width(const Operation& op);

/// Maximum, over cycles, of critical-op issues in that cycle.
int max_critical_ops_per_cycle(const Context& ctx);

/// Issue count of critical ops per cycle, index = cycle (slot 0 unused).
std::vector<int> critical_ops_per_cycle(const Context& ctx);

/// Symbol shown in an op-pattern table ("Ld", "*", "1*", "+", "St", ...).
std::string pattern_symbol(const Context& ctx, const Operation& op, int stage);

/// Per-cycle symbols of one array column over cycles [first, last].  Empty
/// string for idle cycles, distinct symbols joined with '/'.
std::vector<std::string> column_pattern(const Context& ctx, int col, int first, int last);

/// Tab-separated op-pattern table: header row of cycle numbers, then one
/// "col#k" row per array column.
std::string pattern_dump(const Context& ctx, int first_cycle = 1, int last_cycle = -1);

} // namespace cgra
