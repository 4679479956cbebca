#include <cgra/io.hpp>

#include "json_util.hpp"

#include <unordered_map>
#include <unordered_set>

namespace cgra {

using namespace detail;

namespace {

Opcode parse_opcode(const json& j, const std::string& path) {
    const auto name = as_string(j, path);
    const auto op = opcode_from_string(name);
    if (!op) fail(path, "unknown opcode '" + name + "'");
    return *op;
}

Operand parse_operand(const json& j, const std::string& path) {
    as_object(j, path);
    if (j.size() != 1) fail(path, "an operand has exactly one of reg, mem, imm");
    if (const json* r = optional_field(j, "reg")) {
        const std::string p = child(path, "reg");
        if (!r->is_array() || r->size() != 2) fail(p, "expected [row, col]");
        return RegOperand{PeCoord{as_int((*r)[0], index(p, 0)), as_int((*r)[1], index(p, 1))}};
    }
    if (const json* m = optional_field(j, "mem")) return MemOperand{as_int64(*m, child(path, "mem"))};
    if (const json* i = optional_field(j, "imm")) {
        if (i->is_string()) {
            auto name = i->get<std::string>();
            if (name.empty()) fail(child(path, "imm"), "constant name must be nonempty");
            return ImmOperand{0, std::move(name)};
        }
        return ImmOperand{as_int64(*i, child(path, "imm")), {}};
    }
    fail(path, "unknown operand kind '" + j.begin().key() + "'");
}

ordered_json operand_to_json(const Operand& operand) {
    return std::visit(
        [](const auto& o) -> ordered_json {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, RegOperand>) {
                return ordered_json{{"reg", ordered_json::array({o.pe.row, o.pe.col})}};
            } else if constexpr (std::is_same_v<T, MemOperand>) {
                return ordered_json{{"mem", o.address}};
            } else {
                if (!o.name.empty()) return ordered_json{{"imm", o.name}};
                return ordered_json{{"imm", o.value}};
            }
        },
        operand);
}

int required_values(Opcode op) {
    switch (op) {
    case Opcode::store:
    case Opcode::abs: return 1;
    case Opcode::mult:
    case Opcode::add:
    case Opcode::sub:
    case Opcode::shift: return 2;
    default: return 0;
    }
}

// Structural checks that need the whole op list: unique ids, resolvable
// deps, reg operands bound to deps, operand arity.
void check_op_graph(const Context& ctx) {
    std::unordered_map<int, PeCoord> pe_of;
    std::unordered_map<int, const Operation*> by_id;
    for (std::size_t i = 0; i < ctx.ops.size(); ++i) {
        const auto& op = ctx.ops[i];
        if (!by_id.emplace(op.id, &op).second)
            fail(child(index("ops", i), "id"), "duplicate op id " + std::to_string(op.id));
        pe_of.emplace(op.id, op.pe);
    }
    for (std::size_t i = 0; i < ctx.ops.size(); ++i) {
        const auto& op = ctx.ops[i];
        const std::string p = index("ops", i);
        const std::string tag = "op " + std::to_string(op.id) + ": ";
        for (std::size_t d = 0; d < op.deps.size(); ++d) {
            if (!by_id.count(op.deps[d]))
                fail(index(child(p, "deps"), d), tag + "dangling dependence on op " + std::to_string(op.deps[d]));
            if (op.deps[d] == op.id) fail(index(child(p, "deps"), d), tag + "depends on itself");
        }

        int mems = 0;
        int values = 0;
        for (std::size_t k = 0; k < op.operands.size(); ++k) {
            const auto& operand = op.operands[k];
            if (std::holds_alternative<MemOperand>(operand)) {
                ++mems;
                if (op.opcode != Opcode::load && op.opcode != Opcode::store)
                    fail(index(child(p, "operands"), k), tag + "only load and store take mem operands");
            } else if (std::holds_alternative<ImmOperand>(operand)) {
                ++values;
            } else if (op.opcode == Opcode::load) {
                fail(index(child(p, "operands"), k), tag + "load takes only mem operands");
            }
        }
        const auto bound = bind_reg_operands(op, pe_of);
        if (!bound) fail(child(p, "operands"), tag + "reg operand names a PE with no matching dependence");
        for (int producer : *bound) values += result_width(*by_id.at(producer));

        switch (op.opcode) {
        case Opcode::load:
            if (mems < 1) fail(child(p, "operands"), tag + "load needs at least one mem operand");
            break;
        case Opcode::store:
            if (mems != 1) fail(child(p, "operands"), tag + "store needs exactly one mem destination");
            [[fallthrough]];
        default:
            if (op.opcode != Opcode::nop && op.opcode != Opcode::load && values != required_values(op.opcode))
                fail(child(p, "operands"), tag + std::string(to_string(op.opcode)) + " needs " +
                                               std::to_string(required_values(op.opcode)) + " value(s), got " +
                                               std::to_string(values));
        }
    }
}

Context context_from_json(const json& doc) {
    as_object(doc, "");
    Context ctx;
    ctx.n_rows = as_int(require(doc, "", "n_rows"), "n_rows");
    ctx.m_cols = as_int(require(doc, "", "m_cols"), "m_cols");
    ctx.iteration_count = as_int(require(doc, "", "iteration_count"), "iteration_count");
    if (ctx.n_rows < 1) fail("n_rows", "must be positive");
    if (ctx.m_cols < 1) fail("m_cols", "must be positive");
    if (ctx.iteration_count < 0) fail("iteration_count", "must be nonnegative");

    const json& crit = as_array(require(doc, "", "critical_opcodes"), "critical_opcodes");
    ctx.critical_opcodes.clear();
    for (std::size_t i = 0; i < crit.size(); ++i) {
        const Opcode op = parse_opcode(crit[i], index("critical_opcodes", i));
        if (!is_compute(op)) fail(index("critical_opcodes", i), "only compute opcodes can be critical");
        ctx.critical_opcodes.insert(op);
    }
    ctx.critical_stages = int_or(doc, "", "critical_stages", 1);
    if (ctx.critical_stages < 1) fail("critical_stages", "must be >= 1");

    const json& ops = as_array(require(doc, "", "ops"), "ops");
    ctx.ops.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const std::string p = index("ops", i);
        const json& o = as_object(ops[i], p);
        Operation op;
        op.id = as_int(require(o, p, "id"), child(p, "id"));
        op.opcode = parse_opcode(require(o, p, "opcode"), child(p, "opcode"));
        op.pe.row = as_int(require(o, p, "row"), child(p, "row"));
        op.pe.col = as_int(require(o, p, "col"), child(p, "col"));
        op.cycle = as_int(require(o, p, "cycle"), child(p, "cycle"));
        op.iteration = int_or(o, p, "iteration", 0);
        if (op.pe.row < 0 || op.pe.row >= ctx.n_rows || op.pe.col < 0 || op.pe.col >= ctx.m_cols)
            fail(p, "op " + std::to_string(op.id) + ": PE outside the " + std::to_string(ctx.n_rows) + "x" +
                        std::to_string(ctx.m_cols) + " array");
        if (op.cycle < 1) fail(child(p, "cycle"), "op " + std::to_string(op.id) + ": cycles are 1-based");
        if (const json* operands = optional_field(o, "operands")) {
            const std::string q = child(p, "operands");
            as_array(*operands, q);
            for (std::size_t k = 0; k < operands->size(); ++k) op.operands.push_back(parse_operand((*operands)[k], index(q, k)));
        }
        if (const json* deps = optional_field(o, "deps")) {
            const std::string q = child(p, "deps");
            as_array(*deps, q);
            for (std::size_t k = 0; k < deps->size(); ++k) op.deps.push_back(as_int((*deps)[k], index(q, k)));
        }
        ctx.ops.push_back(std::move(op));
    }
    check_op_graph(ctx);
    return ctx;
}

ordered_json context_to_json(const Context& ctx) {
    ordered_json j;
    j["n_rows"] = ctx.n_rows;
    j["m_cols"] = ctx.m_cols;
    j["iteration_count"] = ctx.iteration_count;
    j["critical_opcodes"] = ordered_json::array();
    for (Opcode op : ctx.critical_opcodes) j["critical_opcodes"].push_back(std::string(to_string(op)));
    j["critical_stages"] = ctx.critical_stages;
    j["ops"] = ordered_json::array();
    for (const auto& op : ctx.ops) {
        ordered_json o;
        o["id"] = op.id;
        o["opcode"] = std::string(to_string(op.opcode));
        o["row"] = op.pe.row;
        o["col"] = op.pe.col;
        o["cycle"] = op.cycle;
        o["iteration"] = op.iteration;
        o["operands"] = ordered_json::array();
        for (const auto& operand : op.operands) o["operands"].push_back(operand_to_json(operand));
        o["deps"] = op.deps;
        j["ops"].push_back(std::move(o));
    }
    return j;
}

} // namespace

Context parse_context(std::string_view text) { return context_from_json(parse_document(text)); }

std::string serialize_context(const Context& ctx) { return context_to_json(ctx).dump(1) + "\n"; }

bool is_rearranged_document(std::string_view text) {
    const json doc = parse_document(text);
    return doc.is_object() && doc.contains("assignments");
}

RearrangedContext parse_rearranged_context(std::string_view text) {
    const json doc = parse_document(text);
    RearrangedContext r;
    r.base = context_from_json(doc);

    std::unordered_set<int> ids;
    for (const auto& op : r.base.ops) ids.insert(op.id);

    const json& asg = as_array(require(doc, "", "assignments"), "assignments");
    for (std::size_t i = 0; i < asg.size(); ++i) {
        const std::string p = index("assignments", i);
        const int op = as_int(require(asg[i], p, "op"), child(p, "op"));
        const int inst = as_int(require(asg[i], p, "instance"), child(p, "instance"));
        if (!ids.count(op)) fail(child(p, "op"), "unknown op id " + std::to_string(op));
        if (inst < 0) fail(child(p, "instance"), "instance ids are nonnegative");
        if (!r.assignments.emplace(op, inst).second) fail(p, "op " + std::to_string(op) + " assigned twice");
    }

    const json& stalls = as_array(require(doc, "", "stalls"), "stalls");
    for (std::size_t i = 0; i < stalls.size(); ++i) {
        const std::string p = index("stalls", i);
        Stall s;
        s.inserted_at_cycle = as_int(require(stalls[i], p, "cycle"), child(p, "cycle"));
        const auto kind = as_string(require(stalls[i], p, "kind"), child(p, "kind"));
        if (kind == "rs") s.kind = StallKind::rs;
        else if (kind == "rp") s.kind = StallKind::rp;
        else fail(child(p, "kind"), "unknown stall kind '" + kind + "'");
        r.stalls.push_back(s);
    }

    r.original_length = as_int(require(doc, "", "original_length"), "original_length");
    r.rs_stall_count = as_int(require(doc, "", "rs_stall_count"), "rs_stall_count");
    r.rp_stall_count = as_int(require(doc, "", "rp_stall_count"), "rp_stall_count");
    r.rp_latency_extension = as_int(require(doc, "", "rp_latency_extension"), "rp_latency_extension");
    r.total_cycles = as_int(require(doc, "", "total_cycles"), "total_cycles");
    if (r.total_cycles != r.original_length + r.rp_latency_extension + r.rs_stall_count + r.rp_stall_count)
        fail("total_cycles", "does not equal original_length + rp_latency_extension + stall counts");
    if (static_cast<int>(r.stalls.size()) != r.rs_stall_count + r.rp_stall_count)
        fail("stalls", "entry count does not match the stall counts");
    return r;
}

std::string serialize_rearranged_context(const RearrangedContext& rctx) {
    ordered_json j = context_to_json(rctx.base);
    j["assignments"] = ordered_json::array();
    for (const auto& [op, inst] : rctx.assignments) j["assignments"].push_back(ordered_json{{"op", op}, {"instance", inst}});
    j["stalls"] = ordered_json::array();
    for (const auto& s : rctx.stalls)
        j["stalls"].push_back(ordered_json{{"cycle", s.inserted_at_cycle}, {"kind", std::string(to_string(s.kind))}});
    j["original_length"] = rctx.original_length;
    j["rs_stall_count"] = rctx.rs_stall_count;
    j["rp_stall_count"] = rctx.rp_stall_count;
    j["rp_latency_extension"] = rctx.rp_latency_extension;
    j["total_cycles"] = rctx.total_cycles;
    return j.dump(1) + "\n";
}

} // namespace cgra
