#include <cgra/simulator.hpp>

#include <cgra/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace cgra {

std::int64_t wrap_to_width(std::int64_t value, int bits) noexcept {
    if (bits >= 64) return value;
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    std::uint64_t u = static_cast<std::uint64_t>(value) & mask;
    if (u & (std::uint64_t{1} << (bits - 1))) u |= ~mask;
    return static_cast<std::int64_t>(u);
}

const MemoryRegion* MemoryImage::region(std::string_view name) const {
    for (const auto& r : regions)
        if (r.name == name) return &r;
    return nullptr;
}

void MemoryImage::store(std::int64_t address, std::int64_t value) {
    words[address] = wrap_to_width(value, width_bits);
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

namespace {

class Machine {
public:
    Machine(const Context& ctx, const ArchParams& arch, const std::map<int, int>* assignments,
            const MemoryImage& mem)
        : ctx_(ctx), arch_(arch), assignments_(assignments), mem_(mem), pool_(arch),
          wide_bits_(2 * arch.data_width_bits),
          pes_(static_cast<std::size_t>(arch.n_rows) * arch.m_cols) {
        if (mem.width_bits != arch.data_width_bits)
            throw ConfigError("memory width " + std::to_string(mem.width_bits) +
                              " bits does not match the " + std::to_string(arch.data_width_bits) +
                              "-bit datapath");
        for (const auto& op : ctx.ops) pe_of_.emplace(op.id, op.pe);
    }

    MemoryImage run() {
        std::vector<std::size_t> order(ctx_.ops.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& x = ctx_.ops[a];
            const auto& y = ctx_.ops[b];
            return std::pair{x.cycle, x.id} < std::pair{y.cycle, y.id};
        });

        std::size_t i = 0;
        while (i < order.size()) {
            const int cycle = ctx_.ops[order[i]].cycle;
            std::size_t j = i;
            while (j < order.size() && ctx_.ops[order[j]].cycle == cycle) ++j;
            check_buses(order, i, j, cycle);
            for (std::size_t k = i; k < j; ++k) execute(ctx_.ops[order[k]], cycle);
            i = j;
        }
        return mem_;
    }

private:
    [[noreturn]] void fault(const Operation& op, int cycle, const std::string& what) const {
        throw SimulationFault(cycle, op.pe.row, op.pe.col, "op " + std::to_string(op.id) + ": " + what);
    }

    PEState& pe_state(PeCoord pe, const Operation& op, int cycle) {
        if (pe.row < 0 || pe.row >= arch_.n_rows || pe.col < 0 || pe.col >= arch_.m_cols)
            fault(op, cycle, "PE outside the array");
        return pes_[static_cast<std::size_t>(pe.row) * arch_.m_cols + pe.col];
    }

    void check_buses(const std::vector<std::size_t>& order, std::size_t begin, std::size_t end, int cycle) {
        std::map<int, std::pair<int, int>> use;
        for (std::size_t k = begin; k < end; ++k) {
            const Operation& op = ctx_.ops[order[k]];
            auto& [loads, stores] = use[op.pe.row];
            if (op.opcode == Opcode::load && ++loads > arch_.read_buses_per_row)
                fault(op, cycle, "read buses of row " + std::to_string(op.pe.row) + " oversubscribed");
            if (op.opcode == Opcode::store && ++stores > arch_.write_buses_per_row)
                fault(op, cycle, "write buses of row " + std::to_string(op.pe.row) + " oversubscribed");
        }
    }

    void retire(PEState& pe, int cycle) {
        auto done = std::stable_partition(pe.pending.begin(), pe.pending.end(),
                                          [cycle](const PEState::Pending& p) { return p.ready_cycle > cycle; });
        for (auto it = done; it != pe.pending.end(); ++it)
            if (!it->values.empty()) pe.result_register = it->values.back();
        pe.pending.erase(done, pe.pending.end());
    }

    std::vector<std::int64_t> operand_values(const Operation& op, int cycle) {
        const auto bound = bind_reg_operands(op, pe_of_);
        if (!bound) fault(op, cycle, "register operand without a matching dependence");
        std::vector<std::int64_t> values;
        std::size_t next = 0;
        for (const auto& operand : op.operands) {
            if (std::holds_alternative<RegOperand>(operand)) {
                const int producer = (*bound)[next++];
                auto it = produced_.find(producer);
                if (it == produced_.end() || it->second.ready_cycle > cycle)
                    fault(op, cycle, "reads the result of op " + std::to_string(producer) +
                                         " before it is ready");
                values.insert(values.end(), it->second.values.begin(), it->second.values.end());
            } else if (const auto* imm = std::get_if<ImmOperand>(&operand)) {
                if (imm->name.empty()) {
                    values.push_back(imm->value);
                } else {
                    auto c = mem_.constants.find(imm->name);
                    if (c == mem_.constants.end())
                        fault(op, cycle, "constant '" + imm->name + "' is not defined");
                    values.push_back(c->second);
                }
            }
        }
        return values;
    }

    std::int64_t wide(std::uint64_t v) const { return wrap_to_width(static_cast<std::int64_t>(v), wide_bits_); }

    void require_arity(const Operation& op, int cycle, const std::vector<std::int64_t>& v, std::size_t n) const {
        if (v.size() != n)
            fault(op, cycle, std::string(to_string(op.opcode)) + " expects " + std::to_string(n) +
                                 " values, got " + std::to_string(v.size()));
    }

    void claim_shared_instance(const Operation& op, int cycle) {
        if (!arch_.sharing || op.opcode != arch_.sharing->resource_kind) return;
        auto it = assignments_ ? assignments_->find(op.id) : std::map<int, int>::const_iterator{};
        if (!assignments_ || it == assignments_->end())
            fault(op, cycle, "critical op has no shared instance");
        const int inst = it->second;
        if (inst < 0 || inst >= static_cast<int>(pool_.instances().size()) || !pool_.instance(inst).covers(op.pe))
            fault(op, cycle, "instance " + std::to_string(inst) + " is not reachable from this PE");
        if (const int other = pool_.occupy(inst, cycle, op.id); other >= 0)
            fault(op, cycle, "instance " + std::to_string(inst) + " is still held by op " + std::to_string(other));
    }

    void execute(const Operation& op, int cycle) {
        PEState& pe = pe_state(op.pe, op, cycle);
        retire(pe, cycle);
        if (op.opcode == Opcode::nop) return;
        if (pe.busy_until >= cycle) fault(op, cycle, "PE is still busy");

        const int latency = ctx_.occupancy(op);
        std::vector<std::int64_t> result;
        const auto values = operand_values(op, cycle);

        switch (op.opcode) {
        case Opcode::load:
            for (const auto& operand : op.operands) {
                const auto* m = std::get_if<MemOperand>(&operand);
                if (!m) continue;
                auto w = mem_.words.find(m->address);
                if (w == mem_.words.end())
                    fault(op, cycle, "load from uninitialised address " + std::to_string(m->address));
                result.push_back(w->second);
            }
            break;
        case Opcode::store: {
            require_arity(op, cycle, values, 1);
            const MemOperand* dst = nullptr;
            for (const auto& operand : op.operands)
                if (const auto* m = std::get_if<MemOperand>(&operand)) dst = m;
            if (!dst) fault(op, cycle, "store without a destination address");
            mem_.store(dst->address, values[0]);
            break;
        }
        case Opcode::mult:
            require_arity(op, cycle, values, 2);
            claim_shared_instance(op, cycle);
            result.push_back(wide(static_cast<std::uint64_t>(values[0]) * static_cast<std::uint64_t>(values[1])));
            break;
        case Opcode::add:
            require_arity(op, cycle, values, 2);
            claim_shared_instance(op, cycle);
            result.push_back(wide(static_cast<std::uint64_t>(values[0]) + static_cast<std::uint64_t>(values[1])));
            break;
        case Opcode::sub:
            require_arity(op, cycle, values, 2);
            claim_shared_instance(op, cycle);
            result.push_back(wide(static_cast<std::uint64_t>(values[0]) - static_cast<std::uint64_t>(values[1])));
            break;
        case Opcode::shift:
            require_arity(op, cycle, values, 2);
            if (values[1] < 0 || values[1] >= wide_bits_)
                fault(op, cycle, "shift amount " + std::to_string(values[1]) + " out of range");
            claim_shared_instance(op, cycle);
            result.push_back(wide(static_cast<std::uint64_t>(values[0]) << values[1]));
            break;
        case Opcode::abs:
            require_arity(op, cycle, values, 1);
            claim_shared_instance(op, cycle);
            result.push_back(wide(values[0] < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(values[0])
                                                : static_cast<std::uint64_t>(values[0])));
            break;
        case Opcode::nop: break;
        }

        pe.busy_until = cycle + latency - 1;
        pe.pending.push_back({op.id, result, cycle + latency});
        produced_[op.id] = Produced{std::move(result), cycle + latency};
    }

    struct Produced {
        std::vector<std::int64_t> values;
        int ready_cycle = 0;
    };

    const Context& ctx_;
    const ArchParams& arch_;
    const std::map<int, int>* assignments_;
    MemoryImage mem_;
    ResourcePool pool_;
    int wide_bits_;
    std::vector<PEState> pes_;
    std::unordered_map<int, PeCoord> pe_of_;
    std::unordered_map<int, Produced> produced_;
};

} // namespace

MemoryImage simulate(const RearrangedContext& rctx, const ArchParams& arch, const MemoryImage& mem) {
    arch.validate();
    if (arch.sharing && rctx.base.critical_stages != arch.sharing->stages)
        throw ConfigError("schedule was built for " + std::to_string(rctx.base.critical_stages) +
                          "-stage critical ops, architecture has " + std::to_string(arch.sharing->stages));
    return Machine(rctx.base, arch, &rctx.assignments, mem).run();
}

MemoryImage simulate_unshared(const Context& ctx, const ArchParams& arch, const MemoryImage& mem) {
    ArchParams base = arch;
    base.sharing.reset();
    base.validate();
    return Machine(ctx, base, nullptr, mem).run();
}

std::vector<MemoryImage> simulate_many_serial(const RearrangedContext& rctx, const ArchParams& arch,
                                              std::span<const MemoryImage> inputs) {
    std::vector<MemoryImage> out;
    out.reserve(inputs.size());
    for (const auto& mem : inputs) out.push_back(simulate(rctx, arch, mem));
    return out;
}

std::vector<MemoryImage> simulate_many(const RearrangedContext& rctx, const ArchParams& arch,
                                       std::span<const MemoryImage> inputs) {
    std::vector<MemoryImage> out(inputs.size());
    std::vector<std::optional<std::string>> errors(inputs.size());
    const auto n = static_cast<std::ptrdiff_t>(inputs.size());

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = simulate(rctx, arch, inputs[k]);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }

    // Re-run the first failing input serially so the caller sees the
    // original exception type.
    for (std::size_t k = 0; k < errors.size(); ++k)
        if (errors[k]) simulate(rctx, arch, inputs[k]);
    return out;
}

IntMatrix reference_matmul(const IntMatrix& x, const IntMatrix& y, std::int64_t c, int n, int width_bits) {
    using boost::multiprecision::cpp_int;
    if (n < 1 || x.rows != n || x.cols != n || y.rows != n || y.cols != n)
        throw DomainError("reference_matmul: X and Y must both be " + std::to_string(n) + "x" +
                          std::to_string(n));
    const cpp_int modulus = cpp_int(1) << width_bits;
    const cpp_int half = modulus >> 1;

    IntMatrix z(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cpp_int acc = 0;
            for (int k = 0; k < n; ++k) acc += cpp_int(x.at(i, k)) * cpp_int(y.at(k, j));
            acc *= c;
            cpp_int r = acc % modulus;
            if (r < 0) r += modulus;
            if (r >= half) r -= modulus;
            z.at(i, j) = r.convert_to<std::int64_t>();
        }
    }
    return z;
}

MemoryImage make_matmul_memory(const IntMatrix& x, const IntMatrix& y, std::int64_t c,
                               const MatmulLayout& layout, int width_bits) {
    if (x.rows != x.cols || y.rows != y.cols || x.rows != y.rows)
        throw DomainError("make_matmul_memory: X and Y must be square and of equal order");
    const int n = x.rows;
    MemoryImage mem;
    mem.width_bits = width_bits;
    mem.regions = {{"X", layout.x_base, n, n}, {"Y", layout.y_base, n, n}, {"Z", layout.z_base, n, n}};
    mem.constants["C"] = c;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            mem.store(layout.x_base + static_cast<std::int64_t>(i) * n + j, x.at(i, j));
            mem.store(layout.y_base + static_cast<std::int64_t>(i) * n + j, y.at(i, j));
        }
    }
    return mem;
}

IntMatrix read_region(const MemoryImage& mem, std::string_view name) {
    const MemoryRegion* r = mem.region(name);
    if (!r) throw ConfigError("memory image has no region '" + std::string(name) + "'");
    IntMatrix m(r->rows, r->cols);
    for (int i = 0; i < r->rows; ++i) {
        for (int j = 0; j < r->cols; ++j) {
            const std::int64_t addr = r->base_address + static_cast<std::int64_t>(i) * r->cols + j;
            auto it = mem.words.find(addr);
            if (it == mem.words.end())
                throw ConfigError("region '" + std::string(name) + "' word at address " +
                                  std::to_string(addr) + " is uninitialised");
            m.at(i, j) = it->second;
        }
    }
    return m;
}

} // namespace cgra
