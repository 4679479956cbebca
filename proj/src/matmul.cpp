#include <cgra/matmul.hpp>

#include <cgra/error.hpp>

#include <bit>
#include <vector>

namespace cgra {

MatmulLayout MatmulLayout::packed(int n) {
    const std::int64_t sq = static_cast<std::int64_t>(n) * n;
    return MatmulLayout{0, sq, 2 * sq};
}

namespace {

void check_order(int n, int stages) {
    if (n < 1 || !std::has_single_bit(static_cast<unsigned>(n)))
        throw DomainError("matmul order must be a power of two >= 1, got " + std::to_string(n));
    if (stages < 1) throw DomainError("pipeline stages must be >= 1, got " + std::to_string(stages));
}

int log2_exact(int n) { return std::countr_zero(static_cast<unsigned>(n)); }

} // namespace

int matmul_slot_count(int n, int stages) {
    check_order(n, stages);
    return 4 + log2_exact(n) + 2 * (stages - 1);
}

Context generate_matmul_context(int n, int stages, const MatmulLayout& layout) {
    const int slots = matmul_slot_count(n, stages);
    const int levels = log2_exact(n);

    Context ctx;
    ctx.n_rows = n;
    ctx.m_cols = n;
    ctx.iteration_count = n;
    ctx.critical_opcodes = {Opcode::mult};
    ctx.critical_stages = stages;
    ctx.ops.reserve(static_cast<std::size_t>(n) * n * (3 * n + levels + 2));

    int next_id = 1;
    auto emit = [&](Opcode code, int row, int col, int cycle, int iteration,
                    std::vector<Operand> operands, std::vector<int> deps) {
        ctx.ops.push_back(Operation{next_id, code, {row, col}, cycle, iteration,
                                    std::move(operands), std::move(deps)});
        return next_id++;
    };

    std::vector<int> last(static_cast<std::size_t>(n));  // latest value-producing op per PE
    for (int col = 0; col < n; ++col) {
        for (int i = 0; i < n; ++i) {
            const int t0 = (col + 1) + i * slots;
            const int root = i;

            for (int k = 0; k < n; ++k) {
                last[k] = emit(Opcode::load, k, col, t0, i,
                               {MemOperand{layout.x_base + static_cast<std::int64_t>(i) * n + k},
                                MemOperand{layout.y_base + static_cast<std::int64_t>(k) * n + col}},
                               {});
            }
            for (int k = 0; k < n; ++k)
                last[k] = emit(Opcode::mult, k, col, t0 + 1, i, {RegOperand{{k, col}}}, {last[k]});

            for (int level = 1; level <= levels; ++level) {
                const int stride = 1 << (level - 1);
                const int mask = (1 << level) - 1;
                const int cycle = t0 + 1 + stages + (level - 1);
                std::vector<int> updated = last;
                for (int k = 0; k < n; ++k) {
                    if (((k ^ root) & mask) != 0) continue;
                    const int partner = k ^ stride;
                    updated[k] = emit(Opcode::add, k, col, cycle, i,
                                      {RegOperand{{k, col}}, RegOperand{{partner, col}}},
                                      {last[k], last[partner]});
                }
                last = std::move(updated);
            }

            const int scale_cycle = t0 + 1 + stages + levels;
            const int sum = last[root];
            int scaled_root = 0;
            for (int k = 0; k < n; ++k) {
                const int id = emit(Opcode::mult, k, col, scale_cycle, i,
                                    {RegOperand{{root, col}}, ImmOperand{0, "C"}}, {sum});
                if (k == root) scaled_root = id;
            }
            emit(Opcode::store, root, col, t0 + slots - 1, i,
                 {RegOperand{{root, col}},
                  MemOperand{layout.z_base + static_cast<std::int64_t>(i) * n + col}},
                 {scaled_root});
        }
    }
    return ctx;
}

Context generate_matmul_context(int n, int stages) {
    check_order(n, stages);
    return generate_matmul_context(n, stages, MatmulLayout::packed(n));
}

} // namespace cgra
