#pragma once

#include <cstdint>

#include <cgra/kernel_ir.hpp>

namespace cgra {

/// Where X, Y and Z live in data memory (row-major N x N each).
struct MatmulLayout {
    std::int64_t x_base = 0;
    std::int64_t y_base = 0;
    std::int64_t z_base = 0;

    /// X at 0, Y right after X, Z right after Y.
    static MatmulLayout packed(int n);
};

/// Slots one iteration of a column occupies: Ld, mult, log2(N) adds, mult, St,
/// with each mult stretched to `stages` slots.
int matmul_slot_count(int n, int stages);

/// Loop-pipelined context computing Z = C * X * Y on an N x N array.
///
/// Column j owns output column j and runs the N output rows as back-to-back
/// iterations, starting one cycle after column j-1.  Within a column, PE k
/// holds the k-th partial product, a binary reduction tree of adds collapses
/// them onto PE i (the output row of the iteration), every PE of the column
/// then issues the scaling mult by the named constant "C" and PE i stores
/// Z(i, j).  Rotating the tree root keeps the single row write bus free of
/// collisions for every N.
///
/// Throws DomainError unless N is a power of two and stages >= 1.
Context generate_matmul_context(int n, int stages, const MatmulLayout& layout);
Context generate_matmul_context(int n, int stages);

} // namespace cgra
