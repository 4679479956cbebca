#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <cgra/arch_model.hpp>
#include <cgra/matmul.hpp>
#include <cgra/rsp_scheduler.hpp>

namespace cgra {

/// Two's complement wraparound of `value` to `bits` bits (1..64).
std::int64_t wrap_to_width(std::int64_t value, int bits) noexcept;

struct MemoryRegion {
    std::string name;
    std::int64_t base_address = 0;
    int rows = 0;
    int cols = 0;

    bool operator==(const MemoryRegion&) const = default;
};

/// Data memory of the array plus the named constants of the configuration
/// cache.  Words are signed, `width_bits` wide.
struct MemoryImage {
    int width_bits = 16;
    std::map<std::int64_t, std::int64_t> words;
    std::vector<MemoryRegion> regions;
    std::map<std::string, std::int64_t> constants;

    const MemoryRegion* region(std::string_view name) const;
    /// Stores the low `width_bits` of `value`.
    void store(std::int64_t address, std::int64_t value);

    bool operator==(const MemoryImage&) const = default;
};

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> values;  ///< row-major

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0) {}

    std::int64_t& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    std::int64_t at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

    static IntMatrix identity(int n);

    bool operator==(const IntMatrix&) const = default;
};

/// Architectural state of one PE.
struct PEState {
    struct Pending {
        int op_id = 0;
        std::vector<std::int64_t> values;
        int ready_cycle = 0;  ///< first cycle the result may be read
    };

    std::int64_t result_register = 0;  ///< 2 x data width
    std::vector<Pending> pending;
    int busy_until = 0;  ///< last cycle the PE is occupied
};

/// Executes a (rearranged) context cycle by cycle and returns the final
/// memory.  Throws SimulationFault on bus oversubscription, uninitialised
/// reads, early reads of in-flight results, or shared-instance conflicts.
MemoryImage simulate(const RearrangedContext& rctx, const ArchParams& arch, const MemoryImage& mem);

/// Runs a context as scheduled, with every critical op executed inside its
/// own PE (the Base architecture with `arch`'s dimensions and buses).
MemoryImage simulate_unshared(const Context& ctx, const ArchParams& arch, const MemoryImage& mem);

/// Same schedule over many memory images; OpenMP-parallel across images.
std::vector<MemoryImage> simulate_many(const RearrangedContext& rctx, const ArchParams& arch,
                                       std::span<const MemoryImage> inputs);
/// Serial reference for simulate_many.
std::vector<MemoryImage> simulate_many_serial(const RearrangedContext& rctx, const ArchParams& arch,
                                              std::span<const MemoryImage> inputs);

/// Z = C * X * Y computed with unbounded integers, then wrapped to
/// `width_bits`.  Independent of the simulator.
IntMatrix reference_matmul(const IntMatrix& x, const IntMatrix& y, std::int64_t c, int n,
                           int width_bits = 16);

/// Memory image with regions X, Y, Z (Z uninitialised) and constant C.
MemoryImage make_matmul_memory(const IntMatrix& x, const IntMatrix& y, std::int64_t c,
                               const MatmulLayout& layout, int width_bits = 16);

/// Reads a named region back as a matrix; ConfigError if it is missing or
/// holds uninitialised words.
IntMatrix read_region(const MemoryImage& mem, std::string_view name);

} // namespace cgra
