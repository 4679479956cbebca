#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cgra {

/// Operation vocabulary of the array (the kernel operation sets plus memory ops).
enum class Opcode { load, store, mult, add, sub, shift, abs, nop };

std::string_view to_string(Opcode op) noexcept;
std::optional<Opcode> opcode_from_string(std::string_view name) noexcept;

/// Opcodes that may be mapped onto a shared / pipelined functional unit.
constexpr bool is_compute(Opcode op) noexcept {
    return op == Opcode::mult || op == Opcode::add || op == Opcode::sub ||
           op == Opcode::shift || op == Opcode::abs;
}

} // namespace cgra
