#include <cgra/error.hpp>

namespace cgra {

SimulationFault::SimulationFault(int cycle, int row, int col, const std::string& what)
    : Error("cycle " + std::to_string(cycle) + ", PE(" + std::to_string(row) + "," +
            std::to_string(col) + "): " + what),
      cycle_(cycle), row_(row), col_(col) {}

} // namespace cgra
