#pragma once

#include <stdexcept>
#include <string>

namespace cgra {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or missing configuration data (cost tables, arch files, lookup keys).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed context / memory / search-space document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Architecture can never execute the given context.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Runtime fault raised by the functional simulator.
class SimulationFault : public Error {
public:
    SimulationFault(int cycle, int row, int col, const std::string& what);

    int cycle() const noexcept { return cycle_; }
    int row() const noexcept { return row_; }
    int col() const noexcept { return col_; }

private:
    int cycle_;
    int row_;
    int col_;
};

} // namespace cgra
