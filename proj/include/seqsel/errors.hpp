#pragma once

#include <stdexcept>
#include <string>

namespace seqsel {

// Config or input validation failure; the CLI maps this to exit code 2.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative procedure failed to converge (or a trial ran away); exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// File read/write failure; exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seqsel
