#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jumpmil {

// A one-step map or trajectory produced a non-finite value. Carries the
// cell index so Monte Carlo layers can report where the path blew up.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::uint64_t step_index, const std::string& what)
        : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
          step_index_(step_index) {}

    std::uint64_t step_index() const { return step_index_; }

private:
    std::uint64_t step_index_;
};

// Internally inconsistent noise data (e.g. jump-time and bridge-value lists
// of different lengths). Distinct from invalid arguments: it means a
// PathPrimitive was corrupted after construction.
class DataCorruptionError : public std::runtime_error {
public:
    explicit DataCorruptionError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace jumpmil
