#pragma once

#include <stdexcept>
#include <string>

namespace bcc {

// Error taxonomy mirrored by the CLI exit codes: validation -> 2,
// infeasible -> 3. Construction and grid errors are validation-class.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

struct construction_error : std::runtime_error {
    explicit construction_error(const std::string& what) : std::runtime_error(what) {}
};

struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
    infeasible_error(const std::string& what, double margin_db)
        : std::runtime_error(what), margin_db(margin_db) {}
    double margin_db = 0.0;
};

// Raised when a threshold crossing is not bracketed by the simulated grid.
struct grid_error : std::runtime_error {
    explicit grid_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bcc
