#ifndef WCR_ERRORS_HPP
#define WCR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wcr {

// Invalid experiment configuration or invalid arguments to an operation.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (CSV parsing, shape mismatches).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: rank deficiency, blow-up, non-convergence.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wcr

#endif
