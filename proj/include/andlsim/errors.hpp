// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace andlsim {

// Invalid scenario/config input. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric stability guard tripped (e.g. integration step too coarse).
// CLI maps this to exit code 3.
struct NumericGuardError : std::runtime_error {
    explicit NumericGuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace andlsim
