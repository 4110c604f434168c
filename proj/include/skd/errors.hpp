#pragma once

#include <stdexcept>
#include <string>

namespace skd {

// Input violates a documented precondition or invariant. Mapped to exit code 2
// by the command-line front end.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested computation exceeds the configured dimension budget. Mapped to
// exit code 3 by the command-line front end.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skd
