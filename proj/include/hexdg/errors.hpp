#pragma once

#include <stdexcept>
#include <string>

namespace hexdg {

/// Invalid user input or configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear solver breakdown or non-convergence (CLI exit code 3).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical invariant that must hold was violated (CLI exit code 4).
/// Usually signals a mesh or assembly bug rather than bad input.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_config(const std::string& what);
[[noreturn]] void throw_invariant(const std::string& what);

} // namespace hexdg
