#pragma once

// Command-line driver: mesh | infsup | solve | convergence | verify.
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 invariant violation.

#include <iosfwd>
#include <string>
#include <vector>

namespace hexdg {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_solver = 3;
inline constexpr int exit_invariant = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Light oracle suites (SIMD equivalence, quadrature, mesh partition, kernel
/// identity of B, forcing finite differences, Galerkin exactness).
std::vector<VerifyCheck> run_verification(unsigned seed, int points);

} // namespace hexdg
