#pragma once

// Degree-of-freedom numbering for V_h = [Q_k]^3 and the full pressure space
// Q_{k-1}, both discontinuous. Velocity dofs are element-major, then
// component-major; pressure dofs are numbered separately in [0, N). In the
// augmented system pressures follow the M velocities and the multiplier is
// the last unknown.

#include "hexdg/mesh.hpp"

#include <cstddef>

namespace hexdg {

struct DofMap {
    int k = 1;
    std::size_t elements = 0;
    std::size_t vel_scalar = 0;  ///< (k+1)^3 per component and element
    std::size_t vel_element = 0; ///< 3 (k+1)^3
    std::size_t pre_element = 0; ///< k^3
    std::size_t M = 0;
    std::size_t N = 0;

    std::size_t velocity(std::size_t e, int comp, std::size_t local) const
    {
        return e * vel_element + static_cast<std::size_t>(comp) * vel_scalar + local;
    }
    std::size_t velocity_offset(std::size_t e) const { return e * vel_element; }
    std::size_t pressure(std::size_t e, std::size_t local) const { return e * pre_element + local; }
    std::size_t pressure_offset(std::size_t e) const { return e * pre_element; }

    std::size_t augmented_size() const { return M + N + 1; }
    std::size_t multiplier() const { return M + N; }
};

/// Throws ConfigError for k < 1 or degree above the supported maximum.
DofMap build_dofmap(const GeometricMesh& mesh, int k);

} // namespace hexdg
