#include "hexdg/spaces.hpp"

#include "hexdg/errors.hpp"

#include <string>

namespace hexdg {

DofMap build_dofmap(const GeometricMesh& mesh, int k)
{
    if (k < 1)
        throw_config("polynomial degree k must be >= 1, got " + std::to_string(k));
    if (k > 15)
        throw_config("polynomial degree k must be <= 15, got " + std::to_string(k));
    DofMap d;
    d.k = k;
    d.elements = mesh.size();
    const std::size_t kp = static_cast<std::size_t>(k) + 1;
    d.vel_scalar = kp * kp * kp;
    d.vel_element = 3 * d.vel_scalar;
    d.pre_element = static_cast<std::size_t>(k) * k * k;
    d.M = d.elements * d.vel_element;
    d.N = d.elements * d.pre_element;
    return d;
}

} // namespace hexdg
