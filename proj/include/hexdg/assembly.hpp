#pragma once

// Interior-penalty DG discretization of the mixed Lame/Stokes operator
//
//   A_h(u,v) = sum_K (grad u, grad v)_K
//              - sum_F ( theta <grad v> : [[u]] + <grad u> : [[v]] )_F
//              + sum_F ( c [[u]] : [[v]] )_F,          c = gamma k^2 / h_perp
//   B_h(v,q) = -(q, div_h v) + sum_F ( <q>, [[v]] )_F
//   C_h(p,q) = (1 - 2 nu) (p, q)
//
// Matrix rows are test functions: A(i,j) = A_h(phi_j, phi_i) and
// B(i,j) = B_h(phi_i, psi_j). A and D only couple equal velocity components.

#include "hexdg/mesh.hpp"
#include "hexdg/spaces.hpp"
#include "hexdg/sparse.hpp"

#include <array>
#include <functional>
#include <vector>

namespace hexdg {

using Vec3 = std::array<double, 3>;
using VectorField = std::function<Vec3(const Point&)>;

struct DGConfig {
    double theta = 1.0;
    double gamma = 10.0;
    double nu = 0.25;
    int k = 2;
    int quad_form = 0;     ///< points per axis for bilinear forms; 0 -> k+1
    int quad_overkill = 0; ///< points per axis for rhs and errors; 0 -> k+4

    int form_points() const { return quad_form > 0 ? quad_form : k + 1; }
    int overkill_points() const { return quad_overkill > 0 ? quad_overkill : k + 4; }
    /// Throws ConfigError on out-of-range parameters.
    void validate() const;
};

/// Penalty c = gamma k^2 / h_perp on a face. Throws InvariantError for h_perp <= 0.
double penalty(const DGConfig& cfg, const Face& face);

struct SystemBlocks {
    DofMap dofs;
    CsrMatrix A; ///< M x M
    CsrMatrix B; ///< M x N
    CsrMatrix C; ///< N x N, pattern of E (explicit zeros at nu = 1/2)
    CsrMatrix D; ///< M x M, ||v||_h^2 = v^T D v
    CsrMatrix E; ///< N x N, pressure mass
    std::vector<double> m; ///< m_j = int psi_j
    double volume = 0.0;
};

struct BlockSelection {
    bool A = true, B = true, C = true, D = true, E = true;
};

/// One pass over elements then faces (construction order), so results are
/// bit-reproducible.
SystemBlocks assemble_blocks(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs,
                             const DGConfig& cfg, BlockSelection which = {});

CsrMatrix assemble_A(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs, const DGConfig& cfg);
CsrMatrix assemble_B(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs, const DGConfig& cfg);
CsrMatrix assemble_C(const GeometricMesh& mesh, const DofMap& dofs, const DGConfig& cfg);
/// (D, E)
std::pair<CsrMatrix, CsrMatrix> assemble_norm_matrices(const GeometricMesh& mesh, const FaceSet& faces,
                                                       const DofMap& dofs, const DGConfig& cfg);

/// Augmented right-hand side of length M+N+1:
///   velocity: (f, v) + sum_{F_B} ( c g.v - theta (grad v n) . g )
///   pressure: -sum_{F_B} ( q, g.n )
/// (the boundary part of -B_h(u,q) moved to the right), multiplier: 0.
/// Integrals use the overkill rule.
std::vector<double> assemble_rhs(const GeometricMesh& mesh, const FaceSet& faces, const DofMap& dofs,
                                 const DGConfig& cfg, const VectorField& f, const VectorField& g);

/// [[A, B, 0], [-B^T, C, -m], [0, m^T/|Omega|, -1]]
CsrMatrix assemble_augmented(const SystemBlocks& blocks);

/// [[A, B], [-B^T, C]] without the multiplier (inf-sup analysis).
CsrMatrix assemble_saddle(const SystemBlocks& blocks);

/// Coefficients of q = 1 in the pressure basis.
std::vector<double> constant_pressure(const DofMap& dofs);

/// Nodal interpolation of a vector field into V_h (velocity block only).
std::vector<double> interpolate_velocity(const GeometricMesh& mesh, const DofMap& dofs, const VectorField& u);
/// Nodal interpolation of a scalar field into the pressure space.
std::vector<double> interpolate_pressure(const GeometricMesh& mesh, const DofMap& dofs,
                                         const std::function<double(const Point&)>& p);

} // namespace hexdg
